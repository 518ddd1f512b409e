#pragma once

#include "qperc/qstate.hpp"

#include <array>
#include <cstdint>
#include <optional>

namespace qperc {

/// Two-qubit partially entangled pure state sqrt(phi0)|00> + sqrt(phi1)|11>,
/// the state carried by every lattice edge. phi0 >= phi1, phi0 + phi1 = 1.
struct PairState {
    double phi0;
    double phi1;

    PairState(double phi0_, double phi1_);
    static PairState from_phi1(double phi1) { return PairState(1.0 - phi1, phi1); }

    SchmidtVector schmidt_vector() const { return SchmidtVector({phi0, phi1}); }
    PureState to_pure_state() const;
};

/// Generalized GHZ descriptor over m qubits:
///   amp_big |bits_a> + sign * amp_small |bits_b>,  bits_b = ~bits_a.
/// Amplitudes are real with amp_big >= amp_small >= 0. Bit strings are read
/// big-endian, bit i of the mask = qubit i.
struct GghzState {
    int m;
    double amp_big;
    double amp_small;
    uint32_t bits_a;
    int sign; // +1 or -1

    GghzState(int m_, double amp_big_, double amp_small_, uint32_t bits_a_, int sign_);

    /// Canonical balanced m-qubit cat (|0...0> + |1...1>)/sqrt(2).
    static GghzState cat(int m);
    /// sqrt(phi0)|0...0> + sqrt(phi1)|1...1>.
    static GghzState from_pair_amplitudes(int m, double phi0, double phi1);

    uint32_t bits_b() const { return ~bits_a & ((1u << m) - 1u); }
    bool balanced(double tol = kTightTol) const;
    int bit_a(int qubit) const { return (bits_a >> (m - 1 - qubit)) & 1u; }

    SchmidtVector schmidt_vector() const {
        return SchmidtVector({amp_big * amp_big, amp_small * amp_small});
    }
    PureState to_pure_state() const;
};

/// Nielsen criterion: true iff every partial sum of `source` is <= the
/// matching partial sum of `target` (vectors zero-padded to a common length),
/// i.e. the source state converts to the target deterministically under LOCC.
bool majorizes(const SchmidtVector& source, const SchmidtVector& target);

/// Vidal's optimal single-copy conversion probability
///   min_l ( tail_l(source) / tail_l(target) ), clamped to [0,1].
/// Indices where the target tail vanishes are skipped.
double max_conversion_probability(const SchmidtVector& source,
                                  const SchmidtVector& target);

/// Singlet conversion probability of a pair state: 2*phi1.
double scp(const PairState& pair);

/// The two measurement operators that convert sqrt(phi0)|0..0>+sqrt(phi1)|1..1>
/// into a cat state by acting on a single qubit:
///   M1 = diag(sqrt(phi1/phi0), 1),  M2 = diag(sqrt(1 - phi1/phi0), 0).
struct DistillationOperators {
    Mat2 m1;
    Mat2 m2;
};
DistillationOperators gghz_distillation_operators(double phi0, double phi1);

/// Closed-form single-shot distillation of a generalized GHZ state driven by
/// an externally supplied uniform draw. Succeeds with probability
/// 2*amp_small^2; on success the state becomes the balanced cat with the same
/// bit strings and sign, on failure it collapses to a product state.
struct DistillResult {
    bool success;
    double success_probability;
    std::optional<GghzState> post; // empty on failure (product state)
};
DistillResult distill_gghz(const GghzState& state, double rng_draw);

} // namespace qperc
