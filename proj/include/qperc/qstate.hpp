#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qperc {

using cdouble = std::complex<double>;

// Tolerances used across the exact-math layer: TIGHT for single algebraic
// steps, CHAIN for longer pipelines (oracles, plan execution).
inline constexpr double kTightTol = 1e-12;
inline constexpr double kChainTol = 1e-9;

// Hard cap on statevector width; 2^20 complex doubles is the largest
// allocation the brute-force layer will make.
inline constexpr int kMaxQubits = 20;

/// Dense normalized amplitude vector over n qubits. Qubit 0 is the most
/// significant bit of the basis index (big-endian) everywhere in this
/// library. A zero-qubit state is a bare phase; it appears as the residual
/// of projecting every qubit and nowhere else.
class PureState {
public:
    PureState(int num_qubits, std::vector<cdouble> amplitudes);

    /// Computational basis state |bits> on num_qubits qubits.
    static PureState basis(int num_qubits, uint32_t bits);

    int num_qubits() const { return num_qubits_; }
    const std::vector<cdouble>& amplitudes() const { return amps_; }
    cdouble amplitude(uint32_t basis_index) const { return amps_[basis_index]; }
    std::size_t dim() const { return amps_.size(); }

    /// Bit of `qubit` inside `basis_index` under the big-endian convention.
    static int bit_of(uint32_t basis_index, int qubit, int num_qubits) {
        return static_cast<int>((basis_index >> (num_qubits - 1 - qubit)) & 1u);
    }

    double norm_sq() const;

private:
    int num_qubits_;
    std::vector<cdouble> amps_;
};

/// Squared Schmidt coefficients: non-negative, descending, summing to 1.
class SchmidtVector {
public:
    explicit SchmidtVector(std::vector<double> coefficients);

    const std::vector<double>& coefficients() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }
    double operator[](std::size_t i) const { return coeffs_[i]; }

private:
    std::vector<double> coeffs_;
};

/// A cut of the qubit set into two non-empty sides.
struct Bipartition {
    std::vector<int> side_a;
    std::vector<int> side_b;

    /// side_a as given, side_b = complement, both ascending.
    static Bipartition of(int num_qubits, std::vector<int> side_a);
};

/// One branch of a projective measurement: probability and the renormalized
/// residual state. `state` is empty for (numerically) zero-probability
/// branches.
struct Branch {
    double probability = 0.0;
    std::optional<PureState> state;
};

/// Single-qubit operator as a dense 2x2 complex matrix (row-major).
using Mat2 = std::array<std::array<cdouble, 2>, 2>;

/// Kronecker product in declared order (earlier inputs = more significant
/// qubits). Throws if the combined width exceeds kMaxQubits.
PureState tensor(const std::vector<PureState>& parts);

/// Squared Schmidt coefficients of `state` across `cut`, descending, with
/// min(2^|A|, 2^|B|) entries.
SchmidtVector schmidt(const PureState& state, const Bipartition& cut);

/// Projective measurement of `target_qubits` (in the given slot order) in the
/// orthonormal `projector_basis`. Returns one Branch per basis element, with
/// the residual on the untouched qubits in ascending original order.
std::vector<Branch> project(const PureState& state,
                            const std::vector<PureState>& projector_basis,
                            const std::vector<int>& target_qubits);

/// Apply a (not necessarily unitary) 2x2 operator to one qubit. Returns the
/// squared norm of the raw result and the renormalized state.
Branch apply_operator(const PureState& state, const Mat2& op, int qubit);

/// True iff |<a|b>| >= 1 - tol.
bool equal_up_to_phase(const PureState& a, const PureState& b, double tol);

/// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

} // namespace qperc
