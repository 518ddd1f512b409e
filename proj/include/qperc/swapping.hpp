#pragma once

#include "qperc/locc.hpp"
#include "qperc/qstate.hpp"

#include <vector>

namespace qperc {

/// The four Bell states in the fixed order
///   (|00>+|11>), (|00>-|11>), (|01>+|10>), (|01>-|10>)  (each /sqrt(2)).
std::vector<PureState> bell_basis();

/// The eight three-qubit GHZ-basis states, ordered
///   (|000>+-|111>), (|001>+-|110>), (|010>+-|101>), (|011>+-|100>).
std::vector<PureState> ghz_basis();

struct SwapOutcome {
    GghzState state;
    double probability;
};

/// Full outcome table of a swapping measurement: the post-measurement states
/// with their probabilities, plus the probability-weighted average singlet
/// conversion probability of the outcomes.
struct SwapOutcomeTable {
    std::vector<SwapOutcome> outcomes;
    double average_scp;

    double probability_sum() const;
};

/// GHZ-basis measurement at a degree-3 node holding one qubit of each of
/// three identical pairs: the eight generalized-GHZ outcomes on the three
/// outer qubits, their probabilities, and the average SCP
///   p0 = 2*phi1^2*(phi1 + 3*phi0).
/// Closed form; see ghz_swap_oracle for the brute-force route.
SwapOutcomeTable ghz_swap(const PairState& pair);

/// Same table computed the long way: build the six-qubit product state with
/// pair layout (outer0, node0, outer1, node1, outer2, node2), project the
/// node qubits onto the GHZ basis, and read the outcomes off the residuals.
SwapOutcomeTable ghz_swap_oracle(const PairState& pair);

/// Bell-basis entanglement swapping of two identical pairs at a shared middle
/// node: four outcomes whose average SCP equals scp(pair) = 2*phi1.
SwapOutcomeTable bell_swap(const PairState& pair);

/// Brute-force route for bell_swap via a 4-qubit statevector.
SwapOutcomeTable bell_swap_oracle(const PairState& pair);

/// Extract a generalized-GHZ descriptor from a statevector with exactly two
/// nonvanishing amplitudes on complementary bit strings.
GghzState gghz_from_pure(const PureState& state);

/// Single-qubit Pauli fix applied after a measurement outcome.
struct PauliFix {
    int qubit;    // index within the post-measurement register
    char op;      // 'X' or 'Z'
};

/// Result of fusing two balanced cat-class states with a Bell measurement on
/// one designated qubit of each. `fused` is the raw post-measurement
/// descriptor over (m_a - 1) + (m_b - 1) qubits, a's remaining qubits first;
/// applying `corrections` turns it into the standard cat.
struct FusionOutcome {
    double probability; // 1/4 for balanced inputs
    GghzState fused;
    std::vector<PauliFix> corrections;
};

/// Bell measurement (outcome index into bell_basis order) on qubit_a of `a`
/// and qubit_b of `b`. Inputs must be balanced (distill first).
FusionOutcome fuse_ghz_pair(const GghzState& a, const GghzState& b,
                            int qubit_a, int qubit_b, int bell_outcome);

/// sigma_x measurement on one qubit of an m >= 3 cat-class state
/// (outcome +1/-1). The raw descriptor keeps the measured sign; the
/// correction (a phase flip on any remaining qubit, present for -1) restores
/// the input sign.
struct RemovalOutcome {
    double probability; // 1/2
    GghzState post;
    std::vector<PauliFix> corrections;
};
RemovalOutcome remove_qubit_x(const GghzState& state, int qubit, int outcome);

/// Descriptor with `corrections` applied (the state the hardware would hold
/// after the classical fix-up).
GghzState apply_fixes(const GghzState& state, const std::vector<PauliFix>& fixes);

} // namespace qperc
