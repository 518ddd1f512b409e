#include "qperc/swapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qperc {

namespace {

PureState two_term_state(int m, uint32_t hi_bits, double hi_amp, uint32_t lo_bits,
                         double lo_amp) {
    std::vector<cdouble> amps(std::size_t{1} << m, cdouble{0.0, 0.0});
    amps[hi_bits] = hi_amp;
    amps[lo_bits] = lo_amp;
    return PureState(m, std::move(amps));
}

// Drop the bit of `qubit` from an m-bit big-endian string.
uint32_t drop_bit(uint32_t bits, int m, int qubit) {
    const int low_width = m - 1 - qubit;
    const uint32_t above = bits >> (low_width + 1);
    const uint32_t below = bits & ((1u << low_width) - 1u);
    return (above << low_width) | below;
}

double outcome_scp(const GghzState& g) {
    return max_conversion_probability(g.schmidt_vector(), SchmidtVector({0.5, 0.5}));
}

} // namespace

std::vector<PureState> bell_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    return {
        two_term_state(2, 0b00, r, 0b11, r),
        two_term_state(2, 0b00, r, 0b11, -r),
        two_term_state(2, 0b01, r, 0b10, r),
        two_term_state(2, 0b01, r, 0b10, -r),
    };
}

std::vector<PureState> ghz_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<PureState> basis;
    for (uint32_t low : {0b000u, 0b001u, 0b010u, 0b011u}) {
        basis.push_back(two_term_state(3, low, r, ~low & 7u, r));
        basis.push_back(two_term_state(3, low, r, ~low & 7u, -r));
    }
    return basis;
}

double SwapOutcomeTable::probability_sum() const {
    double s = 0.0;
    for (const auto& o : outcomes) s += o.probability;
    return s;
}

SwapOutcomeTable ghz_swap(const PairState& pair) {
    const double phi0 = pair.phi0, phi1 = pair.phi1;
    SwapOutcomeTable table;

    if (phi1 <= 0.0) {
        // Degenerate input: every pair is a product state, the measurement
        // yields |000> with certainty.
        table.outcomes.push_back({GghzState(3, 1.0, 0.0, 0b000, +1), 1.0});
        table.average_scp = 0.0;
        return table;
    }

    const double n1 = std::sqrt(phi0 * phi0 * phi0 + phi1 * phi1 * phi1);
    const double n2 = std::sqrt(phi0 * phi0 * phi1 + phi1 * phi1 * phi0);
    const double p_cat = (phi0 * phi0 * phi0 + phi1 * phi1 * phi1) / 2.0;
    const double p_mix = (phi0 * phi0 * phi1 + phi1 * phi1 * phi0) / 2.0;

    for (int sign : {+1, -1})
        table.outcomes.push_back(
            {GghzState(3, phi0 * std::sqrt(phi0) / n1, phi1 * std::sqrt(phi1) / n1,
                       0b000, sign),
             p_cat});
    for (uint32_t low : {0b001u, 0b010u})
        for (int sign : {+1, -1})
            table.outcomes.push_back(
                {GghzState(3, phi0 * std::sqrt(phi1) / n2, phi1 * std::sqrt(phi0) / n2,
                           low, sign),
                 p_mix});
    // Last GHZ-basis pair: the dominant amplitude sits on |100>. When the
    // amplitudes tie (phi1 = 1/2) the canonical descriptor keeps the lower
    // bit string, matching gghz_from_pure.
    const double big = phi0 * std::sqrt(phi1), small = phi1 * std::sqrt(phi0);
    for (int sign : {+1, -1})
        table.outcomes.push_back(
            {GghzState(3, big / n2, small / n2, big > small ? 0b100u : 0b011u, sign),
             p_mix});

    table.average_scp = 2.0 * phi1 * phi1 * (phi1 + 3.0 * phi0);
    return table;
}

GghzState gghz_from_pure(const PureState& state) {
    const int m = state.num_qubits();
    int hi = -1, lo = -1;
    for (uint32_t i = 0; i < state.dim(); ++i) {
        if (std::abs(state.amplitude(i)) < 1e-9) continue;
        if (hi < 0)
            hi = static_cast<int>(i);
        else if (lo < 0)
            lo = static_cast<int>(i);
        else
            throw std::invalid_argument("gghz_from_pure: more than two terms");
    }
    if (hi < 0) throw std::invalid_argument("gghz_from_pure: zero state");
    const uint32_t full = (1u << m) - 1u;
    if (lo < 0) {
        // Single-term product state; pick the complement as the empty branch.
        return GghzState(m, 1.0, 0.0, static_cast<uint32_t>(hi), +1);
    }
    if ((static_cast<uint32_t>(hi) ^ static_cast<uint32_t>(lo)) != full)
        throw std::invalid_argument("gghz_from_pure: bit strings not complementary");

    // Remove the global phase so the dominant amplitude is positive real.
    cdouble a = state.amplitude(hi);
    cdouble b = state.amplitude(lo);
    if (std::abs(a) < std::abs(b)) {
        std::swap(a, b);
        std::swap(hi, lo);
    }
    const cdouble phase = a / std::abs(a);
    a /= phase;
    b /= phase;
    if (std::abs(b.imag()) > kChainTol)
        throw std::invalid_argument("gghz_from_pure: relative phase not +-1");
    const int sign = b.real() >= 0.0 ? +1 : -1;
    return GghzState(m, a.real(), std::abs(b.real()), static_cast<uint32_t>(hi), sign);
}

namespace {

SwapOutcomeTable table_from_branches(const std::vector<Branch>& branches,
                                     int residual_qubits) {
    SwapOutcomeTable table;
    table.average_scp = 0.0;
    for (const auto& br : branches) {
        if (!br.state) {
            // Zero-probability branch: keep the slot so outcome indices line
            // up with the measurement basis order.
            table.outcomes.push_back(
                {GghzState(residual_qubits, 1.0, 0.0, 0u, +1), 0.0});
            continue;
        }
        GghzState g = gghz_from_pure(*br.state);
        table.average_scp += br.probability * outcome_scp(g);
        table.outcomes.push_back({std::move(g), br.probability});
    }
    return table;
}

} // namespace

SwapOutcomeTable ghz_swap_oracle(const PairState& pair) {
    // Pair k spans (outer_k, node_k); tensor order puts the node qubit of
    // each pair at positions 1, 3, 5.
    const PureState p = pair.to_pure_state();
    const PureState lambda = tensor({p, p, p});
    const auto branches = project(lambda, ghz_basis(), {1, 3, 5});
    return table_from_branches(branches, 3);
}

SwapOutcomeTable bell_swap(const PairState& pair) {
    const double phi0 = pair.phi0, phi1 = pair.phi1;
    SwapOutcomeTable table;
    const double nsq = phi0 * phi0 + phi1 * phi1;
    const double n = std::sqrt(nsq);
    const double bal = 1.0 / std::sqrt(2.0);
    for (int sign : {+1, -1})
        table.outcomes.push_back(
            {GghzState(2, phi0 / n, phi1 / n, 0b00, sign), nsq / 2.0});
    for (int sign : {+1, -1})
        table.outcomes.push_back(
            {GghzState(2, bal, bal, 0b01, sign), phi0 * phi1});
    table.average_scp = 2.0 * phi1;
    return table;
}

SwapOutcomeTable bell_swap_oracle(const PairState& pair) {
    // Qubits (A, b1, b2, C): the middle node holds qubits 1 and 2.
    const PureState p = pair.to_pure_state();
    const PureState lambda = tensor({p, p});
    const auto branches = project(lambda, bell_basis(), {1, 2});
    return table_from_branches(branches, 2);
}

FusionOutcome fuse_ghz_pair(const GghzState& a, const GghzState& b, int qubit_a,
                            int qubit_b, int bell_outcome) {
    if (!a.balanced() || !b.balanced())
        throw std::logic_error("fuse_ghz_pair: inputs must be balanced; distill first");
    if (qubit_a < 0 || qubit_a >= a.m || qubit_b < 0 || qubit_b >= b.m)
        throw std::invalid_argument("fuse_ghz_pair: bad designated qubit");
    if (bell_outcome < 0 || bell_outcome > 3)
        throw std::invalid_argument("fuse_ghz_pair: bad outcome index");
    const int m = a.m + b.m - 2;
    if (m > kMaxQubits) throw std::length_error("fuse_ghz_pair: qubit cap exceeded");

    const bool phi_class = bell_outcome < 2;      // |00>/|11> support
    const bool minus = (bell_outcome % 2) == 1;

    const int alpha = a.bit_a(qubit_a);
    // Keep the b-branch whose measured bit pairs with alpha inside the
    // observed Bell state's support.
    const int needed = phi_class ? alpha : 1 - alpha;
    const uint32_t b_branch = (b.bit_a(qubit_b) == needed) ? b.bits_a : b.bits_b();

    const uint32_t a_part = drop_bit(a.bits_a, a.m, qubit_a);
    const uint32_t b_part = drop_bit(b_branch, b.m, qubit_b);
    const uint32_t fused_bits = (a_part << (b.m - 1)) | b_part;
    const int sign = a.sign * b.sign * (minus ? -1 : +1);

    FusionOutcome out{0.25,
                      GghzState(m, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                                fused_bits, sign),
                      {}};
    for (int q = 0; q < m; ++q)
        if ((fused_bits >> (m - 1 - q)) & 1u) out.corrections.push_back({q, 'X'});
    if (sign < 0) out.corrections.push_back({0, 'Z'});
    return out;
}

RemovalOutcome remove_qubit_x(const GghzState& state, int qubit, int outcome) {
    if (state.m < 3)
        throw std::invalid_argument("remove_qubit_x: would destroy the pair (m < 3)");
    if (qubit < 0 || qubit >= state.m)
        throw std::invalid_argument("remove_qubit_x: bad qubit");
    if (outcome != 1 && outcome != -1)
        throw std::invalid_argument("remove_qubit_x: outcome must be +-1");

    const uint32_t bits = drop_bit(state.bits_a, state.m, qubit);
    RemovalOutcome out{0.5,
                       GghzState(state.m - 1, state.amp_big, state.amp_small, bits,
                                 state.sign * outcome),
                       {}};
    if (outcome < 0) out.corrections.push_back({0, 'Z'});
    return out;
}

GghzState apply_fixes(const GghzState& state, const std::vector<PauliFix>& fixes) {
    uint32_t bits = state.bits_a;
    int sign = state.sign;
    for (const auto& f : fixes) {
        if (f.qubit < 0 || f.qubit >= state.m)
            throw std::invalid_argument("apply_fixes: bad qubit");
        if (f.op == 'X') {
            bits ^= 1u << (state.m - 1 - f.qubit);
        } else if (f.op == 'Z') {
            sign = -sign;
        } else {
            throw std::invalid_argument("apply_fixes: unknown Pauli");
        }
    }
    return GghzState(state.m, state.amp_big, state.amp_small, bits, sign);
}

} // namespace qperc
