#include "qperc/locc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qperc {

PairState::PairState(double phi0_, double phi1_) : phi0(phi0_), phi1(phi1_) {
    if (std::abs(phi0 + phi1 - 1.0) > kTightTol)
        throw std::invalid_argument("PairState: phi0 + phi1 != 1");
    if (phi1 < 0.0 || phi0 < phi1)
        throw std::invalid_argument("PairState: need phi0 >= phi1 >= 0");
}

PureState PairState::to_pure_state() const {
    std::vector<cdouble> amps(4, cdouble{0.0, 0.0});
    amps[0] = std::sqrt(phi0);
    amps[3] = std::sqrt(phi1);
    return PureState(2, std::move(amps));
}

GghzState::GghzState(int m_, double amp_big_, double amp_small_, uint32_t bits_a_,
                     int sign_)
    : m(m_), amp_big(amp_big_), amp_small(amp_small_), bits_a(bits_a_), sign(sign_) {
    if (m < 2 || m > kMaxQubits) throw std::invalid_argument("GghzState: bad m");
    if (sign != 1 && sign != -1) throw std::invalid_argument("GghzState: bad sign");
    if (bits_a >= (1u << m)) throw std::invalid_argument("GghzState: bits out of range");
    if (amp_small < 0.0 || amp_big < amp_small)
        throw std::invalid_argument("GghzState: need amp_big >= amp_small >= 0");
    if (std::abs(amp_big * amp_big + amp_small * amp_small - 1.0) > kTightTol)
        throw std::invalid_argument("GghzState: amplitudes not normalized");
}

GghzState GghzState::cat(int m) {
    const double r = 1.0 / std::sqrt(2.0);
    return GghzState(m, r, r, 0u, +1);
}

GghzState GghzState::from_pair_amplitudes(int m, double phi0, double phi1) {
    return GghzState(m, std::sqrt(phi0), std::sqrt(phi1), 0u, +1);
}

bool GghzState::balanced(double tol) const {
    return std::abs(amp_big - amp_small) <= tol;
}

PureState GghzState::to_pure_state() const {
    std::vector<cdouble> amps(std::size_t{1} << m, cdouble{0.0, 0.0});
    amps[bits_a] = amp_big;
    amps[bits_b()] = sign * amp_small;
    return PureState(m, std::move(amps));
}

namespace {

std::pair<std::vector<double>, std::vector<double>>
padded(const SchmidtVector& a, const SchmidtVector& b) {
    const std::size_t n = std::max(a.size(), b.size());
    std::vector<double> s(a.coefficients());
    std::vector<double> t(b.coefficients());
    s.resize(n, 0.0);
    t.resize(n, 0.0);
    return {std::move(s), std::move(t)};
}

} // namespace

bool majorizes(const SchmidtVector& source, const SchmidtVector& target) {
    auto [s, t] = padded(source, target);
    double ps = 0.0, pt = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        ps += s[k];
        pt += t[k];
        if (ps > pt + kTightTol) return false;
    }
    return true;
}

double max_conversion_probability(const SchmidtVector& source,
                                  const SchmidtVector& target) {
    auto [s, t] = padded(source, target);
    const std::size_t n = s.size();
    // Tail sums from each index; evaluated back-to-front so every tail is an
    // exact cumulative sum.
    double best = 1.0;
    double tail_s = 0.0, tail_t = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        tail_s += s[i];
        tail_t += t[i];
        if (tail_t <= kTightTol) continue; // vanishing target tail: skip index
        best = std::min(best, tail_s / tail_t);
    }
    return std::clamp(best, 0.0, 1.0);
}

double scp(const PairState& pair) { return 2.0 * pair.phi1; }

DistillationOperators gghz_distillation_operators(double phi0, double phi1) {
    if (!(phi0 > 0.0) || phi1 < 0.0)
        throw std::invalid_argument("distillation: need phi0 > 0, phi1 >= 0");
    if (phi1 > phi0 + kTightTol)
        throw std::invalid_argument("distillation: need phi1 <= phi0");
    const double ratio = std::min(phi1 / phi0, 1.0);
    DistillationOperators ops;
    ops.m1 = {{{std::sqrt(ratio), 0.0}, {0.0, 1.0}}};
    ops.m2 = {{{std::sqrt(1.0 - ratio), 0.0}, {0.0, 0.0}}};
    return ops;
}

DistillResult distill_gghz(const GghzState& state, double rng_draw) {
    if (rng_draw < 0.0 || rng_draw >= 1.0)
        throw std::invalid_argument("distill_gghz: draw outside [0,1)");
    DistillResult r;
    r.success_probability = 2.0 * state.amp_small * state.amp_small;
    r.success = rng_draw < r.success_probability;
    if (r.success) {
        const double bal = 1.0 / std::sqrt(2.0);
        r.post = GghzState(state.m, bal, bal, state.bits_a, state.sign);
    }
    return r;
}

} // namespace qperc
