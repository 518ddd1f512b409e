#include "qperc/qstate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qperc {

namespace {

void check_normalized(const std::vector<cdouble>& amps) {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    if (std::abs(n - 1.0) > kTightTol)
        throw std::invalid_argument("PureState: amplitudes not normalized");
}

} // namespace

PureState::PureState(int num_qubits, std::vector<cdouble> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 0 || num_qubits > kMaxQubits)
        throw std::length_error("PureState: qubit count outside [0, cap]");
    if (amps_.size() != (std::size_t{1} << num_qubits))
        throw std::invalid_argument("PureState: amplitude count != 2^n");
    check_normalized(amps_);
}

PureState PureState::basis(int num_qubits, uint32_t bits) {
    std::vector<cdouble> amps(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
    amps.at(bits) = 1.0;
    return PureState(num_qubits, std::move(amps));
}

double PureState::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amps_) n += std::norm(a);
    return n;
}

SchmidtVector::SchmidtVector(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
    if (coeffs_.empty()) throw std::invalid_argument("SchmidtVector: empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] < -kTightTol)
            throw std::invalid_argument("SchmidtVector: negative entry");
        if (i + 1 < coeffs_.size() && coeffs_[i] + kTightTol < coeffs_[i + 1])
            throw std::invalid_argument("SchmidtVector: not descending");
        sum += coeffs_[i];
    }
    if (std::abs(sum - 1.0) > kTightTol)
        throw std::invalid_argument("SchmidtVector: does not sum to 1");
}

Bipartition Bipartition::of(int num_qubits, std::vector<int> side_a) {
    std::sort(side_a.begin(), side_a.end());
    if (side_a.empty() || static_cast<int>(side_a.size()) >= num_qubits)
        throw std::invalid_argument("Bipartition: both sides must be non-empty");
    std::vector<bool> in_a(num_qubits, false);
    for (int q : side_a) {
        if (q < 0 || q >= num_qubits || in_a[q])
            throw std::invalid_argument("Bipartition: bad qubit index");
        in_a[q] = true;
    }
    Bipartition cut;
    cut.side_a = std::move(side_a);
    for (int q = 0; q < num_qubits; ++q)
        if (!in_a[q]) cut.side_b.push_back(q);
    return cut;
}

PureState tensor(const std::vector<PureState>& parts) {
    if (parts.empty()) throw std::invalid_argument("tensor: no inputs");
    int total = 0;
    for (const auto& p : parts) total += p.num_qubits();
    if (total > kMaxQubits) throw std::length_error("tensor: qubit cap exceeded");

    std::vector<cdouble> acc{cdouble{1.0, 0.0}};
    for (const auto& p : parts) {
        std::vector<cdouble> next(acc.size() * p.dim());
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (std::size_t j = 0; j < p.dim(); ++j)
                next[i * p.dim() + j] = acc[i] * p.amplitudes()[j];
        acc = std::move(next);
    }
    return PureState(total, std::move(acc));
}

SchmidtVector schmidt(const PureState& state, const Bipartition& cut) {
    const int n = state.num_qubits();
    if (cut.side_a.empty() || cut.side_b.empty() ||
        cut.side_a.size() + cut.side_b.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("schmidt: degenerate bipartition");

    const int na = static_cast<int>(cut.side_a.size());
    const int nb = n - na;
    Eigen::MatrixXcd m(std::size_t{1} << na, std::size_t{1} << nb);
    for (uint32_t idx = 0; idx < state.dim(); ++idx) {
        uint32_t row = 0, col = 0;
        for (int k = 0; k < na; ++k)
            row = (row << 1) | PureState::bit_of(idx, cut.side_a[k], n);
        for (int k = 0; k < nb; ++k)
            col = (col << 1) | PureState::bit_of(idx, cut.side_b[k], n);
        m(row, col) = state.amplitude(idx);
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    std::vector<double> coeffs;
    const std::size_t want = std::min(m.rows(), m.cols());
    for (std::size_t i = 0; i < want; ++i) {
        const double s = i < static_cast<std::size_t>(sv.size()) ? sv(i) : 0.0;
        coeffs.push_back(s * s);
    }
    std::stable_sort(coeffs.begin(), coeffs.end(), std::greater<>());
    // SVD leaves the unit sum intact only up to roundoff; pin it exactly so
    // downstream partial-sum comparisons stay within the tight tolerance.
    double sum = 0.0;
    for (double c : coeffs) sum += c;
    for (double& c : coeffs) c /= sum;
    return SchmidtVector(std::move(coeffs));
}

std::vector<Branch> project(const PureState& state,
                            const std::vector<PureState>& projector_basis,
                            const std::vector<int>& target_qubits) {
    const int n = state.num_qubits();
    const int k = static_cast<int>(target_qubits.size());
    if (k == 0 || k > n) throw std::invalid_argument("project: bad target set");
    if (projector_basis.empty())
        throw std::invalid_argument("project: empty basis");
    for (const auto& b : projector_basis)
        if (b.num_qubits() != k)
            throw std::invalid_argument("project: basis width != target count");
    {
        std::vector<bool> seen(n, false);
        for (int q : target_qubits) {
            if (q < 0 || q >= n || seen[q])
                throw std::invalid_argument("project: bad target qubit");
            seen[q] = true;
        }
    }
    // Orthonormality of the basis on its subspace.
    for (std::size_t i = 0; i < projector_basis.size(); ++i)
        for (std::size_t j = i; j < projector_basis.size(); ++j) {
            cdouble g = 0.0;
            for (std::size_t t = 0; t < projector_basis[i].dim(); ++t)
                g += std::conj(projector_basis[i].amplitudes()[t]) *
                     projector_basis[j].amplitudes()[t];
            const double want = i == j ? 1.0 : 0.0;
            if (std::abs(g - want) > kChainTol)
                throw std::invalid_argument("project: basis not orthonormal");
        }

    std::vector<int> rest;
    {
        std::vector<bool> targeted(n, false);
        for (int q : target_qubits) targeted[q] = true;
        for (int q = 0; q < n; ++q)
            if (!targeted[q]) rest.push_back(q);
    }
    const int r = static_cast<int>(rest.size());

    std::vector<Branch> out;
    out.reserve(projector_basis.size());
    for (const auto& basis_state : projector_basis) {
        std::vector<cdouble> residual(std::size_t{1} << r, cdouble{0.0, 0.0});
        for (uint32_t idx = 0; idx < state.dim(); ++idx) {
            const cdouble a = state.amplitude(idx);
            if (a == cdouble{0.0, 0.0}) continue;
            uint32_t t = 0, j = 0;
            for (int q = 0; q < k; ++q)
                t = (t << 1) | PureState::bit_of(idx, target_qubits[q], n);
            for (int q = 0; q < r; ++q)
                j = (j << 1) | PureState::bit_of(idx, rest[q], n);
            residual[j] += std::conj(basis_state.amplitude(t)) * a;
        }
        Branch br;
        for (const auto& c : residual) br.probability += std::norm(c);
        if (br.probability > kTightTol * kTightTol) {
            const double inv = 1.0 / std::sqrt(br.probability);
            for (auto& c : residual) c *= inv;
            br.state = PureState(r, std::move(residual));
        }
        out.push_back(std::move(br));
    }
    return out;
}

Branch apply_operator(const PureState& state, const Mat2& op, int qubit) {
    const int n = state.num_qubits();
    if (qubit < 0 || qubit >= n) throw std::invalid_argument("apply_operator: bad qubit");
    const uint32_t mask = 1u << (n - 1 - qubit);
    std::vector<cdouble> res(state.dim());
    for (uint32_t idx = 0; idx < state.dim(); ++idx) {
        const uint32_t i0 = idx & ~mask;  // qubit = 0
        const uint32_t i1 = idx | mask;   // qubit = 1
        const int b = (idx & mask) ? 1 : 0;
        res[idx] = op[b][0] * state.amplitude(i0) + op[b][1] * state.amplitude(i1);
    }
    Branch br;
    for (const auto& c : res) br.probability += std::norm(c);
    if (br.probability > kTightTol * kTightTol) {
        const double inv = 1.0 / std::sqrt(br.probability);
        for (auto& c : res) c *= inv;
        br.state = PureState(n, std::move(res));
    }
    return br;
}

bool equal_up_to_phase(const PureState& a, const PureState& b, double tol) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("equal_up_to_phase: dimension mismatch");
    cdouble overlap = 0.0;
    for (uint32_t i = 0; i < a.dim(); ++i)
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    return std::abs(overlap) >= 1.0 - tol;
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.num_qubits() != b.num_qubits())
        throw std::invalid_argument("fidelity: dimension mismatch");
    cdouble overlap = 0.0;
    for (uint32_t i = 0; i < a.dim(); ++i)
        overlap += std::conj(a.amplitude(i)) * b.amplitude(i);
    return std::norm(overlap);
}

} // namespace qperc
