#include "doctest.h"

#include "qperc/qstate.hpp"
#include "qperc/rng.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace qperc;

namespace {

PureState pair_state(double phi1) {
    const double phi0 = 1.0 - phi1;
    return PureState(2, {std::sqrt(phi0), 0.0, 0.0, std::sqrt(phi1)});
}

PureState random_state(int n, uint32_t stream) {
    Philox g(0xabcdef, stream, 0);
    std::vector<cdouble> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto& a : amps) {
        // Box-Muller pairs give an isotropic direction on the sphere.
        const double u1 = g.next_double(), u2 = g.next_double();
        const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
        a = {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)};
        norm += std::norm(a);
    }
    for (auto& a : amps) a /= std::sqrt(norm);
    return PureState(n, std::move(amps));
}

// Independent route: eigenvalues of the reduced density matrix obtained by a
// direct partial trace over side B.
std::vector<double> reduced_eigenvalues(const PureState& s, const Bipartition& cut) {
    const int n = s.num_qubits();
    const int na = static_cast<int>(cut.side_a.size());
    const int nb = n - na;
    const int da = 1 << na, db = 1 << nb;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
    auto part_index = [&](uint32_t idx, const std::vector<int>& side) {
        uint32_t r = 0;
        for (int q : side) r = (r << 1) | PureState::bit_of(idx, q, n);
        return r;
    };
    for (uint32_t i = 0; i < s.dim(); ++i)
        for (uint32_t j = 0; j < s.dim(); ++j) {
            if (part_index(i, cut.side_b) != part_index(j, cut.side_b)) continue;
            rho(part_index(i, cut.side_a), part_index(j, cut.side_a)) +=
                s.amplitude(i) * std::conj(s.amplitude(j));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    ev.resize(std::min(da, db));
    return ev;
}

} // namespace

TEST_CASE("tensor of basis states") {
    const PureState zero = PureState::basis(1, 0);
    const PureState out = tensor({zero, zero});
    CHECK(out.num_qubits() == 2);
    CHECK(out.amplitude(0).real() == doctest::Approx(1.0).epsilon(1e-15));
    for (uint32_t i = 1; i < 4; ++i) CHECK(std::abs(out.amplitude(i)) == 0.0);
}

TEST_CASE("tensor of three pairs has eight product terms") {
    const PureState p = pair_state(0.4);
    const PureState lambda = tensor({p, p, p});
    CHECK(lambda.num_qubits() == 6);
    int nonzero = 0;
    for (uint32_t i = 0; i < lambda.dim(); ++i)
        if (std::abs(lambda.amplitude(i)) > 1e-14) ++nonzero;
    CHECK(nonzero == 8);
    // |000000> carries phi0^(3/2); qubit order is (pair0, pair1, pair2).
    CHECK(lambda.amplitude(0).real() ==
          doctest::Approx(std::pow(0.6, 1.5)).epsilon(1e-12));
    CHECK(lambda.amplitude(63).real() ==
          doctest::Approx(std::pow(0.4, 1.5)).epsilon(1e-12));
    CHECK(lambda.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tensor with one input is the identity") {
    const PureState s = random_state(3, 1);
    const PureState out = tensor({s});
    CHECK(equal_up_to_phase(out, s, 1e-12));
}

TEST_CASE("tensor respects the qubit cap") {
    std::vector<PureState> many(kMaxQubits + 1, PureState::basis(1, 0));
    CHECK_THROWS_AS(tensor(many), std::length_error);
}

TEST_CASE("schmidt of two-qubit states") {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState bell(2, {r, 0.0, 0.0, r});
    const auto sv = schmidt(bell, Bipartition::of(2, {0}));
    CHECK(sv[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(0.5).epsilon(1e-12));

    const auto sv2 = schmidt(pair_state(0.4), Bipartition::of(2, {0}));
    CHECK(sv2[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(sv2[1] == doctest::Approx(0.4).epsilon(1e-12));

    const PureState product = PureState::basis(2, 0b01);
    const auto sv3 = schmidt(product, Bipartition::of(2, {0}));
    CHECK(sv3[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sv3[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("schmidt equals reduced-density-matrix spectrum") {
    for (uint32_t stream = 0; stream < 6; ++stream) {
        const int n = 2 + static_cast<int>(stream % 3); // 2..4 qubits
        const PureState s = random_state(n, 100 + stream);
        const auto cut = Bipartition::of(n, {0});
        const auto sv = schmidt(s, cut);
        const auto ev = reduced_eigenvalues(s, cut);
        REQUIRE(sv.size() == ev.size());
        for (std::size_t i = 0; i < ev.size(); ++i)
            CHECK(sv[i] == doctest::Approx(ev[i]).epsilon(1e-10));
    }
}

TEST_CASE("schmidt is invariant under relabeling within one side") {
    const PureState s = random_state(4, 55);
    const auto a = schmidt(s, Bipartition::of(4, {0, 1}));
    const auto b = schmidt(s, Bipartition::of(4, {1, 0}));
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("schmidt rejects degenerate cuts") {
    CHECK_THROWS_AS(Bipartition::of(2, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Bipartition::of(2, {}), std::invalid_argument);
}

TEST_CASE("Bell projection of |00>") {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<PureState> bell{
        PureState(2, {r, 0.0, 0.0, r}),
        PureState(2, {r, 0.0, 0.0, -r}),
        PureState(2, {0.0, r, r, 0.0}),
        PureState(2, {0.0, r, -r, 0.0}),
    };
    const auto branches = project(PureState::basis(2, 0), bell, {0, 1});
    CHECK(branches[0].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(branches[1].probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(branches[2].probability == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(branches[3].probability == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(branches[2].state.has_value());
    // Projecting every qubit leaves a bare phase.
    REQUIRE(branches[0].state.has_value());
    CHECK(branches[0].state->num_qubits() == 0);
}

TEST_CASE("projection probabilities sum to 1 on random states") {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<PureState> xbasis{PureState(1, {r, r}), PureState(1, {r, -r})};
    for (uint32_t stream = 0; stream < 5; ++stream) {
        const PureState s = random_state(3, 200 + stream);
        const auto branches = project(s, xbasis, {1});
        double total = 0.0;
        for (const auto& b : branches) {
            total += b.probability;
            if (b.state) CHECK(b.state->norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("project rejects non-orthonormal bases") {
    const PureState s = random_state(2, 300);
    const std::vector<PureState> bad{PureState::basis(1, 0), PureState::basis(1, 0)};
    CHECK_THROWS_AS(project(s, bad, {0}), std::invalid_argument);
}

TEST_CASE("apply_operator identity and measurement operators") {
    const PureState s = random_state(3, 400);
    const Mat2 identity{{{1.0, 0.0}, {0.0, 1.0}}};
    const auto br = apply_operator(s, identity, 1);
    CHECK(br.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(equal_up_to_phase(*br.state, s, 1e-12));
}

TEST_CASE("equal_up_to_phase") {
    const PureState s = random_state(2, 500);
    std::vector<cdouble> rotated(s.amplitudes());
    const cdouble phase = std::polar(1.0, 0.7);
    for (auto& a : rotated) a *= phase;
    CHECK(equal_up_to_phase(s, PureState(2, rotated), 1e-12));
    CHECK_FALSE(equal_up_to_phase(PureState::basis(2, 0), PureState::basis(2, 3), 1e-9));
    CHECK_THROWS_AS(equal_up_to_phase(PureState::basis(1, 0), PureState::basis(2, 0), 1e-9),
                    std::invalid_argument);
}

TEST_CASE("X on every qubit fixes the GHZ state") {
    const double r = 1.0 / std::sqrt(2.0);
    PureState ghz(3, {r, 0, 0, 0, 0, 0, 0, r});
    const Mat2 x{{{0.0, 1.0}, {1.0, 0.0}}};
    PureState cur = ghz;
    for (int q = 0; q < 3; ++q) cur = *apply_operator(cur, x, q).state;
    CHECK(equal_up_to_phase(cur, ghz, 1e-12));
}
