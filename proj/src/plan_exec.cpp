#include "qperc/lattice.hpp"
#include "qperc/swapping.hpp"

#include <algorithm>
#include <stdexcept>

namespace qperc {

namespace {

const Mat2 kPauliX{{{cdouble{0.0}, cdouble{1.0}}, {cdouble{1.0}, cdouble{0.0}}}};
const Mat2 kPauliZ{{{cdouble{1.0}, cdouble{0.0}}, {cdouble{0.0}, cdouble{-1.0}}}};

std::vector<PureState> x_basis() {
    const double r = 1.0 / std::sqrt(2.0);
    return {PureState(1, {r, r}), PureState(1, {r, -r})};
}

// A live component: the ordered global qubits of one cat-class state and its
// descriptor (descriptor bit k belongs to qubits[k]).
struct Component {
    std::vector<int> qubits;
    GghzState descriptor = GghzState::cat(2);
};

} // namespace

ExecutedPlan execute_plan(const MeasurementPlan& plan,
                          const std::vector<int>& fusion_outcomes,
                          const std::vector<int>& removal_outcomes) {
    if (fusion_outcomes.size() != plan.fusions.size())
        throw std::invalid_argument("execute_plan: one outcome per fusion required");
    if (removal_outcomes.size() != plan.removals.size())
        throw std::invalid_argument("execute_plan: one outcome per removal required");
    const int ntri = static_cast<int>(plan.region.size());
    if (ntri == 0) throw std::invalid_argument("execute_plan: empty region");
    if (3 * ntri > kMaxQubits)
        throw std::length_error("execute_plan: region too large for the statevector");

    auto global_id = [&](int tri, int corner) {
        const auto it = std::find(plan.region.begin(), plan.region.end(), tri);
        if (it == plan.region.end())
            throw std::logic_error("execute_plan: step references a non-region triangle");
        return 3 * static_cast<int>(it - plan.region.begin()) + corner;
    };

    // Start from an ideal (post-distillation) cat on every triangle.
    std::vector<PureState> parts(ntri, GghzState::cat(3).to_pure_state());
    PureState state = tensor(parts);

    std::vector<int> alive(3 * ntri);
    for (int i = 0; i < 3 * ntri; ++i) alive[i] = i;
    auto pos_of = [&](int gid) {
        const auto it = std::lower_bound(alive.begin(), alive.end(), gid);
        if (it == alive.end() || *it != gid)
            throw std::logic_error("execute_plan: qubit already consumed");
        return static_cast<int>(it - alive.begin());
    };

    std::vector<Component> comps(ntri);
    std::vector<int> comp_of(3 * ntri);
    for (int i = 0; i < ntri; ++i) {
        comps[i].qubits = {3 * i, 3 * i + 1, 3 * i + 2};
        comps[i].descriptor = GghzState::cat(3);
        for (int k = 0; k < 3; ++k) comp_of[3 * i + k] = i;
    }

    double probability = 1.0;
    const auto bell = bell_basis();

    auto apply_pauli = [&](int gid, char op) {
        const Branch br =
            apply_operator(state, op == 'X' ? kPauliX : kPauliZ, pos_of(gid));
        state = *br.state;
    };

    for (std::size_t f = 0; f < plan.fusions.size(); ++f) {
        const auto& step = plan.fusions[f];
        const int ga = global_id(step.t_a, step.corner_a);
        const int gb = global_id(step.t_b, step.corner_b);
        Component& ca = comps[comp_of[ga]];
        Component& cb = comps[comp_of[gb]];
        if (&ca == &cb)
            throw std::logic_error("execute_plan: fusion within one component");

        const int ja = static_cast<int>(
            std::find(ca.qubits.begin(), ca.qubits.end(), ga) - ca.qubits.begin());
        const int jb = static_cast<int>(
            std::find(cb.qubits.begin(), cb.qubits.end(), gb) - cb.qubits.begin());
        const FusionOutcome fo =
            fuse_ghz_pair(ca.descriptor, cb.descriptor, ja, jb, fusion_outcomes[f]);

        auto branches = project(state, bell, {pos_of(ga), pos_of(gb)});
        const Branch& br = branches[fusion_outcomes[f]];
        if (!br.state)
            throw std::logic_error("execute_plan: measured a zero-probability branch");
        probability *= br.probability;
        state = *br.state;
        alive.erase(std::remove(alive.begin(), alive.end(), ga), alive.end());
        alive.erase(std::remove(alive.begin(), alive.end(), gb), alive.end());

        // Merge bookkeeping: a's remaining qubits first, matching the
        // descriptor convention of fuse_ghz_pair.
        std::vector<int> merged(ca.qubits);
        merged.erase(merged.begin() + ja);
        std::vector<int> tail(cb.qubits);
        tail.erase(tail.begin() + jb);
        merged.insert(merged.end(), tail.begin(), tail.end());

        for (const auto& fix : fo.corrections) apply_pauli(merged[fix.qubit], fix.op);

        const int keep = comp_of[ga];
        comps[keep].qubits = merged;
        comps[keep].descriptor = apply_fixes(fo.fused, fo.corrections);
        for (int q : merged) comp_of[q] = keep;
    }

    const auto xb = x_basis();
    for (std::size_t r = 0; r < plan.removals.size(); ++r) {
        const auto& step = plan.removals[r];
        const int g = global_id(step.t, step.corner);
        Component& c = comps[comp_of[g]];
        const int j = static_cast<int>(
            std::find(c.qubits.begin(), c.qubits.end(), g) - c.qubits.begin());
        const RemovalOutcome ro = remove_qubit_x(c.descriptor, j, removal_outcomes[r]);

        auto branches = project(state, xb, {pos_of(g)});
        const Branch& br = branches[removal_outcomes[r] == 1 ? 0 : 1];
        if (!br.state)
            throw std::logic_error("execute_plan: measured a zero-probability branch");
        probability *= br.probability;
        state = *br.state;
        alive.erase(std::remove(alive.begin(), alive.end(), g), alive.end());
        c.qubits.erase(c.qubits.begin() + j);

        for (const auto& fix : ro.corrections) apply_pauli(c.qubits[fix.qubit], fix.op);
        c.descriptor = apply_fixes(ro.post, ro.corrections);
    }

    ExecutedPlan out{probability, state, {}};
    for (int gid : alive) {
        const int tri = plan.region[gid / 3];
        out.qubits.push_back({tri, gid % 3});
    }
    return out;
}

} // namespace qperc
