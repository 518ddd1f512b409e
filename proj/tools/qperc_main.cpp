// qperc: entanglement-percolation calculus and Monte Carlo front end.
//
// Subcommands: scp, swap, threshold, percolate, count, verify. Every run is
// reproducible: all randomness flows from --seed (fixed default, no entropy),
// and --threads never changes results, only wall time.

#include "qperc/lattice.hpp"
#include "qperc/locc.hpp"
#include "qperc/percolation.hpp"
#include "qperc/swapping.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace qperc;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct Output {
    std::string format = "csv";
    std::string path; // empty: stdout

    void emit(const std::string& csv, const json& j, const json& manifest) const {
        const std::string body = format == "json" ? j.dump(2) + "\n" : csv;
        if (path.empty()) {
            std::cout << body;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << body;
        std::ofstream mf(path + ".manifest.json", std::ios::binary);
        mf << manifest.dump(2) << "\n";
    }
};

json make_manifest(const std::string& subcommand, const json& params,
                   uint64_t seed, const std::string& out_path) {
    return json{{"tool", "qperc"},
                {"version", kVersion},
                {"subcommand", subcommand},
                {"parameters", params},
                {"master_seed", seed},
                {"output", out_path}};
}

std::vector<double> parse_vector(const std::string& csv) {
    std::vector<double> v;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
}

SchmidtVector schmidt_from_arg(const std::string& arg) {
    auto v = parse_vector(arg);
    double sum = 0.0;
    for (double x : v) sum += x;
    if (std::abs(sum - 1.0) > 1e-9)
        throw CLI::ValidationError("schmidt vector must sum to 1");
    for (double& x : v) x /= sum;
    std::sort(v.begin(), v.end(), std::greater<>());
    return SchmidtVector(std::move(v));
}

std::string bits_string(uint32_t bits, int m) {
    std::string s;
    for (int q = 0; q < m; ++q) s += ((bits >> (m - 1 - q)) & 1u) ? '1' : '0';
    return s;
}

// ---------------------------------------------------------------------------
// verify: the full oracle suite.

struct VerifyReport {
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        std::printf("%-58s %s%s%s\n", name.c_str(), ok ? "ok" : "FAIL",
                    detail.empty() ? "" : "  ", detail.c_str());
        if (!ok) ++failures;
    }
};

double swap_table_deviation(const SwapOutcomeTable& a, const SwapOutcomeTable& b) {
    if (a.outcomes.size() != b.outcomes.size()) return 1.0;
    double dev = std::abs(a.average_scp - b.average_scp);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        dev = std::max(dev,
                       std::abs(a.outcomes[i].probability - b.outcomes[i].probability));
        const PureState sa = a.outcomes[i].state.to_pure_state();
        const PureState sb = b.outcomes[i].state.to_pure_state();
        for (uint32_t k = 0; k < sa.dim(); ++k)
            dev = std::max(dev, std::abs(sa.amplitude(k) - sb.amplitude(k)));
    }
    return dev;
}

int run_verify() {
    VerifyReport rep;

    {
        double worst = 0.0, prob_gap = 0.0, scp_gap = 0.0;
        const SchmidtVector bell({0.5, 0.5});
        for (int i = 1; i <= 10; ++i) {
            const PairState pair = PairState::from_phi1(0.05 * i);
            const auto closed = ghz_swap(pair);
            const auto oracle = ghz_swap_oracle(pair);
            worst = std::max(worst, swap_table_deviation(closed, oracle));
            prob_gap = std::max(prob_gap, std::abs(closed.probability_sum() - 1.0));
            double weighted = 0.0;
            for (const auto& o : closed.outcomes)
                weighted += o.probability *
                            max_conversion_probability(o.state.schmidt_vector(), bell);
            scp_gap = std::max(scp_gap, std::abs(weighted - closed.average_scp));
        }
        rep.check("ghz swap closed form vs statevector oracle", worst <= 1e-12,
                  "max dev " + fmt(worst));
        rep.check("ghz swap probabilities sum to 1", prob_gap <= 1e-12);
        rep.check("p0 equals probability-weighted Vidal sum", scp_gap <= 1e-12);
    }
    {
        double worst = 0.0;
        for (double phi1 : {0.1, 0.25, 0.4, 0.5}) {
            const PairState pair = PairState::from_phi1(phi1);
            worst = std::max(worst,
                             swap_table_deviation(bell_swap(pair), bell_swap_oracle(pair)));
            worst = std::max(worst, std::abs(bell_swap(pair).average_scp - 2 * phi1));
        }
        rep.check("bell swap vs four-qubit oracle", worst <= 1e-12,
                  "max dev " + fmt(worst));
    }
    {
        bool ok = true;
        for (int m = 2; m <= 5; ++m) {
            const double phi0 = 0.6, phi1 = 0.4;
            const auto ops = gghz_distillation_operators(phi0, phi1);
            const auto full = GghzState::from_pair_amplitudes(m, phi0, phi1).to_pure_state();
            const Branch b1 = apply_operator(full, ops.m1, 0);
            const Branch b2 = apply_operator(full, ops.m2, 0);
            ok = ok && std::abs(b1.probability - 2 * phi1) <= 1e-12 &&
                 std::abs(b1.probability + b2.probability - 1.0) <= 1e-12 &&
                 equal_up_to_phase(*b1.state, GghzState::cat(m).to_pure_state(), 1e-12);
        }
        rep.check("distillation operators reproduce 2*phi1 for m=2..5", ok);
    }
    {
        bool ok = true;
        const Mat2 X{{{0.0, 1.0}, {1.0, 0.0}}};
        const Mat2 Z{{{1.0, 0.0}, {0.0, -1.0}}};
        for (int outcome = 0; outcome < 4; ++outcome) {
            const GghzState tri = GghzState::cat(3);
            const auto fo = fuse_ghz_pair(tri, tri, 2, 0, outcome);
            const PureState joint = tensor({tri.to_pure_state(), tri.to_pure_state()});
            const auto branches = project(joint, bell_basis(), {2, 3});
            PureState got = *branches[outcome].state;
            for (const auto& fix : fo.corrections)
                got = *apply_operator(got, fix.op == 'X' ? X : Z, fix.qubit).state;
            ok = ok && fidelity(got, GghzState::cat(4).to_pure_state()) >= 1.0 - 1e-12 &&
                 std::abs(branches[outcome].probability - 0.25) <= 1e-12;
        }
        rep.check("triangle fusion corrections on every Bell branch", ok);
    }
    {
        bool ok = true;
        const double r = 1.0 / std::sqrt(2.0);
        const std::vector<PureState> xb{PureState(1, {r, r}), PureState(1, {r, -r})};
        const Mat2 Z{{{1.0, 0.0}, {0.0, -1.0}}};
        for (int m = 3; m <= 6; ++m)
            for (uint32_t bits = 0; bits < (1u << (m - 2)); ++bits) {
                GghzState desc = GghzState::cat(m);
                PureState state = desc.to_pure_state();
                for (int step = 0; step < m - 2; ++step) {
                    const int outcome = (bits >> step) & 1 ? -1 : +1;
                    const auto ro = remove_qubit_x(desc, 0, outcome);
                    const auto branches = project(state, xb, {0});
                    state = *branches[outcome == 1 ? 0 : 1].state;
                    for (const auto& fix : ro.corrections)
                        state = *apply_operator(state, Z, fix.qubit).state;
                    desc = apply_fixes(ro.post, ro.corrections);
                }
                ok = ok && fidelity(state, GghzState::cat(2).to_pure_state()) >= 1.0 - 1e-12;
            }
        rep.check("sigma_x reduction chains end in a Bell pair", ok);
    }
    {
        // Plan execution over every outcome branch on a two-triangle cluster.
        const auto h = build_honeycomb(3, 3, PairState::from_phi1(0.4));
        auto t = ghz_transform(h);
        t.occupied.assign(t.triangles.size(), 0);
        int t0 = -1, t3 = -1;
        for (std::size_t i = 0; i < t.triangles.size(); ++i) {
            if (t.triangles[i].red_node == h.node_id(0, 2)) t0 = static_cast<int>(i);
            if (t.triangles[i].red_node == h.node_id(1, 3)) t3 = static_cast<int>(i);
        }
        t.occupied[t0] = t.occupied[t3] = 1;
        const auto plan = plan_cat_region(
            t, {h.node_id(0, 1), h.node_id(0, 3), h.node_id(1, 4), h.node_id(2, 3)});
        bool ok = plan.fusions.size() == 1 && plan.removals.empty();
        for (int outcome = 0; outcome < 4 && ok; ++outcome) {
            const auto ex = execute_plan(plan, {outcome}, {});
            ok = fidelity(ex.state, GghzState::cat(4).to_pure_state()) >= 1.0 - 1e-12;
        }
        rep.check("measurement plan builds the boundary cat state", ok);
    }

    std::printf("%s\n", rep.failures == 0 ? "verify: all checks passed"
                                          : "verify: FAILURES detected");
    return rep.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement percolation on the monolayer honeycomb lattice"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    uint64_t seed = TrialConfig::kDefaultSeed;
    int threads = 0;
    std::string format = "csv";
    std::string out_path;
    app.add_option("--seed", seed, "master seed (default " +
                                       std::to_string(TrialConfig::kDefaultSeed) + ")")
        ->capture_default_str();
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "write output to this file (plus .manifest.json)");

    // --- scp ---------------------------------------------------------------
    auto* scp_cmd = app.add_subcommand("scp", "singlet conversion probability and "
                                              "LOCC convertibility");
    std::optional<double> scp_phi1;
    std::string src_arg, tgt_arg;
    scp_cmd->add_option("--phi1", scp_phi1, "smaller Schmidt weight of the pair");
    scp_cmd->add_option("--source", src_arg, "source Schmidt vector, comma separated");
    scp_cmd->add_option("--target", tgt_arg, "target Schmidt vector, comma separated");

    // --- swap --------------------------------------------------------------
    auto* swap_cmd = app.add_subcommand("swap", "GHZ-basis swap outcome table");
    double swap_phi1 = 0.0;
    bool swap_verify = false;
    swap_cmd->add_option("--phi1", swap_phi1, "smaller Schmidt weight")->required();
    swap_cmd->add_flag("--verify", swap_verify, "cross-check against the statevector oracle");

    // --- threshold ---------------------------------------------------------
    auto* thr_cmd = app.add_subcommand("threshold", "percolation threshold estimate");
    std::string thr_lattice = "tri-site";
    std::string thr_sizes = "64,128";
    int64_t thr_trials = 20000;
    double thr_tol = 0.01;
    thr_cmd->add_option("--lattice", thr_lattice, "tri-site | hex-bond | square-site")
        ->required();
    thr_cmd->add_option("--sizes", thr_sizes, "two linear sizes L1,L2")
        ->capture_default_str();
    thr_cmd->add_option("--trials", thr_trials, "trials per point")
        ->capture_default_str();
    thr_cmd->add_option("--tol", thr_tol, "target half-width")->capture_default_str();

    // --- percolate ---------------------------------------------------------
    auto* perc_cmd = app.add_subcommand("percolate", "end-to-end experiment: GHZ swap, "
                                                     "then site percolation at p0");
    double perc_phi1 = 0.0;
    int perc_L = 64;
    int64_t perc_trials = 20000;
    perc_cmd->add_option("--phi1", perc_phi1, "smaller Schmidt weight")->required();
    perc_cmd->add_option("--L", perc_L, "linear lattice size")->capture_default_str();
    perc_cmd->add_option("--trials", perc_trials, "trial count")->capture_default_str();

    // --- count -------------------------------------------------------------
    auto* count_cmd = app.add_subcommand("count", "measurement resource counts");
    int count_l = 0;
    std::string count_strategy = "qep";
    count_cmd->add_option("--l", count_l, "box size")->required();
    count_cmd->add_option("--strategy", count_strategy, "cep | qep")
        ->check(CLI::IsMember({"cep", "qep"}));

    // --- verify ------------------------------------------------------------
    app.add_subcommand("verify", "run the full oracle suite");

    CLI11_PARSE(app, argc, argv);

    if (threads > 0) omp_set_num_threads(threads);
    Output output{format, out_path};

    try {
        if (scp_cmd->parsed()) {
            std::string csv = "phi1,scp,majorized,conversion_probability,source,target\n";
            json j;
            if (src_arg.empty() != tgt_arg.empty())
                throw CLI::ValidationError("--source and --target go together");
            if (!src_arg.empty()) {
                const SchmidtVector s = schmidt_from_arg(src_arg);
                const SchmidtVector t = schmidt_from_arg(tgt_arg);
                const bool maj = majorizes(s, t);
                const double p = max_conversion_probability(s, t);
                csv += ",," + std::string(maj ? "true" : "false") + "," + fmt(p) + ",\"" +
                       src_arg + "\",\"" + tgt_arg + "\"\n";
                j = json{{"majorized", maj},
                         {"conversion_probability", p},
                         {"source", s.coefficients()},
                         {"target", t.coefficients()}};
            } else {
                if (!scp_phi1 || *scp_phi1 < 0.0 || *scp_phi1 > 0.5)
                    throw CLI::ValidationError("--phi1 must lie in [0, 0.5]");
                const PairState pair = PairState::from_phi1(*scp_phi1);
                const SchmidtVector bell({0.5, 0.5});
                const bool maj = majorizes(pair.schmidt_vector(), bell);
                const double p = scp(pair);
                csv += fmt(*scp_phi1) + "," + fmt(p) + "," + (maj ? "true" : "false") +
                       "," + fmt(max_conversion_probability(pair.schmidt_vector(), bell)) +
                       ",\"" + fmt(pair.phi0) + "," + fmt(pair.phi1) + "\",\"0.5,0.5\"\n";
                j = json{{"phi1", *scp_phi1},
                         {"scp", p},
                         {"majorized", maj},
                         {"conversion_probability", p}};
            }
            output.emit(csv, j,
                        make_manifest("scp",
                                      {{"phi1", scp_phi1 ? json(*scp_phi1) : json()},
                                       {"source", src_arg},
                                       {"target", tgt_arg},
                                       {"format", format}},
                                      seed, out_path));
            return 0;
        }

        if (swap_cmd->parsed()) {
            if (swap_phi1 <= 0.0 || swap_phi1 > 0.5)
                throw CLI::ValidationError("--phi1 must lie in (0, 0.5]");
            const PairState pair = PairState::from_phi1(swap_phi1);
            const auto table = ghz_swap(pair);

            std::string csv = "outcome,probability,amp_big,amp_small,bits,sign,scp\n";
            json outcomes = json::array();
            for (std::size_t i = 0; i < table.outcomes.size(); ++i) {
                const auto& o = table.outcomes[i];
                const double oscp = max_conversion_probability(
                    o.state.schmidt_vector(), SchmidtVector({0.5, 0.5}));
                csv += std::to_string(i) + "," + fmt(o.probability) + "," +
                       fmt(o.state.amp_big) + "," + fmt(o.state.amp_small) + "," +
                       bits_string(o.state.bits_a, o.state.m) + "," +
                       (o.state.sign > 0 ? "+" : "-") + "," + fmt(oscp) + "\n";
                outcomes.push_back({{"outcome", i},
                                    {"probability", o.probability},
                                    {"amp_big", o.state.amp_big},
                                    {"amp_small", o.state.amp_small},
                                    {"bits", bits_string(o.state.bits_a, o.state.m)},
                                    {"sign", o.state.sign},
                                    {"scp", oscp}});
            }
            csv += "average_scp," + fmt(table.average_scp) + "\n";
            json j{{"phi1", swap_phi1},
                   {"outcomes", outcomes},
                   {"average_scp", table.average_scp}};

            int rc = 0;
            if (swap_verify) {
                const double dev = swap_table_deviation(table, ghz_swap_oracle(pair));
                csv += "oracle_max_deviation," + fmt(dev) + "\n";
                j["oracle_max_deviation"] = dev;
                if (dev > 1e-9) rc = 1;
            }
            output.emit(csv, j,
                        make_manifest("swap",
                                      {{"phi1", swap_phi1},
                                       {"verify", swap_verify},
                                       {"format", format}},
                                      seed, out_path));
            return rc;
        }

        if (thr_cmd->parsed()) {
            const auto sizes = parse_vector(thr_sizes);
            if (sizes.size() != 2) throw CLI::ValidationError("--sizes needs L1,L2");
            const auto est = estimate_threshold(
                thr_lattice, {static_cast<int>(sizes[0]), static_cast<int>(sizes[1])},
                thr_trials, seed, thr_tol);
            std::string csv = "lattice,L1,L2,trials,p_c,half_width,converged,seed\n";
            csv += est.lattice + "," + std::to_string(est.L1) + "," +
                   std::to_string(est.L2) + "," + std::to_string(est.trials_per_point) +
                   "," + fmt(est.value) + "," + fmt(est.half_width) + "," +
                   (est.converged ? "true" : "false") + "," + std::to_string(seed) + "\n";
            json j{{"lattice", est.lattice},    {"L1", est.L1},
                   {"L2", est.L2},              {"trials", est.trials_per_point},
                   {"p_c", est.value},          {"half_width", est.half_width},
                   {"converged", est.converged}, {"seed", seed}};
            output.emit(csv, j,
                        make_manifest("threshold",
                                      {{"lattice", thr_lattice},
                                       {"sizes", thr_sizes},
                                       {"trials", thr_trials},
                                       {"tol", thr_tol},
                                       {"format", format}},
                                      seed, out_path));
            return est.converged ? 0 : 1;
        }

        if (perc_cmd->parsed()) {
            if (perc_phi1 <= 0.0 || perc_phi1 > 0.5)
                throw CLI::ValidationError("--phi1 must lie in (0, 0.5]");
            const TrialConfig cfg{perc_L, perc_trials, seed, Boundary::Wrapping};
            const PercStats st = end_to_end(PairState::from_phi1(perc_phi1), cfg);
            const std::string csv = PercStats::csv_header() + "\n" + st.csv_row() + "\n";
            output.emit(csv, st.to_json(),
                        make_manifest("percolate",
                                      {{"phi1", perc_phi1},
                                       {"L", perc_L},
                                       {"trials", perc_trials},
                                       {"format", format}},
                                      seed, out_path));
            return 0;
        }

        if (count_cmd->parsed()) {
            const Strategy strategy =
                count_strategy == "cep" ? Strategy::CEP : Strategy::QEP;
            const ResourceCount rc = count_measurements(count_l, strategy);
            std::string csv = "strategy,l,single_qubit,two_qubit,three_qubit\n";
            csv += count_strategy + "," + std::to_string(rc.l) + "," +
                   std::to_string(rc.single_qubit) + "," + std::to_string(rc.two_qubit) +
                   "," + std::to_string(rc.three_qubit) + "\n";
            json j{{"strategy", count_strategy},
                   {"l", rc.l},
                   {"single_qubit", rc.single_qubit},
                   {"two_qubit", rc.two_qubit},
                   {"three_qubit", rc.three_qubit}};
            output.emit(csv, j,
                        make_manifest("count",
                                      {{"l", count_l},
                                       {"strategy", count_strategy},
                                       {"format", format}},
                                      seed, out_path));
            return 0;
        }

        if (app.get_subcommand("verify")->parsed()) return run_verify();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
