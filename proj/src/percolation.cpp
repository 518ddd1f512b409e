#include "qperc/percolation.hpp"

#include "qperc/swapping.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace qperc {

void UnionFind::reset(int32_t n) {
    recs_.resize(n);
    for (int32_t i = 0; i < n; ++i) recs_[i] = {i, 1, 0, 0};
}

int32_t UnionFind::find(int32_t x) {
    int32_t root = x;
    int32_t px = 0, py = 0; // displacement accumulated up to the root
    while (recs_[root].parent != root) {
        px += recs_[root].dx;
        py += recs_[root].dy;
        root = recs_[root].parent;
    }
    // Second pass: hang every node on the path directly below the root.
    int32_t cx = 0, cy = 0; // displacement walked from x so far
    while (recs_[x].parent != root) {
        const int32_t nx = recs_[x].parent;
        const int32_t ox = recs_[x].dx, oy = recs_[x].dy;
        recs_[x].dx = px - cx;
        recs_[x].dy = py - cy;
        recs_[x].parent = root;
        cx += ox;
        cy += oy;
        x = nx;
    }
    return root;
}

UnionFind::UnionResult UnionFind::unite(int32_t a, int32_t b, int32_t dx,
                                        int32_t dy) {
    const int32_t ra = find(a);
    const int32_t rb = find(b);
    // After find(), recs_[x] holds the displacement from x up to its root.
    const int32_t ax = recs_[a].dx, ay = recs_[a].dy;
    const int32_t bx = recs_[b].dx, by = recs_[b].dy;

    if (ra == rb) {
        uint8_t axes = 0;
        if (ax + dx != bx) axes |= 1;
        if (ay + dy != by) axes |= 2;
        return {false, axes, ra, -1, recs_[ra].size};
    }
    // Invariant: vpos(node) = disp(node) + vpos(root). The edge asserts
    // vpos(b) = vpos(a) + d, so attaching rb under ra needs
    // disp(rb) = disp(a) + d - disp(b).
    int32_t child = rb, parent = ra;
    int32_t cdx = ax + dx - bx, cdy = ay + dy - by;
    if (recs_[ra].size < recs_[rb].size) {
        std::swap(child, parent);
        cdx = -cdx;
        cdy = -cdy;
    }
    recs_[child].parent = parent;
    recs_[child].dx = cdx;
    recs_[child].dy = cdy;
    recs_[parent].size += recs_[child].size;
    return {true, 0, parent, child, recs_[parent].size};
}

namespace {

struct TrialOutcome {
    uint8_t event = 0; // wrapping cluster (periodic) or side-to-side span (open)
    uint8_t theta = 0;
    int32_t largest = 0;
};

// Reusable per-thread scratch space.
struct Workspace {
    UnionFind uf;
    std::vector<uint8_t> occ;
    std::vector<uint8_t> mask;
};

uint64_t occupancy_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return uint64_t{1} << 32;
    return static_cast<uint64_t>(p * 4294967296.0);
}

bool mask_spans(uint8_t m) { return (m & 3) == 3 || (m & 12) == 12; }

TrialOutcome run_trial(const SiteLattice& g, uint64_t threshold, Philox& rng,
                       Workspace& ws) {
    const int32_t n = g.num_sites;
    const bool site_mode = g.mode == PercMode::Site;
    const bool open = g.boundary == Boundary::Open;
    ws.uf.reset(n);

    int32_t largest = 0;
    bool wrapped_x = false;
    bool spanned = false;

    auto absorb = [&](const UnionFind::UnionResult& res) {
        if (res.wrap_axes & 1) wrapped_x = true;
        if (res.merged) {
            largest = std::max(largest, res.cluster_size);
            if (open) {
                ws.mask[res.root] |= ws.mask[res.absorbed];
                if (mask_spans(ws.mask[res.root])) spanned = true;
            }
        }
    };

    if (site_mode) {
        // One 32-bit draw per site, in site order.
        ws.occ.resize(n);
        for (int32_t i = 0; i < n; ++i)
            ws.occ[i] = static_cast<uint64_t>(rng.next_u32()) < threshold;
        for (int32_t i = 0; i < n; ++i)
            if (ws.occ[i]) {
                largest = 1;
                break;
            }
        if (open) {
            ws.mask.assign(n, 0);
            for (int32_t i = 0; i < n; ++i)
                if (ws.occ[i]) {
                    ws.mask[i] = g.side_mask[i];
                    if (mask_spans(ws.mask[i])) spanned = true; // 1-wide lattice
                }
        }
        for (const auto& ed : g.edges) {
            if (!(ws.occ[ed.a] && ws.occ[ed.b])) continue;
            absorb(ws.uf.unite(ed.a, ed.b, ed.dx, ed.dy));
        }
    } else {
        // Bond mode: one draw per edge, in edge order, united on the spot.
        largest = n > 0 ? 1 : 0;
        if (open) {
            ws.mask.assign(n, 0);
            for (int32_t i = 0; i < n; ++i) {
                ws.mask[i] = g.side_mask[i];
                if (mask_spans(ws.mask[i])) spanned = true;
            }
        }
        ws.occ.resize(g.edges.size());
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            const bool on = static_cast<uint64_t>(rng.next_u32()) < threshold;
            ws.occ[e] = on;
            if (!on) continue;
            const auto& ed = g.edges[e];
            absorb(ws.uf.unite(ed.a, ed.b, ed.dx, ed.dy));
        }
    }

    TrialOutcome out;
    out.largest = largest;
    out.event = open ? spanned : wrapped_x;

    const bool pa_on = !site_mode || ws.occ[g.probe_a];
    const bool pb_on = !site_mode || ws.occ[g.probe_b];
    out.theta =
        pa_on && pb_on && ws.uf.find(g.probe_a) == ws.uf.find(g.probe_b);
    return out;
}

PercStats reduce_outcomes(const SiteLattice& g, double p, const TrialConfig& cfg,
                          const std::vector<TrialOutcome>& outcomes) {
    PercStats st;
    st.lattice = g.name;
    st.L = cfg.L;
    st.p = p;
    st.trials = cfg.trials;
    st.master_seed = cfg.master_seed;

    int64_t events = 0, thetas = 0;
    uint64_t largest_sum = 0;
    for (const auto& o : outcomes) {
        events += o.event;
        thetas += o.theta;
        largest_sum += static_cast<uint64_t>(o.largest);
    }
    const double t = static_cast<double>(cfg.trials);
    st.spanning_fraction = events / t;
    st.theta_hat = thetas / t;
    st.spanning_stderr =
        std::sqrt(st.spanning_fraction * (1.0 - st.spanning_fraction) / t);
    st.theta_stderr = std::sqrt(st.theta_hat * (1.0 - st.theta_hat) / t);
    st.largest_cluster_fraction =
        static_cast<double>(largest_sum) / (t * static_cast<double>(g.num_sites));
    return st;
}

std::vector<TrialOutcome> run_trials(const SiteLattice& g, double p,
                                     const TrialConfig& cfg, uint32_t salt,
                                     bool parallel) {
    if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    const uint64_t threshold = occupancy_threshold(p);
    std::vector<TrialOutcome> outcomes(cfg.trials);

    if (parallel) {
#pragma omp parallel
        {
            Workspace ws;
#pragma omp for schedule(static)
            for (int64_t t = 0; t < cfg.trials; ++t) {
                Philox rng(cfg.master_seed, salt, static_cast<uint32_t>(t));
                outcomes[t] = run_trial(g, threshold, rng, ws);
            }
        }
    } else {
        Workspace ws;
        for (int64_t t = 0; t < cfg.trials; ++t) {
            Philox rng(cfg.master_seed, salt, static_cast<uint32_t>(t));
            outcomes[t] = run_trial(g, threshold, rng, ws);
        }
    }
    return outcomes;
}

} // namespace

bool ClusterSample::connected(int32_t a, int32_t b) {
    return labels.find(a) == labels.find(b);
}

ClusterSample sample_and_cluster(const SiteLattice& g, double p, Philox& rng) {
    Workspace ws;
    const uint64_t threshold = occupancy_threshold(p);
    const TrialOutcome o = run_trial(g, threshold, rng, ws);
    ClusterSample s;
    s.occupied = std::move(ws.occ);
    s.labels = std::move(ws.uf);
    s.wrapped = g.boundary == Boundary::Wrapping && o.event;
    s.spanned = g.boundary == Boundary::Open && o.event;
    s.largest = o.largest;
    return s;
}

PercStats spanning_probability(const SiteLattice& g, double p,
                               const TrialConfig& cfg, uint32_t stream_salt) {
    return reduce_outcomes(g, p, cfg, run_trials(g, p, cfg, stream_salt, true));
}

PercStats spanning_probability_serial(const SiteLattice& g, double p,
                                      const TrialConfig& cfg, uint32_t stream_salt) {
    return reduce_outcomes(g, p, cfg, run_trials(g, p, cfg, stream_salt, false));
}

SiteLattice named_lattice(const std::string& name, int L, Boundary boundary) {
    if (name == "tri-site") return triangular_sites(L, boundary);
    if (name == "hex-bond") return honeycomb_bonds(L, boundary);
    if (name == "square-site") return square_sites(L, boundary);
    throw std::invalid_argument("unknown lattice: " + name);
}

std::pair<double, double> default_bracket(const std::string& lattice) {
    if (lattice == "tri-site") return {0.35, 0.65};
    if (lattice == "hex-bond") return {0.58, 0.72};
    if (lattice == "square-site") return {0.50, 0.70};
    throw std::invalid_argument("unknown lattice: " + lattice);
}

namespace {

// Classify a parameter point as above/below the crossing of the two sizes'
// wrapping curves. Deep in either phase the curves coincide at 0 or 1, so the
// level decides; in the scaling window their order decides.
bool above_crossing(double r_small, double r_large) {
    if (r_small > 0.95 && r_large > 0.95) return true;
    if (r_small < 0.05 && r_large < 0.05) return false;
    if (r_large != r_small) return r_large > r_small;
    return r_small > 0.5;
}

} // namespace

ThresholdEstimate estimate_crossing(const std::string& lattice,
                                    std::pair<int, int> sizes, int64_t trials,
                                    uint64_t master_seed, double tol,
                                    std::pair<double, double> bracket,
                                    const std::function<double(double)>& occupation) {
    if (sizes.first >= sizes.second)
        throw std::invalid_argument("estimate_crossing: need L1 < L2");
    if (tol <= 0.0) throw std::invalid_argument("estimate_crossing: bad tolerance");

    const SiteLattice g1 = named_lattice(lattice, sizes.first, Boundary::Wrapping);
    const SiteLattice g2 = named_lattice(lattice, sizes.second, Boundary::Wrapping);

    ThresholdEstimate est;
    est.lattice = lattice;
    est.L1 = sizes.first;
    est.L2 = sizes.second;
    est.trials_per_point = trials;
    est.master_seed = master_seed;

    uint32_t salt = 0;
    auto classify = [&](double x) {
        TrialConfig cfg1{sizes.first, trials, master_seed, Boundary::Wrapping};
        TrialConfig cfg2{sizes.second, trials, master_seed, Boundary::Wrapping};
        const double p = occupation(x);
        const double r1 = spanning_probability(g1, p, cfg1, salt++).spanning_fraction;
        const double r2 = spanning_probability(g2, p, cfg2, salt++).spanning_fraction;
        ++est.evaluations;
        return above_crossing(r1, r2);
    };

    double lo = bracket.first, hi = bracket.second;
    if (classify(lo))
        throw std::invalid_argument("estimate_crossing: lower bound is not below the crossing");
    if (!classify(hi))
        throw std::invalid_argument("estimate_crossing: upper bound is not above the crossing");

    const int max_iterations = 40;
    int it = 0;
    while ((hi - lo) / 2.0 > tol && it < max_iterations) {
        const double mid = (lo + hi) / 2.0;
        if (classify(mid))
            hi = mid;
        else
            lo = mid;
        ++it;
    }
    est.value = (lo + hi) / 2.0;
    est.half_width = (hi - lo) / 2.0;
    est.converged = est.half_width <= tol;
    return est;
}

ThresholdEstimate estimate_threshold(const std::string& lattice,
                                     std::pair<int, int> sizes, int64_t trials,
                                     uint64_t master_seed, double tol) {
    return estimate_crossing(lattice, sizes, trials, master_seed, tol,
                             default_bracket(lattice),
                             [](double x) { return x; });
}

PercStats end_to_end(const PairState& pair, const TrialConfig& cfg) {
    const double p0 = ghz_swap(pair).average_scp;
    const SiteLattice g = triangular_sites(cfg.L, cfg.boundary);
    PercStats st = spanning_probability(g, p0, cfg);
    st.lattice = "tri-site";
    return st;
}

double SweepCurve::wrap_probability(double p) const {
    if (elements == 0 || trials == 0) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0)
        return static_cast<double>(wrapped_by[elements]) / static_cast<double>(trials);
    // E over Binomial(n; N, p) of the cumulative first-wrap distribution,
    // evaluated in log space to dodge underflow at large N.
    const int64_t n_max = elements;
    const double lp = std::log(p), lq = std::log1p(-p);
    double acc = 0.0;
    double lw = n_max * lq; // log weight at n = 0
    for (int64_t n = 0; n <= n_max; ++n) {
        if (n > 0)
            lw += std::log(static_cast<double>(n_max - n + 1) / static_cast<double>(n)) +
                  lp - lq;
        acc += std::exp(lw) * static_cast<double>(wrapped_by[n]);
    }
    return acc / static_cast<double>(trials);
}

SweepCurve sweep_wrapping(const SiteLattice& g, const TrialConfig& cfg,
                          uint32_t stream_salt) {
    const bool site_mode = g.mode == PercMode::Site;
    const int64_t elements =
        site_mode ? g.num_sites : static_cast<int64_t>(g.edges.size());

    // Incremental addition needs per-site incident edges.
    std::vector<int32_t> offsets(g.num_sites + 1, 0);
    std::vector<int32_t> incident(2 * g.edges.size());
    for (const auto& e : g.edges) {
        ++offsets[e.a + 1];
        ++offsets[e.b + 1];
    }
    for (int32_t i = 0; i < g.num_sites; ++i) offsets[i + 1] += offsets[i];
    {
        std::vector<int32_t> cursor(offsets.begin(), offsets.end() - 1);
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            incident[cursor[g.edges[e].a]++] = static_cast<int32_t>(e);
            incident[cursor[g.edges[e].b]++] = static_cast<int32_t>(e);
        }
    }

    std::vector<int64_t> first_wrap(cfg.trials);

#pragma omp parallel
    {
        Workspace ws;
        std::vector<int32_t> perm(elements);
        std::vector<uint8_t> active;
#pragma omp for schedule(static)
        for (int64_t t = 0; t < cfg.trials; ++t) {
            Philox rng(cfg.master_seed, stream_salt, static_cast<uint32_t>(t));
            std::iota(perm.begin(), perm.end(), 0);
            for (int64_t i = elements - 1; i > 0; --i) {
                const auto j = static_cast<int64_t>(
                    (static_cast<uint64_t>(rng.next_u32()) * (i + 1)) >> 32);
                std::swap(perm[i], perm[j]);
            }

            ws.uf.reset(g.num_sites);
            active.assign(site_mode ? g.num_sites : g.edges.size(), 0);
            int64_t wrap_at = elements + 1;
            for (int64_t step = 0; step < elements && wrap_at > elements; ++step) {
                const int32_t el = perm[step];
                active[el] = 1;
                if (site_mode) {
                    for (int32_t k = offsets[el]; k < offsets[el + 1]; ++k) {
                        const auto& ed = g.edges[incident[k]];
                        const int32_t other = ed.a == el ? ed.b : ed.a;
                        if (!active[other]) continue;
                        if (ws.uf.unite(ed.a, ed.b, ed.dx, ed.dy).wrap_axes & 1)
                            wrap_at = step + 1;
                    }
                } else {
                    const auto& ed = g.edges[el];
                    if (ws.uf.unite(ed.a, ed.b, ed.dx, ed.dy).wrap_axes & 1)
                        wrap_at = step + 1;
                }
            }
            first_wrap[t] = wrap_at;
        }
    }

    SweepCurve curve;
    curve.elements = elements;
    curve.trials = cfg.trials;
    curve.wrapped_by.assign(elements + 2, 0);
    for (int64_t t = 0; t < cfg.trials; ++t) ++curve.wrapped_by[first_wrap[t]];
    curve.wrapped_by.resize(elements + 1);
    for (int64_t n = 1; n <= elements; ++n)
        curve.wrapped_by[n] += curve.wrapped_by[n - 1];
    return curve;
}

std::string PercStats::csv_header() {
    return "lattice,L,p,trials,spanning_fraction,stderr,theta_hat,theta_stderr,seed";
}

std::string PercStats::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.12g,%lld,%.12g,%.12g,%.12g,%.12g,%llu",
                  lattice.c_str(), L, p, static_cast<long long>(trials),
                  spanning_fraction, spanning_stderr, theta_hat, theta_stderr,
                  static_cast<unsigned long long>(master_seed));
    return buf;
}

nlohmann::json PercStats::to_json() const {
    return nlohmann::json{{"lattice", lattice},
                          {"L", L},
                          {"p", p},
                          {"trials", trials},
                          {"spanning_fraction", spanning_fraction},
                          {"stderr", spanning_stderr},
                          {"theta_hat", theta_hat},
                          {"theta_stderr", theta_stderr},
                          {"largest_cluster_fraction", largest_cluster_fraction},
                          {"seed", master_seed}};
}

} // namespace qperc
