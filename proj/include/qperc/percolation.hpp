#pragma once

#include "qperc/lattice.hpp"
#include "qperc/locc.hpp"
#include "qperc/rng.hpp"

#include "json.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qperc {

/// Disjoint sets over site indices with union by size and path compression.
/// Each record keeps the displacement to its parent on the unwrapped lattice;
/// a union whose accumulated displacements disagree closes a cycle around the
/// torus, which is exactly the wrapping-cluster signal. The records live in
/// one array so a find touches one cache line per hop.
class UnionFind {
public:
    explicit UnionFind(int32_t n = 0) { reset(n); }

    void reset(int32_t n);
    int32_t size() const { return static_cast<int32_t>(recs_.size()); }

    /// Root of x; compresses the path and folds displacements into it.
    int32_t find(int32_t x);
    /// Displacement of x relative to its root (valid right after find(x)).
    std::pair<int32_t, int32_t> displacement(int32_t x) const {
        return {recs_[x].dx, recs_[x].dy};
    }

    struct UnionResult {
        bool merged;      // false when both sides already shared a root
        uint8_t wrap_axes; // bit 0: x winding, bit 1: y winding
        int32_t root;
        int32_t absorbed; // root absorbed by the merge, -1 if none
        int32_t cluster_size;
    };
    /// Process an edge asserting pos(b) = pos(a) + (dx, dy).
    UnionResult unite(int32_t a, int32_t b, int32_t dx, int32_t dy);

    int32_t cluster_size(int32_t root) const { return recs_[root].size; }

private:
    struct Rec {
        int32_t parent;
        int32_t size;
        int32_t dx;
        int32_t dy;
    };
    std::vector<Rec> recs_;
};

/// Monte Carlo run description. Trial substreams are derived from
/// (master_seed, stream salt, trial index), so results are a pure function of
/// this config no matter how trials are scheduled.
struct TrialConfig {
    int L = 64;
    int64_t trials = 10000;
    uint64_t master_seed = kDefaultSeed;
    Boundary boundary = Boundary::Wrapping;

    static constexpr uint64_t kDefaultSeed = 1000003;
};

/// Aggregated statistics of one (lattice, p) Monte Carlo point. Under a
/// wrapping boundary, spanning_fraction is the fraction of trials with a
/// cluster winding around the first torus axis (the criterion whose critical
/// value sits near 1/2); under an open boundary it is side-to-side spanning.
struct PercStats {
    std::string lattice;
    int L = 0;
    double p = 0.0;
    int64_t trials = 0;
    double spanning_fraction = 0.0;
    double spanning_stderr = 0.0;
    double theta_hat = 0.0;         // probe-pair connectivity
    double theta_stderr = 0.0;
    double largest_cluster_fraction = 0.0;
    uint64_t master_seed = 0;

    std::string csv_row() const;
    static std::string csv_header();
    nlohmann::json to_json() const;
};

/// Occupy-and-label a single sample: sites (or bonds) are occupied i.i.d.
/// with probability p, in fixed index order, one 32-bit draw each.
struct ClusterSample {
    std::vector<uint8_t> occupied; // per site (site mode) or per edge (bond mode)
    UnionFind labels;
    bool wrapped = false;
    bool spanned = false;
    int32_t largest = 0;

    bool connected(int32_t a, int32_t b);
};
ClusterSample sample_and_cluster(const SiteLattice& g, double p, Philox& rng);

/// OpenMP-parallel estimate over cfg.trials independent samples.
PercStats spanning_probability(const SiteLattice& g, double p, const TrialConfig& cfg,
                               uint32_t stream_salt = 0);
/// Serial reference path; must agree bit for bit with the parallel one.
PercStats spanning_probability_serial(const SiteLattice& g, double p,
                                      const TrialConfig& cfg,
                                      uint32_t stream_salt = 0);

struct ThresholdEstimate {
    std::string lattice;
    int L1 = 0, L2 = 0;
    double value = 0.0;      // parameter estimate (p_c, or phi1 for crossings)
    double half_width = 0.0;
    int64_t trials_per_point = 0;
    uint64_t master_seed = 0;
    bool converged = false;
    int evaluations = 0;
};

/// Bisection for the crossing of the two sizes' wrapping probabilities over a
/// search parameter x, with occupation probability p = occupation(x).
/// Thresholds use the identity map; the end-to-end experiment maps phi1 to
/// the average SCP. Throws std::invalid_argument when the initial interval
/// does not bracket the crossing.
ThresholdEstimate estimate_crossing(const std::string& lattice,
                                    std::pair<int, int> sizes, int64_t trials,
                                    uint64_t master_seed, double tol,
                                    std::pair<double, double> bracket,
                                    const std::function<double(double)>& occupation);

/// p_c of a named lattice ("tri-site", "hex-bond", "square-site") from the
/// wrapping crossing of two sizes, with the lattice's default bracket.
ThresholdEstimate estimate_threshold(const std::string& lattice,
                                     std::pair<int, int> sizes, int64_t trials,
                                     uint64_t master_seed, double tol);

SiteLattice named_lattice(const std::string& name, int L, Boundary boundary);
std::pair<double, double> default_bracket(const std::string& lattice);

/// Full QEP experiment: p0 = average SCP of the GHZ swap at this pair, then
/// triangular-site percolation at p0.
PercStats end_to_end(const PairState& pair, const TrialConfig& cfg);

/// Newman-Ziff incremental sweep: occupation elements are added one at a time
/// along a random permutation; the first-wrap occupation numbers give the
/// whole wrapping-probability curve after a binomial convolution.
struct SweepCurve {
    int64_t elements = 0;
    int64_t trials = 0;
    std::vector<int64_t> wrapped_by; // cumulative trial count first wrapped at <= n
    double wrap_probability(double p) const;
};
SweepCurve sweep_wrapping(const SiteLattice& g, const TrialConfig& cfg,
                          uint32_t stream_salt = 0);

} // namespace qperc
