// Compares the serial reference engine against the OpenMP one on identical
// configurations and checks that they produce identical statistics.

#include "qperc/percolation.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace qperc;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void bench_point(const std::string& lattice, int L, double p, int64_t trials) {
    const SiteLattice g = named_lattice(lattice, L, Boundary::Wrapping);
    const TrialConfig cfg{L, trials, 2718281828ull, Boundary::Wrapping};

    auto t0 = clock_type::now();
    const PercStats serial = spanning_probability_serial(g, p, cfg);
    const double t_serial = seconds_since(t0);

    t0 = clock_type::now();
    const PercStats parallel = spanning_probability(g, p, cfg);
    const double t_parallel = seconds_since(t0);

    const bool same = serial.csv_row() == parallel.csv_row();
    std::printf("%-12s L=%-4d p=%.4f trials=%-6lld serial=%7.3fs omp=%7.3fs "
                "speedup=%.2fx identical=%s\n",
                lattice.c_str(), L, p, static_cast<long long>(trials), t_serial,
                t_parallel, t_serial / t_parallel, same ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    int64_t trials = 20000;
    if (argc > 1) trials = std::atoll(argv[1]);
    std::printf("threads available: %d\n", omp_get_max_threads());
    bench_point("tri-site", 64, 0.5, trials);
    bench_point("tri-site", 128, 0.5, trials);
    bench_point("hex-bond", 64, 0.6527, trials);
    bench_point("hex-bond", 128, 0.6527, trials);
    bench_point("square-site", 64, 0.5927, trials);
    return 0;
}
