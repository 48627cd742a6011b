#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcot/multiply.hpp"

namespace lcot::bench {

inline constexpr const char* kCsvHeader =
    "scenario,param,algo,trial_count,median_s,min_s,max_s,checksum";

struct Timing {
    double median_s = 0;
    double min_s = 0;
    double max_s = 0;
    int trials = 0;
};

/// Wall time of one call on the monotonic clock.
template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

Timing summarize(std::vector<double> samples);

/// Runs `trial` once as a discarded warm-up, then `trials` more times.
/// Each call returns the seconds it wants counted, so setup can be excluded.
template <class F>
Timing time_trials(int trials, F&& trial) {
    trial();
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        samples.push_back(trial());
    }
    return summarize(std::move(samples));
}

struct BenchRow {
    std::string scenario;
    std::string param;
    std::string algo;
    Timing timing;
    std::uint64_t checksum = 0;
};

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const BenchRow& row);

/// Sorting a randomly ordered tensor into a new lex order: LCO (shuffle
/// included) against both CO layouts, radix and introspective.
struct SortConfig {
    int order = 4;
    Index dim = 127;
    std::size_t nnz = 0; ///< 0 picks 5 * dim^2
    int trials = 5;
    std::uint64_t seed = 1;
};
std::vector<BenchRow> run_sort(const SortConfig& cfg);

/// All 23 non-identity permutations of an order-4 tensor, RP against a
/// plain radix sort of the shuffled LIVs.
struct PermuteConfig {
    std::string pattern = "laplacian"; ///< "laplacian" or "fixed"
    Index n = 64;
    double fill = 0.01; ///< fraction of cells for the fixed pattern
    int trials = 5;
    std::uint64_t seed = 1;
    std::vector<std::vector<int>> perms; ///< empty means all 23
};
std::vector<BenchRow> run_permute(const PermuteConfig& cfg);

/// Every non-identity permutation of {0, 1, 2, 3}.
std::vector<std::vector<int>> order4_permutations();

/// Column-sparse, row-sparse and index-sparse R-TENSOR products, the
/// specialised kernel head-to-head with CSC. Times include building the
/// compressed operand.
struct MultConfig {
    std::string regime = "col-sparse"; ///< col-sparse, row-sparse, index-sparse
    std::size_t nnz = 100000;
    std::vector<double> sparsities{1, 10, 100};
    int trials = 3;
    std::uint64_t seed = 1;
    /// CSC is skipped when its dense arrays would exceed this many entries.
    Index csc_limit = Index{1} << 28;
};
std::vector<BenchRow> run_mult(const MultConfig& cfg);

/// Operands of one multiplication point, flattened for the given regime.
struct MultInstance {
    MatrixView a;       ///< column-major
    MatrixView b;       ///< column-major
    MatrixView b_rows;  ///< row-major copy of b (for SOP)
    KernelChoice special = KernelChoice::CSC;
    Index dim = 0;      ///< N of the generating R-TENSORs
};
MultInstance make_mult_instance(const std::string& regime, std::size_t nnz, double sparsity,
                                std::uint64_t seed);

/// The second binary product of the Laplacian's first term, poly-algorithm
/// against the excision baseline. Operand rearrangements are timed.
struct LaplaceConfig {
    std::vector<Index> ns{63, 127, 255, 511};
    int trials = 3;
};
std::vector<BenchRow> run_laplace(const LaplaceConfig& cfg);

/// Parses "lo:hi:log10" into lo, 10 lo, 100 lo, ... below hi, then hi.
std::vector<double> parse_sweep(const std::string& text);

} // namespace lcot::bench
