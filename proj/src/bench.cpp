#include "lcot/bench.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcot/co_tensor.hpp"
#include "lcot/einsum.hpp"
#include "lcot/generators.hpp"

namespace lcot::bench {

Timing summarize(std::vector<double> samples) {
    Timing t;
    t.trials = static_cast<int>(samples.size());
    if (samples.empty()) {
        return t;
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    t.min_s = samples.front();
    t.max_s = samples.back();
    t.median_s = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    return t;
}

void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const BenchRow& row) {
    std::ostringstream line;
    line.precision(9);
    line << row.scenario << ',' << row.param << ',' << row.algo << ',' << row.timing.trials << ','
         << row.timing.median_s << ',' << row.timing.min_s << ',' << row.timing.max_s << ','
         << std::hex << row.checksum;
    os << line.str() << '\n';
}

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
        h ^= (word >> (8 * b)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t view_checksum(const MatrixView& v) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv(h, static_cast<std::uint64_t>(v.rows));
    h = fnv(h, static_cast<std::uint64_t>(v.cols));
    for (std::size_t e = 0; e < v.nnz(); ++e) {
        h = fnv(h, static_cast<std::uint64_t>(v.livs[e]));
        h = fnv(h, std::bit_cast<std::uint64_t>(v.vals[e]));
    }
    return h;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += std::to_string(x);
    return s;
}

std::string number(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

} // namespace

std::vector<BenchRow> run_sort(const SortConfig& cfg) {
    if (cfg.order < 1 || cfg.dim < 2 || cfg.trials < 1) {
        throw std::invalid_argument("sort: need order >= 1, dim >= 2 and trials >= 1");
    }
    const std::size_t nnz = cfg.nnz != 0 ? cfg.nnz : static_cast<std::size_t>(5 * cfg.dim * cfg.dim);
    const Shape shape(std::vector<Index>(static_cast<std::size_t>(cfg.order), cfg.dim));
    const SparseTensor sorted = random_tensor(shape, nnz, cfg.seed);

    // Scramble the storage order.
    std::vector<std::size_t> perm(sorted.nnz());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(cfg.seed ^ 0x5eed);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Liv> livs(sorted.nnz());
    std::vector<double> vals(sorted.nnz());
    for (std::size_t e = 0; e < perm.size(); ++e) {
        livs[e] = sorted.livs()[perm[e]];
        vals[e] = sorted.vals()[perm[e]];
    }
    const LexOrder from = sorted.lex();
    const SparseTensor scrambled = TensorBuilder::adopt(shape, from, livs, vals, false);
    std::vector<int> rev(static_cast<std::size_t>(cfg.order));
    for (int q = 0; q < cfg.order; ++q) rev[q] = cfg.order - 1 - q;
    const LexOrder to(rev);

    const std::string param = "order" + std::to_string(cfg.order) + "-dim" +
                              std::to_string(cfg.dim) + "-nnz" + std::to_string(sorted.nnz());
    std::vector<BenchRow> rows;

    auto lco = [&](const char* algo, bool radix, bool sort) {
        std::vector<Liv> l;
        std::vector<double> v;
        const Timing t = time_trials(cfg.trials, [&] {
            l = livs;
            v = vals;
            return seconds([&] {
                shuffle_in_place(l, shape, from, to);
                if (!sort) return;
                if (radix) {
                    msd_radix_sort(std::span<Liv>(l), std::span<double>(v));
                } else {
                    introspective_sort(std::span<Liv>(l), std::span<double>(v));
                }
            });
        });
        const SparseTensor out = TensorBuilder::adopt(shape, to, l, v, sort);
        rows.push_back({"sort", param, algo, t, checksum(out)});
    };
    lco("lco_msd", true, true);
    lco("lco_intro", false, true);
    lco("lco_shuffle", true, false);

    auto co = [&](const char* algo, CoLayout layout, SortAlgo sa) {
        CoTensor base = to_co(scrambled, layout);
        base.lex = to;
        CoTensor work;
        const Timing t = time_trials(cfg.trials, [&] {
            work = base;
            return seconds([&] { co_sort(work, sa); });
        });
        rows.push_back({"sort", param, algo, t, checksum(co_to_lco(work))});
    };
    co("co_packed_msd", CoLayout::Packed, SortAlgo::MsdRadix);
    co("co_packed_intro", CoLayout::Packed, SortAlgo::Introspective);
    co("co_separate_msd", CoLayout::Separate, SortAlgo::MsdRadix);
    co("co_separate_intro", CoLayout::Separate, SortAlgo::Introspective);
    return rows;
}

std::vector<std::vector<int>> order4_permutations() {
    std::vector<std::vector<int>> out;
    std::vector<int> p{0, 1, 2, 3};
    while (std::next_permutation(p.begin(), p.end())) {
        out.push_back(p);
    }
    return out;
}

std::vector<BenchRow> run_permute(const PermuteConfig& cfg) {
    if (cfg.n < 3 || cfg.trials < 1) {
        throw std::invalid_argument("permute: need n >= 3 and trials >= 1");
    }
    SparseTensor t;
    if (cfg.pattern == "laplacian") {
        t = laplacian4(cfg.n);
    } else if (cfg.pattern == "fixed") {
        if (!(cfg.fill > 0 && cfg.fill <= 1)) {
            throw std::invalid_argument("permute: fill must be in (0, 1]");
        }
        const Shape shape{cfg.n, cfg.n, cfg.n, cfg.n};
        const auto nnz = static_cast<std::size_t>(
            std::max(1.0, std::round(cfg.fill * static_cast<double>(shape.size()))));
        t = random_tensor(shape, nnz, cfg.seed);
    } else {
        throw std::invalid_argument("permute: unknown pattern '" + cfg.pattern + "'");
    }
    const auto perms = cfg.perms.empty() ? order4_permutations() : cfg.perms;
    const std::string base = cfg.pattern + "-n" + std::to_string(cfg.n) + "-nnz" +
                             std::to_string(t.nnz()) + "-lex";
    std::vector<BenchRow> rows;
    for (const auto& p : perms) {
        const LexOrder lex(p);
        SparseTensor out;
        const Timing rp = time_trials(cfg.trials, [&] {
            out = SparseTensor();
            return seconds([&] { out = rp_permute(t, lex); });
        });
        rows.push_back({"permute", base + join(p), "rp", rp, checksum(out)});
        const Timing plain = time_trials(cfg.trials, [&] {
            out = SparseTensor();
            return seconds([&] { out = radix_permute(t, lex); });
        });
        rows.push_back({"permute", base + join(p), "radix", plain, checksum(out)});
    }
    return rows;
}

MultInstance make_mult_instance(const std::string& regime, std::size_t nnz, double sparsity,
                                std::uint64_t seed) {
    if (!(sparsity >= 1)) {
        throw std::invalid_argument("mult: sparsity must be >= 1");
    }
    const double cells = sparsity * static_cast<double>(nnz);
    const Index n = std::max<Index>(2, std::llround(std::sqrt(cells)));
    MultInstance inst;
    inst.dim = n;
    RTensorParams pa;
    pa.nnz = nnz;
    pa.seed = seed;
    RTensorParams pb = pa;
    pb.seed = seed + 1;
    if (regime == "col-sparse" || regime == "row-sparse") {
        pa.dims = pb.dims = {n, n, n};
    } else if (regime == "index-sparse") {
        pa.dims = pb.dims = {n * n, n, n};
    } else {
        throw std::invalid_argument("mult: unknown regime '" + regime + "'");
    }
    const SparseTensor a = rtensor(pa);
    const SparseTensor b = rtensor(pb);
    if (regime == "row-sparse") {
        // a_{ijk} b_{lmk}
        inst.a = flatten(a, {0, 1}, {2}, Major::ColMajor);
        inst.b = flatten(b, {2}, {0, 1}, Major::ColMajor);
        inst.b_rows = flatten(b, {2}, {0, 1}, Major::RowMajor);
        inst.special = KernelChoice::CSCNA;
    } else {
        // a_{ijk} b_{ljk}
        inst.a = flatten(a, {0}, {1, 2}, Major::ColMajor);
        inst.b = flatten(b, {1, 2}, {0}, Major::ColMajor);
        inst.b_rows = flatten(b, {1, 2}, {0}, Major::RowMajor);
        inst.special = regime == "col-sparse" ? KernelChoice::DCSC : KernelChoice::SOP;
    }
    return inst;
}

std::vector<BenchRow> run_mult(const MultConfig& cfg) {
    if (cfg.trials < 1 || cfg.nnz < 1) {
        throw std::invalid_argument("mult: need nnz >= 1 and trials >= 1");
    }
    std::vector<BenchRow> rows;
    for (double s : cfg.sparsities) {
        const MultInstance inst = make_mult_instance(cfg.regime, cfg.nnz, s, cfg.seed);
        const std::string param = cfg.regime + "-nnz" + std::to_string(cfg.nnz) + "-s" +
                                  number(s) + "-N" + std::to_string(inst.dim);
        auto run = [&](KernelChoice k) {
            const MatrixView& b = k == KernelChoice::SOP ? inst.b_rows : inst.b;
            MatrixView out;
            const Timing t = time_trials(cfg.trials, [&] {
                out = MatrixView();
                return seconds([&] { out = multiply_views(k, inst.a, b); });
            });
            rows.push_back({"mult", param, std::string(kernel_name(k)), t, view_checksum(out)});
        };
        if (inst.a.rows + inst.a.cols <= cfg.csc_limit) {
            run(KernelChoice::CSC);
        }
        run(inst.special);
    }
    return rows;
}

std::vector<BenchRow> run_laplace(const LaplaceConfig& cfg) {
    if (cfg.trials < 1) {
        throw std::invalid_argument("laplace: need trials >= 1");
    }
    const ContractionSpec spec = parse_spec("abcd,be");
    std::vector<BenchRow> rows;
    for (Index n : cfg.ns) {
        const SparseTensor d = fd_matrix(n);
        const SparseTensor b = contract(d, kron_delta(n), "ab,cd->abcd");
        const std::string param = "N" + std::to_string(n);
        SparseTensor out;
        const Timing poly = time_trials(cfg.trials, [&] {
            out = SparseTensor();
            return seconds([&] { out = poly_multiply(b, d, spec).first; });
        });
        rows.push_back({"laplace", param, "poly", poly, checksum(canonical(out))});
        const Timing excise = time_trials(cfg.trials, [&] {
            out = SparseTensor();
            return seconds([&] { out = excision_baseline_multiply(b, d, spec).first; });
        });
        rows.push_back({"laplace", param, "excision", excise, checksum(canonical(out))});
    }
    return rows;
}

std::vector<double> parse_sweep(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.substr(c2 + 1) != "log10") {
        throw std::invalid_argument("sweep must look like lo:hi:log10, got '" + text + "'");
    }
    double lo;
    double hi;
    try {
        lo = std::stod(text.substr(0, c1));
        hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep bounds are not numbers in '" + text + "'");
    }
    if (!(lo > 0) || !(hi >= lo)) {
        throw std::invalid_argument("sweep needs 0 < lo <= hi in '" + text + "'");
    }
    std::vector<double> out;
    for (double v = lo; v < hi * (1 - 1e-9); v *= 10) {
        out.push_back(v);
    }
    out.push_back(hi);
    return out;
}

} // namespace lcot::bench
