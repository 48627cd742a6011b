#include "lcot/multiply.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lcot/fast_divisor.hpp"

namespace lcot {

std::string_view kernel_name(KernelChoice k) {
    switch (k) {
    case KernelChoice::CSC: return "CSC";
    case KernelChoice::CSR: return "CSR";
    case KernelChoice::DCSC: return "DCSC";
    case KernelChoice::DCSR: return "DCSR";
    case KernelChoice::CSCNA: return "CSCNA";
    case KernelChoice::CSRNA: return "CSRNA";
    case KernelChoice::SOP: return "SOP";
    }
    return "?";
}

std::pair<Major, Major> kernel_layouts(KernelChoice k) {
    switch (k) {
    case KernelChoice::CSC:
    case KernelChoice::DCSC:
    case KernelChoice::CSCNA:
        return {Major::ColMajor, Major::ColMajor};
    case KernelChoice::CSR:
    case KernelChoice::DCSR:
    case KernelChoice::CSRNA:
        return {Major::RowMajor, Major::RowMajor};
    case KernelChoice::SOP:
        return {Major::ColMajor, Major::RowMajor};
    }
    return {Major::ColMajor, Major::ColMajor};
}

Major kernel_output_major(KernelChoice k) {
    return k == KernelChoice::SOP ? Major::ColMajor : kernel_layouts(k).first;
}

KernelChoice dispatch(SparsityClass a, SparsityClass b, Index m, Index n,
                      std::optional<Major> prefer) {
    using S = SparsityClass;
    auto tie = [&](KernelChoice col, KernelChoice row) {
        if (prefer) {
            return *prefer == Major::ColMajor ? col : row;
        }
        return n > m ? col : row;
    };
    switch (a) {
    case S::Sparse:
        return b == S::Sparse ? tie(KernelChoice::CSC, KernelChoice::CSR) : KernelChoice::CSC;
    case S::ColSparse:
        switch (b) {
        case S::Sparse: return KernelChoice::CSR;
        case S::RowSparse: return tie(KernelChoice::DCSC, KernelChoice::DCSR);
        default: return KernelChoice::DCSC;
        }
    case S::RowSparse:
        switch (b) {
        case S::Sparse: return KernelChoice::CSR;
        case S::RowSparse: return KernelChoice::DCSR;
        case S::ColSparse: return tie(KernelChoice::CSCNA, KernelChoice::CSRNA);
        case S::IndexSparse: return KernelChoice::CSCNA;
        }
        break;
    case S::IndexSparse:
        switch (b) {
        case S::Sparse: return KernelChoice::CSR;
        case S::RowSparse: return KernelChoice::DCSR;
        case S::ColSparse: return KernelChoice::CSRNA;
        case S::IndexSparse: return KernelChoice::SOP;
        }
        break;
    }
    return KernelChoice::CSC;
}

KernelChoice dispatch(const HyperSparsityProfile& a, const HyperSparsityProfile& b,
                      std::optional<Major> prefer) {
    if (a.n != b.m) {
        throw std::invalid_argument("dispatch: inner dimensions differ (" + std::to_string(a.n) +
                                    " vs " + std::to_string(b.m) + ")");
    }
    return dispatch(a.cls, b.cls, a.m, b.n, prefer);
}

namespace {

struct Product {
    std::uint64_t key;
    double val;
};

using ProductSorter = StableRadixSorter<Product, TrackingAllocator<Product>>;

void add_flops(MultiplyStats* stats, Index id, std::int64_t flops, std::int64_t nnz) {
    if (stats == nullptr || flops == 0) {
        return;
    }
    if (__builtin_add_overflow(stats->flops, flops, &stats->flops)) {
        throw std::overflow_error("multiply: flop count exceeds 64 bits");
    }
    stats->segments.push_back({id, flops, nnz});
}

// Sums runs of equal keys of a sorted product list into the output. Products
// of one key arrive in ascending inner index, as in the accumulator kernels.
std::int64_t reduce_products(const scratch_vector<Product>& prods, Liv base,
                             std::vector<Liv>& livs, std::vector<double>& vals) {
    std::int64_t emitted = 0;
    for (std::size_t i = 0; i < prods.size();) {
        const std::uint64_t key = prods[i].key;
        double sum = prods[i].val;
        for (++i; i < prods.size() && prods[i].key == key; ++i) {
            sum += prods[i].val;
        }
        livs.push_back(base + static_cast<Liv>(key));
        vals.push_back(sum);
        ++emitted;
    }
    return emitted;
}

// Column-by-column product C(:, c) = sum_j S(:, j) * L(j, c), where S is
// compressed over the inner dimension and L is an LCO matrix whose major
// dimension is the output major. With S = A (CSC/DCSC) this is the column
// kernel; with S = B (CSR/DCSR) and L = A row-major it is the row kernel on
// the transposed problem.
template <bool Doubly, bool Accumulate>
void major_product(const CompressedMatrix& s, Index out_minor, Index inner, const MatrixView& l,
                   MatrixView& out, MultiplyStats* stats) {
    const std::size_t nnz = l.nnz();
    if (nnz == 0 || s.nnz() == 0) {
        return;
    }
    const FastDivisor div(inner);

    scratch_vector<double> acc;
    scratch_vector<Index> stamp;
    scratch_vector<Index> touched;
    scratch_vector<Product> prods;
    ProductSorter sorter;
    if constexpr (Accumulate) {
        acc.resize(static_cast<std::size_t>(out_minor));
        stamp.assign(static_cast<std::size_t>(out_minor), -1);
    }

    std::size_t e = 0;
    while (e < nnz) {
        const Index c = div.quotient(l.livs[e]);
        const Liv base = c * inner;
        const Liv end = base + inner;
        std::int64_t flops = 0;
        std::size_t lo = 0;
        for (; e < nnz && l.livs[e] < end; ++e) {
            const Index j = l.livs[e] - base;
            std::size_t seg;
            if constexpr (Doubly) {
                auto it = std::lower_bound(s.ids.begin() + static_cast<std::ptrdiff_t>(lo),
                                           s.ids.end(), j);
                lo = static_cast<std::size_t>(it - s.ids.begin());
                if (it == s.ids.end() || *it != j) {
                    continue;
                }
                seg = lo++;
            } else {
                seg = static_cast<std::size_t>(j);
            }
            const double b = l.vals[e];
            const Index p0 = s.ptr[seg];
            const Index p1 = s.ptr[seg + 1];
            flops += p1 - p0;
            for (Index p = p0; p < p1; ++p) {
                const Index r = s.minor[p];
                const double prod = s.vals[p] * b;
                if constexpr (Accumulate) {
                    if (stamp[r] != c) {
                        stamp[r] = c;
                        acc[r] = prod;
                        touched.push_back(r);
                    } else {
                        acc[r] += prod;
                    }
                } else {
                    prods.push_back({static_cast<std::uint64_t>(r), prod});
                }
            }
        }
        if (flops == 0) {
            continue;
        }
        const Liv out_base = c * out_minor;
        std::int64_t emitted;
        if constexpr (Accumulate) {
            msd_radix_sort(std::span<Index>(touched.data(), touched.size()));
            for (Index r : touched) {
                out.livs.push_back(out_base + r);
                out.vals.push_back(acc[r]);
            }
            emitted = static_cast<std::int64_t>(touched.size());
            touched.clear();
        } else {
            sorter.sort(std::span<Product>(prods.data(), prods.size()),
                        static_cast<std::uint64_t>(out_minor - 1));
            emitted = reduce_products(prods, out_base, out.livs, out.vals);
            prods.clear();
        }
        add_flops(stats, c, flops, emitted);
    }
}

MatrixView result_view(Index rows, Index cols, Major major) {
    checked_mul(rows, cols);
    MatrixView out;
    out.rows = rows;
    out.cols = cols;
    out.major = major;
    return out;
}

void check_inner(Index a_cols, Index b_rows) {
    if (a_cols != b_rows) {
        throw std::invalid_argument("multiply: inner dimensions differ (" +
                                    std::to_string(a_cols) + " vs " + std::to_string(b_rows) +
                                    ")");
    }
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw precondition_error(what);
    }
}

void begin_stats(MultiplyStats* stats, KernelChoice k) {
    if (stats != nullptr) {
        stats->kernel = k;
        stats->flops = 0;
        stats->segments.clear();
    }
}

template <bool Doubly, bool Accumulate>
MatrixView column_kernel(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats,
                         KernelChoice k, MatrixFormat fmt) {
    require(a.format == fmt, "column kernel: left operand has the wrong compressed format");
    require(b.major == Major::ColMajor, "column kernel: right operand must be column-major");
    check_inner(a.cols, b.rows);
    begin_stats(stats, k);
    MatrixView out = result_view(a.rows, b.cols, Major::ColMajor);
    major_product<Doubly, Accumulate>(a, a.rows, a.cols, b, out, stats);
    return out;
}

template <bool Doubly, bool Accumulate>
MatrixView row_kernel(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats,
                      KernelChoice k, MatrixFormat fmt) {
    require(b.format == fmt, "row kernel: right operand has the wrong compressed format");
    require(a.major == Major::RowMajor, "row kernel: left operand must be row-major");
    check_inner(a.cols, b.rows);
    begin_stats(stats, k);
    MatrixView out = result_view(a.rows, b.cols, Major::RowMajor);
    major_product<Doubly, Accumulate>(b, b.cols, b.rows, a, out, stats);
    return out;
}

} // namespace

MatrixView csc_mult(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats) {
    return column_kernel<false, true>(a, b, stats, KernelChoice::CSC, MatrixFormat::CSC);
}

MatrixView dcsc_mult(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats) {
    return column_kernel<true, true>(a, b, stats, KernelChoice::DCSC, MatrixFormat::DCSC);
}

MatrixView cscna_mult(const CompressedMatrix& a, const MatrixView& b, MultiplyStats* stats) {
    return column_kernel<false, false>(a, b, stats, KernelChoice::CSCNA, MatrixFormat::CSC);
}

MatrixView csr_mult(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats) {
    return row_kernel<false, true>(a, b, stats, KernelChoice::CSR, MatrixFormat::CSR);
}

MatrixView dcsr_mult(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats) {
    return row_kernel<true, true>(a, b, stats, KernelChoice::DCSR, MatrixFormat::DCSR);
}

MatrixView csrna_mult(const MatrixView& a, const CompressedMatrix& b, MultiplyStats* stats) {
    return row_kernel<false, false>(a, b, stats, KernelChoice::CSRNA, MatrixFormat::CSR);
}

MatrixView sop_mult(const MatrixView& a, const MatrixView& b, MultiplyStats* stats) {
    require(a.major == Major::ColMajor, "SOP: left operand must be column-major");
    require(b.major == Major::RowMajor, "SOP: right operand must be row-major");
    check_inner(a.cols, b.rows);
    begin_stats(stats, KernelChoice::SOP);
    MatrixView out = result_view(a.rows, b.cols, Major::ColMajor);
    const Index m = a.rows;
    const Index n = b.cols;
    if (a.nnz() == 0 || b.nnz() == 0) {
        return out;
    }

    // Merge the present columns of A with the present rows of B.
    struct Match {
        std::size_t a0, a1, b0, b1;
        Index j;
    };
    scratch_vector<Match> matches;
    const FastDivisor div_m(m);
    const FastDivisor div_n(n);
    std::size_t ia = 0;
    std::size_t ib = 0;
    std::int64_t f = 0;
    while (ia < a.nnz() && ib < b.nnz()) {
        const Index ja = div_m.quotient(a.livs[ia]);
        const Index jb = div_n.quotient(b.livs[ib]);
        if (ja < jb) {
            const Liv next = (ja + 1) * m;
            while (ia < a.nnz() && a.livs[ia] < next) ++ia;
            continue;
        }
        if (jb < ja) {
            const Liv next = (jb + 1) * n;
            while (ib < b.nnz() && b.livs[ib] < next) ++ib;
            continue;
        }
        Match mt{ia, ia, ib, ib, ja};
        const Liv next_a = (ja + 1) * m;
        const Liv next_b = (jb + 1) * n;
        while (mt.a1 < a.nnz() && a.livs[mt.a1] < next_a) ++mt.a1;
        while (mt.b1 < b.nnz() && b.livs[mt.b1] < next_b) ++mt.b1;
        std::int64_t prod_count;
        if (__builtin_mul_overflow(static_cast<std::int64_t>(mt.a1 - mt.a0),
                                   static_cast<std::int64_t>(mt.b1 - mt.b0), &prod_count) ||
            __builtin_add_overflow(f, prod_count, &f)) {
            throw std::overflow_error("SOP: flop count exceeds 64 bits");
        }
        matches.push_back(mt);
        ia = mt.a1;
        ib = mt.b1;
    }
    if (f == 0) {
        return out;
    }

    scratch_vector<Product> prods;
    prods.reserve(static_cast<std::size_t>(f));
    for (const Match& mt : matches) {
        const Liv a_base = mt.j * m;
        const Liv b_base = mt.j * n;
        for (std::size_t p = mt.a0; p < mt.a1; ++p) {
            const Index r = a.livs[p] - a_base;
            const double av = a.vals[p];
            for (std::size_t q = mt.b0; q < mt.b1; ++q) {
                const Index c = b.livs[q] - b_base;
                prods.push_back({static_cast<std::uint64_t>(r + m * c), av * b.vals[q]});
            }
        }
    }
    ProductSorter sorter;
    sorter.sort(std::span<Product>(prods.data(), prods.size()),
                static_cast<std::uint64_t>(m * n - 1));

    out.livs.reserve(prods.size());
    out.vals.reserve(prods.size());
    std::size_t i = 0;
    while (i < prods.size()) {
        const Index c = div_m.quotient(static_cast<Liv>(prods[i].key));
        const std::uint64_t end = static_cast<std::uint64_t>((c + 1) * m);
        const std::size_t start = i;
        std::int64_t emitted = 0;
        while (i < prods.size() && prods[i].key < end) {
            const std::uint64_t key = prods[i].key;
            double sum = prods[i].val;
            for (++i; i < prods.size() && prods[i].key == key; ++i) {
                sum += prods[i].val;
            }
            out.livs.push_back(static_cast<Liv>(key));
            out.vals.push_back(sum);
            ++emitted;
        }
        add_flops(stats, c, static_cast<std::int64_t>(i - start), emitted);
    }
    return out;
}

MatrixView multiply_views(KernelChoice k, const MatrixView& a, const MatrixView& b,
                          MultiplyStats* stats) {
    switch (k) {
    case KernelChoice::CSC: return csc_mult(to_csc(a), b, stats);
    case KernelChoice::DCSC: return dcsc_mult(to_dcsc(a), b, stats);
    case KernelChoice::CSCNA: return cscna_mult(to_csc(a), b, stats);
    case KernelChoice::CSR: return csr_mult(a, to_csr(b), stats);
    case KernelChoice::DCSR: return dcsr_mult(a, to_dcsr(b), stats);
    case KernelChoice::CSRNA: return csrna_mult(a, to_csr(b), stats);
    case KernelChoice::SOP: return sop_mult(a, b, stats);
    }
    throw std::invalid_argument("multiply_views: unknown kernel");
}

namespace {

int position_of(const std::string& labels, char l) {
    return static_cast<int>(labels.find(l));
}

std::vector<int> positions(const std::string& labels, const std::string& which) {
    std::vector<int> out;
    out.reserve(which.size());
    for (char l : which) {
        out.push_back(position_of(labels, l));
    }
    return out;
}

// Sorts positions by ascending significance under `lex`.
void by_significance(std::vector<int>& pos, const LexOrder& lex) {
    const std::vector<int> rank = lex.rank();
    std::sort(pos.begin(), pos.end(), [&](int x, int y) { return rank[x] < rank[y]; });
}

struct Problem {
    std::vector<int> a_rows, a_cols, b_rows, b_cols;
    std::string row_labels, col_labels; ///< free labels in matrix order
    Shape out_shape;
    std::vector<int> c_rows, c_cols;    ///< result positions of the matrix rows/cols
};

void check_spec(const SparseTensor& a, const SparseTensor& b, const ContractionSpec& spec) {
    if (spec.a_labels.size() != a.order() || spec.b_labels.size() != b.order()) {
        throw spec_error(SpecErrorKind::Mismatch,
                         "contraction: label count does not match operand order");
    }
    for (char l : spec.contracted) {
        const int pa = position_of(spec.a_labels, l);
        const int pb = position_of(spec.b_labels, l);
        if (pa < 0 || pb < 0) {
            throw spec_error(SpecErrorKind::Mismatch,
                             std::string("contraction: label '") + l + "' not in both operands");
        }
        if (a.shape()[pa] != b.shape()[pb]) {
            throw std::invalid_argument(std::string("contraction: dimension of '") + l +
                                        "' differs between operands");
        }
    }
    if (spec.free_a.size() + spec.contracted.size() != a.order() ||
        spec.free_b.size() + spec.contracted.size() != b.order()) {
        throw spec_error(SpecErrorKind::Mismatch, "contraction: labels do not cover operands");
    }
    if (spec.output.empty()) {
        throw std::invalid_argument("contraction: result must keep at least one index");
    }
    std::string expect = spec.free_a + spec.free_b;
    std::string got = spec.output;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    if (expect != got) {
        throw spec_error(SpecErrorKind::MissingOutput,
                         "contraction: output labels must be exactly the free labels");
    }
}

Problem make_problem(const SparseTensor& a, const SparseTensor& b, const ContractionSpec& spec,
                     const std::vector<int>& shared_a_order) {
    Problem pb;
    pb.a_rows = positions(spec.a_labels, spec.free_a);
    by_significance(pb.a_rows, a.lex());
    pb.b_cols = positions(spec.b_labels, spec.free_b);
    by_significance(pb.b_cols, b.lex());
    pb.a_cols = shared_a_order;
    for (int p : shared_a_order) {
        pb.b_rows.push_back(position_of(spec.b_labels, spec.a_labels[p]));
    }
    for (int p : pb.a_rows) pb.row_labels += spec.a_labels[p];
    for (int p : pb.b_cols) pb.col_labels += spec.b_labels[p];

    std::vector<Index> dims;
    for (char l : spec.output) {
        const int pa = position_of(spec.a_labels, l);
        dims.push_back(pa >= 0 ? a.shape()[pa] : b.shape()[position_of(spec.b_labels, l)]);
    }
    pb.out_shape = Shape(std::move(dims));
    pb.c_rows = positions(spec.output, pb.row_labels);
    pb.c_cols = positions(spec.output, pb.col_labels);
    return pb;
}

Index extent_of(const Shape& s, const std::vector<int>& pos) {
    Index e = 1;
    for (int p : pos) e = checked_mul(e, s[p]);
    return e;
}

SparseTensor finish(MatrixView c, const Problem& pb) {
    c.row_positions = pb.c_rows;
    c.col_positions = pb.c_cols;
    return unflatten(std::move(c), pb.out_shape);
}

} // namespace

std::pair<SparseTensor, MultiplyStats> poly_multiply(const SparseTensor& a, const SparseTensor& b,
                                                     const ContractionSpec& spec,
                                                     MultiplyOptions opts) {
    check_spec(a, b, spec);

    // Candidate orders for the contracted labels: A's significance or B's.
    std::vector<int> shared_a = positions(spec.a_labels, spec.contracted);
    by_significance(shared_a, a.lex());
    std::vector<int> shared_b = positions(spec.b_labels, spec.contracted);
    by_significance(shared_b, b.lex());
    std::vector<int> shared_b_in_a;
    for (int p : shared_b) shared_b_in_a.push_back(position_of(spec.a_labels, spec.b_labels[p]));

    const Index m = extent_of(a.shape(), positions(spec.a_labels, spec.free_a));
    const Index k = extent_of(a.shape(), positions(spec.a_labels, spec.contracted));
    const Index n = extent_of(b.shape(), positions(spec.b_labels, spec.free_b));
    const SparsityClass ca = classify_counts(m, k, a.nnz(), opts.threshold);
    const SparsityClass cb = classify_counts(k, n, b.nnz(), opts.threshold);

    struct Candidate {
        Problem pb;
        KernelChoice kernel;
        bool a_ready, b_ready;
        int cost;
    };
    auto evaluate = [&](const std::vector<int>& order) {
        Candidate cd{make_problem(a, b, spec, order), KernelChoice::CSC, false, false, 0};
        const Problem& pb = cd.pb;
        auto ready_a = [&](Major mj) { return is_zero_copy(a, pb.a_rows, pb.a_cols, mj); };
        auto ready_b = [&](Major mj) { return is_zero_copy(b, pb.b_rows, pb.b_cols, mj); };
        const int cost_col = !ready_a(Major::ColMajor) + !ready_b(Major::ColMajor);
        const int cost_row = !ready_a(Major::RowMajor) + !ready_b(Major::RowMajor);
        std::optional<Major> prefer;
        if (cost_col != cost_row) {
            prefer = cost_col < cost_row ? Major::ColMajor : Major::RowMajor;
        }
        cd.kernel = opts.force_kernel ? *opts.force_kernel : dispatch(ca, cb, m, n, prefer);
        const auto [la, lb] = kernel_layouts(cd.kernel);
        cd.a_ready = ready_a(la);
        cd.b_ready = ready_b(lb);
        cd.cost = !cd.a_ready + !cd.b_ready;
        return cd;
    };
    Candidate best = evaluate(shared_a);
    if (best.cost > 0 && shared_b_in_a != shared_a) {
        Candidate alt = evaluate(shared_b_in_a);
        if (alt.cost < best.cost) {
            best = std::move(alt);
        }
    }

    MultiplyStats stats;
    const auto [la, lb] = kernel_layouts(best.kernel);
    const MatrixView va = flatten(a, best.pb.a_rows, best.pb.a_cols, la);
    const MatrixView vb = flatten(b, best.pb.b_rows, best.pb.b_cols, lb);
    MatrixView c = multiply_views(best.kernel, va, vb, &stats);
    stats.rearrangements = best.cost;
    SparseTensor out = finish(std::move(c), best.pb);
    return {std::move(out), std::move(stats)};
}

std::pair<SparseTensor, MultiplyStats>
excision_baseline_multiply(const SparseTensor& a, const SparseTensor& b,
                           const ContractionSpec& spec) {
    check_spec(a, b, spec);
    std::vector<int> shared = positions(spec.a_labels, spec.contracted);
    by_significance(shared, a.lex());
    const Problem pb = make_problem(a, b, spec, shared);

    // Row-major A exposes its present rows in order; its present columns
    // come from sorting and deduplicating the column ids.
    MatrixView ra = flatten(a, pb.a_rows, pb.a_cols, Major::RowMajor);
    const Index m = ra.rows;
    const Index k = ra.cols;
    const FastDivisor div_k(k);
    std::vector<Index> row_ids;
    std::vector<Index> col_ids;
    std::vector<Index> row_of(ra.nnz());
    col_ids.reserve(ra.nnz());
    for (std::size_t e = 0; e < ra.nnz(); ++e) {
        const auto dm = div_k.divmod(ra.livs[e]);
        if (row_ids.empty() || row_ids.back() != dm.quotient) {
            row_ids.push_back(dm.quotient);
        }
        row_of[e] = static_cast<Index>(row_ids.size() - 1);
        col_ids.push_back(dm.remainder);
    }
    std::vector<Index> cols_sorted = col_ids;
    msd_radix_sort(std::span<Index>(cols_sorted));
    cols_sorted.erase(std::unique(cols_sorted.begin(), cols_sorted.end()), cols_sorted.end());
    const Index nzr = std::max<Index>(1, static_cast<Index>(row_ids.size()));
    const Index nzc = std::max<Index>(1, static_cast<Index>(cols_sorted.size()));
    auto compact_col = [&](Index j) {
        return static_cast<Index>(std::lower_bound(cols_sorted.begin(), cols_sorted.end(), j) -
                                  cols_sorted.begin());
    };

    // Compact A, column-major.
    MatrixView ca;
    ca.rows = nzr;
    ca.cols = nzc;
    ca.major = Major::ColMajor;
    ca.livs.resize(ra.nnz());
    ca.vals = std::move(ra.vals);
    for (std::size_t e = 0; e < ca.livs.size(); ++e) {
        ca.livs[e] = row_of[e] + nzr * compact_col(col_ids[e]);
    }
    msd_radix_sort(std::span<Liv>(ca.livs), std::span<double>(ca.vals));

    // Compact B's rows through the same column map, dropping unmatched rows.
    MatrixView cb = flatten(b, pb.b_rows, pb.b_cols, Major::ColMajor);
    const Index n = cb.cols;
    std::size_t w = 0;
    for (std::size_t e = 0; e < cb.nnz(); ++e) {
        const auto dm = div_k.divmod(cb.livs[e]);
        auto it = std::lower_bound(cols_sorted.begin(), cols_sorted.end(), dm.remainder);
        if (it == cols_sorted.end() || *it != dm.remainder) {
            continue;
        }
        cb.livs[w] = static_cast<Index>(it - cols_sorted.begin()) + nzc * dm.quotient;
        cb.vals[w] = cb.vals[e];
        ++w;
    }
    cb.livs.resize(w);
    cb.vals.resize(w);
    cb.rows = nzc;

    MultiplyStats stats;
    MatrixView c = csc_mult(to_csc(ca), cb, &stats);
    const FastDivisor div_r(nzr);
    for (Liv& liv : c.livs) {
        const auto dm = div_r.divmod(liv);
        liv = row_ids[dm.remainder] + m * dm.quotient;
    }
    c.rows = m;
    c.cols = n;
    stats.rearrangements = 2;
    SparseTensor out = finish(std::move(c), pb);
    return {std::move(out), std::move(stats)};
}

} // namespace lcot
