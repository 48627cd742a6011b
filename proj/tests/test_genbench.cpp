#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lcot/bench.hpp"
#include "lcot/co_tensor.hpp"
#include "lcot/einsum.hpp"
#include "lcot/generators.hpp"
#include "lcot/matview.hpp"
#include "oracles.hpp"

using namespace lcot;

namespace {

SparseTensor grid_field(Index n, double (*f)(Index, Index)) {
    std::vector<Entry> e;
    for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) e.push_back({{k, l}, f(k, l)});
    return from_entries(Shape{n, n}, LexOrder{0, 1}, e);
}

std::vector<double> apply_fd(Index n, const std::vector<double>& x) {
    const auto d = oracle::dense(fd_matrix(n));
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < n; ++k)
            y[static_cast<std::size_t>(i)] +=
                d[static_cast<std::size_t>(i + n * k)] * x[static_cast<std::size_t>(k)];
    return y;
}

std::vector<double> dense_laplacian(Index n) {
    const auto d = oracle::dense(fd_matrix(n));
    auto at = [&](Index r, Index c) { return d[static_cast<std::size_t>(r + n * c)]; };
    std::vector<double> a(static_cast<std::size_t>(n * n * n * n), 0.0);
    auto cell = [&](Index i, Index j, Index k, Index l) -> double& {
        return a[static_cast<std::size_t>(i + n * (j + n * (k + n * l)))];
    };
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index p = 0; p < n; ++p) {
                for (Index k = 0; k < n; ++k) cell(i, j, k, j) += at(i, p) * at(p, k);
                for (Index l = 0; l < n; ++l) cell(i, j, i, l) += at(j, p) * at(p, l);
            }
    return a;
}

} // namespace

TEST(FdMatrix, Stencils) {
    const auto d = oracle::dense(fd_matrix(5));
    auto at = [&](Index r, Index c) { return d[static_cast<std::size_t>(r + 5 * c)]; };
    EXPECT_EQ(at(0, 0), -1.5);
    EXPECT_EQ(at(0, 1), 2.0);
    EXPECT_EQ(at(0, 2), -0.5);
    EXPECT_EQ(at(2, 1), -0.5);
    EXPECT_EQ(at(2, 2), 0.0);
    EXPECT_EQ(at(2, 3), 0.5);
    EXPECT_EQ(at(4, 2), 0.5);
    EXPECT_EQ(at(4, 3), -2.0);
    EXPECT_EQ(at(4, 4), 1.5);
    EXPECT_THROW(fd_matrix(2), std::invalid_argument);
}

TEST(FdMatrix, ExactOnQuadratics) {
    const Index n = 9;
    std::vector<double> one(n, 1.0), lin(n), sq(n);
    for (Index i = 0; i < n; ++i) {
        lin[static_cast<std::size_t>(i)] = static_cast<double>(i);
        sq[static_cast<std::size_t>(i)] = static_cast<double>(i * i);
    }
    const auto d0 = apply_fd(n, one);
    const auto d1 = apply_fd(n, lin);
    const auto d2 = apply_fd(n, sq);
    for (Index i = 0; i < n; ++i) {
        const auto s = static_cast<std::size_t>(i);
        EXPECT_NEAR(d0[s], 0.0, 1e-14);
        EXPECT_NEAR(d1[s], 1.0, 1e-14);
        EXPECT_NEAR(d2[s], 2.0 * static_cast<double>(i), 1e-12);
    }
}

TEST(KronDelta, Pattern) {
    const SparseTensor d = kron_delta(1);
    EXPECT_EQ(d.livs(), std::vector<Liv>{0});
    EXPECT_EQ(d.vals(), std::vector<double>{1.0});
    EXPECT_EQ(kron_delta(4).livs(), (std::vector<Liv>{0, 5, 10, 15}));
    EXPECT_THROW(kron_delta(0), std::invalid_argument);
}

TEST(Laplacian4, QuadraticFieldGivesFour) {
    for (Index n : {4, 8, 13}) {
        const SparseTensor a = laplacian4(n);
        EXPECT_TRUE(a.is_sorted());
        EXPECT_EQ(a.lex(), LexOrder::identity(4));
        const SparseTensor x = grid_field(n, [](Index k, Index l) {
            return static_cast<double>(k * k + l * l);
        });
        const auto y = oracle::dense(contract(a, x, "ijkl,kl->ij"));
        ASSERT_EQ(y.size(), static_cast<std::size_t>(n * n));
        for (double v : y) EXPECT_NEAR(v, 4.0, 1e-9);

        const SparseTensor c = grid_field(n, [](Index, Index) { return 3.0; });
        for (double v : oracle::dense(contract(a, c, "ijkl,kl->ij"))) EXPECT_NEAR(v, 0.0, 1e-12);
    }
}

TEST(Laplacian4, MatchesDenseAssembly) {
    for (Index n : {3, 8}) {
        EXPECT_TRUE(oracle::close(oracle::dense(laplacian4(n)), dense_laplacian(n))) << n;
    }
    EXPECT_THROW(laplacian4(2), std::invalid_argument);
}

TEST(Laplacian4, NonzerosGrowAsNSquared) {
    for (Index n : {8, 16, 32, 64}) {
        const double ratio = static_cast<double>(laplacian4(n).nnz()) / static_cast<double>(n * n);
        EXPECT_LE(ratio, 12.0) << n;
        EXPECT_GE(ratio, 2.0) << n;
    }
}

TEST(RTensor, DeterministicAndExact) {
    RTensorParams p;
    p.dims = {32, 32, 32};
    p.nnz = 2000;
    p.seed = 77;
    const SparseTensor a = rtensor(p);
    EXPECT_EQ(a.nnz(), p.nnz);
    EXPECT_EQ(rtensor(p), a);
    EXPECT_TRUE(a.is_sorted());
    p.seed = 78;
    EXPECT_NE(checksum(rtensor(p)), checksum(a));
}

TEST(RTensor, NonPowerOfTwoDims) {
    RTensorParams p;
    p.dims = {5, 37, 100};
    p.nnz = 500;
    const SparseTensor a = rtensor(p);
    EXPECT_EQ(a.nnz(), p.nnz);
    EXPECT_EQ(a.shape(), (Shape{5, 37, 100}));
}

TEST(RTensor, DegenerateOctantHitsOrigin) {
    RTensorParams p;
    p.dims = {16, 16, 16};
    p.nnz = 1;
    p.probs = {1, 0, 0, 0, 0, 0, 0, 0};
    p.amplitude = 0;
    const SparseTensor a = rtensor(p);
    EXPECT_EQ(a.livs(), std::vector<Liv>{0});
}

TEST(RTensor, SkewTowardsFirstOctant) {
    RTensorParams p;
    p.dims = {64, 64, 64};
    p.nnz = 4000;
    p.amplitude = 0;
    std::array<std::size_t, 8> count{};
    for (const Entry& e : to_entries(rtensor(p))) {
        const int o = 4 * (e.coords[0] >= 32) + 2 * (e.coords[1] >= 32) + (e.coords[2] >= 32);
        ++count[static_cast<std::size_t>(o)];
    }
    EXPECT_GT(count[0], count[7]);
    EXPECT_GT(count[7], count[3]);
}

TEST(RTensor, RejectsBadParameters) {
    RTensorParams p;
    p.dims = {2, 2, 2};
    p.nnz = 9;
    EXPECT_THROW(rtensor(p), std::invalid_argument);
    p.nnz = 2;
    p.amplitude = -1;
    EXPECT_THROW(rtensor(p), std::invalid_argument);
    p.amplitude = 0;
    p.probs = {0, 0, 0, 0, 0, 0, 0, 0};
    EXPECT_THROW(rtensor(p), std::invalid_argument);
}

TEST(RTensor, DefaultProbabilities) {
    const auto q = RTensorParams::default_probs();
    EXPECT_DOUBLE_EQ(q[0], 0.3);
    EXPECT_DOUBLE_EQ(q[7], 0.2);
    double total = 0;
    for (double v : q) total += v;
    EXPECT_NEAR(total, 1.0, 1e-15);
    for (int o = 1; o < 7; ++o) EXPECT_DOUBLE_EQ(q[static_cast<std::size_t>(o)], 0.5 / 6);
}

TEST(CoTensor, SortMatchesLcoOrder) {
    const SparseTensor base = random_tensor(Shape{7, 9, 4, 6}, 400, 21);
    for (const LexOrder& lex : {LexOrder{0, 1, 2, 3}, LexOrder{2, 0, 3, 1}, LexOrder{3, 2, 1, 0}}) {
        const SparseTensor want = rp_permute(base, lex);
        for (CoLayout layout : {CoLayout::Packed, CoLayout::Separate}) {
            for (SortAlgo algo : {SortAlgo::MsdRadix, SortAlgo::Introspective}) {
                CoTensor ct = to_co(shuffle_livs(base, lex), layout);
                // Scramble the entry order before sorting.
                CoTensor scrambled = ct;
                const std::size_t n = ct.nnz();
                const std::size_t order = ct.shape.order();
                for (std::size_t e = 0; e < n; ++e) {
                    const std::size_t src = (e * 7919) % n;
                    scrambled.vals[e] = ct.vals[src];
                    for (std::size_t p = 0; p < order; ++p) {
                        const std::size_t to = layout == CoLayout::Packed ? e * order + p : p * n + e;
                        const std::size_t from =
                            layout == CoLayout::Packed ? src * order + p : p * n + src;
                        scrambled.idx[to] = ct.idx[from];
                    }
                }
                co_sort(scrambled, algo);
                EXPECT_EQ(co_to_lco(scrambled), want);
            }
        }
    }
}

TEST(CoTensor, TableEntriesSortLikeLivs) {
    const SparseTensor t(Shape{4, 4, 4}, LexOrder{0, 1, 2}, {43, 1, 58, 20, 49, 18},
                         {3, 0, 5, 2, 4, 1}, false);
    CoTensor ct = to_co(t, CoLayout::Packed);
    co_sort(ct, SortAlgo::MsdRadix);
    const SparseTensor s = co_to_lco(ct);
    EXPECT_EQ(s.livs(), (std::vector<Liv>{1, 18, 20, 43, 49, 58}));
    EXPECT_EQ(s.vals(), (std::vector<double>{0, 1, 2, 3, 4, 5}));
    EXPECT_TRUE(s.is_sorted());
}

TEST(CoTensor, RoundTrip) {
    const SparseTensor t = shuffle_livs(random_tensor(Shape{5, 6, 7}, 80, 3), LexOrder{1, 2, 0});
    for (CoLayout layout : {CoLayout::Packed, CoLayout::Separate}) {
        EXPECT_EQ(co_to_lco(to_co(t, layout)), t);
    }
}

TEST(Bench, ParseSweep) {
    EXPECT_EQ(bench::parse_sweep("1:500:log10"), (std::vector<double>{1, 10, 100, 500}));
    EXPECT_EQ(bench::parse_sweep("1:100:log10"), (std::vector<double>{1, 10, 100}));
    EXPECT_THROW(bench::parse_sweep("1:500"), std::invalid_argument);
    EXPECT_THROW(bench::parse_sweep("10:1:log10"), std::invalid_argument);
}

TEST(Bench, OrderFourPermutations) {
    const auto perms = bench::order4_permutations();
    EXPECT_EQ(perms.size(), 23u);
    std::set<std::vector<int>> uniq(perms.begin(), perms.end());
    EXPECT_EQ(uniq.size(), 23u);
    EXPECT_FALSE(uniq.count({0, 1, 2, 3}));
}

TEST(Bench, PermuteChecksumsAgreeAndRepeat) {
    bench::PermuteConfig cfg;
    cfg.n = 8;
    cfg.trials = 1;
    const auto rows = bench::run_permute(cfg);
    ASSERT_EQ(rows.size(), 46u);
    std::map<std::string, std::uint64_t> sums;
    for (const auto& r : rows) {
        auto [it, fresh] = sums.try_emplace(r.param, r.checksum);
        if (!fresh) {
            EXPECT_EQ(it->second, r.checksum) << r.param;
        }
    }
    const auto again = bench::run_permute(cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(again[i].checksum, rows[i].checksum);
}

TEST(Bench, SortRowsAgree) {
    bench::SortConfig cfg;
    cfg.dim = 15;
    cfg.trials = 1;
    std::set<std::uint64_t> sums;
    for (const auto& r : bench::run_sort(cfg)) {
        if (r.algo != "lco_shuffle") sums.insert(r.checksum);
    }
    EXPECT_EQ(sums.size(), 1u);
}

TEST(Bench, MultInstanceClasses) {
    const struct {
        const char* regime;
        SparsityClass a;
        KernelChoice kernel;
    } cases[] = {{"col-sparse", SparsityClass::ColSparse, KernelChoice::DCSC},
                 {"row-sparse", SparsityClass::RowSparse, KernelChoice::CSCNA},
                 {"index-sparse", SparsityClass::IndexSparse, KernelChoice::SOP}};
    for (const auto& c : cases) {
        const auto inst = bench::make_mult_instance(c.regime, 2000, 100, 3);
        EXPECT_EQ(classify(inst.a).cls, c.a) << c.regime;
        EXPECT_EQ(inst.special, c.kernel);
        EXPECT_EQ(inst.a.cols, inst.b.rows);
    }
    EXPECT_THROW(bench::make_mult_instance("dense", 100, 1, 1), std::invalid_argument);
}
