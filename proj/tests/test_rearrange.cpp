#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lcot/generators.hpp"
#include "lcot/rearrange.hpp"
#include "oracles.hpp"

using namespace lcot;

namespace {

using R = IndexRole;

std::vector<LexOrder> all_lex(std::size_t n) {
    std::vector<int> seq(n);
    for (std::size_t p = 0; p < n; ++p) seq[p] = static_cast<int>(p);
    std::vector<LexOrder> out;
    do {
        out.emplace_back(seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

template <class SortFn>
void check_sort_contract(SortFn sort) {
    std::vector<Liv> livs{43, 1, 58, 20, 18, 49};
    std::vector<double> vals{4, 1, 6, 3, 2, 5};
    sort(std::span<Liv>(livs), std::span<double>(vals));
    EXPECT_EQ(livs, (std::vector<Liv>{1, 18, 20, 43, 49, 58}));
    EXPECT_EQ(vals, (std::vector<double>{1, 2, 3, 4, 5, 6}));

    sort(std::span<Liv>(livs), std::span<double>(vals));
    EXPECT_EQ(livs, (std::vector<Liv>{1, 18, 20, 43, 49, 58}));
    EXPECT_EQ(vals, (std::vector<double>{1, 2, 3, 4, 5, 6}));

    std::mt19937_64 rng(1);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{31}, std::size_t{33},
                          std::size_t{100000}}) {
        std::vector<Liv> keys(n);
        for (auto& k : keys) k = static_cast<Liv>(rng() >> 1);
        std::vector<double> sat(n);
        for (std::size_t i = 0; i < n; ++i) sat[i] = static_cast<double>(keys[i] % 1000003);
        std::vector<std::pair<Liv, double>> want;
        for (std::size_t i = 0; i < n; ++i) want.emplace_back(keys[i], sat[i]);
        std::sort(want.begin(), want.end());
        sort(std::span<Liv>(keys), std::span<double>(sat));
        for (std::size_t i = 0; i < n; ++i) {
            ASSERT_EQ(keys[i], want[i].first);
            ASSERT_EQ(sat[i], want[i].second);
        }
    }
}

} // namespace

TEST(MsdRadixSort, Contract) {
    check_sort_contract([](std::span<Liv> l, std::span<double> v) { msd_radix_sort(l, v); });
}

TEST(IntrospectiveSort, Contract) {
    check_sort_contract([](std::span<Liv> l, std::span<double> v) { introspective_sort(l, v); });
}

TEST(Sorts, AgreeOnDistinctKeysWithSkewedDigits) {
    std::mt19937_64 rng(2);
    std::vector<Liv> a;
    for (int i = 0; i < 50000; ++i) a.push_back(static_cast<Liv>((rng() % 5000) << 20 | i));
    std::vector<double> va(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) va[i] = static_cast<double>(i);
    auto b = a;
    auto vb = va;
    msd_radix_sort(std::span<Liv>(a), std::span<double>(va));
    introspective_sort(std::span<Liv>(b), std::span<double>(vb));
    EXPECT_EQ(a, b);
    EXPECT_EQ(va, vb);
}

TEST(ClassifyIndices, SwapOfTwoLowestIndices) {
    EXPECT_EQ(classify_indices(LexOrder{0, 1, 2}, LexOrder{1, 0, 2}).roles,
              (std::vector<R>{R::Rearrangement, R::Resting, R::Resting}));
}

TEST(ClassifyIndices, IdenticalOrdersAllResting) {
    EXPECT_EQ(classify_indices(LexOrder{2, 0, 1}, LexOrder{2, 0, 1}).roles,
              (std::vector<R>(3, R::Resting)));
}

TEST(ClassifyIndices, FullReversalFollowsCrossingRule) {
    // Every index except the formerly most significant one gains significance
    // over an index that used to outrank it; index 3 becomes the final index.
    EXPECT_EQ(classify_indices(LexOrder{0, 1, 2, 3}, LexOrder{3, 2, 1, 0}).roles,
              (std::vector<R>{R::Rearrangement, R::Rearrangement, R::Rearrangement, R::Resting}));
}

TEST(ClassifyIndices, FinalIndexAlwaysResting) {
    for (const LexOrder& from : all_lex(4)) {
        for (const LexOrder& to : all_lex(4)) {
            const IndexClass c = classify_indices(from, to);
            EXPECT_EQ(c[to[0]], R::Resting);
            // An index whose set of more significant indices is unchanged rests.
            const auto ro = from.rank();
            const auto rn = to.rank();
            for (int p = 0; p < 4; ++p) {
                bool same = true;
                for (int y = 0; y < 4; ++y) {
                    same = same && ((ro[y] > ro[p]) == (rn[y] > rn[p]));
                }
                if (same) {
                    EXPECT_EQ(c[p], R::Resting);
                }
            }
        }
    }
    EXPECT_THROW(classify_indices(LexOrder{0, 1}, LexOrder{0, 1, 2}), std::invalid_argument);
}

TEST(SortPlan, TenByThreeByTwoExample) {
    const SortPlan plan = make_sort_plan(Shape{10, 3, 2}, LexOrder{0, 1, 2}, LexOrder{1, 0, 2});
    ASSERT_EQ(plan.levels.size(), 2u);
    EXPECT_EQ(plan.levels[0].kind, PlanLevel::Kind::Split);
    EXPECT_EQ(plan.levels[0].upper, 60);
    EXPECT_EQ(plan.levels[0].lower, 30); // regions of constant k: LIV div 30
    EXPECT_EQ(plan.levels[1].kind, PlanLevel::Kind::Sort);
    EXPECT_EQ(plan.levels[1].upper, 30); // key = (LIV mod 30) div 3
    EXPECT_EQ(plan.levels[1].lower, 3);
    EXPECT_EQ(plan.shaved_passes, 1);
}

TEST(SortPlan, TenByThreeByTwoPermutation) {
    std::vector<Entry> entries;
    for (Index i = 0; i < 10; ++i)
        for (Index j = 0; j < 3; ++j)
            for (Index k = 0; k < 2; ++k)
                entries.push_back({{i, j, k}, static_cast<double>(i + 10 * j + 30 * k)});
    const SparseTensor t = from_entries(Shape{10, 3, 2}, LexOrder{0, 1, 2}, entries);
    const LexOrder to{1, 0, 2};
    const SparseTensor got = rp_permute(t, to, {.force_shave = true});
    EXPECT_EQ(got, oracle::stable_permute(t, to));
    for (std::size_t e = 0; e < got.nnz(); ++e) EXPECT_EQ(got.livs()[e], static_cast<Liv>(e));
}

TEST(ShaveSwitch, Rule) {
    SortPlan p;
    p.plain_passes = 8;
    p.shaved_passes = 2;
    EXPECT_TRUE(rp_should_shave(p, 1000000));
    EXPECT_FALSE(rp_should_shave(p, kShaveCutoff - 1));
    p.shaved_passes = 8;
    EXPECT_FALSE(rp_should_shave(p, 1000000));
}

TEST(RpPermute, MatchesStableOracleEveryPermutation) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 12; ++trial) {
        const Shape shape{2 + static_cast<Index>(rng() % 15), 2 + static_cast<Index>(rng() % 15),
                          2 + static_cast<Index>(rng() % 15), 2 + static_cast<Index>(rng() % 15)};
        const auto nnz = static_cast<std::size_t>(shape.size() / (2 + rng() % 20));
        const SparseTensor t = random_tensor(shape, nnz, rng());
        for (const LexOrder& to : all_lex(4)) {
            const SparseTensor want = oracle::stable_permute(t, to);
            EXPECT_EQ(rp_permute(t, to, {.force_shave = true}), want);
            EXPECT_EQ(rp_permute(t, to, {.force_shave = false}), want);
            EXPECT_EQ(radix_permute(t, to), want);
        }
    }
}

TEST(RpPermute, LargeTensorsTakeShavedPath) {
    const SparseTensor t = laplacian4(40);
    ASSERT_GE(t.nnz(), kShaveCutoff);
    for (const LexOrder& to : all_lex(4)) {
        EXPECT_EQ(rp_permute(t, to), oracle::stable_permute(t, to));
    }
}

TEST(RpPermute, StartingFromNonIdentityOrders) {
    const SparseTensor base = random_tensor(Shape{9, 4, 7, 5}, 600, 17);
    for (const LexOrder& from : {LexOrder{3, 1, 0, 2}, LexOrder{2, 3, 1, 0}}) {
        const SparseTensor t = oracle::stable_permute(base, from);
        for (const LexOrder& to : all_lex(4)) {
            EXPECT_EQ(rp_permute(t, to, {.force_shave = true}), oracle::stable_permute(t, to));
        }
    }
}

TEST(RpPermute, InverseRestoresOriginal) {
    const SparseTensor t = random_tensor(Shape{12, 5, 8, 3}, 900, 23);
    for (const LexOrder& to : all_lex(4)) {
        const SparseTensor there = rp_permute(t, to, {.force_shave = true});
        EXPECT_EQ(rp_permute(there, t.lex(), {.force_shave = true}), t);
    }
}

TEST(RpPermute, SameOrderIsNoOp) {
    const SparseTensor t = random_tensor(Shape{4, 4, 4}, 20, 1);
    EXPECT_EQ(rp_permute(t, t.lex()), t);
    SparseTensor moved = t;
    const double* data = moved.vals().data();
    const SparseTensor out = rp_permute(std::move(moved), t.lex());
    EXPECT_EQ(out.vals().data(), data);
}

TEST(RpPermute, RejectsUnsortedInput) {
    const SparseTensor t(Shape{4, 4}, LexOrder{0, 1}, {5, 3}, {1, 2}, false);
    EXPECT_THROW(rp_permute(t, LexOrder{1, 0}), precondition_error);
    EXPECT_THROW(rp_permute(random_tensor(Shape{4, 4}, 3, 1), LexOrder{1, 0, 2}),
                 std::invalid_argument);
}

TEST(SortTensor, MergesDuplicates) {
    const SparseTensor t(Shape{10}, LexOrder{0}, {7, 2, 7, 2, 5}, {1, 2, 3, 4, 5}, false);
    const SparseTensor s = sort_tensor(t);
    EXPECT_EQ(s.livs(), (std::vector<Liv>{2, 5, 7}));
    EXPECT_EQ(s.vals(), (std::vector<double>{6, 5, 4}));
}
