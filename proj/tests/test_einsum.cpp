#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "lcot/einsum.hpp"
#include "lcot/generators.hpp"
#include "oracles.hpp"

using namespace lcot;

namespace {

SpecErrorKind error_kind(const char* expr) {
    try {
        parse_spec(expr);
    } catch (const spec_error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error for " << expr;
    return SpecErrorKind::Syntax;
}

// Random operands whose shared labels agree in extent.
std::pair<SparseTensor, SparseTensor> operands(const ContractionSpec& spec, std::mt19937_64& rng,
                                               Index max_dim, double fill) {
    std::map<char, Index> dim;
    for (char l : spec.a_labels + spec.b_labels) {
        if (!dim.count(l)) dim[l] = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(max_dim));
    }
    auto make = [&](const std::string& labels) {
        std::vector<Index> d;
        for (char l : labels) d.push_back(dim[l]);
        const Shape s(d);
        const auto nnz = static_cast<std::size_t>(static_cast<double>(s.size()) * fill) + 1;
        return random_tensor(s, nnz, rng());
    };
    return {make(spec.a_labels), make(spec.b_labels)};
}

SparseTensor integer_valued(const SparseTensor& t, int scale) {
    std::vector<double> v = t.vals();
    for (double& x : v) x = std::floor(x * scale) - scale / 2;
    return SparseTensor(t.shape(), t.lex(), t.livs(), v, t.is_sorted());
}

} // namespace

TEST(ParseSpec, ClassifiesLabels) {
    const ContractionSpec s = parse_spec("ijkl,kl->ij");
    EXPECT_EQ(s.contracted, "kl");
    EXPECT_EQ(s.free_a, "ij");
    EXPECT_EQ(s.free_b, "");
    EXPECT_EQ(s.output, "ij");
}

TEST(ParseSpec, OuterProduct) {
    const ContractionSpec s = parse_spec("i,j->ij");
    EXPECT_EQ(s.contracted, "");
    EXPECT_EQ(s.output, "ij");
}

TEST(ParseSpec, DefaultOutputIsFreeAThenFreeB) {
    EXPECT_EQ(parse_spec("ijk,ljk").output, "il");
    EXPECT_EQ(parse_spec("bax,ycx").output, "bayc");
    EXPECT_EQ(parse_spec(" ij , jk -> ki "), parse_spec("ij,jk->ki"));
}

TEST(ParseSpec, Errors) {
    EXPECT_EQ(error_kind("iij,jk"), SpecErrorKind::RepeatedLabel);
    EXPECT_EQ(error_kind("ij,jk->ijk"), SpecErrorKind::Entrywise);
    EXPECT_EQ(error_kind("ij,jk->iz"), SpecErrorKind::UnknownOutput);
    EXPECT_EQ(error_kind("ij,jk->i"), SpecErrorKind::MissingOutput);
    EXPECT_EQ(error_kind("ij,jk->ikk"), SpecErrorKind::RepeatedLabel);
    EXPECT_EQ(error_kind("ij"), SpecErrorKind::Syntax);
    EXPECT_EQ(error_kind("ij,jk,kl"), SpecErrorKind::Syntax);
    EXPECT_EQ(error_kind("iJ,jk"), SpecErrorKind::Syntax);
    EXPECT_EQ(error_kind(",jk"), SpecErrorKind::Syntax);
}

TEST(Contract, MatchesDenseOracleOnRandomSpecs) {
    std::mt19937_64 rng(31);
    const char* specs[] = {"ij,jk",       "ij,jk->ki",  "ijk,ljk",     "ijk,lmk",   "ijkl,kl->ij",
                           "ab,cd->abcd", "abcd,be",    "abc,cab->",   "i,j->ji",   "ijk,kji->",
                           "abc,bcd->da", "abcd,dcef->feba", "ab,b",   "a,ab"};
    for (const char* expr : specs) {
        const ContractionSpec spec = parse_spec(expr);
        // Scalar results are rejected.
        if (spec.output.empty()) {
            auto [a, b] = operands(spec, rng, 4, 0.5);
            EXPECT_THROW(contract(a, b, spec), std::invalid_argument) << expr;
            continue;
        }
        for (int trial = 0; trial < 4; ++trial) {
            auto [a, b] = operands(spec, rng, 9, 0.3);
            MultiplyStats st;
            const SparseTensor c = contract(a, b, spec, &st);
            EXPECT_TRUE(c.is_sorted());
            EXPECT_EQ(c.lex(), LexOrder::identity(spec.output.size()));
            EXPECT_TRUE(oracle::close(oracle::dense(c), oracle::contract(a, b, spec))) << expr;
        }
    }
}

TEST(Contract, LaplacianFirstTermChain) {
    const Index n = 8;
    const SparseTensor d = fd_matrix(n);
    const SparseTensor step = contract(d, kron_delta(n), "ab,cd->abcd");
    const SparseTensor c = contract(step, d, "abcd,be->acde");
    std::vector<double> want(static_cast<std::size_t>(n * n * n * n), 0.0);
    const auto dd = oracle::dense(d);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            for (Index k = 0; k < n; ++k)
                for (Index ip = 0; ip < n; ++ip)
                    want[static_cast<std::size_t>(i + n * (j + n * (j + n * k)))] +=
                        dd[static_cast<std::size_t>(i + n * ip)] * dd[static_cast<std::size_t>(ip + n * k)];
    EXPECT_TRUE(oracle::close(oracle::dense(c), want));
}

TEST(Contract, RTensorColumnSparseShape) {
    RTensorParams p;
    p.dims = {16, 16, 16};
    p.nnz = 300;
    p.seed = 4;
    const SparseTensor a = rtensor(p);
    p.seed = 5;
    const SparseTensor b = rtensor(p);
    const ContractionSpec spec = parse_spec("ijk,ljk");
    EXPECT_TRUE(oracle::close(oracle::dense(contract(a, b, spec)), oracle::contract(a, b, spec)));
}

TEST(Contract, DeltaGivesRelabelledCopy) {
    const SparseTensor v = random_tensor(Shape{6, 3}, 10, 2);
    EXPECT_EQ(contract(kron_delta(6), v, "ab,bc->ac"), v);
    const SparseTensor t = contract(v, kron_delta(3), "ab,bc->ca");
    EXPECT_EQ(t, rp_permute(relabel_positions(v, {1, 0}), LexOrder{0, 1}));
}

TEST(Contract, DimensionMismatchThrows) {
    const SparseTensor a = random_tensor(Shape{3, 4}, 4, 1);
    const SparseTensor b = random_tensor(Shape{5, 4}, 4, 2);
    EXPECT_THROW(contract(a, b, "ij,jk"), std::invalid_argument);
    EXPECT_THROW(contract(a, b, "ijk,kl"), spec_error);
}

TEST(Contract, Bilinear) {
    std::mt19937_64 rng(8);
    const ContractionSpec spec = parse_spec("ijk,kl->lij");
    auto [a, b] = operands(spec, rng, 7, 0.3);
    std::vector<double> scaled = a.vals();
    for (double& x : scaled) x *= 8.0;
    const SparseTensor a8(a.shape(), a.lex(), a.livs(), scaled, true);
    const SparseTensor c = contract(a, b, spec);
    const SparseTensor c8 = contract(a8, b, spec);
    ASSERT_EQ(c8.livs(), c.livs());
    for (std::size_t e = 0; e < c.nnz(); ++e) EXPECT_EQ(c8.vals()[e], 8.0 * c.vals()[e]);
}

TEST(Add, NegationLeavesExplicitZeros) {
    const SparseTensor t = random_tensor(Shape{5, 4, 3}, 20, 3);
    const SparseTensor z = add(t, t, AdditionMatch::identity(3), -1);
    EXPECT_EQ(z.livs(), t.livs());
    for (double v : z.vals()) EXPECT_EQ(v, 0.0);
}

TEST(Add, DisjointSupportsConcatenate) {
    const SparseTensor a = from_entries(Shape{3, 3}, LexOrder{0, 1}, {{{0, 0}, 1.0}, {{2, 1}, 2.0}});
    const SparseTensor b = from_entries(Shape{3, 3}, LexOrder{0, 1}, {{{1, 0}, 3.0}});
    const SparseTensor c = add(a, b, AdditionMatch::identity(2));
    EXPECT_EQ(c.nnz(), a.nnz() + b.nnz());
    EXPECT_EQ(c.livs(), (std::vector<Liv>{0, 1, 5}));
}

TEST(Add, MatchedPermutationAgainstDense) {
    std::mt19937_64 rng(12);
    const SparseTensor a = random_tensor(Shape{4, 5, 6, 3}, 120, rng());
    const SparseTensor b = random_tensor(Shape{5, 4, 3, 6}, 120, rng());
    const AdditionMatch m{{1, 0, 3, 2}};
    const SparseTensor c = add(a, b, m, -1);
    const auto da = oracle::dense(a);
    const auto db = oracle::dense(b);
    std::vector<double> want = da;
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 5; ++j)
            for (Index k = 0; k < 6; ++k)
                for (Index l = 0; l < 3; ++l)
                    want[static_cast<std::size_t>(i + 4 * (j + 5 * (k + 6 * l)))] -=
                        db[static_cast<std::size_t>(j + 5 * (i + 4 * (l + 3 * k)))];
    EXPECT_EQ(oracle::dense(c), want);
    EXPECT_EQ(c.lex(), a.lex());
    EXPECT_TRUE(c.is_sorted());
}

TEST(Add, CommutativeAndAssociativeOnIntegers) {
    const Shape s{6, 7, 5};
    const SparseTensor a = integer_valued(random_tensor(s, 60, 1), 16);
    const SparseTensor b = integer_valued(random_tensor(s, 60, 2), 16);
    const SparseTensor c = integer_valued(random_tensor(s, 60, 3), 16);
    const AdditionMatch id = AdditionMatch::identity(3);
    EXPECT_EQ(add(a, b, id), add(b, a, id));
    EXPECT_EQ(add(add(a, b, id), c, id), add(a, add(b, c, id), id));
    // Commutes up to the output lex order.
    const SparseTensor b_other = rp_permute(b, LexOrder{2, 0, 1});
    EXPECT_EQ(canonical(add(b_other, a, id)), add(a, b, id));
}

TEST(Add, ShapeMismatchThrows) {
    const SparseTensor a = random_tensor(Shape{3, 4}, 3, 1);
    const SparseTensor b = random_tensor(Shape{3, 4}, 3, 2);
    EXPECT_THROW(add(a, b, AdditionMatch{{1, 0}}), std::invalid_argument);
    EXPECT_THROW(add(a, b, AdditionMatch::identity(2), 2), std::invalid_argument);
    EXPECT_THROW(add(a, random_tensor(Shape{3, 4, 1}, 3, 2), AdditionMatch::identity(3)),
                 std::invalid_argument);
}

TEST(PartialPermutationCount, SmallValues) {
    EXPECT_EQ(partial_permutation_count(0), 1u);
    EXPECT_EQ(partial_permutation_count(1), 2u);
    EXPECT_EQ(partial_permutation_count(2), 7u);
    EXPECT_EQ(partial_permutation_count(3), 34u);
}

TEST(PartialPermutationCount, MatchesEnumeration) {
    for (int n = 0; n <= 7; ++n) {
        EXPECT_EQ(partial_permutation_count(n), oracle::enumerate_matchings(n)) << n;
    }
}

TEST(PartialPermutationCount, OverflowAndDomain) {
    EXPECT_THROW(partial_permutation_count(-1), std::invalid_argument);
    EXPECT_THROW(partial_permutation_count(40), std::overflow_error);
    EXPECT_NO_THROW(partial_permutation_count(15));
}
