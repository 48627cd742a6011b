#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lcot/radix_sort.hpp"
#include "lcot/sparse_tensor.hpp"

namespace lcot {

void msd_radix_sort(std::span<Liv> livs, std::span<double> vals);
void introspective_sort(std::span<Liv> livs, std::span<double> vals);

enum class IndexRole { Resting, Rearrangement };

/// Role of every index position when permuting from `from` to `to`.
/// roles[p] is Rearrangement iff p gains significance over some index that
/// was more significant than p under `from`.
struct IndexClass {
    std::vector<IndexRole> roles;

    IndexRole operator[](std::size_t p) const { return roles[p]; }
    friend bool operator==(const IndexClass&, const IndexClass&) = default;
};

IndexClass classify_indices(const LexOrder& from, const LexOrder& to);

/// One step of an RP permutation, applied to every region of the step above.
struct PlanLevel {
    enum class Kind {
        Split, ///< resting index: cut the region where `lower` digits roll over
        Sort,  ///< rearrangement run: stable sort on (liv mod upper) div lower
    };
    Kind kind;
    Index upper; ///< stride just above the level (region modulus)
    Index lower; ///< stride of the least significant index in the level
};

struct SortPlan {
    std::vector<PlanLevel> levels;
    int plain_passes = 0;  ///< radix passes for full LIVs
    int shaved_passes = 0; ///< worst radix passes among shaved region keys
};

inline constexpr std::size_t kShaveCutoff = 4096;

SortPlan make_sort_plan(const Shape& shape, const LexOrder& from, const LexOrder& to);

/// Adaptive switch between shaved region sorts and a plain radix sort.
bool rp_should_shave(const SortPlan& plan, std::size_t nnz);

struct PermuteOptions {
    /// Overrides the adaptive switch: always use region sorts when true.
    bool force_shave = false;
};

/// Rearranges a sorted tensor into `new_lex`, exploiting the sorted runs
/// that survive the LIV shuffle. Throws precondition_error if `t` is unsorted.
SparseTensor rp_permute(const SparseTensor& t, const LexOrder& new_lex,
                        PermuteOptions opts = {});
SparseTensor rp_permute(SparseTensor&& t, const LexOrder& new_lex, PermuteOptions opts = {});

/// Baseline: LIV shuffle followed by a full in-place MSD radix sort.
SparseTensor radix_permute(const SparseTensor& t, const LexOrder& new_lex);

/// Sorts and merges duplicate LIVs by summation.
SparseTensor sort_tensor(SparseTensor t);

/// Same tensor sorted under the identity lex order.
SparseTensor canonical(const SparseTensor& t);

} // namespace lcot
