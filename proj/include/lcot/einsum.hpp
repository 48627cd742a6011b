#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lcot/contraction.hpp"
#include "lcot/multiply.hpp"

namespace lcot {

/// Parses "ab,bc->ac". Labels are single letters a-z and whitespace is
/// ignored. Without an output clause the result keeps A's free labels
/// followed by B's, each in operand order.
ContractionSpec parse_spec(std::string_view expr);

/// Binary inner/outer product. The result's index positions follow
/// `spec.output` and it is sorted under the identity lex order.
SparseTensor contract(const SparseTensor& a, const SparseTensor& b, const ContractionSpec& spec,
                      MultiplyStats* stats = nullptr);
SparseTensor contract(const SparseTensor& a, const SparseTensor& b, std::string_view expr,
                      MultiplyStats* stats = nullptr);

/// Position p of A is matched with position perm[p] of B.
struct AdditionMatch {
    std::vector<int> perm;

    static AdditionMatch identity(std::size_t order);
};

/// A + sign * B with B's indices matched onto A's. The result uses A's shape
/// and lex order and is sorted; coinciding entries are summed, zeros kept.
SparseTensor add(const SparseTensor& a, const SparseTensor& b, const AdditionMatch& match,
                 int sign = 1);

/// Number of ways two order-N tensors can be combined by pairing indices:
/// sum over i of i! * C(N, i)^2. Throws std::overflow_error past 64 bits.
std::uint64_t partial_permutation_count(int n);

} // namespace lcot
