#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "lcot/fast_divisor.hpp"

namespace lcot {

using Liv = std::int64_t;
using Index = std::int64_t;

/// Index ranges of a tensor. The element count must fit in a signed 64-bit LIV.
class Shape {
  public:
    Shape() = default;
    explicit Shape(std::vector<Index> dims);
    Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

    std::size_t order() const noexcept { return dims_.size(); }
    Index operator[](std::size_t p) const { return dims_[p]; }
    const std::vector<Index>& dims() const noexcept { return dims_; }
    /// Product of all dims.
    Index size() const noexcept { return size_; }

    friend bool operator==(const Shape&, const Shape&) = default;

  private:
    std::vector<Index> dims_;
    Index size_ = 1;
};

/// Lexicographical order: seq[0] is the least significant index position.
class LexOrder {
  public:
    LexOrder() = default;
    explicit LexOrder(std::vector<int> seq);
    LexOrder(std::initializer_list<int> seq) : LexOrder(std::vector<int>(seq)) {}

    static LexOrder identity(std::size_t order);

    std::size_t order() const noexcept { return seq_.size(); }
    int operator[](std::size_t q) const { return seq_[q]; }
    const std::vector<int>& seq() const noexcept { return seq_; }
    /// rank()[p] is the significance rank of index position p.
    std::vector<int> rank() const;

    friend bool operator==(const LexOrder&, const LexOrder&) = default;

  private:
    std::vector<int> seq_;
};

/// Multiplies two extents, throwing std::overflow_error past 2^63 - 1.
Index checked_mul(Index a, Index b);

/// Per-(shape, lex) tables for linearizing and delinearizing.
class LivCodec {
  public:
    LivCodec(const Shape& shape, const LexOrder& lex);

    std::size_t order() const noexcept { return dims_.size(); }

    /// Stride of index position p.
    Index stride(std::size_t p) const { return strides_[p]; }

    Liv encode(std::span<const Index> coords) const;
    void decode(Liv liv, std::span<Index> coords) const;

  private:
    std::vector<Index> dims_;
    std::vector<int> seq_;
    std::vector<Index> strides_;        // by index position
    std::vector<FastDivisor> divisors_; // by significance rank
    Index size_;
};

Liv linearize(std::span<const Index> coords, const Shape& shape, const LexOrder& lex);
inline Liv linearize(std::initializer_list<Index> coords, const Shape& shape, const LexOrder& lex) {
    return linearize(std::span<const Index>(coords.begin(), coords.size()), shape, lex);
}
std::vector<Index> delinearize(Liv liv, const Shape& shape, const LexOrder& lex);

} // namespace lcot
