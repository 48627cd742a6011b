#include "lcot/shape.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace lcot {

Index checked_mul(Index a, Index b) {
    Index out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("element count exceeds 2^63 - 1");
    }
    return out;
}

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("Shape: order must be >= 1");
    }
    for (Index d : dims_) {
        if (d < 1) {
            throw std::invalid_argument("Shape: every dim must be >= 1, got " + std::to_string(d));
        }
        size_ = checked_mul(size_, d);
    }
}

LexOrder::LexOrder(std::vector<int> seq) : seq_(std::move(seq)) {
    if (seq_.empty()) {
        throw std::invalid_argument("LexOrder: order must be >= 1");
    }
    std::vector<bool> seen(seq_.size(), false);
    for (int p : seq_) {
        if (p < 0 || static_cast<std::size_t>(p) >= seq_.size() || seen[p]) {
            throw std::invalid_argument("LexOrder: not a permutation of 0..N-1");
        }
        seen[p] = true;
    }
}

LexOrder LexOrder::identity(std::size_t order) {
    std::vector<int> seq(order);
    for (std::size_t p = 0; p < order; ++p) {
        seq[p] = static_cast<int>(p);
    }
    return LexOrder(std::move(seq));
}

std::vector<int> LexOrder::rank() const {
    std::vector<int> r(seq_.size());
    for (std::size_t q = 0; q < seq_.size(); ++q) {
        r[seq_[q]] = static_cast<int>(q);
    }
    return r;
}

LivCodec::LivCodec(const Shape& shape, const LexOrder& lex)
    : dims_(shape.dims()), seq_(lex.seq()), strides_(shape.order()), size_(shape.size()) {
    if (lex.order() != shape.order()) {
        throw std::invalid_argument("lex order and shape have different orders");
    }
    Index stride = 1;
    divisors_.reserve(dims_.size());
    for (int p : seq_) {
        strides_[p] = stride;
        divisors_.emplace_back(dims_[p]);
        stride *= dims_[p];
    }
}

Liv LivCodec::encode(std::span<const Index> coords) const {
    if (coords.size() != dims_.size()) {
        throw std::invalid_argument("coordinate count does not match tensor order");
    }
    Liv liv = 0;
    for (std::size_t p = 0; p < coords.size(); ++p) {
        if (coords[p] < 0 || coords[p] >= dims_[p]) {
            throw std::out_of_range("coordinate " + std::to_string(coords[p]) + " at position " +
                                    std::to_string(p) + " outside [0, " +
                                    std::to_string(dims_[p]) + ")");
        }
        liv += coords[p] * strides_[p];
    }
    return liv;
}

void LivCodec::decode(Liv liv, std::span<Index> coords) const {
    if (liv < 0 || liv >= size_) {
        throw std::out_of_range("LIV " + std::to_string(liv) + " outside [0, " +
                                std::to_string(size_) + ")");
    }
    const std::size_t n = seq_.size();
    for (std::size_t q = 0; q + 1 < n; ++q) {
        const auto dm = divisors_[q].divmod(liv);
        coords[seq_[q]] = dm.remainder;
        liv = dm.quotient;
    }
    coords[seq_[n - 1]] = liv;
}

Liv linearize(std::span<const Index> coords, const Shape& shape, const LexOrder& lex) {
    return LivCodec(shape, lex).encode(coords);
}

std::vector<Index> delinearize(Liv liv, const Shape& shape, const LexOrder& lex) {
    std::vector<Index> coords(shape.order());
    LivCodec(shape, lex).decode(liv, coords);
    return coords;
}

} // namespace lcot
