#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcot/fast_divisor.hpp"
#include "lcot/shape.hpp"

namespace lcot {

/// Thrown when an operation's documented precondition does not hold.
class precondition_error : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Sparse tensor in linearized coordinate (LCO) form: one LIV and one value
/// per stored element. Explicit zeros are kept.
class SparseTensor {
  public:
    SparseTensor() = default;

    /// Validates every invariant; `is_sorted` requires strictly increasing livs.
    SparseTensor(Shape shape, LexOrder lex, std::vector<Liv> livs, std::vector<double> vals,
                 bool is_sorted);

    /// Empty tensor.
    SparseTensor(Shape shape, LexOrder lex);

    const Shape& shape() const noexcept { return shape_; }
    const LexOrder& lex() const noexcept { return lex_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t nnz() const noexcept { return livs_.size(); }
    bool is_sorted() const noexcept { return sorted_; }

    const std::vector<Liv>& livs() const noexcept { return livs_; }
    const std::vector<double>& vals() const noexcept { return vals_; }

    /// Moves the storage out, leaving an empty tensor of the same shape.
    std::pair<std::vector<Liv>, std::vector<double>> release() &&;

    friend bool operator==(const SparseTensor&, const SparseTensor&) = default;

  private:
    friend class TensorBuilder;

    Shape shape_;
    LexOrder lex_;
    std::vector<Liv> livs_;
    std::vector<double> vals_;
    bool sorted_ = true;
};

/// Wraps arrays already known to satisfy the tensor invariants, skipping the
/// O(nnz) validation pass. Used by kernels that construct results directly.
class TensorBuilder {
  public:
    static SparseTensor adopt(Shape shape, LexOrder lex, std::vector<Liv> livs,
                              std::vector<double> vals, bool is_sorted);
};

struct Entry {
    std::vector<Index> coords;
    double value;
};

/// Linearizes, sorts and sums duplicate coordinates.
SparseTensor from_entries(const Shape& shape, const LexOrder& lex, const std::vector<Entry>& entries);

/// Same nonzeros with LIVs recomputed under `new_lex`. The value order is
/// unchanged, so the result is unsorted unless the order is unchanged.
SparseTensor shuffle_livs(const SparseTensor& t, const LexOrder& new_lex);

/// Maps LIVs under one lex order to LIVs of the same coordinates under another.
class LivShuffler {
  public:
    LivShuffler(const Shape& shape, const LexOrder& from, const LexOrder& to);

    Liv operator()(Liv liv) const {
        Liv out = 0;
        for (std::size_t q = 0; q + 1 < div_.size(); ++q) {
            const auto dm = div_[q].divmod(liv);
            out += dm.remainder * target_[q];
            liv = dm.quotient;
        }
        return out + liv * target_.back();
    }

  private:
    std::vector<FastDivisor> div_;
    std::vector<Index> target_;
};

/// In-place LIV recomputation from `from` to `to` for the same shape.
void shuffle_in_place(std::span<Liv> livs, const Shape& shape, const LexOrder& from,
                      const LexOrder& to);

/// Expands every LIV back to coordinates; entry order follows storage order.
std::vector<Entry> to_entries(const SparseTensor& t);

/// Drops stored values equal to zero.
SparseTensor prune_zeros(const SparseTensor& t);

/// Reinterprets the index positions: position p of the result is position
/// `perm[p]` of `t`. LIVs are untouched.
SparseTensor relabel_positions(const SparseTensor& t, const std::vector<int>& perm);

/// FNV-1a hash over the shape, lex order, LIVs and value bit patterns.
std::uint64_t checksum(const SparseTensor& t);

// NTF1 text format.
void write_ntf1(std::ostream& os, const SparseTensor& t);
SparseTensor read_ntf1(std::istream& is);
void save_ntf1(const std::string& path, const SparseTensor& t);
SparseTensor load_ntf1(const std::string& path);

} // namespace lcot
