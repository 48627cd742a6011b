#pragma once

#include <vector>

#include "lcot/rearrange.hpp"
#include "lcot/scratch.hpp"
#include "lcot/sparse_tensor.hpp"

namespace lcot {

enum class Major { RowMajor, ColMajor };

/// A tensor viewed as an m x n matrix. Row and column indices linearize the
/// listed tensor positions with the first listed position least significant.
/// Row-major LIV = col + n * row; column-major LIV = row + m * col.
struct MatrixView {
    std::vector<int> row_positions;
    std::vector<int> col_positions;
    Index rows = 0;
    Index cols = 0;
    Major major = Major::ColMajor;
    std::vector<Liv> livs;
    std::vector<double> vals;

    std::size_t nnz() const noexcept { return livs.size(); }
    Index major_size() const noexcept { return major == Major::ColMajor ? cols : rows; }
    Index minor_size() const noexcept { return major == Major::ColMajor ? rows : cols; }
};

/// Throws precondition_error unless `mv` satisfies the view invariants.
void validate(const MatrixView& mv);

/// Tensor lex order whose LIVs coincide with the requested matrix layout.
LexOrder layout_lex(const std::vector<int>& rows, const std::vector<int>& cols, Major major);

/// True when flattening `t` into this layout needs no rearrangement.
bool is_zero_copy(const SparseTensor& t, const std::vector<int>& rows,
                  const std::vector<int>& cols, Major major);

MatrixView flatten(const SparseTensor& t, const std::vector<int>& rows,
                   const std::vector<int>& cols, Major major);
MatrixView flatten(SparseTensor&& t, const std::vector<int>& rows, const std::vector<int>& cols,
                   Major major);

/// Tensor over `out_shape` whose lex order is the matrix layout (minor
/// positions first).
SparseTensor unflatten(MatrixView mv, const Shape& out_shape);
/// As above, then permuted into `out_lex`.
SparseTensor unflatten(MatrixView mv, const Shape& out_shape, const LexOrder& out_lex);

enum class SparsityClass { Sparse, RowSparse, ColSparse, IndexSparse };

inline constexpr double kHyperSparseThreshold = 3.0;

struct HyperSparsityProfile {
    std::size_t nnz = 0;
    Index m = 0;
    Index n = 0;
    Index nzr = 0;
    Index nzc = 0;
    SparsityClass cls = SparsityClass::Sparse;
};

/// Row-sparse when m / nnz > threshold, column-sparse when n / nnz > threshold.
SparsityClass classify_counts(Index m, Index n, std::size_t nnz,
                              double threshold = kHyperSparseThreshold);

HyperSparsityProfile classify(const MatrixView& mv, double threshold = kHyperSparseThreshold);

enum class MatrixFormat { CSC, CSR, DCSC, DCSR };

/// Compressed matrix. `ptr` indexes the segments of the compressed (major)
/// dimension: every column (CSC), every row (CSR), or only the present
/// columns/rows listed in `ids` (DCSC/DCSR).
struct CompressedMatrix {
    MatrixFormat format = MatrixFormat::CSC;
    Index rows = 0;
    Index cols = 0;
    scratch_vector<Index> ids;
    scratch_vector<Index> ptr;
    scratch_vector<Index> minor;
    scratch_vector<double> vals;

    std::size_t nnz() const noexcept { return minor.size(); }
    std::size_t segments() const noexcept { return ptr.empty() ? 0 : ptr.size() - 1; }
    /// Major id of segment s.
    Index segment_id(std::size_t s) const {
        return ids.empty() ? static_cast<Index>(s) : ids[s];
    }
    std::size_t allocated_words() const noexcept {
        return ids.size() + ptr.size() + minor.size() + vals.size();
    }
};

CompressedMatrix to_csc(const MatrixView& mv);
CompressedMatrix to_csr(const MatrixView& mv);
CompressedMatrix to_dcsc(const MatrixView& mv);
CompressedMatrix to_dcsr(const MatrixView& mv);

/// Expands back into a view (column-major for CSC/DCSC, row-major otherwise).
MatrixView expand(const CompressedMatrix& cm);

} // namespace lcot
