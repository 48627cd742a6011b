#pragma once

#include <vector>

#include "lcot/sparse_tensor.hpp"

namespace lcot {

enum class CoLayout {
    Packed,   ///< index tuples stored consecutively
    Separate, ///< one contiguous array per index position
};

enum class SortAlgo { MsdRadix, Introspective };

/// Coordinate-format tensor holding every expanded index. Used only as a
/// comparison point for LCO sorting.
struct CoTensor {
    CoLayout layout = CoLayout::Packed;
    Shape shape;
    LexOrder lex;
    std::vector<Index> idx;
    std::vector<double> vals;

    std::size_t nnz() const noexcept { return vals.size(); }
    Index coord(std::size_t e, std::size_t p) const {
        return layout == CoLayout::Packed ? idx[e * shape.order() + p] : idx[p * nnz() + e];
    }
};

CoTensor to_co(const SparseTensor& t, CoLayout layout);

/// Sorts by the significance sequence of `ct.lex`, most significant index
/// compared first. MsdRadix reads the tuple as one digit string.
void co_sort(CoTensor& ct, SortAlgo algo);

/// Encodes under `ct.lex`; the result is flagged sorted when its LIVs are
/// strictly increasing.
SparseTensor co_to_lco(const CoTensor& ct);

} // namespace lcot
