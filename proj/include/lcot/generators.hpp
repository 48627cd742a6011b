#pragma once

#include <array>
#include <cstdint>

#include "lcot/sparse_tensor.hpp"

namespace lcot {

/// Central-difference first-derivative operator on N points (h = 1) with
/// one-sided second-order stencils in the first and last rows.
SparseTensor fd_matrix(Index n);

/// N x N identity pattern.
SparseTensor kron_delta(Index n);

/// Order-4 isotropic Laplacian a_{ijkl} on an N x N grid, assembled by
/// contractions of fd_matrix and kron_delta and one index-matched addition.
/// Sorted under the identity lex order.
SparseTensor laplacian4(Index n);

struct RTensorParams {
    static constexpr std::array<double, 8> default_probs() {
        constexpr double o = 0.5 / 6;
        return {0.3, o, o, o, o, o, o, 0.2};
    }

    std::array<Index, 3> dims{64, 64, 64};
    std::size_t nnz = 1000;
    /// Octant o = 4a + 2b + c, where a, b, c select the upper half of
    /// dimensions 0, 1, 2.
    std::array<double, 8> probs = default_probs();
    double amplitude = 0.1;
    std::uint64_t seed = 1;
    /// Maximum number of cell draws; 0 picks 64 * nnz + 4096.
    std::size_t max_attempts = 0;
};

/// Recursive-octant random order-3 tensor. Repeated cells are summed; the
/// result has exactly p.nnz entries unless the attempt cap is reached.
SparseTensor rtensor(const RTensorParams& p);

/// Uniformly random distinct cells of `shape`, values in (0, 1]. Sorted
/// under the identity lex order.
SparseTensor random_tensor(const Shape& shape, std::size_t nnz, std::uint64_t seed);

} // namespace lcot
