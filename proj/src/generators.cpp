#include "lcot/generators.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "lcot/einsum.hpp"
#include "lcot/rearrange.hpp"

namespace lcot {

SparseTensor fd_matrix(Index n) {
    if (n < 3) {
        throw std::invalid_argument("fd_matrix: need N >= 3");
    }
    std::vector<Entry> e;
    e.reserve(static_cast<std::size_t>(2 * n + 2));
    e.push_back({{0, 0}, -1.5});
    e.push_back({{0, 1}, 2.0});
    e.push_back({{0, 2}, -0.5});
    for (Index i = 1; i + 1 < n; ++i) {
        e.push_back({{i, i - 1}, -0.5});
        e.push_back({{i, i + 1}, 0.5});
    }
    e.push_back({{n - 1, n - 3}, 0.5});
    e.push_back({{n - 1, n - 2}, -2.0});
    e.push_back({{n - 1, n - 1}, 1.5});
    return from_entries(Shape{n, n}, LexOrder::identity(2), e);
}

SparseTensor kron_delta(Index n) {
    if (n < 1) {
        throw std::invalid_argument("kron_delta: need N >= 1");
    }
    std::vector<Liv> livs(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        livs[i] = i * (n + 1);
    }
    return SparseTensor(Shape{n, n}, LexOrder::identity(2), std::move(livs),
                        std::vector<double>(static_cast<std::size_t>(n), 1.0), true);
}

SparseTensor laplacian4(Index n) {
    if (n < 3) {
        throw std::invalid_argument("laplacian4: need N >= 3");
    }
    const SparseTensor d = fd_matrix(n);
    const SparseTensor delta = kron_delta(n);
    // d_{ii'} delta_{jl} d_{i'k}: positions (i, j, l, k).
    const SparseTensor by = contract(contract(d, delta, "ab,cd->abcd"), d, "abcd,be");
    // d_{jj'} delta_{ik} d_{j'l}: positions (j, i, k, l).
    const SparseTensor bx = contract(contract(d, delta, "ab,cd->abcd"), d, "abcd,be");
    const SparseTensor sum = add(by, bx, AdditionMatch{{1, 0, 3, 2}});
    return rp_permute(relabel_positions(sum, {0, 1, 3, 2}), LexOrder::identity(4));
}

namespace {

int level_bits(Index d) { return std::bit_width(static_cast<std::uint64_t>(d - 1)); }

} // namespace

SparseTensor rtensor(const RTensorParams& p) {
    const Shape shape{p.dims[0], p.dims[1], p.dims[2]};
    if (p.nnz > static_cast<std::size_t>(shape.size())) {
        throw std::invalid_argument("rtensor: target nnz exceeds the number of cells");
    }
    if (p.amplitude < 0) {
        throw std::invalid_argument("rtensor: negative perturbation amplitude");
    }
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::array<double, 8> probs = p.probs;
    double total = 0;
    for (double& q : probs) {
        if (q < 0) {
            throw std::invalid_argument("rtensor: negative octant probability");
        }
        q = std::max(0.0, q + p.amplitude * (2 * unit(rng) - 1));
        total += q;
    }
    if (total <= 0) {
        throw std::invalid_argument("rtensor: octant probabilities sum to zero");
    }
    std::array<double, 8> cdf{};
    double acc = 0;
    for (int o = 0; o < 8; ++o) {
        acc += probs[o] / total;
        cdf[o] = acc;
    }
    cdf[7] = 1.0;

    // Recurse on the enclosing power-of-two grid; a dimension stops halving
    // once its bits are used up, and draws outside the true extent are
    // rejected.
    const std::array<int, 3> bits{level_bits(p.dims[0]), level_bits(p.dims[1]),
                                  level_bits(p.dims[2])};
    const int levels = std::max({bits[0], bits[1], bits[2]});
    const std::size_t cap = p.max_attempts != 0 ? p.max_attempts : 64 * p.nnz + 4096;

    std::unordered_map<Liv, std::size_t> slot;
    slot.reserve(p.nnz * 2);
    std::vector<Liv> livs;
    std::vector<double> vals;
    livs.reserve(p.nnz);
    vals.reserve(p.nnz);
    for (std::size_t attempt = 0; attempt < cap && livs.size() < p.nnz; ++attempt) {
        std::array<Index, 3> c{0, 0, 0};
        for (int level = 0; level < levels; ++level) {
            const double u = unit(rng);
            const int o = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end() - 1, u) -
                                           cdf.begin());
            const std::array<int, 3> half{(o >> 2) & 1, (o >> 1) & 1, o & 1};
            for (int d = 0; d < 3; ++d) {
                // Dimension d halves during the last bits[d] levels.
                const int first = levels - bits[d];
                if (level >= first) {
                    c[d] = 2 * c[d] + half[d];
                }
            }
        }
        const double v = 1.0 - unit(rng);
        if (c[0] >= p.dims[0] || c[1] >= p.dims[1] || c[2] >= p.dims[2]) {
            continue;
        }
        const Liv liv = c[0] + p.dims[0] * (c[1] + p.dims[1] * c[2]);
        auto [it, fresh] = slot.try_emplace(liv, livs.size());
        if (fresh) {
            livs.push_back(liv);
            vals.push_back(v);
        } else {
            vals[it->second] += v;
        }
    }
    return sort_tensor(TensorBuilder::adopt(shape, LexOrder::identity(3), std::move(livs),
                                            std::move(vals), false));
}

SparseTensor random_tensor(const Shape& shape, std::size_t nnz, std::uint64_t seed) {
    if (nnz > static_cast<std::size_t>(shape.size())) {
        throw std::invalid_argument("random_tensor: nnz exceeds the number of cells");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Liv> cell(0, shape.size() - 1);
    std::vector<Liv> livs;
    livs.reserve(nnz);
    while (livs.size() < nnz) {
        while (livs.size() < nnz) {
            livs.push_back(cell(rng));
        }
        msd_radix_sort(std::span<Liv>(livs));
        livs.erase(std::unique(livs.begin(), livs.end()), livs.end());
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> vals(nnz);
    for (double& v : vals) {
        v = 1.0 - unit(rng);
    }
    return TensorBuilder::adopt(shape, LexOrder::identity(shape.order()), std::move(livs),
                                std::move(vals), true);
}

} // namespace lcot
