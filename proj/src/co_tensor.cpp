#include "lcot/co_tensor.hpp"

#include <array>
#include <bit>
#include <utility>

#include "lcot/radix_sort.hpp"

namespace lcot {

CoTensor to_co(const SparseTensor& t, CoLayout layout) {
    CoTensor ct;
    ct.layout = layout;
    ct.shape = t.shape();
    ct.lex = t.lex();
    ct.vals = t.vals();
    const std::size_t order = t.order();
    const std::size_t nnz = t.nnz();
    ct.idx.resize(order * nnz);
    const LivCodec codec(t.shape(), t.lex());
    std::vector<Index> coords(order);
    for (std::size_t e = 0; e < nnz; ++e) {
        codec.decode(t.livs()[e], coords);
        for (std::size_t p = 0; p < order; ++p) {
            if (layout == CoLayout::Packed) {
                ct.idx[e * order + p] = coords[p];
            } else {
                ct.idx[p * nnz + e] = coords[p];
            }
        }
    }
    return ct;
}

SparseTensor co_to_lco(const CoTensor& ct) {
    const std::size_t order = ct.shape.order();
    const LivCodec codec(ct.shape, ct.lex);
    std::vector<Liv> livs(ct.nnz());
    std::vector<Index> coords(order);
    bool sorted = true;
    for (std::size_t e = 0; e < ct.nnz(); ++e) {
        for (std::size_t p = 0; p < order; ++p) {
            coords[p] = ct.coord(e, p);
        }
        livs[e] = codec.encode(coords);
        sorted = sorted && (e == 0 || livs[e] > livs[e - 1]);
    }
    return SparseTensor(ct.shape, ct.lex, std::move(livs), ct.vals, sorted);
}

namespace {

struct PackedAccess {
    Index* idx;
    double* vals;
    std::size_t order;

    Index get(std::size_t e, int p) const { return idx[e * order + p]; }
    void swap(std::size_t a, std::size_t b) const {
        Index* x = idx + a * order;
        Index* y = idx + b * order;
        for (std::size_t p = 0; p < order; ++p) {
            std::swap(x[p], y[p]);
        }
        std::swap(vals[a], vals[b]);
    }
};

struct SeparateAccess {
    Index* idx;
    double* vals;
    std::size_t order;
    std::size_t nnz;

    Index get(std::size_t e, int p) const { return idx[p * nnz + e]; }
    void swap(std::size_t a, std::size_t b) const {
        for (std::size_t p = 0; p < order; ++p) {
            std::swap(idx[p * nnz + a], idx[p * nnz + b]);
        }
        std::swap(vals[a], vals[b]);
    }
};

template <class Access>
class CoSorter {
  public:
    CoSorter(Access acc, const Shape& shape, const LexOrder& lex) : acc_(acc) {
        for (std::size_t q = lex.order(); q-- > 0;) {
            const int p = lex[q];
            significance_.push_back(p);
            const int bytes =
                radix_passes(static_cast<std::uint64_t>(shape[static_cast<std::size_t>(p)] - 1));
            for (int b = bytes; b-- > 0;) {
                digits_.push_back({p, b * static_cast<int>(kRadixBits)});
            }
        }
    }

    void radix(std::size_t n) { flag(0, n, 0); }

    void intro(std::size_t n) {
        if (n > 1) {
            intro_loop(0, n, 2 * std::bit_width(n));
        }
    }

  private:
    struct Digit {
        int position;
        int shift;
    };

    bool less(std::size_t a, std::size_t b) const {
        for (int p : significance_) {
            const Index x = acc_.get(a, p);
            const Index y = acc_.get(b, p);
            if (x != y) {
                return x < y;
            }
        }
        return false;
    }

    void insertion(std::size_t lo, std::size_t n) {
        for (std::size_t i = lo + 1; i < lo + n; ++i) {
            for (std::size_t j = i; j > lo && less(j, j - 1); --j) {
                acc_.swap(j, j - 1);
            }
        }
    }

    void flag(std::size_t lo, std::size_t n, std::size_t level) {
        while (true) {
            if (n <= kInsertionCutoff) {
                insertion(lo, n);
                return;
            }
            if (level == digits_.size()) {
                return;
            }
            const Digit dg = digits_[level];
            auto digit = [&](std::size_t e) {
                return static_cast<std::size_t>(
                    (static_cast<std::uint64_t>(acc_.get(e, dg.position)) >> dg.shift) &
                    (kRadixBuckets - 1));
            };
            std::array<std::size_t, kRadixBuckets> count{};
            for (std::size_t e = lo; e < lo + n; ++e) {
                ++count[digit(e)];
            }
            std::array<std::size_t, kRadixBuckets> head{};
            std::array<std::size_t, kRadixBuckets> tail{};
            std::size_t sum = lo;
            std::size_t used = 0;
            for (std::size_t b = 0; b < kRadixBuckets; ++b) {
                head[b] = sum;
                sum += count[b];
                tail[b] = sum;
                used += count[b] != 0;
            }
            if (used == 1) {
                ++level;
                continue;
            }
            for (std::size_t b = 0; b < kRadixBuckets; ++b) {
                while (head[b] < tail[b]) {
                    std::size_t d = digit(head[b]);
                    while (d != b) {
                        acc_.swap(head[b], head[d]++);
                        d = digit(head[b]);
                    }
                    ++head[b];
                }
            }
            std::size_t start = lo;
            for (std::size_t b = 0; b < kRadixBuckets; ++b) {
                if (count[b] > 1) {
                    flag(start, count[b], level + 1);
                }
                start += count[b];
            }
            return;
        }
    }

    void sift_down(std::size_t lo, std::size_t root, std::size_t n) {
        while (true) {
            std::size_t child = 2 * root + 1;
            if (child >= n) {
                return;
            }
            if (child + 1 < n && less(lo + child, lo + child + 1)) {
                ++child;
            }
            if (!less(lo + root, lo + child)) {
                return;
            }
            acc_.swap(lo + root, lo + child);
            root = child;
        }
    }

    void heap(std::size_t lo, std::size_t n) {
        for (std::size_t i = n / 2; i-- > 0;) {
            sift_down(lo, i, n);
        }
        for (std::size_t end = n; end-- > 1;) {
            acc_.swap(lo, lo + end);
            sift_down(lo, 0, end);
        }
    }

    void intro_loop(std::size_t lo, std::size_t n, int depth) {
        while (n > kInsertionCutoff) {
            if (depth-- == 0) {
                heap(lo, n);
                return;
            }
            const std::size_t mid = lo + n / 2;
            const std::size_t last = lo + n - 1;
            if (less(mid, lo)) acc_.swap(mid, lo);
            if (less(last, lo)) acc_.swap(last, lo);
            if (less(last, mid)) acc_.swap(last, mid);
            acc_.swap(lo, mid);
            // Pivot stays at lo until the final swap.
            std::size_t i = 0;
            std::size_t j = n;
            while (true) {
                do { ++i; } while (i < n && less(lo + i, lo));
                do { --j; } while (less(lo, lo + j));
                if (i >= j) {
                    break;
                }
                acc_.swap(lo + i, lo + j);
            }
            acc_.swap(lo, lo + j);
            if (j < n - j - 1) {
                intro_loop(lo, j, depth);
                lo += j + 1;
                n -= j + 1;
            } else {
                intro_loop(lo + j + 1, n - j - 1, depth);
                n = j;
            }
        }
        insertion(lo, n);
    }

    Access acc_;
    std::vector<int> significance_;
    std::vector<Digit> digits_;
};

template <class Access>
void run(Access acc, const CoTensor& ct, SortAlgo algo) {
    CoSorter<Access> sorter(acc, ct.shape, ct.lex);
    if (algo == SortAlgo::MsdRadix) {
        sorter.radix(ct.nnz());
    } else {
        sorter.intro(ct.nnz());
    }
}

} // namespace

void co_sort(CoTensor& ct, SortAlgo algo) {
    const std::size_t order = ct.shape.order();
    if (ct.layout == CoLayout::Packed) {
        run(PackedAccess{ct.idx.data(), ct.vals.data(), order}, ct, algo);
    } else {
        run(SeparateAccess{ct.idx.data(), ct.vals.data(), order, ct.nnz()}, ct, algo);
    }
}

} // namespace lcot
