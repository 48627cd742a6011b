#pragma once

// Sorting kernels for LCO data. Keys are non-negative 64-bit integers and any
// number of satellite arrays are permuted alongside them.

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace lcot {

inline constexpr std::size_t kRadixBits = 8;
inline constexpr std::size_t kRadixBuckets = std::size_t{1} << kRadixBits;
inline constexpr std::size_t kInsertionCutoff = 32;

/// Number of 8-bit digits needed to represent keys up to `max_key`.
constexpr int radix_passes(std::uint64_t max_key) noexcept {
    const int bits = std::bit_width(max_key);
    return (bits + static_cast<int>(kRadixBits) - 1) / static_cast<int>(kRadixBits);
}

namespace detail {

template <class Key, class... Sat>
void insertion_sort(Key* keys, std::size_t n, Sat*... sats) {
    for (std::size_t i = 1; i < n; ++i) {
        if (!(keys[i] < keys[i - 1])) {
            continue;
        }
        Key k = keys[i];
        std::tuple<Sat...> s{sats[i]...};
        std::size_t j = i;
        do {
            keys[j] = keys[j - 1];
            ((sats[j] = sats[j - 1]), ...);
            --j;
        } while (j > 0 && k < keys[j - 1]);
        keys[j] = k;
        std::apply([&](auto&... v) { ((sats[j] = v), ...); }, s);
    }
}

template <class Key, class... Sat>
void american_flag(Key* keys, std::size_t n, int shift, Sat*... sats) {
    while (true) {
        if (n <= kInsertionCutoff) {
            insertion_sort(keys, n, sats...);
            return;
        }
        const auto digit = [shift](Key k) {
            return static_cast<std::size_t>((static_cast<std::uint64_t>(k) >> shift) &
                                            (kRadixBuckets - 1));
        };
        std::array<std::size_t, kRadixBuckets> count{};
        for (std::size_t i = 0; i < n; ++i) {
            ++count[digit(keys[i])];
        }
        std::array<std::size_t, kRadixBuckets> head{};
        std::array<std::size_t, kRadixBuckets> tail{};
        std::size_t sum = 0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < kRadixBuckets; ++b) {
            head[b] = sum;
            sum += count[b];
            tail[b] = sum;
            used += count[b] != 0;
        }
        if (used > 1) {
            for (std::size_t b = 0; b < kRadixBuckets; ++b) {
                while (head[b] < tail[b]) {
                    std::size_t d = digit(keys[head[b]]);
                    while (d != b) {
                        const std::size_t dst = head[d]++;
                        std::swap(keys[head[b]], keys[dst]);
                        (std::swap(sats[head[b]], sats[dst]), ...);
                        d = digit(keys[head[b]]);
                    }
                    ++head[b];
                }
            }
        }
        if (shift == 0) {
            return;
        }
        if (used == 1) {
            // Single bucket: descend without moving anything.
            shift -= static_cast<int>(kRadixBits);
            continue;
        }
        std::size_t start = 0;
        for (std::size_t b = 0; b < kRadixBuckets; ++b) {
            if (count[b] > 1) {
                american_flag(keys + start, count[b], shift - static_cast<int>(kRadixBits),
                              (sats + start)...);
            }
            start += count[b];
        }
        return;
    }
}

template <class Key, class... Sat>
void sift_down(Key* keys, std::size_t root, std::size_t n, Sat*... sats) {
    while (true) {
        std::size_t child = 2 * root + 1;
        if (child >= n) {
            return;
        }
        if (child + 1 < n && keys[child] < keys[child + 1]) {
            ++child;
        }
        if (!(keys[root] < keys[child])) {
            return;
        }
        std::swap(keys[root], keys[child]);
        (std::swap(sats[root], sats[child]), ...);
        root = child;
    }
}

template <class Key, class... Sat>
void heap_sort(Key* keys, std::size_t n, Sat*... sats) {
    for (std::size_t i = n / 2; i-- > 0;) {
        sift_down(keys, i, n, sats...);
    }
    for (std::size_t end = n; end-- > 1;) {
        std::swap(keys[0], keys[end]);
        (std::swap(sats[0], sats[end]), ...);
        sift_down(keys, 0, end, sats...);
    }
}

template <class Key, class... Sat>
void intro_loop(Key* keys, std::size_t n, int depth, Sat*... sats) {
    while (n > kInsertionCutoff) {
        if (depth-- == 0) {
            heap_sort(keys, n, sats...);
            return;
        }
        // Median of three moved to the front, then Hoare partition.
        const std::size_t mid = n / 2;
        auto swap_at = [&](std::size_t a, std::size_t b) {
            std::swap(keys[a], keys[b]);
            (std::swap(sats[a], sats[b]), ...);
        };
        if (keys[mid] < keys[0]) swap_at(mid, 0);
        if (keys[n - 1] < keys[0]) swap_at(n - 1, 0);
        if (keys[n - 1] < keys[mid]) swap_at(n - 1, mid);
        swap_at(0, mid);
        const Key pivot = keys[0];
        std::size_t i = 0;
        std::size_t j = n;
        while (true) {
            do { ++i; } while (i < n && keys[i] < pivot);
            do { --j; } while (pivot < keys[j]);
            if (i >= j) {
                break;
            }
            swap_at(i, j);
        }
        swap_at(0, j);
        // Recurse on the smaller side.
        if (j < n - j - 1) {
            intro_loop(keys, j, depth, sats...);
            keys += j + 1;
            ((sats += j + 1), ...);
            n -= j + 1;
        } else {
            intro_loop(keys + j + 1, n - j - 1, depth, (sats + j + 1)...);
            n = j;
        }
    }
    insertion_sort(keys, n, sats...);
}

} // namespace detail

/// In-place hybrid MSD radix sort (American flag, 8-bit digits). Not stable.
/// Leading all-zero digits of the maximum key are skipped.
template <class Key, class... Sat>
void msd_radix_sort(std::span<Key> keys, std::span<Sat>... sats) {
    assert(((sats.size() == keys.size()) && ...));
    const std::size_t n = keys.size();
    if (n < 2) {
        return;
    }
    const auto max_key = static_cast<std::uint64_t>(*std::max_element(keys.begin(), keys.end()));
    const int passes = radix_passes(max_key);
    if (passes == 0) {
        return;
    }
    detail::american_flag(keys.data(), n, (passes - 1) * static_cast<int>(kRadixBits),
                          sats.data()...);
}

/// Introspective sort (median-of-three quicksort, heapsort fallback,
/// insertion sort for short ranges). Not stable.
template <class Key, class... Sat>
void introspective_sort(std::span<Key> keys, std::span<Sat>... sats) {
    assert(((sats.size() == keys.size()) && ...));
    const std::size_t n = keys.size();
    if (n < 2) {
        return;
    }
    const int depth = 2 * static_cast<int>(std::bit_width(n));
    detail::intro_loop(keys.data(), n, depth, sats.data()...);
}

/// Stable out-of-place MSD radix sort over records exposing an unsigned `key`
/// member. Keeps its scratch buffer between calls.
template <class Rec, class Alloc = std::allocator<Rec>>
class StableRadixSorter {
  public:
    void sort(std::span<Rec> recs, std::uint64_t max_key) {
        const int passes = radix_passes(max_key);
        if (recs.size() < 2 || passes == 0) {
            return;
        }
        if (scratch_.size() < recs.size()) {
            scratch_.resize(recs.size());
        }
        sort_in_place(recs.data(), scratch_.data(), recs.size(),
                      (passes - 1) * static_cast<int>(kRadixBits));
    }

    static void insertion(Rec* r, std::size_t n) {
        for (std::size_t i = 1; i < n; ++i) {
            if (!(r[i].key < r[i - 1].key)) {
                continue;
            }
            Rec v = r[i];
            std::size_t j = i;
            do {
                r[j] = r[j - 1];
                --j;
            } while (j > 0 && v.key < r[j - 1].key);
            r[j] = v;
        }
    }

  private:
    struct Buckets {
        std::array<std::size_t, kRadixBuckets> count{};
        std::size_t used = 0;
    };

    static std::size_t digit(const Rec& r, int shift) {
        return static_cast<std::size_t>((r.key >> shift) & (kRadixBuckets - 1));
    }

    // Skips the data movement when every record falls in one bucket.
    static Buckets scatter(const Rec* src, Rec* dst, std::size_t n, int shift) {
        Buckets b;
        for (std::size_t i = 0; i < n; ++i) {
            ++b.count[digit(src[i], shift)];
        }
        std::array<std::size_t, kRadixBuckets> pos{};
        std::size_t sum = 0;
        for (std::size_t d = 0; d < kRadixBuckets; ++d) {
            pos[d] = sum;
            sum += b.count[d];
            b.used += b.count[d] != 0;
        }
        if (b.used == 1) {
            return b;
        }
        for (std::size_t i = 0; i < n; ++i) {
            dst[pos[digit(src[i], shift)]++] = src[i];
        }
        return b;
    }

    // Result ends in `data`.
    static void sort_in_place(Rec* data, Rec* scratch, std::size_t n, int shift) {
        while (n > kInsertionCutoff && shift >= 0) {
            const Buckets b = scatter(data, scratch, n, shift);
            if (b.used == 1) {
                shift -= static_cast<int>(kRadixBits);
                continue;
            }
            std::size_t start = 0;
            for (std::size_t d = 0; d < kRadixBuckets; ++d) {
                if (b.count[d] != 0) {
                    sort_into(scratch + start, data + start, b.count[d],
                              shift - static_cast<int>(kRadixBits));
                }
                start += b.count[d];
            }
            return;
        }
        if (shift >= 0) {
            insertion(data, n);
        }
    }

    // Result ends in `dst`; `src` is clobbered.
    static void sort_into(Rec* src, Rec* dst, std::size_t n, int shift) {
        if (n <= kInsertionCutoff || shift < 0) {
            std::copy(src, src + n, dst);
            if (shift >= 0) {
                insertion(dst, n);
            }
            return;
        }
        const Buckets b = scatter(src, dst, n, shift);
        if (b.used == 1) {
            sort_into(src, dst, n, shift - static_cast<int>(kRadixBits));
            return;
        }
        std::size_t start = 0;
        for (std::size_t d = 0; d < kRadixBuckets; ++d) {
            if (b.count[d] != 0) {
                sort_in_place(dst + start, src + start, b.count[d],
                              shift - static_cast<int>(kRadixBits));
            }
            start += b.count[d];
        }
    }

    std::vector<Rec, Alloc> scratch_;
};

} // namespace lcot
