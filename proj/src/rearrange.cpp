#include "lcot/rearrange.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <stdexcept>

namespace lcot {

void msd_radix_sort(std::span<Liv> livs, std::span<double> vals) {
    msd_radix_sort<Liv, double>(livs, vals);
}

void introspective_sort(std::span<Liv> livs, std::span<double> vals) {
    introspective_sort<Liv, double>(livs, vals);
}

IndexClass classify_indices(const LexOrder& from, const LexOrder& to) {
    if (from.order() != to.order()) {
        throw std::invalid_argument("classify_indices: lex orders differ in length");
    }
    const std::size_t n = from.order();
    const auto old_rank = from.rank();
    const auto new_rank = to.rank();
    IndexClass out{std::vector<IndexRole>(n, IndexRole::Resting)};
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            if (old_rank[y] > old_rank[x] && new_rank[x] > new_rank[y]) {
                out.roles[x] = IndexRole::Rearrangement;
                break;
            }
        }
    }
    return out;
}

SortPlan make_sort_plan(const Shape& shape, const LexOrder& from, const LexOrder& to) {
    if (from.order() != shape.order() || to.order() != shape.order()) {
        throw std::invalid_argument("make_sort_plan: lex orders do not match shape");
    }
    const std::size_t n = shape.order();
    const IndexClass cls = classify_indices(from, to);
    // stride[q] = product of the dims below significance rank q in `to`.
    std::vector<Index> stride(n + 1, 1);
    for (std::size_t q = 0; q < n; ++q) {
        stride[q + 1] = stride[q] * shape[to[q]];
    }

    SortPlan plan;
    plan.plain_passes = radix_passes(static_cast<std::uint64_t>(shape.size() - 1));
    std::size_t last_sort = 0;
    for (std::size_t q = n; q-- > 0;) {
        if (cls[to[q]] == IndexRole::Resting) {
            plan.levels.push_back({PlanLevel::Kind::Split, stride[q + 1], stride[q]});
            continue;
        }
        const std::size_t top = q;
        while (q > 0 && cls[to[q - 1]] == IndexRole::Rearrangement) {
            --q;
        }
        plan.levels.push_back({PlanLevel::Kind::Sort, stride[top + 1], stride[q]});
        last_sort = plan.levels.size();
        const auto max_key = static_cast<std::uint64_t>(stride[top + 1] / stride[q] - 1);
        plan.shaved_passes = std::max(plan.shaved_passes, radix_passes(max_key));
    }
    // Resting levels below the last sort need no work.
    plan.levels.resize(last_sort);
    return plan;
}

bool rp_should_shave(const SortPlan& plan, std::size_t nnz) {
    return plan.shaved_passes < plan.plain_passes && nnz >= kShaveCutoff;
}

namespace {

// Stable MSD radix sort of (liv, val) pairs on a key derived from the LIV,
// ping-ponging with scratch arrays. Short buckets are finished by an
// insertion sort on the full LIV: a bucket holds every element of one LIV
// interval of the region, so full-LIV order is already its final order.
template <class KeyFn>
class StableKeySort {
  public:
    StableKeySort(Liv* sl, double* sv, const KeyFn& key) : sl_(sl), sv_(sv), key_(key) {}

    // Sorts n elements at (l, v) using scratch from its start.
    void sort(Liv* l, double* v, std::size_t n, int shift) { in_place(l, v, sl_, sv_, n, shift); }

  private:
    struct Counts {
        std::array<std::size_t, kRadixBuckets> count{};
        std::size_t used = 0;
    };

    std::size_t digit(Liv liv, int shift) const {
        return static_cast<std::size_t>((key_(liv) >> shift) & (kRadixBuckets - 1));
    }

    Counts scatter(const Liv* l, const double* v, Liv* dl, double* dv, std::size_t n,
                   int shift) const {
        Counts c;
        for (std::size_t i = 0; i < n; ++i) {
            ++c.count[digit(l[i], shift)];
        }
        std::array<std::size_t, kRadixBuckets> pos{};
        std::size_t sum = 0;
        for (std::size_t d = 0; d < kRadixBuckets; ++d) {
            pos[d] = sum;
            sum += c.count[d];
            c.used += c.count[d] != 0;
        }
        if (c.used == 1) {
            return c;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t at = pos[digit(l[i], shift)]++;
            dl[at] = l[i];
            dv[at] = v[i];
        }
        return c;
    }

    // Result ends in (l, v).
    void in_place(Liv* l, double* v, Liv* sl, double* sv, std::size_t n, int shift) {
        while (shift >= 0) {
            if (n <= kInsertionCutoff) {
                detail::insertion_sort(l, n, v);
                return;
            }
            const Counts c = scatter(l, v, sl, sv, n, shift);
            shift -= static_cast<int>(kRadixBits);
            if (c.used == 1) {
                continue;
            }
            std::size_t start = 0;
            for (std::size_t d = 0; d < kRadixBuckets; ++d) {
                if (c.count[d] != 0) {
                    into(sl + start, sv + start, l + start, v + start, c.count[d], shift);
                }
                start += c.count[d];
            }
            return;
        }
    }

    // Result ends in (dl, dv); (l, v) is clobbered.
    void into(Liv* l, double* v, Liv* dl, double* dv, std::size_t n, int shift) {
        while (true) {
            if (shift < 0 || n <= kInsertionCutoff) {
                std::copy(l, l + n, dl);
                std::copy(v, v + n, dv);
                if (shift >= 0) {
                    detail::insertion_sort(dl, n, dv);
                }
                return;
            }
            const Counts c = scatter(l, v, dl, dv, n, shift);
            shift -= static_cast<int>(kRadixBits);
            if (c.used == 1) {
                continue;
            }
            std::size_t start = 0;
            for (std::size_t d = 0; d < kRadixBuckets; ++d) {
                if (c.count[d] != 0) {
                    in_place(dl + start, dv + start, l + start, v + start, c.count[d], shift);
                }
                start += c.count[d];
            }
            return;
        }
    }

    Liv* sl_;
    double* sv_;
    const KeyFn& key_;
};

class RegionPermuter {
  public:
    RegionPermuter(const SortPlan& plan, std::span<Liv> livs, std::span<double> vals)
        : levels_(plan.levels), livs_(livs), vals_(vals) {
        for (const PlanLevel& l : levels_) {
            upper_.emplace_back(l.upper);
            lower_.emplace_back(l.lower);
        }
    }

    void run() { process(0, 0, livs_.size()); }

    // The first level must be a Sort. Shuffles (src_l, src_v) straight into
    // the output while distributing on that level's top digit.
    void run_fused(std::span<const Liv> src_l, std::span<const double> src_v,
                   const LivShuffler& shuffle) {
        const PlanLevel& l = levels_[0];
        if (l.lower == 1) {
            fused_top(src_l, src_v, shuffle, [](Liv liv) { return static_cast<std::uint64_t>(liv); });
        } else {
            const FastDivisor& div = lower_[0];
            fused_top(src_l, src_v, shuffle,
                      [&div](Liv liv) { return static_cast<std::uint64_t>(div.quotient(liv)); });
        }
        process(1, 0, livs_.size());
    }

  private:
    int top_shift(const PlanLevel& l) const {
        return (radix_passes(static_cast<std::uint64_t>(l.upper / l.lower - 1)) - 1) *
               static_cast<int>(kRadixBits);
    }

    void ensure_scratch() {
        if (!scratch_livs_) {
            scratch_livs_.reset(new Liv[livs_.size()]);
            scratch_vals_.reset(new double[livs_.size()]);
        }
    }

    template <class KeyFn>
    void fused_top(std::span<const Liv> src_l, std::span<const double> src_v,
                   const LivShuffler& shuffle, const KeyFn& key) {
        const std::size_t n = src_l.size();
        const int shift = top_shift(levels_[0]);
        if (shift < 0) {
            for (std::size_t i = 0; i < n; ++i) {
                livs_[i] = shuffle(src_l[i]);
                vals_[i] = src_v[i];
            }
            return;
        }
        auto digit = [&](Liv liv) {
            return static_cast<std::size_t>((key(liv) >> shift) & (kRadixBuckets - 1));
        };
        std::array<std::size_t, kRadixBuckets> count{};
        for (std::size_t i = 0; i < n; ++i) {
            ++count[digit(shuffle(src_l[i]))];
        }
        std::array<std::size_t, kRadixBuckets> pos{};
        std::size_t sum = 0;
        for (std::size_t d = 0; d < kRadixBuckets; ++d) {
            pos[d] = sum;
            sum += count[d];
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Liv liv = shuffle(src_l[i]);
            const std::size_t at = pos[digit(liv)]++;
            livs_[at] = liv;
            vals_[at] = src_v[i];
        }
        const int rest = shift - static_cast<int>(kRadixBits);
        if (rest < 0) {
            return;
        }
        if (*std::max_element(count.begin(), count.end()) > kInsertionCutoff) {
            ensure_scratch();
        }
        StableKeySort<KeyFn> sorter(scratch_livs_.get(), scratch_vals_.get(), key);
        std::size_t start = 0;
        for (std::size_t d = 0; d < kRadixBuckets; ++d) {
            if (count[d] > 1) {
                sorter.sort(livs_.data() + start, vals_.data() + start, count[d], rest);
            }
            start += count[d];
        }
    }

    void process(std::size_t level, std::size_t lo, std::size_t hi) {
        const std::size_t n = hi - lo;
        if (n < 2 || level == levels_.size()) {
            return;
        }
        if (n <= kInsertionCutoff) {
            // Within a region every remaining level agrees with plain LIV order.
            detail::insertion_sort(livs_.data() + lo, n, vals_.data() + lo);
            return;
        }
        const PlanLevel& l = levels_[level];
        if (l.kind == PlanLevel::Kind::Split) {
            const FastDivisor& div = lower_[level];
            std::size_t i = lo;
            while (i < hi) {
                const Liv threshold = (div.quotient(livs_[i]) + 1) * l.lower;
                std::size_t j = i + 1;
                while (j < hi && livs_[j] < threshold) {
                    ++j;
                }
                process(level + 1, i, j);
                i = j;
            }
            return;
        }
        sort_region(level, lo, hi);
        process(level + 1, lo, hi);
    }

    void sort_region(std::size_t level, std::size_t lo, std::size_t hi) {
        const PlanLevel& l = levels_[level];
        const Liv base = upper_[level].quotient(livs_[lo]) * l.upper;
        const int shift = top_shift(l);
        if (shift < 0) {
            return;
        }
        ensure_scratch();
        if (l.lower == 1) {
            const auto key = [base](Liv liv) { return static_cast<std::uint64_t>(liv - base); };
            StableKeySort<decltype(key)>(scratch_livs_.get(), scratch_vals_.get(), key)
                .sort(livs_.data() + lo, vals_.data() + lo, hi - lo, shift);
        } else {
            const FastDivisor& div = lower_[level];
            const auto key = [base, &div](Liv liv) {
                return static_cast<std::uint64_t>(div.quotient(liv - base));
            };
            StableKeySort<decltype(key)>(scratch_livs_.get(), scratch_vals_.get(), key)
                .sort(livs_.data() + lo, vals_.data() + lo, hi - lo, shift);
        }
    }

    const std::vector<PlanLevel>& levels_;
    std::span<Liv> livs_;
    std::span<double> vals_;
    std::unique_ptr<Liv[]> scratch_livs_;
    std::unique_ptr<double[]> scratch_vals_;
    std::vector<FastDivisor> upper_;
    std::vector<FastDivisor> lower_;
};

} // namespace

namespace {

// `owned` is t itself when the caller gave up ownership, else null.
SparseTensor rp_impl(const SparseTensor& t, SparseTensor* owned, const LexOrder& new_lex,
                     PermuteOptions opts) {
    if (!t.is_sorted()) {
        throw precondition_error("rp_permute: input tensor must be sorted");
    }
    if (new_lex.order() != t.order()) {
        throw std::invalid_argument("rp_permute: lex order has wrong length");
    }
    if (new_lex == t.lex()) {
        return owned != nullptr ? std::move(*owned) : t;
    }
    const Shape shape = t.shape();
    const LexOrder old_lex = t.lex();
    const SortPlan plan = make_sort_plan(shape, old_lex, new_lex);
    const bool shave = opts.force_shave || rp_should_shave(plan, t.nnz());

    if (shave && !plan.levels.empty() && plan.levels[0].kind == PlanLevel::Kind::Sort) {
        std::vector<Liv> livs(t.nnz());
        std::vector<double> vals(t.nnz());
        RegionPermuter(plan, livs, vals)
            .run_fused(t.livs(), t.vals(), LivShuffler(shape, old_lex, new_lex));
        return TensorBuilder::adopt(shape, new_lex, std::move(livs), std::move(vals), true);
    }

    auto [livs, vals] = owned != nullptr ? std::move(*owned).release() : SparseTensor(t).release();
    shuffle_in_place(livs, shape, old_lex, new_lex);
    if (shave) {
        RegionPermuter(plan, livs, vals).run();
    } else {
        msd_radix_sort(std::span<Liv>(livs), std::span<double>(vals));
    }
    return TensorBuilder::adopt(shape, new_lex, std::move(livs), std::move(vals), true);
}

} // namespace

SparseTensor rp_permute(SparseTensor&& t, const LexOrder& new_lex, PermuteOptions opts) {
    return rp_impl(t, &t, new_lex, opts);
}

SparseTensor rp_permute(const SparseTensor& t, const LexOrder& new_lex, PermuteOptions opts) {
    return rp_impl(t, nullptr, new_lex, opts);
}

SparseTensor sort_tensor(SparseTensor t) {
    if (t.is_sorted()) {
        return t;
    }
    const Shape shape = t.shape();
    const LexOrder lex = t.lex();
    auto [livs, vals] = std::move(t).release();
    msd_radix_sort(std::span<Liv>(livs), std::span<double>(vals));
    std::size_t out = 0;
    for (std::size_t e = 0; e < livs.size(); ++e) {
        if (out > 0 && livs[out - 1] == livs[e]) {
            vals[out - 1] += vals[e];
        } else {
            livs[out] = livs[e];
            vals[out] = vals[e];
            ++out;
        }
    }
    livs.resize(out);
    vals.resize(out);
    return TensorBuilder::adopt(shape, lex, std::move(livs), std::move(vals), true);
}

SparseTensor radix_permute(const SparseTensor& t, const LexOrder& new_lex) {
    SparseTensor shuffled = shuffle_livs(t, new_lex);
    if (!t.is_sorted()) {
        return sort_tensor(std::move(shuffled));
    }
    if (shuffled.is_sorted()) {
        return shuffled;
    }
    const Shape shape = shuffled.shape();
    auto [livs, vals] = std::move(shuffled).release();
    msd_radix_sort(std::span<Liv>(livs), std::span<double>(vals));
    return TensorBuilder::adopt(shape, new_lex, std::move(livs), std::move(vals), true);
}

SparseTensor canonical(const SparseTensor& t) {
    const LexOrder id = LexOrder::identity(t.order());
    if (t.is_sorted()) {
        return t.lex() == id ? t : rp_permute(t, id);
    }
    return sort_tensor(shuffle_livs(t, id));
}

} // namespace lcot
