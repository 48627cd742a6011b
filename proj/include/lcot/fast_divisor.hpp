#pragma once

// Division by a run-time invariant divisor using a precomputed multiplier.
// Valid for numerators in [0, 2^63 - 1], which covers every LIV.

#include <cstdint>
#include <stdexcept>

namespace lcot {

class FastDivisor {
  public:
    FastDivisor() : FastDivisor(1) {}

    explicit FastDivisor(std::int64_t divisor) : divisor_(divisor) {
        if (divisor < 1) {
            throw std::invalid_argument("FastDivisor: divisor must be >= 1");
        }
        const auto d = static_cast<std::uint64_t>(divisor);
        unsigned l = 0;
        while (l < 63 && (std::uint64_t{1} << l) < d) {
            ++l;
        }
        if ((d & (d - 1)) == 0) {
            pow2_ = true;
            shift_ = l;
            return;
        }
        // m = floor(2^(63+l) / d) + 1 fits in 64 bits because d > 2^(l-1).
        const unsigned __int128 num = static_cast<unsigned __int128>(1) << (63 + l);
        multiplier_ = static_cast<std::uint64_t>(num / d) + 1;
        shift_ = 63 + l;
    }

    std::int64_t quotient(std::int64_t x) const noexcept {
        const auto ux = static_cast<std::uint64_t>(x);
        if (pow2_) {
            return static_cast<std::int64_t>(ux >> shift_);
        }
        const auto prod = static_cast<unsigned __int128>(ux) * multiplier_;
        return static_cast<std::int64_t>(prod >> shift_);
    }

    std::int64_t remainder(std::int64_t x) const noexcept {
        return x - quotient(x) * divisor_;
    }

    struct DivMod {
        std::int64_t quotient;
        std::int64_t remainder;
    };

    DivMod divmod(std::int64_t x) const noexcept {
        const std::int64_t q = quotient(x);
        return {q, x - q * divisor_};
    }

    std::int64_t value() const noexcept { return divisor_; }

  private:
    std::int64_t divisor_ = 1;
    std::uint64_t multiplier_ = 0;
    unsigned shift_ = 0;
    bool pow2_ = false;
};

inline FastDivisor make_fast_divisor(std::int64_t d) { return FastDivisor(d); }

inline std::int64_t quotient(const FastDivisor& fd, std::int64_t x) noexcept {
    return fd.quotient(x);
}

} // namespace lcot
