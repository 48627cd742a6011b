#pragma once

// Allocation accounting for transient kernel storage. Containers using
// TrackingAllocator report every allocation to the AllocationProbe active on
// the current thread, if any.

#include <cstddef>
#include <memory>
#include <vector>

namespace lcot {

class AllocationProbe {
  public:
    AllocationProbe();
    ~AllocationProbe();
    AllocationProbe(const AllocationProbe&) = delete;
    AllocationProbe& operator=(const AllocationProbe&) = delete;

    /// Element count of every tracked allocation, in request order.
    const std::vector<std::size_t>& lengths() const noexcept { return lengths_; }
    std::size_t total_words() const noexcept { return total_bytes_ / 8; }
    std::size_t peak_words() const noexcept { return peak_bytes_ / 8; }
    std::size_t largest_length() const noexcept;

    static void record_allocate(std::size_t n, std::size_t bytes) noexcept;
    static void record_deallocate(std::size_t bytes) noexcept;

  private:
    AllocationProbe* previous_;
    std::vector<std::size_t> lengths_;
    std::size_t total_bytes_ = 0;
    std::size_t live_bytes_ = 0;
    std::size_t peak_bytes_ = 0;
};

template <class T>
struct TrackingAllocator {
    using value_type = T;

    TrackingAllocator() = default;
    template <class U>
    TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        T* p = std::allocator<T>{}.allocate(n);
        AllocationProbe::record_allocate(n, n * sizeof(T));
        return p;
    }
    void deallocate(T* p, std::size_t n) noexcept {
        AllocationProbe::record_deallocate(n * sizeof(T));
        std::allocator<T>{}.deallocate(p, n);
    }

    template <class U>
    bool operator==(const TrackingAllocator<U>&) const noexcept { return true; }
};

template <class T>
using scratch_vector = std::vector<T, TrackingAllocator<T>>;

} // namespace lcot
