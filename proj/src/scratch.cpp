#include "lcot/scratch.hpp"

#include <algorithm>

namespace lcot {

namespace {
thread_local AllocationProbe* active_probe = nullptr;
}

AllocationProbe::AllocationProbe() : previous_(active_probe) { active_probe = this; }

AllocationProbe::~AllocationProbe() { active_probe = previous_; }

std::size_t AllocationProbe::largest_length() const noexcept {
    return lengths_.empty() ? 0 : *std::max_element(lengths_.begin(), lengths_.end());
}

void AllocationProbe::record_allocate(std::size_t n, std::size_t bytes) noexcept {
    AllocationProbe* p = active_probe;
    if (p == nullptr) {
        return;
    }
    try {
        p->lengths_.push_back(n);
    } catch (...) {
    }
    p->total_bytes_ += bytes;
    p->live_bytes_ += bytes;
    p->peak_bytes_ = std::max(p->peak_bytes_, p->live_bytes_);
}

void AllocationProbe::record_deallocate(std::size_t bytes) noexcept {
    AllocationProbe* p = active_probe;
    if (p == nullptr) {
        return;
    }
    p->live_bytes_ -= std::min(bytes, p->live_bytes_);
}

} // namespace lcot
