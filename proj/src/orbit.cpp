#include "hk/orbit.hpp"

#include <atomic>

namespace hk {

namespace {
std::atomic<std::size_t> cap_{10000};
}

std::size_t orbit_cap() { return cap_.load(); }

void set_orbit_cap(std::size_t cap) {
    if (cap == 0) throw UserError("orbit cap must be positive");
    cap_.store(cap);
}

}  // namespace hk
