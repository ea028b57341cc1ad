#pragma once

#include <array>
#include <cstdint>

namespace vrrw {

// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<uint32_t, 4>;
using PhiloxKey = std::array<uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Counter-based field of uniforms U_i^x keyed by (seed, site, visit index).
// No state: any (x, i) can be queried in any order, from any thread, and
// always returns the same value.
class RandomField {
public:
    explicit RandomField(uint64_t seed = 0) : seed_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform(int64_t site, uint64_t visit) const;

    // Extra independent stream for non-walk randomness (e.g. test fixtures).
    double uniform_aux(uint64_t stream, uint64_t index) const;

    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
};

} // namespace vrrw
