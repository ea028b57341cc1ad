#include "vrrw/random_field.hpp"

namespace vrrw {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

inline double to_unit(uint32_t a, uint32_t b) {
    uint64_t bits = (static_cast<uint64_t>(a >> 5) << 26) | (b >> 6);
    return static_cast<double>(bits) * 0x1.0p-53;
}

} // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
    for (int r = 0; r < 10; ++r) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

double RandomField::uniform(int64_t site, uint64_t visit) const {
    uint64_t s = static_cast<uint64_t>(site);
    PhiloxCounter c{static_cast<uint32_t>(s), static_cast<uint32_t>(s >> 32),
                    static_cast<uint32_t>(visit), static_cast<uint32_t>(visit >> 32)};
    PhiloxKey k{static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)};
    auto r = philox4x32_10(c, k);
    return to_unit(r[0], r[1]);
}

double RandomField::uniform_aux(uint64_t stream, uint64_t index) const {
    // Second key word is flipped so aux draws never collide with site draws.
    PhiloxCounter c{static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
    PhiloxKey k{static_cast<uint32_t>(seed_), ~static_cast<uint32_t>(seed_ >> 32)};
    auto r = philox4x32_10(c, k);
    return to_unit(r[0], r[1]);
}

} // namespace vrrw
