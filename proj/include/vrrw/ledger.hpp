#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace vrrw {

// Dense per-site storage over a window that grows on demand. Reads outside
// the window return a default value; writes extend it geometrically.
template <class T>
class SiteArray {
public:
    T get(int64_t x) const {
        if (x < lo_ || x >= hi())
            return T{};
        return v_[static_cast<size_t>(x - lo_)];
    }
    const T* find(int64_t x) const {
        if (x < lo_ || x >= hi())
            return nullptr;
        return &v_[static_cast<size_t>(x - lo_)];
    }
    T& at(int64_t x) {
        if (x < lo_ || x >= hi())
            grow(x);
        return v_[static_cast<size_t>(x - lo_)];
    }
    int64_t lo() const { return lo_; }
    int64_t hi() const { return lo_ + static_cast<int64_t>(v_.size()); }
    bool empty() const { return v_.empty(); }

private:
    void grow(int64_t x) {
        if (v_.empty()) {
            lo_ = x - 8;
            v_.assign(17, T{});
            return;
        }
        int64_t span = static_cast<int64_t>(v_.size());
        int64_t nlo = lo_, nhi = hi();
        if (x < lo_)
            nlo = std::min(x, lo_ - span);
        else
            nhi = std::max(x + 1, nhi + span);
        std::vector<T> nv(static_cast<size_t>(nhi - nlo));
        for (size_t i = 0; i < v_.size(); ++i)
            nv[static_cast<size_t>(lo_ - nlo) + i] = std::move(v_[i]);
        v_ = std::move(nv);
        lo_ = nlo;
    }

    int64_t lo_ = 0;
    std::vector<T> v_;
};

// Site local times z(x) and oriented-edge local times n(x) := n(x, x+1).
class LedgerState {
public:
    int64_t z(int64_t x) const { return z_.get(x); }
    int64_t n(int64_t x) const { return n_.get(x); }
    void set_z(int64_t x, int64_t v);
    void set_n(int64_t x, int64_t v);
    void add_z(int64_t x);
    void add_n(int64_t x);

    // Smallest window [lo, hi] holding every non-zero count; lo > hi when
    // the state is trivial.
    int64_t support_lo() const;
    int64_t support_hi() const;
    bool trivial() const { return support_lo() > support_hi(); }

    // n(x, x+1) <= z(x+1) everywhere.
    bool is_state() const;
    // Edge support is an interval [a, b-1] with a <= 0 <= b, and
    // z(x) = n(x, x+1) + n(x-1, x) for all x.
    bool reachable() const;
    // z(x) = z(-x) and n(x, x+1) = n(-x-1, -x).
    bool symmetric() const;

    // {"z": {"site": count}, "n": {"site": count}} with zero entries omitted
    // and sites in ascending order.
    std::string to_json() const;
    // Accepts {"z": {...}, "n": {...}} or a final-ledger file wrapping it under "state".
    static LedgerState from_json(const std::string& text);

    bool operator==(const LedgerState& o) const;

private:
    SiteArray<int64_t> z_, n_;
};

// Mirror of the x >= 0 half: n(x,x+1) kept for x >= 0, n(x,x+1) = n(-x-1,-x)
// for x < 0, z recomputed from the edges. Input must be reachable and
// supported on [-1, inf) with n(0,1) >= n(-1,0).
LedgerState symmetrize_state(const LedgerState& s);

} // namespace vrrw
