#include "vrrw/ledger.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace vrrw {

namespace {

void bump(int64_t& v) {
    if (v == std::numeric_limits<int64_t>::max())
        throw std::overflow_error("local time counter overflow");
    ++v;
}

} // namespace

void LedgerState::set_z(int64_t x, int64_t v) {
    if (v < 0)
        throw std::invalid_argument("negative site local time");
    if (v != 0 || (x >= z_.lo() && x < z_.hi()))
        z_.at(x) = v;
}

void LedgerState::set_n(int64_t x, int64_t v) {
    if (v < 0)
        throw std::invalid_argument("negative edge local time");
    if (v != 0 || (x >= n_.lo() && x < n_.hi()))
        n_.at(x) = v;
}

void LedgerState::add_z(int64_t x) { bump(z_.at(x)); }
void LedgerState::add_n(int64_t x) { bump(n_.at(x)); }

int64_t LedgerState::support_lo() const {
    int64_t best = std::numeric_limits<int64_t>::max();
    for (int64_t x = z_.lo(); x < z_.hi(); ++x)
        if (z_.get(x)) {
            best = x;
            break;
        }
    for (int64_t x = n_.lo(); x < n_.hi(); ++x)
        if (n_.get(x)) {
            best = std::min(best, x);
            break;
        }
    return best;
}

int64_t LedgerState::support_hi() const {
    int64_t best = std::numeric_limits<int64_t>::min();
    for (int64_t x = z_.hi() - 1; x >= z_.lo(); --x)
        if (z_.get(x)) {
            best = x;
            break;
        }
    for (int64_t x = n_.hi() - 1; x >= n_.lo(); --x)
        if (n_.get(x)) {
            best = std::max(best, x + 1);
            break;
        }
    return best;
}

bool LedgerState::is_state() const {
    for (int64_t x = n_.lo(); x < n_.hi(); ++x)
        if (n(x) > z(x + 1))
            return false;
    return true;
}

bool LedgerState::reachable() const {
    if (!is_state())
        return false;
    int64_t lo = std::min(z_.lo(), n_.lo() - 1), hi = std::max(z_.hi(), n_.hi() + 1);
    for (int64_t x = lo; x <= hi; ++x)
        if (z(x) != n(x) + n(x - 1))
            return false;
    // Edge support must be an interval containing an edge at 0 or touching it.
    int64_t a = 1, b = 0;
    bool any = false;
    for (int64_t x = n_.lo(); x < n_.hi(); ++x)
        if (n(x) > 0) {
            if (!any)
                a = x;
            else if (x != b)
                return false; // gap
            b = x + 1;
            any = true;
        }
    if (!any)
        return true;
    return a <= 0 && 0 <= b;
}

bool LedgerState::symmetric() const {
    int64_t r = std::max({std::abs(z_.lo()), std::abs(z_.hi()), std::abs(n_.lo()),
                          std::abs(n_.hi())}) + 1;
    for (int64_t x = 0; x <= r; ++x) {
        if (z(x) != z(-x))
            return false;
        if (n(x) != n(-x - 1))
            return false;
    }
    return true;
}

std::string LedgerState::to_json() const {
    nlohmann::ordered_json j;
    j["z"] = nlohmann::ordered_json::object();
    j["n"] = nlohmann::ordered_json::object();
    for (int64_t x = z_.lo(); x < z_.hi(); ++x)
        if (z(x))
            j["z"][std::to_string(x)] = z(x);
    for (int64_t x = n_.lo(); x < n_.hi(); ++x)
        if (n(x))
            j["n"][std::to_string(x)] = n(x);
    return j.dump();
}

LedgerState LedgerState::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("state JSON: ") + e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("state JSON: top level must be an object");
    // A final-ledger file carries the state under "state".
    if (j.contains("state"))
        return from_json(j["state"].dump());
    for (auto& [k, v] : j.items())
        if (k != "z" && k != "n")
            throw std::invalid_argument("state JSON: unknown key '" + k + "'");
    LedgerState s;
    auto read = [&](const char* key, bool site) {
        if (!j.contains(key))
            return;
        if (!j[key].is_object())
            throw std::invalid_argument(std::string("state JSON: '") + key +
                                        "' must be an object");
        for (auto& [k, v] : j[key].items()) {
            size_t pos = 0;
            int64_t x = std::stoll(k, &pos);
            if (pos != k.size())
                throw std::invalid_argument("state JSON: bad site key '" + k + "'");
            if (!v.is_number_integer() || v.get<int64_t>() < 0)
                throw std::invalid_argument("state JSON: counts must be non-negative integers");
            site ? s.set_z(x, v.get<int64_t>()) : s.set_n(x, v.get<int64_t>());
        }
    };
    read("z", true);
    read("n", false);
    if (!s.is_state())
        throw std::invalid_argument("state JSON: n(x,x+1) exceeds z(x+1) somewhere");
    return s;
}

bool LedgerState::operator==(const LedgerState& o) const {
    int64_t lo = std::min({z_.lo(), n_.lo(), o.z_.lo(), o.n_.lo()});
    int64_t hi = std::max({z_.hi(), n_.hi(), o.z_.hi(), o.n_.hi()});
    for (int64_t x = lo; x < hi; ++x)
        if (z(x) != o.z(x) || n(x) != o.n(x))
            return false;
    return true;
}

LedgerState symmetrize_state(const LedgerState& s) {
    if (!s.reachable())
        throw std::invalid_argument("symmetrize_state: input is not reachable");
    if (!s.trivial() && s.support_lo() < -1)
        throw std::invalid_argument("symmetrize_state: input must be supported on [-1, inf)");
    if (s.n(0) < s.n(-1))
        throw std::invalid_argument("symmetrize_state: needs n(0,1) >= n(-1,0)");
    LedgerState out;
    if (s.trivial())
        return out;
    int64_t hi = s.support_hi();
    for (int64_t x = 0; x <= hi; ++x) {
        out.set_n(x, s.n(x));
        out.set_n(-x - 1, s.n(x));
    }
    for (int64_t x = -hi - 1; x <= hi + 1; ++x)
        out.set_z(x, out.n(x) + out.n(x - 1));
    return out;
}

} // namespace vrrw
