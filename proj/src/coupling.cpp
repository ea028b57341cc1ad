#include "vrrw/coupling.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace vrrw {

namespace {

using ojson = nlohmann::ordered_json;

// Sites where either walk has a recorded visit.
std::pair<int64_t, int64_t> union_range(const Walk& a, const Walk& b) {
    return {std::min(a.range_lo(), b.range_lo()), std::max(a.range_hi(), b.range_hi())};
}

std::pair<int64_t, int64_t> tail_range(const Walk& w) {
    int64_t n = w.time(), from = n - n / 4;
    int64_t lo = w.range_hi(), hi = w.range_lo();
    for (int64_t x = w.range_lo(); x <= w.range_hi(); ++x)
        if (w.last_visit(x) >= from) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    return {lo, hi};
}

} // namespace

CouplingRecord compare_order(const Walk& left, const Walk& right) {
    if (!(left.initial() == right.initial()))
        throw std::invalid_argument("compare_order: walks start from different states");
    CouplingRecord r;
    r.weight = left.spec().name();
    r.left_kind = left.kind().name();
    r.right_kind = right.kind().name();
    r.n_steps = left.time();
    auto [lo, hi] = union_range(left, right);
    for (int64_t x = lo; x <= hi; ++x) {
        const auto& vl = left.visits(x);
        const auto& vr = right.visits(x);
        size_t m = std::min(vl.size(), vr.size());
        int64_t k0 = left.initial().z(x);
        for (size_t i = 0; i < m; ++i) {
            const Visit& a = vl[i];
            const Visit& b = vr[i];
            ++r.rows_compared;
            std::string what;
            if (a.z_left < b.z_left)
                what = "Z(x-1) of left walk below right walk";
            else if (a.z_right > b.z_right)
                what = "Z(x+1) of left walk above right walk";
            else if (a.next == 1 && b.next != 1) {
                if (b.next == Visit::kPending) {
                    ++r.rows_incomparable;
                    continue;
                }
                what = "left walk jumps right but right walk does not";
            } else if (a.next == Visit::kPending) {
                ++r.rows_incomparable;
                continue;
            }
            if (what.empty())
                continue;
            ++r.violation_count;
            if (r.violations.size() < CouplingRecord::kMaxStored)
                r.violations.push_back({x, k0 + static_cast<int64_t>(i) + 1, a.time, b.time,
                                        a.z_left, b.z_left, a.z_right, b.z_right, a.next, b.next,
                                        what});
        }
    }
    r.left_final = left.ledger();
    r.right_final = right.ledger();
    std::tie(r.left_tail_lo, r.left_tail_hi) = tail_range(left);
    std::tie(r.right_tail_lo, r.right_tail_hi) = tail_range(right);
    r.left_max = left.range_hi();
    r.right_max = right.range_hi();
    return r;
}

CouplingRecord paired_simulate(const WeightSpec& spec, const WalkKind& left,
                               const WalkKind& right, const LedgerState& initial, uint64_t seed,
                               int64_t n_steps) {
    if (n_steps < 0)
        throw std::invalid_argument("paired_simulate: n_steps must be >= 0");
    RandomField field(seed);
    Walk a(spec, left, initial, {true}), b(spec, right, initial, {true});
    for (int64_t t = 0; t < n_steps; ++t) {
        a.step(field);
        b.step(field);
    }
    CouplingRecord r = compare_order(a, b);
    r.seed = seed;
    return r;
}

std::string CouplingRecord::to_json() const {
    ojson j;
    j["weight"] = weight;
    j["left"] = left_kind;
    j["right"] = right_kind;
    j["seed"] = seed;
    j["steps"] = n_steps;
    j["rows_compared"] = rows_compared;
    j["rows_incomparable"] = rows_incomparable;
    j["violation_count"] = violation_count;
    j["violations"] = ojson::array();
    for (const auto& v : violations)
        j["violations"].push_back({{"x", v.x},
                                   {"k", v.k},
                                   {"t_left", v.t_left},
                                   {"t_right", v.t_right},
                                   {"z_xm1_left", v.zl_left},
                                   {"z_xm1_right", v.zl_right},
                                   {"z_xp1_left", v.zr_left},
                                   {"z_xp1_right", v.zr_right},
                                   {"next_left", v.next_left},
                                   {"next_right", v.next_right},
                                   {"what", v.what}});
    j["left_range_max"] = left_max;
    j["right_range_max"] = right_max;
    return j.dump();
}

GoodEventMonitor::GoodEventMonitor(int64_t L, int64_t M) : L_(L), M_(M) {
    if (L < 1 || M < 0)
        throw std::invalid_argument("good event monitor: need L >= 1 and M >= 0");
}

void GoodEventMonitor::check_site(const Walk& w, int64_t x, int64_t n) {
    const auto& l = w.ledger();
    bool bad = false;
    if (x == 1) {
        double N = static_cast<double>(l.n(0));
        bad = static_cast<double>(l.z(1)) > N + (*w.kind().f)(N);
        if (bad && cond1_fail_ < 0)
            cond1_fail_ = n;
        return;
    }
    if (x >= 2)
        bad = static_cast<double>(l.z(x)) >
              (1.0 + w.kind().epsilon) * static_cast<double>(l.n(x - 1));
    if (bad && first_bad_.get(x) == 0)
        first_bad_.at(x) = n + 1;
}

void GoodEventMonitor::full_check(const Walk& w) {
    const auto& l = w.ledger();
    int64_t hi = std::max<int64_t>(l.support_hi(), 1);
    for (int64_t x = 1; x <= hi; ++x)
        check_site(w, x, w.time());
    checked_at_M_ = true;
}

void GoodEventMonitor::observe(const Walk& w) {
    if (!w.kind().is_hat())
        throw std::invalid_argument("good event monitor needs a hat walk");
    int64_t n = w.time();
    if (n < M_)
        return;
    if (!checked_at_M_) {
        full_check(w);
        return;
    }
    int64_t p = w.position();
    if (first_visit_after_.get(p) == 0)
        first_visit_after_.at(p) = n + 1;
    if (p >= 1)
        max_moved_ = std::max(max_moved_, p);
    check_site(w, p, n);
}

GoodEventResult GoodEventMonitor::result() const {
    GoodEventResult r;
    int64_t K = max_moved_ + 1;
    int64_t K_eff = std::min(K, L_);
    int64_t first = -1;
    auto note = [&](int64_t t) {
        if (t >= 0 && (first < 0 || t < first))
            first = t;
    };
    note(cond1_fail_);
    for (int64_t x = 2; x <= K_eff; ++x)
        note(first_bad_.get(x) - 1);
    if (K > L_)
        for (int64_t x = L_; x < first_visit_after_.hi(); ++x)
            note(first_visit_after_.get(x) - 1);
    r.holds = first < 0 && K <= L_;
    r.K = K <= L_ ? K : -1;
    r.first_violation_step = first;
    return r;
}

GoodEventResult monitor_good_event(const WeightSpec& spec, const WalkKind& hat,
                                   const LedgerState& initial, uint64_t seed, int64_t n_steps,
                                   int64_t L, int64_t M) {
    RandomField field(seed);
    Walk w(spec, hat, initial);
    GoodEventMonitor mon(L, M);
    mon.observe(w);
    for (int64_t t = 0; t < n_steps; ++t) {
        w.step(field);
        mon.observe(w);
    }
    return mon.result();
}

CorollaryReport check_corollary_consequences(const CouplingRecord& r) {
    CorollaryReport c;
    if (r.n_steps == 0) {
        c.vacuous = true;
        return c;
    }
    c.x0 = r.right_tail_lo;
    int64_t hi = std::max(r.left_max, r.right_max);
    for (int64_t x = c.x0 + 1; x <= hi; ++x) {
        ++c.sites_checked;
        if (r.left_final.z(x) > r.right_final.z(x))
            ++c.sites_failed;
    }
    c.range_bound_ok = r.left_tail_hi <= r.right_tail_hi;
    return c;
}

std::string ReplayStep::to_json() const {
    ojson j;
    j["time"] = time;
    j["position"] = position;
    j["visit_index"] = visit_index;
    j["uniform"] = uniform;
    j["p_left"] = kernel.left;
    j["p_hold"] = kernel.hold;
    j["p_right"] = kernel.right;
    j["move"] = move;
    return j.dump();
}

ReplayStep replay_step(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                       uint64_t seed, int64_t t) {
    if (t < 0)
        throw std::invalid_argument("replay: step must be >= 0");
    RandomField field(seed);
    Walk w(spec, kind, initial);
    for (int64_t i = 0; i < t; ++i)
        w.step(field);
    ReplayStep s;
    s.time = t;
    s.position = w.position();
    s.visit_index = w.ledger().z(w.position());
    s.kernel = w.kernel();
    s.move = w.step(field);
    s.uniform = w.last_uniform();
    return s;
}

} // namespace vrrw
