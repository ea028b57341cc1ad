#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrrw/walks.hpp"

namespace vrrw {

// One failed comparison at the matched clocks sigma(x,k) / sigma'(x,k).
struct OrderViolation {
    int64_t x = 0, k = 0;
    int64_t t_left = 0, t_right = 0;
    int64_t zl_left = 0, zl_right = 0; // Z(x-1) for the left / right walk
    int64_t zr_left = 0, zr_right = 0; // Z(x+1)
    int next_left = 0, next_right = 0;
    std::string what;
};

// Pathwise check of "left walk is at the left of right walk" over a horizon.
struct CouplingRecord {
    std::string weight, left_kind, right_kind;
    uint64_t seed = 0;
    int64_t n_steps = 0;
    int64_t rows_compared = 0;
    int64_t rows_incomparable = 0; // implication needs a move beyond the horizon
    int64_t violation_count = 0;
    std::vector<OrderViolation> violations; // first kMaxStored
    static constexpr size_t kMaxStored = 64;

    // Horizon summaries used by check_corollary_consequences.
    LedgerState left_final, right_final;
    int64_t left_tail_lo = 0, left_tail_hi = 0;   // range over the last quarter
    int64_t right_tail_lo = 0, right_tail_hi = 0;
    int64_t left_max = 0, right_max = 0;           // whole-run maxima

    bool ok() const { return violation_count == 0; }
    std::string to_json() const;
};

// Compare two finished walks run from the same field and initial state.
// Both must have been built with record_visits.
CouplingRecord compare_order(const Walk& left, const Walk& right);

CouplingRecord paired_simulate(const WeightSpec& spec, const WalkKind& left,
                               const WalkKind& right, const LedgerState& initial, uint64_t seed,
                               int64_t n_steps);

// Monitors the good event for a hat walk: for all n >= M,
//   Z_n(1) <= N_n(0,1) + f(N_n(0,1)),
//   Z_n(x) <= (1+eps) N_n(x-1,x) for x in [2, K],
//   Z_n(x) = Z_M(x) for x >= K,
// for some K <= L. The smallest admissible K is reported.
struct GoodEventResult {
    bool holds = false;
    int64_t K = -1;
    int64_t first_violation_step = -1;
};

class GoodEventMonitor {
public:
    GoodEventMonitor(int64_t L, int64_t M);
    // Call once before stepping, then after every step.
    void observe(const Walk& w);
    GoodEventResult result() const;

private:
    void full_check(const Walk& w);
    void check_site(const Walk& w, int64_t x, int64_t n);

    int64_t L_, M_;
    bool checked_at_M_ = false;
    int64_t cond1_fail_ = -1;
    SiteArray<int64_t> first_bad_;          // time + 1
    SiteArray<int64_t> first_visit_after_; // time + 1
    int64_t max_moved_ = 0;                 // largest x >= 1 visited after M
};

// Runs a hat walk alone and reports the monitor.
GoodEventResult monitor_good_event(const WeightSpec& spec, const WalkKind& hat,
                                   const LedgerState& initial, uint64_t seed, int64_t n_steps,
                                   int64_t L, int64_t M);

// Finite-horizon surrogate: x0 is the leftmost site the right walk still
// visits in the last quarter. Checks Z_left(x) <= Z_right(x) for x > x0 and
// that the left walk's last-quarter maximum does not exceed the right's.
struct CorollaryReport {
    bool vacuous = false;
    int64_t x0 = 0;
    int64_t sites_checked = 0;
    int64_t sites_failed = 0;
    bool range_bound_ok = true;
    bool soft = true; // horizon-limited evidence, never a proof
};
CorollaryReport check_corollary_consequences(const CouplingRecord& r);

// Re-derive a single step of a run: state at time t and the move taken.
struct ReplayStep {
    int64_t time = 0;
    int64_t position = 0;
    int64_t visit_index = 0;
    double uniform = 0.0;
    Kernel kernel;
    int move = 0;
    std::string to_json() const;
};
ReplayStep replay_step(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                       uint64_t seed, int64_t t);

} // namespace vrrw
