#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vrrw/grid_fn.hpp"
#include "vrrw/ledger.hpp"
#include "vrrw/random_field.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

enum class WalkType { Vrrw, Reflected, Tilde, Hat, HatRestricted, Breve, Box };

const char* walk_type_name(WalkType t);
// Accepts vrrw, reflected, tilde, hat, hat-restricted, breve, box.
WalkType parse_walk_type(const std::string& s);

constexpr int64_t kNoFloor = std::numeric_limits<int64_t>::min();
constexpr int64_t kNoCeiling = std::numeric_limits<int64_t>::max();

// Transition mechanism and its parameters.
//   vrrw            on Z, left ~ w(Z(x-1)), right ~ w(Z(x+1))
//   reflected       vrrw on [-1, inf), forced right at -1
//   tilde           on [-1, inf), left ~ w(Z(x-1)), right ~ w(N(x,x+1))
//   hat             on [-1, inf), right ~ w(N(0,1) + f(N(0,1))) at 0 and
//                   w((1+eps) N(x,x+1)) for x > 0
//   hat-restricted  hat on [-1, L], forced left at L
//   breve           tilde on [0, inf); at 0 holds w.p. 1-gamma, else right
//   box             vrrw on [0, L], forced right at 0 and left at L
struct WalkKind {
    WalkType type = WalkType::Vrrw;
    double epsilon = 0.0;
    int64_t L = 0;
    double gamma = 0.0;
    std::shared_ptr<const GridFn> f;

    static WalkKind vrrw();
    static WalkKind reflected();
    static WalkKind tilde();
    static WalkKind hat(double epsilon, std::shared_ptr<const GridFn> f);
    static WalkKind hat_restricted(int64_t L, double epsilon, std::shared_ptr<const GridFn> f);
    static WalkKind breve(double gamma);
    static WalkKind box(int64_t L = 4);

    int64_t floor() const;
    int64_t ceiling() const;
    bool is_hat() const { return type == WalkType::Hat || type == WalkType::HatRestricted; }
    // Throws std::invalid_argument on bad parameters.
    void validate() const;
    std::string name() const;
};

struct Kernel {
    double left = 0.0, hold = 0.0, right = 0.0;
};

// One visit to a site: the time sigma(x,k), the neighbour local times at
// that time and the move taken next (kPending while unknown).
struct Visit {
    static constexpr int8_t kPending = 2;
    int64_t time = 0;
    int64_t z_left = 0;
    int64_t z_right = 0;
    int8_t next = kPending;
};

struct WalkOptions {
    bool record_visits = false;
};

// A walk together with its evolving ledger. Time 0 counts as a visit to the
// origin, so Z_0(0) = z(0) + 1.
class Walk {
public:
    Walk(WeightSpec spec, WalkKind kind, LedgerState initial = {}, WalkOptions opt = {});

    Kernel kernel() const { return kernel_at(pos_); }
    Kernel kernel_at(int64_t x) const;

    // Draws U = U_i^x with i = Z_n(x) and moves: left iff U <= P(left); for
    // the breve walk at 0, right iff U >= 1 - gamma. Returns the move.
    int step(const RandomField& field);
    // Deterministic update with move in {-1, 0, +1}.
    void apply(int move);

    int64_t position() const { return pos_; }
    int64_t time() const { return time_; }
    const LedgerState& ledger() const { return ledger_; }
    const LedgerState& initial() const { return initial_; }
    const WeightSpec& spec() const { return spec_; }
    const WalkKind& kind() const { return kind_; }
    double last_uniform() const { return last_u_; }

    // Range visited during the run (time 0 included).
    int64_t range_lo() const { return range_lo_; }
    int64_t range_hi() const { return range_hi_; }
    // Last time the site was visited, -1 if never during the run.
    int64_t last_visit(int64_t x) const { return last_visit_.get(x) - 1; }
    // Time of the first visit to the most recently discovered site.
    int64_t newest_site_time() const { return newest_site_time_; }

    // Y^+(x) = sum over jumps x -> x+1 of 1/w(Z_k(x+1)), Y^-(x) likewise
    // for jumps x -> x-1; M(x) = Y^+(x) - Y^-(x).
    double y_plus(int64_t x) const { return y_plus_.get(x); }
    double y_minus(int64_t x) const { return y_minus_.get(x); }
    double martingale(int64_t x) const { return y_plus(x) - y_minus(x); }

    // Needs record_visits. Visits made during the run, in order.
    const std::vector<Visit>& visits(int64_t x) const;
    // sigma(x,k), or -1 when the k-th visit has not happened.
    int64_t sigma(int64_t x, int64_t k) const;

    // w at integer arguments, cached.
    double w_int(int64_t k) const;

private:
    double w_hat_origin(int64_t n) const;
    double w_hat_edge(int64_t n) const;

    WeightSpec spec_;
    WalkKind kind_;
    WalkOptions opt_;
    LedgerState initial_, ledger_;
    int64_t pos_ = 0, time_ = 0;
    int64_t range_lo_ = 0, range_hi_ = 0, newest_site_time_ = 0;
    double last_u_ = -1.0;
    SiteArray<int64_t> last_visit_; // stored as time + 1
    SiteArray<double> y_plus_, y_minus_;
    SiteArray<std::vector<Visit>> visits_;
    mutable std::vector<double> w_cache_, hat0_cache_, hat_cache_;
};

// Geometric checkpoint times 0 = t_0 < t_1 < ... < t_m = n, ratio >= 1.01.
std::vector<int64_t> checkpoint_times(int64_t n, double ratio = 1.25);

struct Checkpoint {
    int64_t step = 0;
    int64_t range_lo = 0, range_hi = 0;
    std::vector<int64_t> z;                  // probe sites
    std::vector<double> y_plus, y_minus, m;  // probe sites
    // Box walk only: I = min(Z(0), Z(4)), S = max(Z(0), Z(4)), K = max(Z(1), Z(3)).
    int64_t I = -1, S = -1, K = -1;
};

struct DiagnosticSeries {
    int64_t probe_lo = -8, probe_hi = 8;
    std::vector<Checkpoint> rows;
    std::string to_csv() const;
};

struct SimOptions {
    int64_t probe_lo = -8, probe_hi = 8;
    double checkpoint_ratio = 1.25;
    bool record_visits = false;
};

struct SimResult {
    Walk walk;
    DiagnosticSeries series;
};

SimResult simulate(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                   const RandomField& field, int64_t n_steps, const SimOptions& opt = {});

// Final-ledger JSON including position, time, range and kind.
std::string final_ledger_json(const Walk& w);

struct PathProb {
    std::vector<int64_t> path;
    double prob = 0.0;
};

struct Enumeration {
    std::vector<PathProb> paths;
    std::map<int64_t, double> endpoint;
    double total_mass = 0.0;
};

// Every trajectory of n_steps (<= 14) with its exact probability.
Enumeration enumerate_exact(const WeightSpec& spec, const WalkKind& kind,
                            const LedgerState& initial, int n_steps);

} // namespace vrrw
