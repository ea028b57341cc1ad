#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vrrw/coupling.hpp"
#include "vrrw/operators.hpp"
#include "vrrw/walks.hpp"

namespace vrrw {

struct LocalizationReport {
    bool localized = false;
    int64_t lo = 0, hi = 0;          // range over the last 10% of steps
    int64_t stabilization_step = 0;  // first visit to the newest site
    int64_t size() const { return hi - lo + 1; }
};

// Localized iff the range over the last 50% of steps equals the range over
// the last 10%. Needs at least 1e4 steps.
LocalizationReport detect_localization(const Walk& w);

struct ProfileRow {
    int i = 0;
    double ratio_plus = 0, ratio_minus = 0; // Z(c +- i) / Psi_i(n)
    double slope_plus = 0, slope_minus = 0; // log Z vs log Psi_i over checkpoints
};

struct ProfileReport {
    int64_t center = 0;
    int64_t n = 0;
    std::vector<ProfileRow> rows;
    std::string to_csv() const;
};

// psi[i-1] = Psi_{1/2,i}. Center = most visited site; checkpoints come from
// the probe series, which must cover center +- psi.size().
ProfileReport profile_compare(const Walk& w, const DiagnosticSeries& s,
                              const std::vector<GridFn>& psi);

struct IdentityReport {
    int x = 0;
    int64_t steps = 0;
    double c0 = 0;            // value at time 0
    double max_residual = 0;  // max_n |R_n - R_0|
};

// Runs the box walk on [0, 4] and tracks
//   R_n = W(Z(x+2)) - W(Z(x)) - [Y^-(x+3) - Y^+(x-1) + M(x+1)]
// with W(m) = sum_{i<m} 1/w(i). x must lie in [0, 2].
IdentityReport pathwise_identity_check(const WeightSpec& spec, const WalkKind& kind,
                                       uint64_t seed, int64_t n_steps, int x,
                                       const LedgerState& initial = {});

// Z(1)/Z(-1) at every visit to 0 where both counts are positive. The walk
// must record visits and have visited 0 at least 100 times.
std::vector<double> urn_balance(const Walk& w);

struct MartingaleVarianceReport {
    std::vector<int64_t> checkpoints;
    std::vector<double> variance;
    double ratio = 0; // max variance / variance at the first checkpoint
    bool bounded = false;
};

// Empirical variance of M_n(site) across seeds for the box walk.
MartingaleVarianceReport martingale_variance_check(const WeightSpec& spec,
                                                   const std::vector<uint64_t>& seeds,
                                                   int64_t first_checkpoint, int64_t n_steps,
                                                   int64_t site = 2, double factor = 4.0);

struct TvReport {
    double tv = 0;
    double se_radius = 0; // (1/2) sum_x sqrt(p(1-p)/N)
    double exact_mass = 0;
    size_t runs = 0;
    bool within(double k) const { return tv <= k * se_radius; }
};

// Endpoint law of n_steps from enumerate_exact against seeded simulation.
TvReport endpoint_tv(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                     int n_steps, const std::vector<uint64_t>& seeds);

// Parameters for the hat walks of a weight: eps with i_{1/2+3 eps} = i_+
// and f = f_{1/2+2 eps}.
struct HatSetup {
    double epsilon = 0;
    int i_plus = kInfinite;
    std::shared_ptr<const GridFn> f;
    bool verified = false;
    std::vector<std::string> warnings;
};
// epsilon > 0 skips the index sweep.
HatSetup make_hat_setup(const WeightSpec& spec, double epsilon = 0.0, bool strict_f = false);

struct CampaignConfig {
    int version = 1;
    std::vector<std::string> weights;
    std::vector<std::string> kinds;
    std::vector<uint64_t> seeds;
    std::vector<int64_t> horizons;
    int64_t probe_lo = -8, probe_hi = 8;
    double epsilon = 0.0; // 0: chosen from the index sweep
    double gamma = 0.25;
    int64_t L = 6;        // hat-restricted ceiling and good-event window
    int64_t box_L = 4;
    std::vector<std::pair<std::string, std::string>> couplings;
    int identity_site = 1;
    bool index_band = true;
    bool per_run_csv = false;
    std::string output_dir = "campaign_out";

    // Every problem found, not just the first.
    std::vector<std::string> validate() const;
    std::string to_json() const;
    // Unknown keys and type errors are appended to errors.
    static CampaignConfig from_json(const std::string& text, std::vector<std::string>& errors);
};

struct CampaignOutput {
    std::string report_json;
    std::vector<std::pair<std::string, std::string>> files; // relative path, content
};

// Deterministic for a fixed config regardless of thread count.
CampaignOutput run_campaign(const CampaignConfig& cfg, int threads);
void write_campaign(const CampaignOutput& out, const std::string& dir);

// VRRW_LAB_THREADS, else hardware concurrency, at least 1.
int default_threads();

} // namespace vrrw
