#include "vrrw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "vrrw/io.hpp"

namespace vrrw {

namespace {

using ojson = nlohmann::ordered_json;

std::pair<int64_t, int64_t> window_range(const Walk& w, int64_t from) {
    int64_t lo = w.range_hi(), hi = w.range_lo();
    for (int64_t x = w.range_lo(); x <= w.range_hi(); ++x)
        if (w.last_visit(x) >= from) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    return {lo, hi};
}

int64_t most_visited(const Walk& w) {
    int64_t best = w.range_lo();
    for (int64_t x = w.range_lo(); x <= w.range_hi(); ++x) {
        int64_t zx = w.ledger().z(x), zb = w.ledger().z(best);
        if (zx > zb || (zx == zb && std::llabs(x) < std::llabs(best)))
            best = x;
    }
    return best;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    if (n < 3)
        return std::numeric_limits<double>::quiet_NaN();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

std::string num(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace

LocalizationReport detect_localization(const Walk& w) {
    int64_t n = w.time();
    if (n < 10000)
        throw std::invalid_argument("detect_localization: run must have at least 1e4 steps");
    auto half = window_range(w, n - n / 2);
    auto tenth = window_range(w, n - n / 10);
    LocalizationReport r;
    r.localized = half == tenth;
    r.lo = tenth.first;
    r.hi = tenth.second;
    r.stabilization_step = w.newest_site_time();
    return r;
}

std::string ProfileReport::to_csv() const {
    std::ostringstream os;
    os << "i,ratio_plus,ratio_minus,slope_plus,slope_minus\n";
    for (const auto& r : rows)
        os << r.i << "," << num(r.ratio_plus) << "," << num(r.ratio_minus) << ","
           << num(r.slope_plus) << "," << num(r.slope_minus) << "\n";
    return os.str();
}

ProfileReport profile_compare(const Walk& w, const DiagnosticSeries& s,
                              const std::vector<GridFn>& psi) {
    if (!detect_localization(w).localized)
        throw std::invalid_argument("profile_compare: run is not localized");
    ProfileReport p;
    p.center = most_visited(w);
    p.n = w.time();
    int64_t imax = static_cast<int64_t>(psi.size());
    if (p.center - imax < s.probe_lo || p.center + imax > s.probe_hi)
        throw std::invalid_argument("profile_compare: probe window does not cover center +- " +
                                    std::to_string(imax));
    for (int64_t i = 1; i <= imax; ++i) {
        const GridFn& ps = psi[static_cast<size_t>(i - 1)];
        ProfileRow row;
        row.i = static_cast<int>(i);
        double pn = ps(static_cast<double>(p.n));
        row.ratio_plus = static_cast<double>(w.ledger().z(p.center + i)) / pn;
        row.ratio_minus = static_cast<double>(w.ledger().z(p.center - i)) / pn;
        for (int sign : {1, -1}) {
            size_t col = static_cast<size_t>(p.center + sign * i - s.probe_lo);
            std::vector<double> lx, ly;
            for (const auto& c : s.rows) {
                if (c.step < 1000)
                    continue;
                double z = static_cast<double>(c.z[col]), q = ps(static_cast<double>(c.step));
                if (z > 0 && q > 0) {
                    lx.push_back(std::log(q));
                    ly.push_back(std::log(z));
                }
            }
            (sign > 0 ? row.slope_plus : row.slope_minus) = ls_slope(lx, ly);
        }
        p.rows.push_back(row);
    }
    return p;
}

IdentityReport pathwise_identity_check(const WeightSpec& spec, const WalkKind& kind,
                                       uint64_t seed, int64_t n_steps, int x,
                                       const LedgerState& initial) {
    if (kind.type != WalkType::Box || kind.L != 4)
        throw std::invalid_argument("pathwise identity check needs the box walk on [0, 4]");
    if (x < 0 || x > 2)
        throw std::invalid_argument("pathwise identity check: x must lie in [0, 2]");
    RandomField field(seed);
    Walk w(spec, kind, initial);
    std::vector<double> Wd{0.0};
    auto Wsum = [&](int64_t m) {
        while (static_cast<int64_t>(Wd.size()) <= m)
            Wd.push_back(Wd.back() + 1.0 / w.w_int(static_cast<int64_t>(Wd.size()) - 1));
        return Wd[static_cast<size_t>(m)];
    };
    auto R = [&]() {
        const auto& l = w.ledger();
        return Wsum(l.z(x + 2)) - Wsum(l.z(x)) -
               (w.y_minus(x + 3) - w.y_plus(x - 1) + w.martingale(x + 1));
    };
    IdentityReport r;
    r.x = x;
    r.steps = n_steps;
    r.c0 = R();
    for (int64_t t = 0; t < n_steps; ++t) {
        w.step(field);
        r.max_residual = std::max(r.max_residual, std::abs(R() - r.c0));
    }
    return r;
}

std::vector<double> urn_balance(const Walk& w) {
    const auto& v = w.visits(0);
    if (v.size() < 100)
        throw std::runtime_error("urn_balance: site 0 visited " + std::to_string(v.size()) +
                                 " times, need at least 100");
    std::vector<double> out;
    for (const auto& e : v)
        if (e.z_left > 0 && e.z_right > 0)
            out.push_back(static_cast<double>(e.z_right) / static_cast<double>(e.z_left));
    return out;
}

MartingaleVarianceReport martingale_variance_check(const WeightSpec& spec,
                                                   const std::vector<uint64_t>& seeds,
                                                   int64_t first_checkpoint, int64_t n_steps,
                                                   int64_t site, double factor) {
    if (seeds.size() < 2 || first_checkpoint < 1 || n_steps < first_checkpoint)
        throw std::invalid_argument("martingale_variance_check: bad arguments");
    MartingaleVarianceReport r;
    for (int64_t t = first_checkpoint; t < n_steps; t *= 2)
        r.checkpoints.push_back(t);
    r.checkpoints.push_back(n_steps);
    std::vector<double> sum(r.checkpoints.size()), sum2(r.checkpoints.size());
    for (uint64_t seed : seeds) {
        RandomField field(seed);
        Walk w(spec, WalkKind::box(4));
        size_t c = 0;
        for (int64_t t = 1; t <= n_steps; ++t) {
            w.step(field);
            if (c < r.checkpoints.size() && t == r.checkpoints[c]) {
                double m = w.martingale(site);
                sum[c] += m;
                sum2[c] += m * m;
                ++c;
            }
        }
    }
    double n = static_cast<double>(seeds.size());
    for (size_t c = 0; c < sum.size(); ++c)
        r.variance.push_back((sum2[c] - sum[c] * sum[c] / n) / (n - 1));
    double vmax = *std::max_element(r.variance.begin(), r.variance.end());
    r.ratio = r.variance.front() > 0 ? vmax / r.variance.front()
                                     : std::numeric_limits<double>::infinity();
    r.bounded = r.ratio <= factor;
    return r;
}

TvReport endpoint_tv(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                     int n_steps, const std::vector<uint64_t>& seeds) {
    if (seeds.empty())
        throw std::invalid_argument("endpoint_tv: no seeds");
    Enumeration e = enumerate_exact(spec, kind, initial, n_steps);
    std::map<int64_t, double> emp;
    for (uint64_t s : seeds) {
        RandomField field(s);
        Walk w(spec, kind, initial);
        for (int i = 0; i < n_steps; ++i)
            w.step(field);
        emp[w.position()] += 1.0;
    }
    TvReport r;
    r.runs = seeds.size();
    r.exact_mass = e.total_mass;
    double N = static_cast<double>(seeds.size());
    std::set<int64_t> sites;
    for (auto& [x, p] : e.endpoint)
        sites.insert(x);
    for (auto& [x, c] : emp)
        sites.insert(x);
    for (int64_t x : sites) {
        double p = e.endpoint.count(x) ? e.endpoint.at(x) : 0.0;
        double q = emp.count(x) ? emp.at(x) / N : 0.0;
        r.tv += 0.5 * std::abs(p - q);
        r.se_radius += 0.5 * std::sqrt(p * (1 - p) / N);
    }
    return r;
}

HatSetup make_hat_setup(const WeightSpec& spec, double epsilon, bool strict_f) {
    OperatorContext ctx(spec);
    HatSetup h;
    if (epsilon > 0) {
        h.epsilon = epsilon;
    } else {
        IndexReport rep = index_limits(ctx, eta_grid(0.05, 5));
        h.i_plus = rep.i_plus;
        h.epsilon = choose_epsilon(ctx, rep.i_plus);
    }
    if (!(h.epsilon < 0.25))
        throw std::invalid_argument("hat walk: epsilon must be < 1/4 so that 1/2 + 2 eps < 1");
    FEta fe = build_f_eta(ctx, 0.5 + 2 * h.epsilon, std::min(1e10, spec.hull_top()), strict_f);
    h.f = std::make_shared<const GridFn>(fe.f);
    h.verified = fe.verified;
    h.warnings = fe.warnings;
    return h;
}

int default_threads() {
    if (const char* env = std::getenv("VRRW_LAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------- campaign

std::vector<std::string> CampaignConfig::validate() const {
    std::vector<std::string> err;
    if (version != 1)
        err.push_back("version: only version 1 is supported");
    if (weights.empty())
        err.push_back("weights: list is empty");
    for (const auto& w : weights) {
        try {
            WeightSpec::parse(w);
        } catch (const std::exception& e) {
            err.push_back("weights: '" + w + "': " + e.what());
        }
    }
    if (kinds.empty())
        err.push_back("kinds: list is empty");
    for (const auto& k : kinds) {
        try {
            parse_walk_type(k);
        } catch (const std::exception& e) {
            err.push_back(std::string("kinds: ") + e.what());
        }
    }
    for (const auto& [a, b] : couplings) {
        for (const auto& k : {a, b}) {
            try {
                parse_walk_type(k);
            } catch (const std::exception& e) {
                err.push_back(std::string("couplings: ") + e.what());
            }
        }
    }
    if (seeds.empty())
        err.push_back("seeds: list is empty");
    if (horizons.empty())
        err.push_back("horizons: list is empty");
    for (int64_t h : horizons)
        if (h < 10000)
            err.push_back("horizons: " + std::to_string(h) +
                          " is below 10000 steps (localization needs >= 1e4)");
    if (probe_lo > probe_hi)
        err.push_back("probes: lo exceeds hi");
    if (epsilon < 0 || epsilon >= 0.25)
        err.push_back("epsilon: must lie in [0, 0.25) (0 = choose from the index sweep)");
    if (!(gamma > 0 && gamma < 0.5))
        err.push_back("gamma: must lie in (0, 0.5)");
    if (L < 2)
        err.push_back("L: must be >= 2");
    if (box_L < 1)
        err.push_back("box_L: must be >= 1");
    if (identity_site < 0 || identity_site > 2)
        err.push_back("identity_site: must lie in [0, 2]");
    if (output_dir.empty())
        err.push_back("output_dir: must not be empty");
    return err;
}

std::string CampaignConfig::to_json() const {
    ojson j;
    j["version"] = version;
    j["weights"] = weights;
    j["kinds"] = kinds;
    j["seeds"] = seeds;
    j["horizons"] = horizons;
    j["probes"] = {probe_lo, probe_hi};
    j["epsilon"] = epsilon;
    j["gamma"] = gamma;
    j["L"] = L;
    j["box_L"] = box_L;
    j["couplings"] = ojson::array();
    for (const auto& [a, b] : couplings)
        j["couplings"].push_back({a, b});
    j["identity_site"] = identity_site;
    j["index_band"] = index_band;
    j["per_run_csv"] = per_run_csv;
    j["output_dir"] = output_dir;
    return j.dump(2);
}

CampaignConfig CampaignConfig::from_json(const std::string& text,
                                         std::vector<std::string>& errors) {
    CampaignConfig c;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        errors.push_back(std::string("config: not valid JSON: ") + e.what());
        return c;
    }
    if (!j.is_object()) {
        errors.push_back("config: top level must be an object");
        return c;
    }
    static const std::set<std::string> known{
        "version", "weights", "kinds",         "seeds",       "horizons",
        "probes",  "epsilon", "gamma",         "L",           "box_L",
        "couplings", "identity_site", "index_band", "per_run_csv", "output_dir"};
    for (auto& [k, v] : j.items())
        if (!known.count(k))
            errors.push_back("config: unknown key '" + k + "'");
    auto get = [&](const char* key, auto& dst) {
        if (!j.contains(key))
            return;
        try {
            j.at(key).get_to(dst);
        } catch (const std::exception& e) {
            errors.push_back(std::string("config: '") + key + "' has the wrong type");
        }
    };
    get("version", c.version);
    get("weights", c.weights);
    get("kinds", c.kinds);
    if (j.contains("seeds")) {
        try {
            if (j["seeds"].is_string())
                c.seeds = parse_seed_list(j["seeds"].get<std::string>());
            else
                j["seeds"].get_to(c.seeds);
        } catch (const std::exception& e) {
            errors.push_back(std::string("config: 'seeds': ") + e.what());
        }
    }
    get("horizons", c.horizons);
    if (j.contains("probes")) {
        std::vector<int64_t> p;
        get("probes", p);
        if (p.size() == 2) {
            c.probe_lo = p[0];
            c.probe_hi = p[1];
        } else {
            errors.push_back("config: 'probes' must be [lo, hi]");
        }
    }
    get("epsilon", c.epsilon);
    get("gamma", c.gamma);
    get("L", c.L);
    get("box_L", c.box_L);
    if (j.contains("couplings")) {
        std::vector<std::vector<std::string>> pairs;
        get("couplings", pairs);
        for (auto& p : pairs) {
            if (p.size() != 2)
                errors.push_back("config: each coupling must be [left, right]");
            else
                c.couplings.emplace_back(p[0], p[1]);
        }
    }
    get("identity_site", c.identity_site);
    get("index_band", c.index_band);
    get("per_run_csv", c.per_run_csv);
    get("output_dir", c.output_dir);
    return c;
}

namespace {

struct WeightCtx {
    WeightSpec spec = WeightSpec::linear(1);
    bool hat_ready = false;
    HatSetup hat;
    std::string hat_error;
    bool band = false;
    int i_minus = kInfinite, i_plus = kInfinite;
    std::string band_error;
};

struct Job {
    size_t weight = 0;
    size_t kind = 0;     // index into kinds or couplings
    size_t horizon = 0;
    size_t seed = 0;
    bool coupling = false;
};

struct JobResult {
    LocalizationReport loc;
    std::vector<double> share;
    double identity = -1;
    CouplingRecord record;
    bool good_event_checked = false;
    std::string csv;
    std::string error;
};

WalkKind make_kind(const std::string& name, const CampaignConfig& cfg, const WeightCtx& wc) {
    switch (parse_walk_type(name)) {
    case WalkType::Vrrw:
        return WalkKind::vrrw();
    case WalkType::Reflected:
        return WalkKind::reflected();
    case WalkType::Tilde:
        return WalkKind::tilde();
    case WalkType::Breve:
        return WalkKind::breve(cfg.gamma);
    case WalkType::Box:
        return WalkKind::box(cfg.box_L);
    case WalkType::Hat:
    case WalkType::HatRestricted:
        if (!wc.hat_ready)
            throw std::runtime_error("hat walk unavailable for " + wc.spec.name() + ": " +
                                     wc.hat_error);
        return name == "hat" ? WalkKind::hat(wc.hat.epsilon, wc.hat.f)
                             : WalkKind::hat_restricted(cfg.L, wc.hat.epsilon, wc.hat.f);
    }
    throw std::logic_error("unreachable");
}

JobResult run_job(const Job& job, const CampaignConfig& cfg, const std::vector<WeightCtx>& wcs) {
    JobResult r;
    const WeightCtx& wc = wcs[job.weight];
    int64_t n = cfg.horizons[job.horizon];
    uint64_t seed = cfg.seeds[job.seed];
    if (job.coupling) {
        const auto& [a, b] = cfg.couplings[job.kind];
        r.record = paired_simulate(wc.spec, make_kind(a, cfg, wc), make_kind(b, cfg, wc), {},
                                   seed, n);
        return r;
    }
    WalkKind kind = make_kind(cfg.kinds[job.kind], cfg, wc);
    SimOptions so;
    so.probe_lo = cfg.probe_lo;
    so.probe_hi = cfg.probe_hi;
    SimResult sim = simulate(wc.spec, kind, {}, RandomField(seed), n, so);
    r.loc = detect_localization(sim.walk);
    int64_t c = most_visited(sim.walk);
    for (int64_t d = cfg.probe_lo; d <= cfg.probe_hi; ++d)
        r.share.push_back(static_cast<double>(sim.walk.ledger().z(c + d)) /
                          static_cast<double>(n + 1));
    if (kind.type == WalkType::Box && kind.L == 4)
        r.identity = pathwise_identity_check(wc.spec, kind, seed, n, cfg.identity_site)
                         .max_residual;
    if (cfg.per_run_csv)
        r.csv = sim.series.to_csv();
    return r;
}

} // namespace

CampaignOutput run_campaign(const CampaignConfig& cfg, int threads) {
    auto errs = cfg.validate();
    if (!errs.empty()) {
        std::string msg = "invalid campaign config:";
        for (auto& e : errs)
            msg += "\n  " + e;
        throw std::invalid_argument(msg);
    }
    bool any_hat = false;
    for (const auto& k : cfg.kinds)
        any_hat |= k == "hat" || k == "hat-restricted";
    for (const auto& [a, b] : cfg.couplings)
        any_hat |= a == "hat" || a == "hat-restricted" || b == "hat" || b == "hat-restricted";

    std::vector<WeightCtx> wcs;
    for (const auto& name : cfg.weights) {
        WeightCtx wc;
        wc.spec = WeightSpec::parse(name);
        if (cfg.index_band) {
            try {
                OperatorContext ctx(wc.spec);
                auto rep = index_limits(ctx, eta_grid(0.05, 5));
                wc.band = true;
                wc.i_minus = rep.i_minus;
                wc.i_plus = rep.i_plus;
            } catch (const std::exception& e) {
                wc.band_error = e.what();
            }
        }
        if (any_hat) {
            try {
                wc.hat = make_hat_setup(wc.spec, cfg.epsilon, false);
                wc.hat_ready = true;
            } catch (const std::exception& e) {
                wc.hat_error = e.what();
            }
        }
        wcs.push_back(std::move(wc));
    }

    std::vector<Job> jobs;
    for (size_t w = 0; w < cfg.weights.size(); ++w)
        for (size_t h = 0; h < cfg.horizons.size(); ++h) {
            for (size_t k = 0; k < cfg.kinds.size(); ++k)
                for (size_t s = 0; s < cfg.seeds.size(); ++s)
                    jobs.push_back({w, k, h, s, false});
            for (size_t k = 0; k < cfg.couplings.size(); ++k)
                for (size_t s = 0; s < cfg.seeds.size(); ++s)
                    jobs.push_back({w, k, h, s, true});
        }

    std::vector<JobResult> results(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t i; (i = next.fetch_add(1)) < jobs.size();) {
            try {
                results[i] = run_job(jobs[i], cfg, wcs);
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };
    int nt = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (size_t i = 0; i < jobs.size(); ++i)
        if (!results[i].error.empty())
            throw std::runtime_error("campaign job failed (" + cfg.weights[jobs[i].weight] +
                                     ", seed " + std::to_string(cfg.seeds[jobs[i].seed]) +
                                     "): " + results[i].error);

    CampaignOutput out;
    ojson rep;
    rep["config"] = ojson::parse(cfg.to_json());
    rep["config"].erase("output_dir"); // report bytes do not depend on where they land
    rep["weights"] = ojson::array();
    size_t ji = 0;
    for (size_t w = 0; w < cfg.weights.size(); ++w) {
        const WeightCtx& wc = wcs[w];
        ojson jw;
        jw["weight"] = wc.spec.name();
        if (wc.band) {
            auto enc = [](int v) { return v == kInfinite ? ojson("inf") : ojson(v); };
            jw["index"] = {{"i_minus", enc(wc.i_minus)}, {"i_plus", enc(wc.i_plus)}};
            if (wc.i_minus != kInfinite && wc.i_plus != kInfinite)
                jw["index"]["conjectured_range_size"] = {2 * wc.i_minus + 1, 2 * wc.i_plus + 1};
        } else {
            jw["index"] = nullptr;
            if (cfg.index_band)
                jw["index_note"] = wc.band_error;
        }
        if (any_hat) {
            if (wc.hat_ready)
                jw["hat"] = {{"epsilon", wc.hat.epsilon}, {"f_verified", wc.hat.verified}};
            else
                jw["hat"] = {{"error", wc.hat_error}};
        }
        jw["runs"] = ojson::array();
        jw["couplings"] = ojson::array();
        for (size_t h = 0; h < cfg.horizons.size(); ++h) {
            int64_t n = cfg.horizons[h];
            for (size_t k = 0; k < cfg.kinds.size(); ++k) {
                std::map<int64_t, int64_t> hist;
                int64_t localized = 0;
                double stab = 0, idmax = -1;
                std::vector<double> share(
                    static_cast<size_t>(cfg.probe_hi - cfg.probe_lo + 1), 0.0);
                for (size_t s = 0; s < cfg.seeds.size(); ++s, ++ji) {
                    const JobResult& r = results[ji];
                    if (r.loc.localized) {
                        ++localized;
                        ++hist[r.loc.size()];
                    }
                    stab += static_cast<double>(r.loc.stabilization_step);
                    for (size_t d = 0; d < share.size(); ++d)
                        share[d] += r.share[d];
                    idmax = std::max(idmax, r.identity);
                    if (cfg.per_run_csv)
                        out.files.emplace_back("runs/" + file_tag(wc.spec.name()) + "_" +
                                                   cfg.kinds[k] + "_" + std::to_string(n) +
                                                   "_seed" + std::to_string(cfg.seeds[s]) +
                                                   ".csv",
                                               r.csv);
                }
                double runs = static_cast<double>(cfg.seeds.size());
                ojson jr;
                jr["kind"] = cfg.kinds[k];
                jr["horizon"] = n;
                jr["runs"] = cfg.seeds.size();
                jr["localized"] = localized;
                jr["localized_fraction"] = localized / runs;
                jr["range_size_histogram"] = ojson::object();
                int64_t mode = -1, best = 0;
                for (auto& [size, cnt] : hist) {
                    jr["range_size_histogram"][std::to_string(size)] = cnt;
                    if (cnt > best) {
                        best = cnt;
                        mode = size;
                    }
                }
                jr["range_size_mode"] = mode >= 0 ? ojson(mode) : ojson(nullptr);
                jr["mean_stabilization_step"] = stab / runs;
                if (idmax >= 0)
                    jr["identity_max_residual"] = idmax;
                std::string dat = "# offset_from_most_visited mean_share_of_time\n";
                for (size_t d = 0; d < share.size(); ++d)
                    dat += std::to_string(cfg.probe_lo + static_cast<int64_t>(d)) + " " +
                           num(share[d] / runs) + "\n";
                std::string dat_name = "profile_" + file_tag(wc.spec.name()) + "_" +
                                       cfg.kinds[k] + "_" + std::to_string(n) + ".dat";
                out.files.emplace_back(dat_name, dat);
                jr["profile_data"] = dat_name;
                jw["runs"].push_back(jr);
            }
            for (size_t k = 0; k < cfg.couplings.size(); ++k) {
                int64_t viol = 0, bad_runs = 0, rows = 0, inc = 0;
                for (size_t s = 0; s < cfg.seeds.size(); ++s, ++ji) {
                    const CouplingRecord& r = results[ji].record;
                    viol += r.violation_count;
                    bad_runs += r.violation_count > 0;
                    rows += r.rows_compared;
                    inc += r.rows_incomparable;
                }
                jw["couplings"].push_back({{"left", cfg.couplings[k].first},
                                           {"right", cfg.couplings[k].second},
                                           {"horizon", n},
                                           {"runs", cfg.seeds.size()},
                                           {"runs_with_violations", bad_runs},
                                           {"violations", viol},
                                           {"rows_compared", rows},
                                           {"rows_incomparable", inc}});
            }
        }
        rep["weights"].push_back(jw);
    }
    out.report_json = rep.dump(2) + "\n";
    return out;
}

void write_campaign(const CampaignOutput& out, const std::string& dir) {
    for (const auto& [name, content] : out.files)
        write_file_atomic(dir + "/" + name, content);
    write_file_atomic(dir + "/report.json", out.report_json);
}

} // namespace vrrw
