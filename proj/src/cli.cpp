#include "vrrw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "vrrw/experiments.hpp"
#include "vrrw/io.hpp"

namespace vrrw {

namespace {

using ojson = nlohmann::ordered_json;

struct ValidationError : std::runtime_error {
    explicit ValidationError(std::vector<std::string> e)
        : std::runtime_error("validation failed"), errors(std::move(e)) {}
    std::vector<std::string> errors;
};

// Collects every problem before any work starts.
class Checks {
public:
    void add(const std::string& e) { errors_.push_back(e); }
    template <class F>
    void attempt(const std::string& what, F&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            add(what + ": " + e.what());
        }
    }
    void finish() const {
        if (!errors_.empty())
            throw ValidationError(errors_);
    }

private:
    std::vector<std::string> errors_;
};

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        write_file_atomic(path, content);
}

std::string fmt(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Walk parameters shared by simulate, couple, profile and verify.
struct KindOpts {
    double epsilon = 0.0;
    double gamma = 0.25;
    int64_t L = 0;
};

void add_kind_opts(CLI::App* sub, KindOpts& k) {
    sub->add_option("--epsilon", k.epsilon,
                    "hat perturbation eps in [0, 0.25); 0 picks it from the index sweep")
        ->capture_default_str();
    sub->add_option("--gamma", k.gamma, "breve holding parameter, in (0, 0.5)")
        ->capture_default_str();
    sub->add_option("--L", k.L,
                    "ceiling site: hat-restricted (default 6) or box (default 4); 0 = kind default")
        ->capture_default_str();
}

void check_kind_opts(Checks& c, const KindOpts& k) {
    if (!(k.epsilon >= 0 && k.epsilon < 0.25))
        c.add("--epsilon must lie in [0, 0.25)");
    if (!(k.gamma > 0 && k.gamma < 0.5))
        c.add("--gamma must lie in (0, 0.5)");
    if (k.L < 0 || k.L == 1)
        c.add("--L must be 0 (kind default) or >= 2");
}

WalkKind build_kind(const std::string& name, const WeightSpec& spec, const KindOpts& k,
                    std::ostream& err) {
    WalkType t = parse_walk_type(name);
    switch (t) {
    case WalkType::Vrrw:
        return WalkKind::vrrw();
    case WalkType::Reflected:
        return WalkKind::reflected();
    case WalkType::Tilde:
        return WalkKind::tilde();
    case WalkType::Breve:
        return WalkKind::breve(k.gamma);
    case WalkType::Box:
        return WalkKind::box(k.L > 0 ? k.L : 4);
    case WalkType::Hat:
    case WalkType::HatRestricted: {
        HatSetup h = make_hat_setup(spec, k.epsilon, false);
        for (const auto& w : h.warnings)
            err << "warning: " << w << "\n";
        return t == WalkType::Hat ? WalkKind::hat(h.epsilon, h.f)
                                  : WalkKind::hat_restricted(k.L > 0 ? k.L : 6, h.epsilon, h.f);
    }
    }
    throw std::logic_error("unreachable");
}

// ------------------------------------------------------------------- index

struct IndexArgs {
    std::string weight;
    std::string sweep = "0.45:0.55:11";
    double eta = 0;
    bool cross_check = false;
    int j_max = 8;
    std::string out = "-";
    std::string format = "json";
};

void setup_index(CLI::App& app, IndexArgs& a) {
    auto* s = app.add_subcommand("index", "iteration indices i_eta, j_eta and their limits at 1/2");
    s->add_option("--weight", a.weight, "weight, e.g. linear:1, power:2, polylog:0.6, critical")
        ->required();
    s->add_option("--eta-sweep", a.sweep, "eta grid lo:hi:n (must straddle 1/2)")
        ->capture_default_str();
    s->add_option("--eta", a.eta, "single eta in (0, 1); overrides --eta-sweep");
    s->add_flag("--cross-check", a.cross_check, "also run the Phi route for j_eta");
    s->add_option("--j-max", a.j_max, "iteration cap for j (count)")->capture_default_str();
    s->add_option("--out", a.out, "output file, - for stdout")->capture_default_str();
    s->add_option("--format", a.format, "json or csv")->capture_default_str();
}

int run_index(const IndexArgs& a, std::ostream& out) {
    Checks c;
    WeightSpec spec = WeightSpec::linear(1);
    c.attempt("--weight", [&] { spec = WeightSpec::parse(a.weight); });
    std::vector<double> etas;
    if (a.eta != 0) {
        if (!(a.eta > 0 && a.eta < 1))
            c.add("--eta must lie in (0, 1)");
        etas = {a.eta};
    } else {
        c.attempt("--eta-sweep", [&] { etas = parse_sweep(a.sweep); });
        if (!etas.empty() && !(etas.front() <= 0.5 && etas.back() >= 0.5))
            c.add("--eta-sweep must straddle 1/2");
        for (double e : etas)
            if (!(e > 0 && e < 1)) {
                c.add("--eta-sweep values must lie in (0, 1)");
                break;
            }
    }
    if (a.j_max < 3 || a.j_max > 32)
        c.add("--j-max must lie in [3, 32]");
    if (a.format != "json" && a.format != "csv")
        c.add("--format must be json or csv");
    c.finish();

    OperatorConfig oc;
    oc.j_max = a.j_max;
    OperatorContext ctx(spec, oc);
    auto enc = [](int v) { return v == kInfinite ? std::string("inf") : std::to_string(v); };
    auto enc_phi = [&](int v) { return a.cross_check ? enc(v) : std::string("not_run"); };
    if (etas.size() == 1) {
        EtaIndex r = index_at(ctx, etas[0], a.cross_check);
        if (a.format == "csv") {
            emit(a.out,
                 "eta,i,j,j_phi\n" + fmt(r.eta) + "," + enc(r.i) + "," + enc(r.j) + "," +
                     enc_phi(r.j_phi) + "\n",
                 out);
        } else {
            auto jv = [](int v) { return v == kInfinite ? ojson("inf") : ojson(v); };
            ojson j{{"weight", spec.name()},
                    {"eta", r.eta},
                    {"i", jv(r.i)},
                    {"j", jv(r.j)},
                    {"j_phi", a.cross_check ? jv(r.j_phi) : ojson("not_run")}};
            emit(a.out, j.dump(2) + "\n", out);
        }
        return kExitOk;
    }
    IndexReport rep = index_limits(ctx, etas, a.cross_check);
    if (a.format == "csv") {
        std::string s = "eta,i,j,j_phi\n";
        for (const auto& r : rep.rows)
            s += fmt(r.eta) + "," + enc(r.i) + "," + enc(r.j) + "," + enc_phi(r.j_phi) + "\n";
        emit(a.out, s, out);
    } else {
        emit(a.out, rep.to_json() + "\n", out);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
    std::string weight, kind = "vrrw";
    int64_t steps = 1000000;
    uint64_t seed = 1;
    std::string initial, probes = "-8:8";
    double ratio = 1.25;
    KindOpts k;
    std::string csv = "-", ledger;
};

void setup_simulate(CLI::App& app, SimArgs& a) {
    auto* s = app.add_subcommand("simulate", "run one walk and write checkpoints and final ledger");
    s->add_option("--weight", a.weight, "weight, e.g. linear:1")->required();
    s->add_option("--kind", a.kind,
                  "vrrw, reflected, tilde, hat, hat-restricted, breve or box")
        ->capture_default_str();
    s->add_option("--steps", a.steps, "horizon (steps)")->capture_default_str();
    s->add_option("--seed", a.seed, "random field seed")->capture_default_str();
    s->add_option("--initial", a.initial, "initial ledger JSON file (default: trivial state)");
    s->add_option("--probes", a.probes, "probe sites lo:hi")->capture_default_str();
    s->add_option("--checkpoint-ratio", a.ratio, "geometric checkpoint ratio (>= 1.01)")
        ->capture_default_str();
    add_kind_opts(s, a.k);
    s->add_option("--csv", a.csv, "checkpoint CSV file, - for stdout")->capture_default_str();
    s->add_option("--ledger", a.ledger, "final ledger JSON file (optional)");
}

LedgerState load_initial(Checks& c, const std::string& path) {
    LedgerState st;
    if (!path.empty())
        c.attempt("--initial", [&] { st = LedgerState::from_json(read_file(path)); });
    return st;
}

int run_simulate(const SimArgs& a, std::ostream& out, std::ostream& err) {
    Checks c;
    WeightSpec spec = WeightSpec::linear(1);
    c.attempt("--weight", [&] { spec = WeightSpec::parse(a.weight); });
    c.attempt("--kind", [&] { parse_walk_type(a.kind); });
    if (a.steps < 0)
        c.add("--steps must be >= 0");
    std::pair<int64_t, int64_t> probes{-8, 8};
    c.attempt("--probes", [&] { probes = parse_window(a.probes); });
    if (!(a.ratio >= 1.01))
        c.add("--checkpoint-ratio must be >= 1.01");
    check_kind_opts(c, a.k);
    LedgerState init = load_initial(c, a.initial);
    c.finish();

    WalkKind kind = build_kind(a.kind, spec, a.k, err);
    SimOptions so;
    so.probe_lo = probes.first;
    so.probe_hi = probes.second;
    so.checkpoint_ratio = a.ratio;
    SimResult r = simulate(spec, kind, init, RandomField(a.seed), a.steps, so);
    emit(a.csv, r.series.to_csv(), out);
    if (!a.ledger.empty())
        emit(a.ledger, final_ledger_json(r.walk) + "\n", out);
    return kExitOk;
}

// ------------------------------------------------------------------ couple

struct CoupleArgs {
    std::string left = "tilde", right = "reflected", weight;
    std::string seeds = "1..100";
    int64_t steps = 10000;
    int64_t good_event_M = -1;
    KindOpts k;
    std::string out = "-";
    int64_t replay_seed = -1, replay_step = -1;
};

void setup_couple(CLI::App& app, CoupleArgs& a) {
    auto* s = app.add_subcommand("couple", "check left < right pathwise under shared uniforms");
    s->add_option("--weight", a.weight, "weight, e.g. polylog:0.6")->required();
    s->add_option("--left", a.left, "left walk kind")->capture_default_str();
    s->add_option("--right", a.right, "right walk kind")->capture_default_str();
    s->add_option("--seeds", a.seeds, "seed list, e.g. 1..1000 or 3,5,8")->capture_default_str();
    s->add_option("--steps", a.steps, "horizon (steps)")->capture_default_str();
    s->add_option("--good-event-M", a.good_event_M,
                  "for a hat right walk: only count runs where the good event holds from "
                  "this time (steps); -1 disables")
        ->capture_default_str();
    add_kind_opts(s, a.k);
    s->add_option("--out", a.out, "summary JSON file, - for stdout")->capture_default_str();
    s->add_option("--replay-seed", a.replay_seed,
                  "replay one step of the left walk for this seed instead of coupling");
    s->add_option("--replay-step", a.replay_step, "time of the replayed step (steps)");
}

int run_couple(const CoupleArgs& a, std::ostream& out, std::ostream& err) {
    Checks c;
    WeightSpec spec = WeightSpec::linear(1);
    c.attempt("--weight", [&] { spec = WeightSpec::parse(a.weight); });
    c.attempt("--left", [&] { parse_walk_type(a.left); });
    c.attempt("--right", [&] { parse_walk_type(a.right); });
    std::vector<uint64_t> seeds;
    bool replay = a.replay_seed >= 0 || a.replay_step >= 0;
    if (replay) {
        if (a.replay_seed < 0 || a.replay_step < 0)
            c.add("--replay-seed and --replay-step must be given together, both >= 0");
    } else {
        c.attempt("--seeds", [&] { seeds = parse_seed_list(a.seeds); });
        if (a.steps < 0)
            c.add("--steps must be >= 0");
        if (a.good_event_M >= 0 && a.right != "hat" && a.right != "hat-restricted")
            c.add("--good-event-M needs a hat right walk");
    }
    check_kind_opts(c, a.k);
    c.finish();

    if (replay) {
        WalkKind kind = build_kind(a.left, spec, a.k, err);
        ReplayStep r = replay_step(spec, kind, {}, static_cast<uint64_t>(a.replay_seed),
                                   a.replay_step);
        emit(a.out, r.to_json() + "\n", out);
        return kExitOk;
    }
    WalkKind left = build_kind(a.left, spec, a.k, err);
    WalkKind right = build_kind(a.right, spec, a.k, err);
    int64_t L = right.type == WalkType::HatRestricted ? right.L : (a.k.L > 0 ? a.k.L : 6);
    int64_t runs = 0, bad_runs = 0, viol = 0, rows = 0, inc = 0, excluded = 0;
    ojson examples = ojson::array();
    for (uint64_t s : seeds) {
        if (a.good_event_M >= 0) {
            auto g = monitor_good_event(spec, right, {}, s, a.steps, L, a.good_event_M);
            if (!g.holds) {
                ++excluded;
                continue;
            }
        }
        CouplingRecord r = paired_simulate(spec, left, right, {}, s, a.steps);
        ++runs;
        viol += r.violation_count;
        rows += r.rows_compared;
        inc += r.rows_incomparable;
        if (!r.ok()) {
            ++bad_runs;
            if (examples.size() < 5)
                examples.push_back(ojson::parse(r.to_json()));
        }
    }
    ojson j{{"weight", spec.name()},
            {"left", left.name()},
            {"right", right.name()},
            {"steps", a.steps},
            {"seeds", seeds.size()},
            {"runs_compared", runs},
            {"runs_excluded_by_good_event", excluded},
            {"runs_with_violations", bad_runs},
            {"violations", viol},
            {"rows_compared", rows},
            {"rows_incomparable", inc},
            {"violating_records", examples}};
    emit(a.out, j.dump(2) + "\n", out);
    return kExitOk;
}

// ----------------------------------------------------------------- profile

struct ProfileArgs {
    std::string weight, kind = "vrrw";
    int64_t steps = 1000000;
    uint64_t seed = 1;
    int i_max = 2;
    KindOpts k;
    std::string out = "-";
};

void setup_profile(CLI::App& app, ProfileArgs& a) {
    auto* s = app.add_subcommand("profile", "compare local times with the Psi profile");
    s->add_option("--weight", a.weight, "weight with unbounded W, e.g. linear:1")->required();
    s->add_option("--kind", a.kind, "walk kind")->capture_default_str();
    s->add_option("--steps", a.steps, "horizon (steps, >= 10000)")->capture_default_str();
    s->add_option("--seed", a.seed, "random field seed")->capture_default_str();
    s->add_option("--i-max", a.i_max, "profile depth (sites from the center)")
        ->capture_default_str();
    add_kind_opts(s, a.k);
    s->add_option("--out", a.out, "CSV file, - for stdout")->capture_default_str();
}

int run_profile(const ProfileArgs& a, std::ostream& out, std::ostream& err) {
    Checks c;
    WeightSpec spec = WeightSpec::linear(1);
    c.attempt("--weight", [&] { spec = WeightSpec::parse(a.weight); });
    c.attempt("--kind", [&] { parse_walk_type(a.kind); });
    if (a.steps < 10000)
        c.add("--steps must be >= 10000");
    if (a.i_max < 1 || a.i_max > 6)
        c.add("--i-max must lie in [1, 6]");
    check_kind_opts(c, a.k);
    c.finish();

    OperatorContext ctx(spec);
    auto psi = psi_profile(ctx, a.i_max);
    WalkKind kind = build_kind(a.kind, spec, a.k, err);
    SimOptions so;
    so.probe_lo = -8 - a.i_max;
    so.probe_hi = 8 + a.i_max;
    SimResult r = simulate(spec, kind, {}, RandomField(a.seed), a.steps, so);
    ProfileReport p = profile_compare(r.walk, r.series, psi);
    emit(a.out, "# center " + std::to_string(p.center) + " n " + std::to_string(p.n) + "\n" +
                    p.to_csv(),
         out);
    return kExitOk;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::string check = "identity";
    std::string weight, kind = "vrrw";
    std::string seeds = "1..10";
    int64_t steps = 100000;
    int x = 1;
    int first_checkpoint = 100;
    KindOpts k;
    std::string out = "-";
};

void setup_verify(CLI::App& app, VerifyArgs& a) {
    auto* s = app.add_subcommand("verify", "pathwise identity, endpoint-law and martingale checks");
    s->add_option("--check", a.check, "identity, tv or martingale")->capture_default_str();
    s->add_option("--weight", a.weight, "weight, e.g. linear:1")->required();
    s->add_option("--kind", a.kind, "walk kind for --check tv")->capture_default_str();
    s->add_option("--seeds", a.seeds, "seed list, e.g. 1..50")->capture_default_str();
    s->add_option("--steps", a.steps, "horizon (steps; <= 14 for tv)")->capture_default_str();
    s->add_option("--x", a.x, "identity site in [0, 2]")->capture_default_str();
    s->add_option("--first-checkpoint", a.first_checkpoint,
                  "first martingale checkpoint (steps)")
        ->capture_default_str();
    add_kind_opts(s, a.k);
    s->add_option("--out", a.out, "JSON file, - for stdout")->capture_default_str();
}

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    Checks c;
    WeightSpec spec = WeightSpec::linear(1);
    c.attempt("--weight", [&] { spec = WeightSpec::parse(a.weight); });
    std::vector<uint64_t> seeds;
    c.attempt("--seeds", [&] { seeds = parse_seed_list(a.seeds); });
    if (a.check == "identity") {
        if (a.x < 0 || a.x > 2)
            c.add("--x must lie in [0, 2]");
        if (a.steps < 0)
            c.add("--steps must be >= 0");
    } else if (a.check == "tv") {
        c.attempt("--kind", [&] { parse_walk_type(a.kind); });
        if (a.steps < 0 || a.steps > 14)
            c.add("--steps must lie in [0, 14] for --check tv");
    } else if (a.check == "martingale") {
        if (seeds.size() < 2)
            c.add("--seeds needs at least two seeds for --check martingale");
        if (a.first_checkpoint < 1 || a.first_checkpoint > a.steps)
            c.add("--first-checkpoint must lie in [1, steps]");
    } else {
        c.add("--check must be identity, tv or martingale");
    }
    check_kind_opts(c, a.k);
    c.finish();

    ojson j{{"check", a.check}, {"weight", spec.name()}, {"steps", a.steps}};
    if (a.check == "identity") {
        WalkKind box = WalkKind::box(4);
        double worst = 0;
        ojson per = ojson::array();
        for (uint64_t s : seeds) {
            auto r = pathwise_identity_check(spec, box, s, a.steps, a.x);
            worst = std::max(worst, r.max_residual);
            per.push_back({{"seed", s}, {"max_residual", r.max_residual}});
        }
        j["x"] = a.x;
        j["max_residual"] = worst;
        j["runs"] = per;
    } else if (a.check == "tv") {
        WalkKind kind = build_kind(a.kind, spec, a.k, err);
        TvReport r = endpoint_tv(spec, kind, {}, static_cast<int>(a.steps), seeds);
        j["kind"] = kind.name();
        j["runs"] = r.runs;
        j["tv"] = r.tv;
        j["se_radius"] = r.se_radius;
        j["exact_mass"] = r.exact_mass;
    } else {
        auto r = martingale_variance_check(spec, seeds, a.first_checkpoint, a.steps);
        j["checkpoints"] = r.checkpoints;
        j["variance"] = r.variance;
        j["ratio"] = r.ratio;
        j["bounded"] = r.bounded;
    }
    emit(a.out, j.dump(2) + "\n", out);
    return kExitOk;
}

// ---------------------------------------------------------------- campaign

struct CampaignArgs {
    std::string config;
    std::vector<std::string> weights, kinds, horizons;
    std::string seeds, output_dir;
    int threads = 0;
};

void setup_campaign(CLI::App& app, CampaignArgs& a) {
    auto* s = app.add_subcommand("campaign", "seeds x kinds x weights, aggregated to report.json");
    s->add_option("--config", a.config, "campaign config JSON file");
    s->add_option("--weights", a.weights, "weights (overrides config)");
    s->add_option("--kinds", a.kinds, "walk kinds (overrides config)");
    s->add_option("--seeds", a.seeds, "seed list (overrides config)");
    s->add_option("--horizons", a.horizons, "horizons in steps (overrides config)");
    s->add_option("--output-dir", a.output_dir, "output directory (overrides config)");
    s->add_option("--threads", a.threads,
                  "worker threads; 0 = VRRW_LAB_THREADS or hardware concurrency")
        ->capture_default_str();
}

int run_campaign_cmd(const CampaignArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::string> errors;
    CampaignConfig cfg;
    if (!a.config.empty()) {
        try {
            cfg = CampaignConfig::from_json(read_file(a.config), errors);
        } catch (const std::exception& e) {
            errors.push_back(std::string("--config: ") + e.what());
        }
    }
    auto override_warn = [&](const char* key) {
        if (!a.config.empty())
            err << "warning: --" << key << " overrides the config file value\n";
    };
    if (!a.weights.empty()) {
        override_warn("weights");
        cfg.weights = a.weights;
    }
    if (!a.kinds.empty()) {
        override_warn("kinds");
        cfg.kinds = a.kinds;
    }
    if (!a.seeds.empty()) {
        override_warn("seeds");
        try {
            cfg.seeds = parse_seed_list(a.seeds);
        } catch (const std::exception& e) {
            errors.push_back(std::string("--seeds: ") + e.what());
        }
    }
    if (!a.horizons.empty()) {
        override_warn("horizons");
        cfg.horizons.clear();
        for (const auto& h : a.horizons) {
            try {
                size_t pos = 0;
                double v = std::stod(h, &pos);
                if (pos != h.size() || v != std::floor(v) || v < 0)
                    throw std::invalid_argument("not a non-negative integer");
                cfg.horizons.push_back(static_cast<int64_t>(v));
            } catch (const std::exception&) {
                errors.push_back("--horizons: '" + h + "' is not a step count");
            }
        }
    }
    if (!a.output_dir.empty()) {
        override_warn("output-dir");
        cfg.output_dir = a.output_dir;
    }
    if (a.threads < 0)
        errors.push_back("--threads must be >= 0");
    for (auto& e : cfg.validate())
        errors.push_back(e);
    if (!errors.empty())
        throw ValidationError(errors);

    int threads = a.threads > 0 ? a.threads : default_threads();
    CampaignOutput res = run_campaign(cfg, threads);
    write_campaign(res, cfg.output_dir);
    out << "wrote " << cfg.output_dir << "/report.json (" << res.files.size() + 1
        << " files)\n";
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"operator indices, reinforced walk simulation and couplings", "vrrw_lab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "help for every subcommand");
    IndexArgs ia;
    SimArgs sa;
    CoupleArgs ca;
    ProfileArgs pa;
    VerifyArgs va;
    CampaignArgs cam;
    setup_index(app, ia);
    setup_simulate(app, sa);
    setup_couple(app, ca);
    setup_profile(app, pa);
    setup_verify(app, va);
    setup_campaign(app, cam);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    try {
        if (app.got_subcommand("index"))
            return run_index(ia, out);
        if (app.got_subcommand("simulate"))
            return run_simulate(sa, out, err);
        if (app.got_subcommand("couple"))
            return run_couple(ca, out, err);
        if (app.got_subcommand("profile"))
            return run_profile(pa, out, err);
        if (app.got_subcommand("verify"))
            return run_verify(va, out, err);
        if (app.got_subcommand("campaign"))
            return run_campaign_cmd(cam, out, err);
    } catch (const ValidationError& e) {
        for (const auto& m : e.errors)
            err << "error: " << m << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitValidation;
}

} // namespace vrrw
