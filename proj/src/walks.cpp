#include "vrrw/walks.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vrrw {

const char* walk_type_name(WalkType t) {
    switch (t) {
    case WalkType::Vrrw:
        return "vrrw";
    case WalkType::Reflected:
        return "reflected";
    case WalkType::Tilde:
        return "tilde";
    case WalkType::Hat:
        return "hat";
    case WalkType::HatRestricted:
        return "hat-restricted";
    case WalkType::Breve:
        return "breve";
    case WalkType::Box:
        return "box";
    }
    return "?";
}

WalkType parse_walk_type(const std::string& s) {
    for (WalkType t : {WalkType::Vrrw, WalkType::Reflected, WalkType::Tilde, WalkType::Hat,
                       WalkType::HatRestricted, WalkType::Breve, WalkType::Box})
        if (s == walk_type_name(t))
            return t;
    throw std::invalid_argument("unknown walk kind '" + s +
                                "' (expected vrrw, reflected, tilde, hat, hat-restricted, "
                                "breve or box)");
}

WalkKind WalkKind::vrrw() { return {}; }

WalkKind WalkKind::reflected() {
    WalkKind k;
    k.type = WalkType::Reflected;
    return k;
}

WalkKind WalkKind::tilde() {
    WalkKind k;
    k.type = WalkType::Tilde;
    return k;
}

WalkKind WalkKind::hat(double epsilon, std::shared_ptr<const GridFn> f) {
    WalkKind k;
    k.type = WalkType::Hat;
    k.epsilon = epsilon;
    k.f = std::move(f);
    k.validate();
    return k;
}

WalkKind WalkKind::hat_restricted(int64_t L, double epsilon, std::shared_ptr<const GridFn> f) {
    WalkKind k = hat(epsilon, std::move(f));
    k.type = WalkType::HatRestricted;
    k.L = L;
    k.validate();
    return k;
}

WalkKind WalkKind::breve(double gamma) {
    WalkKind k;
    k.type = WalkType::Breve;
    k.gamma = gamma;
    k.validate();
    return k;
}

WalkKind WalkKind::box(int64_t L) {
    WalkKind k;
    k.type = WalkType::Box;
    k.L = L;
    k.validate();
    return k;
}

int64_t WalkKind::floor() const {
    switch (type) {
    case WalkType::Vrrw:
        return kNoFloor;
    case WalkType::Breve:
    case WalkType::Box:
        return 0;
    default:
        return -1;
    }
}

int64_t WalkKind::ceiling() const {
    return (type == WalkType::HatRestricted || type == WalkType::Box) ? L : kNoCeiling;
}

void WalkKind::validate() const {
    if (is_hat()) {
        if (!(epsilon > 0))
            throw std::invalid_argument("hat walk: epsilon must be > 0");
        if (!f)
            throw std::invalid_argument("hat walk: needs the function f");
    }
    if (type == WalkType::HatRestricted && L < 2)
        throw std::invalid_argument("hat-restricted walk: L must be >= 2");
    if (type == WalkType::Box && L < 1)
        throw std::invalid_argument("box walk: L must be >= 1");
    if (type == WalkType::Breve && !(gamma > 0 && gamma < 0.5))
        throw std::invalid_argument("breve walk: gamma must lie in (0, 1/2)");
}

std::string WalkKind::name() const {
    std::ostringstream os;
    os.precision(17);
    os << walk_type_name(type);
    if (is_hat())
        os << "(eps=" << epsilon;
    if (type == WalkType::HatRestricted)
        os << ",L=" << L;
    if (is_hat())
        os << ")";
    if (type == WalkType::Box)
        os << "(L=" << L << ")";
    if (type == WalkType::Breve)
        os << "(gamma=" << gamma << ")";
    return os.str();
}

Walk::Walk(WeightSpec spec, WalkKind kind, LedgerState initial, WalkOptions opt)
    : spec_(std::move(spec)), kind_(std::move(kind)), opt_(opt), initial_(std::move(initial)) {
    kind_.validate();
    if (!initial_.is_state())
        throw std::invalid_argument("initial state violates n(x,x+1) <= z(x+1)");
    if (!initial_.trivial() &&
        (initial_.support_lo() < kind_.floor() || initial_.support_hi() > kind_.ceiling()))
        throw std::invalid_argument("initial state has mass outside the range of " +
                                    kind_.name());
    ledger_ = initial_;
    ledger_.add_z(0);
    last_visit_.at(0) = 1;
    if (opt_.record_visits)
        visits_.at(0).push_back({0, ledger_.z(-1), ledger_.z(1), Visit::kPending});
}

double Walk::w_int(int64_t k) const {
    if (k < static_cast<int64_t>(w_cache_.size()))
        return w_cache_[static_cast<size_t>(k)];
    while (static_cast<int64_t>(w_cache_.size()) <= k)
        w_cache_.push_back(spec_.w(static_cast<double>(w_cache_.size())));
    return w_cache_[static_cast<size_t>(k)];
}

double Walk::w_hat_origin(int64_t n) const {
    while (static_cast<int64_t>(hat0_cache_.size()) <= n) {
        double N = static_cast<double>(hat0_cache_.size());
        hat0_cache_.push_back(spec_.w(N + (*kind_.f)(N)));
    }
    return hat0_cache_[static_cast<size_t>(n)];
}

double Walk::w_hat_edge(int64_t n) const {
    while (static_cast<int64_t>(hat_cache_.size()) <= n) {
        double N = static_cast<double>(hat_cache_.size());
        hat_cache_.push_back(spec_.w((1.0 + kind_.epsilon) * N));
    }
    return hat_cache_[static_cast<size_t>(n)];
}

Kernel Walk::kernel_at(int64_t x) const {
    if (x < kind_.floor() || x > kind_.ceiling())
        throw std::out_of_range("site " + std::to_string(x) + " outside the range of " +
                                kind_.name());
    Kernel k;
    if (x == kind_.floor()) {
        if (kind_.type == WalkType::Breve) {
            k.hold = 1.0 - kind_.gamma;
            k.right = kind_.gamma;
        } else {
            k.right = 1.0;
        }
        return k;
    }
    if (x == kind_.ceiling()) {
        k.left = 1.0;
        return k;
    }
    double a = w_int(ledger_.z(x - 1)), b;
    switch (kind_.type) {
    case WalkType::Tilde:
    case WalkType::Breve:
        b = w_int(ledger_.n(x));
        break;
    case WalkType::Hat:
    case WalkType::HatRestricted:
        b = x == 0 ? w_hat_origin(ledger_.n(0)) : w_hat_edge(ledger_.n(x));
        break;
    default:
        b = w_int(ledger_.z(x + 1));
    }
    k.left = a / (a + b);
    k.right = 1.0 - k.left;
    return k;
}

int Walk::step(const RandomField& field) {
    double u = field.uniform(pos_, static_cast<uint64_t>(ledger_.z(pos_)));
    last_u_ = u;
    Kernel k = kernel_at(pos_);
    int move;
    if (k.hold > 0)
        move = u < k.hold ? 0 : 1;
    else if (k.left == 0)
        move = 1;
    else
        move = u <= k.left ? -1 : 1;
    apply(move);
    return move;
}

void Walk::apply(int move) {
    int64_t x = pos_;
    if (move == 1) {
        y_plus_.at(x) += 1.0 / w_int(ledger_.z(x + 1));
        ledger_.add_n(x);
    } else if (move == -1) {
        y_minus_.at(x) += 1.0 / w_int(ledger_.z(x - 1));
    } else if (move != 0) {
        throw std::invalid_argument("Walk::apply: move must be -1, 0 or +1");
    }
    if (opt_.record_visits)
        visits_.at(x).back().next = static_cast<int8_t>(move);
    pos_ = x + move;
    if (pos_ < kind_.floor() || pos_ > kind_.ceiling())
        throw std::logic_error("walk left its range");
    ledger_.add_z(pos_);
    ++time_;
    last_visit_.at(pos_) = time_ + 1;
    if (pos_ < range_lo_ || pos_ > range_hi_) {
        range_lo_ = std::min(range_lo_, pos_);
        range_hi_ = std::max(range_hi_, pos_);
        newest_site_time_ = time_;
    }
    if (opt_.record_visits)
        visits_.at(pos_).push_back(
            {time_, ledger_.z(pos_ - 1), ledger_.z(pos_ + 1), Visit::kPending});
}

const std::vector<Visit>& Walk::visits(int64_t x) const {
    static const std::vector<Visit> none;
    if (!opt_.record_visits)
        throw std::logic_error("Walk::visits: visit recording is off");
    const auto* v = visits_.find(x);
    return v ? *v : none;
}

int64_t Walk::sigma(int64_t x, int64_t k) const {
    const auto& v = visits(x);
    int64_t idx = k - initial_.z(x) - 1;
    if (idx < 0 || idx >= static_cast<int64_t>(v.size()))
        return -1;
    return v[static_cast<size_t>(idx)].time;
}

std::vector<int64_t> checkpoint_times(int64_t n, double ratio) {
    if (!(ratio >= 1.01))
        throw std::invalid_argument("checkpoint ratio must be >= 1.01");
    std::vector<int64_t> t{0};
    double next = 1;
    while (true) {
        int64_t c = static_cast<int64_t>(std::ceil(next));
        if (c >= n)
            break;
        if (c > t.back())
            t.push_back(c);
        next *= ratio;
    }
    if (n > 0)
        t.push_back(n);
    return t;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Checkpoint take_checkpoint(const Walk& w, const SimOptions& opt) {
    Checkpoint c;
    c.step = w.time();
    c.range_lo = w.range_lo();
    c.range_hi = w.range_hi();
    for (int64_t x = opt.probe_lo; x <= opt.probe_hi; ++x) {
        c.z.push_back(w.ledger().z(x));
        c.y_plus.push_back(w.y_plus(x));
        c.y_minus.push_back(w.y_minus(x));
        c.m.push_back(w.martingale(x));
    }
    if (w.kind().type == WalkType::Box && w.kind().L == 4) {
        const auto& l = w.ledger();
        c.I = std::min(l.z(0), l.z(4));
        c.S = std::max(l.z(0), l.z(4));
        c.K = std::max(l.z(1), l.z(3));
    }
    return c;
}

} // namespace

std::string DiagnosticSeries::to_csv() const {
    std::ostringstream os;
    os << "step,range_lo,range_hi";
    for (const char* p : {"z", "yplus", "yminus", "m"})
        for (int64_t x = probe_lo; x <= probe_hi; ++x)
            os << "," << p << "[" << x << "]";
    bool box = !rows.empty() && rows.front().I >= 0;
    if (box)
        os << ",I,S,K";
    os << "\n";
    for (const auto& r : rows) {
        os << r.step << "," << r.range_lo << "," << r.range_hi;
        for (auto v : r.z)
            os << "," << v;
        for (const auto* vec : {&r.y_plus, &r.y_minus, &r.m})
            for (double v : *vec)
                os << "," << num(v);
        if (box)
            os << "," << r.I << "," << r.S << "," << r.K;
        os << "\n";
    }
    return os.str();
}

SimResult simulate(const WeightSpec& spec, const WalkKind& kind, const LedgerState& initial,
                   const RandomField& field, int64_t n_steps, const SimOptions& opt) {
    if (n_steps < 0)
        throw std::invalid_argument("simulate: n_steps must be >= 0");
    if (opt.probe_lo > opt.probe_hi)
        throw std::invalid_argument("simulate: empty probe window");
    SimResult r{Walk(spec, kind, initial, {opt.record_visits}), {}};
    r.series.probe_lo = opt.probe_lo;
    r.series.probe_hi = opt.probe_hi;
    auto times = checkpoint_times(n_steps, opt.checkpoint_ratio);
    size_t next = 0;
    for (int64_t t = 0;; ++t) {
        if (next < times.size() && times[next] == t) {
            r.series.rows.push_back(take_checkpoint(r.walk, opt));
            ++next;
        }
        if (t == n_steps)
            break;
        r.walk.step(field);
    }
    return r;
}

std::string final_ledger_json(const Walk& w) {
    nlohmann::ordered_json j;
    j["weight"] = w.spec().name();
    j["kind"] = w.kind().name();
    j["time"] = w.time();
    j["position"] = w.position();
    j["range"] = {w.range_lo(), w.range_hi()};
    j["state"] = nlohmann::ordered_json::parse(w.ledger().to_json());
    return j.dump(2) + "\n";
}

Enumeration enumerate_exact(const WeightSpec& spec, const WalkKind& kind,
                            const LedgerState& initial, int n_steps) {
    if (n_steps < 0 || n_steps > 14)
        throw std::invalid_argument("enumerate_exact: n_steps must lie in [0, 14]");
    Enumeration e;
    std::vector<int64_t> path{0};
    std::function<void(const Walk&, double)> rec = [&](const Walk& w, double p) {
        if (static_cast<int>(path.size()) == n_steps + 1) {
            e.paths.push_back({path, p});
            e.endpoint[w.position()] += p;
            e.total_mass += p;
            return;
        }
        Kernel k = w.kernel();
        for (auto [move, q] : {std::pair{-1, k.left}, {0, k.hold}, {1, k.right}}) {
            if (q <= 0)
                continue;
            Walk next = w;
            next.apply(move);
            path.push_back(next.position());
            rec(next, p * q);
            path.pop_back();
        }
    };
    rec(Walk(spec, kind, initial), 1.0);
    return e;
}

} // namespace vrrw
