#include "vrrw/operators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vrrw/quadrature.hpp"

namespace vrrw {

namespace {

using Quad = OperatorContext::Quad;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Quadrature points for cells [0, n_0], [n_0, n_1], ... Cells after the
// first use the variable log u when log_variable is set.
Quad make_quad(const WScale& ws, const std::vector<double>& nodes, int G, bool log_variable,
               bool with_kappa) {
    Quad q;
    q.nodes = nodes;
    q.G = G;
    q.log_variable = log_variable;
    const GaussRule& rule = gauss_legendre(G);
    q.weights = rule.weights;
    q.points.resize(nodes.size() * G);
    for (size_t c = 0; c < nodes.size(); ++c) {
        bool logv = log_variable && c > 0;
        double a = c == 0 ? 0.0 : (logv ? std::log(nodes[c - 1]) : nodes[c - 1]);
        double b = logv ? std::log(nodes[c]) : nodes[c];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int k = 0; k < G; ++k) {
            double p = mid + half * rule.nodes[k];
            q.points[c * G + k] = logv ? std::exp(p) : p;
        }
    }
    if (with_kappa) {
        q.lambda.resize(q.points.size());
        q.kappa.resize(q.points.size());
        for (size_t p = 0; p < q.points.size(); ++p) {
            q.lambda[p] = ws.lambda(q.points[p]);
            q.kappa[p] = ws.log_w_at_log(q.lambda[p]);
        }
    }
    return q;
}

// Cumulative integral over the cells of q. The integrand receives the point
// index and the point; the log-variable Jacobian is applied here.
template <class F>
std::vector<double> cumulative(const Quad& q, F&& integrand, size_t n_cells) {
    std::vector<double> out(n_cells);
    double acc = 0;
    for (size_t c = 0; c < n_cells; ++c) {
        bool logv = q.log_variable && c > 0;
        double a = c == 0 ? 0.0 : q.nodes[c - 1];
        double b = q.nodes[c];
        double width = logv ? std::log(b / a) : b - a;
        double sum = 0, wsum = 0;
        for (int k = 0; k < q.G; ++k) {
            size_t p = c * q.G + k;
            double v = integrand(p, q.points[p]);
            if (logv)
                v *= q.points[p];
            sum += q.weights[k] * v;
            wsum += q.weights[k];
        }
        acc += width * (sum / wsum);
        out[c] = acc;
    }
    return out;
}

Tail top_power_tail(const std::vector<double>& x, const std::vector<double>& v) {
    size_t n = x.size();
    if (v[n - 1] > 0 && v[n - 2] > 0) {
        double s = std::log(v[n - 1] / v[n - 2]) / std::log(x[n - 1] / x[n - 2]);
        if (std::isfinite(s) && s > 0)
            return {TailRule::Power, s};
    }
    return {TailRule::Constant, 0.0};
}

std::vector<double> with_breaks(std::vector<double> nodes, const std::vector<double>& breaks) {
    for (double b : breaks)
        if (b > nodes.front() && b < nodes.back())
            nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

GridFn make_fn(std::vector<double> nodes, std::vector<double> vals, std::vector<double> slopes) {
    Tail hi = top_power_tail(nodes, vals);
    return GridFn(std::move(nodes), std::move(vals), std::move(slopes), {TailRule::Power, 1.0},
                  hi);
}

// log w(e^t) - log w(e^(t - d)) written as d - [log ell(e^t) - log ell(e^(t-d))].
// For weights close to linear, t can be ~1e300 and the naive difference of
// two log-weights loses every digit.
double log_w_shift(const WeightSpec& spec, double t, double d) {
    return d - (spec.log_ell_at_log(t) - spec.log_ell_at_log(t - d));
}

void require_eta(double eta) {
    if (!(eta > 0 && eta < 1))
        throw std::invalid_argument("eta must lie in (0,1)");
}

} // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Bounded:
        return "bounded";
    case Verdict::Unbounded:
        return "unbounded";
    case Verdict::Undetermined:
        return "undetermined";
    }
    return "?";
}

TailClass classify_tail(const GridFn& f, const TailOptions& opt) {
    TailClass tc;
    double X = f.top();
    double lo = std::max(X / 100.0, f.bottom());
    double mid = std::max(std::sqrt(X), f.bottom());
    double fX = f(X), fl = f(lo), fm = f(mid);
    tc.fit_lo = lo;
    tc.fit_hi = X;
    tc.saturation_ratio = fm > 0 ? fX / fm : std::numeric_limits<double>::infinity();
    tc.fitted_exponent = (fX > 0 && fl > 0 && X > lo) ? std::log(fX / fl) / std::log(X / lo)
                                                      : std::numeric_limits<double>::quiet_NaN();
    if (std::isnan(tc.fitted_exponent))
        tc.verdict = Verdict::Undetermined;
    else if (tc.saturation_ratio <= 1 + opt.tol_sat && tc.fitted_exponent <= opt.slope_lo)
        tc.verdict = Verdict::Bounded;
    else if (tc.fitted_exponent >= opt.slope_hi)
        tc.verdict = Verdict::Unbounded;
    else
        tc.verdict = Verdict::Undetermined;
    return tc;
}

OperatorContext::OperatorContext(const WeightSpec& spec, OperatorConfig cfg) : cfg_(cfg) {
    if (cfg_.u_nodes_per_decade < 4 || cfg_.x_nodes_per_decade < 4)
        throw std::invalid_argument("operator grids need at least 4 nodes per decade");
    scale_ = std::make_shared<WScale>(spec);
    if (scale_->bounded_W())
        throw std::invalid_argument("weight " + spec.name() +
                                    " has integrable 1/w (W is bounded); the operator "
                                    "calculus needs W to be a homeomorphism of [0, inf)");
    cfg_.u_hi = std::min(cfg_.u_hi, scale_->u_sup());
    cfg_.x_hi = std::min(cfg_.x_hi, spec.hull_top());
    // Kinks of w become grid nodes so no quadrature cell straddles one.
    std::vector<double> xb, ub;
    for (double b : spec.log_breakpoints()) {
        xb.push_back(std::exp(b));
        ub.push_back(scale_->W_at_log(b));
    }
    u_nodes_ = with_breaks(geometric_nodes(cfg_.u_lo, cfg_.u_hi, cfg_.u_nodes_per_decade), ub);
    x_nodes_ = with_breaks(geometric_nodes(cfg_.x_lo, cfg_.x_hi, cfg_.x_nodes_per_decade), xb);
    uq_ = make_quad(*scale_, u_nodes_, cfg_.gauss_points, false, true);
    xq_ = make_quad(*scale_, x_nodes_, cfg_.gauss_points, true, false);
}

GridFn OperatorContext::scaled_identity_u(double eta) const {
    std::vector<double> v(u_nodes_.size()), s(u_nodes_.size(), eta);
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = eta * u_nodes_[i];
    return GridFn(u_nodes_, v, s, {TailRule::Power, 1.0}, {TailRule::Power, 1.0});
}

GridFn OperatorContext::scaled_identity_x(double eta) const {
    std::vector<double> v(x_nodes_.size()), s(x_nodes_.size(), eta);
    for (size_t i = 0; i < v.size(); ++i)
        v[i] = eta * x_nodes_[i];
    return GridFn(x_nodes_, v, s, {TailRule::Power, 1.0}, {TailRule::Power, 1.0});
}

GridFn apply_G(const OperatorContext& ctx, const GridFn& f) {
    const auto& nodes = f.nodes();
    for (double v : f.values())
        if (v < 0)
            throw std::invalid_argument("apply_G: f is negative at a node");
    const WScale& ws = ctx.scale();
    Quad local;
    const Quad* q = &ctx.u_quad();
    if (nodes != ctx.u_nodes()) {
        local = make_quad(ws, nodes, ctx.config().gauss_points, false, true);
        q = &local;
    }
    auto kappa_f = [&](double u) { return ws.kappa(f(u)); };
    auto vals = cumulative(
        *q, [&](size_t p, double u) { return std::exp(kappa_f(u) - q->kappa[p]); },
        nodes.size());
    std::vector<double> slopes(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        slopes[i] = std::exp(kappa_f(nodes[i]) - ws.kappa(nodes[i]));
    return make_fn(nodes, std::move(vals), std::move(slopes));
}

GridFn apply_H(const OperatorContext& ctx, const GridFn& f) {
    if (!f.monotone())
        throw std::invalid_argument("apply_H: f must be increasing");
    if (classify_tail(f, ctx.config().tail).verdict == Verdict::Bounded)
        throw std::invalid_argument("apply_H: f looks bounded; H is only defined for "
                                    "unbounded f");
    const WScale& ws = ctx.scale();
    const WeightSpec& spec = ctx.spec();
    // 1/w(f^{-1}(u)) has its kinks at u = f(e^b).
    std::vector<double> kinks;
    for (double b : spec.log_breakpoints())
        kinks.push_back(f(std::exp(b)));
    const std::vector<double> nodes = with_breaks(f.nodes(), kinks);
    Quad local;
    const Quad* q = &ctx.x_quad();
    if (nodes != ctx.x_nodes()) {
        local = make_quad(ws, nodes, ctx.config().gauss_points, true, false);
        q = &local;
    }
    auto ints = cumulative(
        *q, [&](size_t, double u) { return 1.0 / spec.w(f.inverse(u)); }, nodes.size());
    std::vector<double> vals(nodes.size()), slopes(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
        vals[i] = ws.W_inv(ints[i]);
        slopes[i] = spec.w(vals[i]) / spec.w(f.inverse(nodes[i]));
    }
    return make_fn(nodes, std::move(vals), std::move(slopes));
}

double phi2_closed(const OperatorContext& ctx, double eta, double x) {
    const WScale& ws = ctx.scale();
    return ws.W_inv(eta * ws.W(x / eta));
}

std::vector<GridFn> g_iterates(const OperatorContext& ctx, double eta, int k) {
    require_eta(eta);
    std::vector<GridFn> out{ctx.scaled_identity_u(eta)};
    for (int m = 2; m <= k; ++m)
        out.push_back(apply_G(ctx, out.back()));
    return out;
}

Sequence g_sequence(const OperatorContext& ctx, double eta, int k_max) {
    require_eta(eta);
    Sequence s;
    s.first_index = 1;
    s.fns.push_back(ctx.scaled_identity_u(eta));
    s.verdicts.push_back(classify_tail(s.fns.back(), ctx.config().tail));
    for (int k = 2; k <= k_max; ++k) {
        s.fns.push_back(apply_G(ctx, s.fns.back()));
        TailClass tc = classify_tail(s.fns.back(), ctx.config().tail);
        s.verdicts.push_back(tc);
        if (tc.verdict == Verdict::Bounded) {
            s.index = k;
            break;
        }
        if (tc.verdict == Verdict::Undetermined)
            throw UndeterminedTail("g_{" + fmt(eta) + "," + std::to_string(k) +
                                       "}: undetermined tail (saturation " +
                                       fmt(tc.saturation_ratio) + ", slope " +
                                       fmt(tc.fitted_exponent) + ")",
                                   tc);
    }
    return s;
}

namespace {

GridFn h_step(const OperatorContext& ctx, double eta, const GridFn& h) {
    const WScale& ws = ctx.scale();
    const Quad& q = ctx.u_quad();
    const auto& nodes = ctx.u_nodes();
    double le = std::log(eta);
    auto vals = cumulative(
        q,
        [&](size_t p, double u) {
            return eta * std::exp(ws.kappa(h(u)) - ws.log_w_at_log(q.lambda[p] + le));
        },
        nodes.size());
    std::vector<double> slopes(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        slopes[i] =
            eta * std::exp(ws.kappa(h(nodes[i])) - ws.log_w_at_log(ws.lambda(nodes[i]) + le));
    return make_fn(nodes, std::move(vals), std::move(slopes));
}

} // namespace

std::vector<GridFn> h_iterates(const OperatorContext& ctx, double eta, int j) {
    require_eta(eta);
    std::vector<GridFn> out{ctx.scaled_identity_u(eta)};
    for (int m = 3; m <= j; ++m)
        out.push_back(h_step(ctx, eta, out.back()));
    return out;
}

Sequence conjugate_iterate(const OperatorContext& ctx, double eta, int j_max) {
    require_eta(eta);
    Sequence s;
    s.first_index = 2;
    s.fns.push_back(ctx.scaled_identity_u(eta));
    s.verdicts.push_back(classify_tail(s.fns.back(), ctx.config().tail));
    for (int j = 3; j <= j_max; ++j) {
        s.fns.push_back(h_step(ctx, eta, s.fns.back()));
        TailClass tc = classify_tail(s.fns.back(), ctx.config().tail);
        s.verdicts.push_back(tc);
        if (tc.verdict == Verdict::Bounded) {
            s.index = j;
            break;
        }
        if (tc.verdict == Verdict::Undetermined)
            throw UndeterminedTail("h_{" + fmt(eta) + "," + std::to_string(j) +
                                       "}: undetermined tail (saturation " +
                                       fmt(tc.saturation_ratio) + ", slope " +
                                       fmt(tc.fitted_exponent) + ")",
                                   tc);
    }
    return s;
}

PhiFamily phi_family(const OperatorContext& ctx, double eta, int j_max) {
    require_eta(eta);
    if (j_max > 8)
        throw std::invalid_argument("phi_family: j_max must be <= 8");
    const WScale& ws = ctx.scale();
    const WeightSpec& spec = ctx.spec();
    const Quad& q = ctx.u_quad();
    const auto& unodes = ctx.u_nodes();
    const auto& xnodes = ctx.x_nodes();
    double le = std::log(eta);
    PhiFamily out;
    out.Phi.push_back(ctx.scaled_identity_x(eta));
    if (j_max < 2)
        return out;
    out.Phi.push_back(apply_H(ctx, out.Phi.back()));

    // phi_2: phi_1^{-1}(z) = W(W^{-1}(z) / eta) in closed form.
    {
        auto vals = cumulative(
            q,
            [&](size_t p, double) { return std::exp(log_w_shift(spec, q.lambda[p], le)); },
            unodes.size());
        std::vector<double> slopes(unodes.size());
        for (size_t i = 0; i < unodes.size(); ++i) {
            slopes[i] = std::exp(log_w_shift(spec, ws.lambda(unodes[i]), le));
        }
        out.conjugates.push_back(make_fn(unodes, std::move(vals), std::move(slopes)));
    }
    for (int j = 2; j <= j_max; ++j) {
        const GridFn& phi = out.conjugates.back();
        if (j >= 3) {
            // x-space member by conjugation.
            std::vector<double> v(xnodes.size());
            for (size_t i = 0; i < xnodes.size(); ++i)
                v[i] = ws.W_inv(phi(ws.W(xnodes[i])));
            out.Phi.push_back(make_fn(xnodes, std::move(v), {}));
        }
        TailClass tc = classify_tail(phi, ctx.config().tail);
        out.verdicts.push_back(tc);
        if (tc.verdict == Verdict::Bounded) {
            out.index = j;
            break;
        }
        if (tc.verdict == Verdict::Undetermined)
            throw UndeterminedTail("phi_{" + fmt(eta) + "," + std::to_string(j) +
                                       "}: undetermined tail (saturation " +
                                       fmt(tc.saturation_ratio) + ", slope " +
                                       fmt(tc.fitted_exponent) + ")",
                                   tc);
        if (j == j_max)
            break;
        // phi_{j+1} on the nodes below phi_j(top), where phi_j^{-1} is known.
        double Z = phi.values().back();
        size_t n = static_cast<size_t>(std::upper_bound(unodes.begin(), unodes.end(), Z) -
                                       unodes.begin());
        if (n < 3)
            throw UndeterminedTail("phi_{" + fmt(eta) + "," + std::to_string(j + 1) +
                                       "}: hull collapsed below the grid",
                                   TailClass{});
        auto vals = cumulative(
            q,
            [&](size_t p, double z) { return std::exp(q.kappa[p] - ws.kappa(phi.inverse(z))); },
            n);
        std::vector<double> nodes(unodes.begin(), unodes.begin() + n), slopes(n);
        for (size_t i = 0; i < n; ++i)
            slopes[i] = std::exp(ws.kappa(nodes[i]) - ws.kappa(phi.inverse(nodes[i])));
        out.conjugates.push_back(make_fn(std::move(nodes), std::move(vals), std::move(slopes)));
    }
    return out;
}

EtaIndex index_at(const OperatorContext& ctx, double eta, bool cross_check) {
    EtaIndex r;
    r.eta = eta;
    int cap = ctx.config().j_max;
    Sequence g = g_sequence(ctx, eta, cap);
    r.i = g.index;
    r.g_evidence.assign(g.verdicts.begin() + 1, g.verdicts.end());
    Sequence h = conjugate_iterate(ctx, eta, cap);
    r.j = h.index;
    r.h_evidence.assign(h.verdicts.begin() + 1, h.verdicts.end());
    if (cross_check)
        r.j_phi = phi_family(ctx, eta, cap).index;
    return r;
}

std::vector<double> eta_grid(double eta_half_width, int n_eta) {
    if (!(eta_half_width > 0 && eta_half_width <= 0.2))
        throw std::invalid_argument("eta_half_width must lie in (0, 0.2]");
    if (n_eta < 1)
        throw std::invalid_argument("n_eta must be >= 1");
    std::vector<double> out;
    for (int k = n_eta; k >= 1; --k)
        out.push_back(0.5 - eta_half_width * k / n_eta);
    out.push_back(0.5);
    for (int k = 1; k <= n_eta; ++k)
        out.push_back(0.5 + eta_half_width * k / n_eta);
    return out;
}

IndexReport index_limits(const OperatorContext& ctx, const std::vector<double>& etas,
                         bool cross_check) {
    std::vector<double> grid = etas;
    std::sort(grid.begin(), grid.end());
    if (grid.empty() || !(grid.front() < 0.5 && grid.back() > 0.5))
        throw std::invalid_argument("index_limits: eta grid must straddle 1/2");
    IndexReport rep;
    rep.family = ctx.spec().name();
    rep.params = ctx.spec().name().substr(ctx.spec().name().find(':') == std::string::npos
                                              ? ctx.spec().name().size()
                                              : ctx.spec().name().find(':') + 1);
    for (double eta : grid)
        rep.rows.push_back(index_at(ctx, eta, cross_check));
    for (size_t k = 1; k < rep.rows.size(); ++k)
        if (rep.rows[k].j < rep.rows[k - 1].j)
            throw std::runtime_error("index_limits: j_eta decreases between eta=" +
                                     fmt(rep.rows[k - 1].eta) + " and eta=" +
                                     fmt(rep.rows[k].eta));
    for (const auto& r : rep.rows) {
        if (r.eta < 0.5) {
            rep.i_minus = r.i;
            rep.j_minus = r.j;
        }
    }
    for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it) {
        if (it->eta > 0.5) {
            rep.i_plus = it->i;
            rep.j_plus = it->j;
        }
    }
    std::set<int> finite;
    for (const auto& r : rep.rows)
        if (r.j != kInfinite)
            finite.insert(r.j);
    rep.two_value = finite.size() <= 1 ||
                    (finite.size() == 2 && *finite.rbegin() == *finite.begin() + 1);
    for (size_t k = 0; k < rep.rows.size(); ++k) {
        const auto& r = rep.rows[k];
        bool flat = (k == 0 || rep.rows[k - 1].j == r.j) &&
                    (k + 1 == rep.rows.size() || rep.rows[k + 1].j == r.j);
        if (flat && r.j != kInfinite && r.i != kInfinite && r.j != r.i + 1)
            rep.j_is_i_plus_1 = false;
    }
    return rep;
}

std::string IndexReport::to_json() const {
    using nlohmann::json;
    auto idx = [](int v) -> json {
        if (v == kInfinite)
            return "inf";
        return v;
    };
    json j;
    j["family"] = family;
    j["params"] = params;
    json eta = json::array(), jj = json::array(), ii = json::array(), jp = json::array();
    json ev = json::array();
    bool any_phi = false;
    for (const auto& r : rows) {
        eta.push_back(r.eta);
        jj.push_back(idx(r.j));
        ii.push_back(idx(r.i));
        jp.push_back(idx(r.j_phi));
        any_phi = any_phi || r.j_phi != kInfinite;
        auto push = [&](const char* route, int first, const std::vector<TailClass>& tcs) {
            for (size_t k = 0; k < tcs.size(); ++k) {
                const auto& t = tcs[k];
                ev.push_back({{"eta", r.eta},
                              {"route", route},
                              {"index", first + static_cast<int>(k)},
                              {"verdict", verdict_name(t.verdict)},
                              {"saturation_ratio", t.saturation_ratio},
                              {"fitted_exponent", t.fitted_exponent},
                              {"fit_window", {t.fit_lo, t.fit_hi}}});
            }
        };
        push("g", 2, r.g_evidence);
        push("h", 3, r.h_evidence);
    }
    j["eta"] = eta;
    j["j"] = jj;
    j["i"] = ii;
    if (any_phi)
        j["j_phi"] = jp;
    j["i_minus"] = idx(i_minus);
    j["i_plus"] = idx(i_plus);
    j["j_minus"] = idx(j_minus);
    j["j_plus"] = idx(j_plus);
    j["two_value"] = two_value;
    j["j_equals_i_plus_1"] = j_is_i_plus_1;
    j["evidence"] = ev;
    return j.dump(2);
}

GrowthReport growth_sandwich_check(const OperatorContext& ctx, double eta, int k) {
    if (ctx.spec().family() != Family::PolyLog)
        throw std::invalid_argument("growth_sandwich_check needs a polylog weight");
    if (k < 1)
        throw std::invalid_argument("growth_sandwich_check: k must be >= 1");
    GrowthReport r;
    r.alpha = ctx.spec().param();
    r.eta = eta;
    r.k = k;
    r.predicted_exponent = (k - 1) * (1.0 / r.alpha - 1.0);
    r.precondition_ok = r.predicted_exponent < 1.0;
    if (!r.precondition_ok)
        r.note = "(k-1)(1/alpha-1) >= 1: g is expected to be bounded, the sandwich does not apply";
    GridFn g = g_iterates(ctx, eta, k).back();
    const auto& xs = g.nodes();
    const auto& vs = g.values();
    double top = xs.back();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < top / 100.0 * (1 - 1e-12))
            continue;
        double ratio = std::log(xs[i] / vs[i]);
        if (!(ratio > 0)) {
            r.fit_ok = false;
            r.note += (r.note.empty() ? "" : "; ") + std::string("g(x) >= x inside the window");
            break;
        }
        double X = std::log(std::log(xs[i])), Y = std::log(ratio);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++n;
    }
    if (r.fit_ok && n >= 2) {
        double den = n * sxx - sx * sx;
        r.fitted_exponent = den != 0 ? (n * sxy - sx * sy) / den : 0.0;
    } else {
        r.fit_ok = false;
    }
    r.rel_error = r.predicted_exponent > 0
                      ? std::abs(r.fitted_exponent - r.predicted_exponent) / r.predicted_exponent
                      : std::abs(r.fitted_exponent);
    return r;
}

std::vector<GridFn> psi_profile(const OperatorContext& ctx, int i_max) {
    if (i_max < 1)
        throw std::invalid_argument("psi_profile: i_max must be >= 1");
    const WScale& ws = ctx.scale();
    const auto& xs = ctx.x_nodes();
    std::vector<GridFn> out;
    {
        std::vector<double> v(xs.size()), s(xs.size(), 0.25);
        for (size_t i = 0; i < xs.size(); ++i)
            v[i] = xs[i] / 4.0;
        out.emplace_back(xs, v, s, Tail{TailRule::Power, 1.0}, Tail{TailRule::Power, 1.0});
    }
    if (i_max == 1)
        return out;
    auto hs = h_iterates(ctx, 0.5, i_max);
    for (int i = 2; i <= i_max; ++i) {
        const GridFn& h = hs[i - 2];
        std::vector<double> v(xs.size());
        for (size_t n = 0; n < xs.size(); ++n)
            v[n] = ws.W_inv(h(ws.W(xs[n] / 2.0)));
        out.push_back(make_fn(xs, std::move(v), {}));
    }
    return out;
}

namespace {

struct FChecks {
    double b = 0, c = 0;
    bool d = false;
};

FChecks check_f(const OperatorContext& ctx, const GridFn& f, double X, const GridFn& W) {
    const WeightSpec& spec = ctx.spec();
    GridFn Wf = compute_W_psi(spec, [&](double u) { return f(u); }, X,
                              std::max(16, ctx.config().x_nodes_per_decade));
    FChecks r;
    r.b = f(X) / X;
    const auto& wv = W.values();
    const auto& fv = Wf.values();
    size_t n = wv.size();
    r.c = (wv[n - 1] - fv[n - 1]) / spec.ell(X);
    bool incr = true;
    for (size_t i = 1; i < n; ++i) {
        double d0 = wv[i - 1] - fv[i - 1], d1 = wv[i] - fv[i];
        if (d1 < d0 - 1e-12 * wv[i])
            incr = false;
    }
    double dmid = wv[n / 2] - fv[n / 2], dtop = wv[n - 1] - fv[n - 1];
    r.d = incr && dtop > dmid;
    return r;
}

} // namespace

FEta build_f_eta(const OperatorContext& ctx, double eta, double x_top, bool strict) {
    if (!(eta > 0.5 && eta < 1))
        throw std::invalid_argument("build_f_eta: eta must lie in (1/2, 1)");
    if (!(x_top >= 1e3) || x_top > ctx.spec().hull_top())
        throw std::invalid_argument("build_f_eta: bad hull top");
    auto xs = geometric_nodes(ctx.config().x_lo, x_top, ctx.config().x_nodes_per_decade);
    std::vector<double> phi(xs.size()), fv(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        phi[i] = phi2_closed(ctx, eta, xs[i]);
        double l = 1.0 + std::log1p(xs[i]);
        fv[i] = phi[i] + xs[i] / (l * l);
    }
    GridFn W = compute_W(ctx.spec(), x_top, std::max(16, ctx.config().x_nodes_per_decade));
    FEta out;
    out.f = make_fn(xs, fv, {});
    FChecks c = check_f(ctx, out.f, x_top, W);
    out.check_b = c.b;
    out.check_c = c.c;
    out.check_d = c.d;
    if (c.b <= 0.05 && c.c <= 0.1 && c.d)
        return out;

    GridFn f0 = make_fn(xs, phi, {});
    FChecks c0 = check_f(ctx, f0, x_top, W);
    if (c0.c <= 0.1 && c0.d) {
        out.f = f0;
        out.used_correction = false;
        out.check_b = c0.b;
        out.check_c = c0.c;
        out.check_d = c0.d;
        out.warnings.push_back("f_eta: correction term failed a check (b=" + fmt(c.b) +
                               ", c=" + fmt(c.c) + ", d=" + (c.d ? "ok" : "fail") +
                               "); using Phi_{eta,2} alone");
        return out;
    }
    std::string msg = "build_f_eta: neither candidate satisfies checks (c)+(d) (c=" +
                      fmt(c.c) + "/" + fmt(c0.c) + ", d=" + (c.d ? "ok" : "fail") + "/" +
                      (c0.d ? "ok" : "fail") + ")";
    if (strict)
        throw std::runtime_error(msg);
    out.verified = false;
    out.warnings.push_back(msg + "; returning the unverified corrected candidate");
    return out;
}

double choose_epsilon(const OperatorContext& ctx, int i_plus) {
    if (i_plus == kInfinite)
        throw std::invalid_argument("choose_epsilon: i_plus is infinite");
    for (int k = 5; k <= 12; ++k) {
        double eps = std::ldexp(1.0, -k);
        try {
            if (g_sequence(ctx, 0.5 + 3 * eps, ctx.config().j_max).index == i_plus)
                return eps;
        } catch (const UndeterminedTail&) {
        }
    }
    throw std::runtime_error("choose_epsilon: no eps in {2^-5..2^-12} gives i = i_plus");
}

} // namespace vrrw
