#include "vrrw/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vrrw/quadrature.hpp"

namespace vrrw {

namespace {

double log_add(double a, double b) {
    if (a < b)
        std::swap(a, b);
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

std::string cell_name(double a, double b) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << a << ", " << b << "]";
    return os.str();
}

} // namespace

GridFn compute_W_psi(const WeightSpec& spec, const PsiFn& psi, double x_max,
                     int nodes_per_decade) {
    if (!(x_max >= 1e3))
        throw std::invalid_argument("compute_W: x_max must be >= 1e3");
    if (nodes_per_decade < 16)
        throw std::invalid_argument("compute_W: nodes_per_decade must be >= 16");
    if (x_max > spec.hull_top())
        throw std::invalid_argument("compute_W: x_max beyond the weight table");
    if (spec.family() == Family::Tabulated && spec.table_x().front() != 0.0)
        throw std::invalid_argument("compute_W: weight table must start at x = 0");

    auto shift = [&](double u) {
        if (!psi)
            return u;
        double p = psi(u);
        if (!(p >= 0))
            throw std::invalid_argument("compute_W_psi: negative psi sample at u = " +
                                        std::to_string(u));
        return u + p;
    };
    const double rel_tol = 1e-10;
    auto nodes = geometric_nodes(1e-3, x_max, nodes_per_decade);
    for (double x : nodes)
        shift(x);

    // Add a node wherever u + psi(u) crosses a kink of w, so that both the
    // quadrature cells and the interpolant break there.
    std::vector<double> kink_nodes;
    for (double kb : spec.log_breakpoints())
        for (size_t i = 1; i < nodes.size(); ++i) {
            double lo = nodes[i - 1], hi = nodes[i];
            if (!(std::log(shift(lo)) < kb && std::log(shift(hi)) >= kb))
                continue;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                (std::log(shift(mid)) < kb ? lo : hi) = mid;
            }
            double k = 0.5 * (lo + hi);
            if (k > nodes[i - 1] * (1 + 1e-9) && k < nodes[i] * (1 - 1e-9))
                kink_nodes.push_back(k);
        }
    nodes.insert(nodes.end(), kink_nodes.begin(), kink_nodes.end());
    std::sort(nodes.begin(), nodes.end());

    std::vector<double> vals(nodes.size()), slopes(nodes.size());
    auto first = adaptive_simpson([&](double u) { return 1.0 / spec.w(shift(u)); }, 0.0,
                                  nodes[0], rel_tol);
    if (!first.converged)
        throw QuadratureError("compute_W: no convergence in cell " + cell_name(0, nodes[0]));
    double acc = first.value;
    vals[0] = acc;
    for (size_t i = 1; i < nodes.size(); ++i) {
        auto r = adaptive_simpson(
            [&](double v) {
                double u = std::exp(v);
                return u / spec.w(shift(u));
            },
            std::log(nodes[i - 1]), std::log(nodes[i]), rel_tol);
        if (!r.converged)
            throw QuadratureError("compute_W: no convergence in cell " +
                                  cell_name(nodes[i - 1], nodes[i]));
        acc += r.value;
        vals[i] = acc;
    }
    for (size_t i = 0; i < nodes.size(); ++i)
        slopes[i] = 1.0 / spec.w(shift(nodes[i]));

    GridFn body(nodes, vals, slopes, {TailRule::Power, 1.0}, {TailRule::Constant, 0.0});
    double X = nodes.back(), Xh = X / std::sqrt(10.0);
    double tail_slope = (vals.back() - body(Xh)) / std::log(X / Xh);
    return GridFn(std::move(nodes), std::move(vals), std::move(slopes), {TailRule::Power, 1.0},
                  {TailRule::LinearInLog, tail_slope});
}

GridFn compute_W(const WeightSpec& spec, double x_max, int nodes_per_decade) {
    return compute_W_psi(spec, nullptr, x_max, nodes_per_decade);
}

GridFn invert_W(const GridFn& W) {
    const auto& v = W.values();
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw std::invalid_argument("invert_W: input is not strictly increasing");
    return W.inverted();
}

WScale::WScale(const WeightSpec& spec) : WScale(spec, Options{}) {}

WScale::WScale(const WeightSpec& spec, const Options& opt) : spec_(spec), opt_(opt) {
    if (spec_.family() == Family::Tabulated && spec_.table_x().front() != 0.0)
        throw std::invalid_argument("WScale: weight table must start at x = 0");
    build();
}

double WScale::log_cell_integral(double a, double b) const {
    double m = std::max({phi(a), phi(b), phi(0.5 * (a + b))});
    auto r = adaptive_simpson([&](double t) { return std::exp(phi(t) - m); }, a, b,
                              opt_.cell_rel_tol);
    if (!r.converged)
        throw QuadratureError("WScale: no convergence in log-cell " + cell_name(a, b));
    return std::log(r.value) + m;
}

double WScale::log_cell_integral_gl(double a, double b) const {
    if (b <= a)
        return -std::numeric_limits<double>::infinity();
    double m = std::max(phi(a), phi(b));
    const GaussRule& g = gauss_legendre(8);
    double v = gauss_integrate(g, [&](double t) { return std::exp(phi(t) - m); }, a, b);
    return std::log(v) + m;
}

void WScale::build() {
    log_w0_ = std::log(spec_.w(0.0));
    double t = opt_.t_start;
    double s = t - log_w0_;
    double s_target = std::log(opt_.u_max) + 0.05;
    double t_top = std::log(spec_.hull_top());
    auto bps = spec_.log_breakpoints();
    std::sort(bps.begin(), bps.end());

    t_.push_back(t);
    s_.push_back(s);
    d_.push_back(std::exp(phi(t) - s));
    int flat = 0;
    while (s < s_target) {
        double d = d_.back();
        double h = d > 0 ? opt_.ds_step / d : std::numeric_limits<double>::infinity();
        h = std::min(h, std::max(0.5, 0.05 * std::abs(t)));
        h = std::max(h, 1e-6);
        double t1 = t + h;
        auto it = std::upper_bound(bps.begin(), bps.end(), t);
        if (it != bps.end() && *it < t1)
            t1 = *it;
        bool last = false;
        if (t1 >= t_top) {
            t1 = t_top;
            last = true;
        }
        if (!(t1 > t))
            break;
        double s1 = log_add(s, log_cell_integral(t, t1));
        t = t1;
        s = s1;
        t_.push_back(t);
        s_.push_back(s);
        d_.push_back(std::exp(phi(t) - s));
        if (last || t > 1e305)
            break;
        // 1/w integrable: W has converged to its limit.
        flat = (s_[s_.size() - 2] == s) ? flat + 1 : 0;
        if (flat >= 8)
            break;
    }
    bounded_ = s < s_target;
    u_sup_ = bounded_ ? std::exp(s) : opt_.u_max;
}

size_t WScale::cell_of_t(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    size_t k = static_cast<size_t>(it - t_.begin());
    return k == 0 ? 0 : std::min(k - 1, t_.size() - 2);
}

double WScale::log_W_at_log(double t) const {
    if (std::isnan(t))
        throw std::domain_error("WScale: NaN argument");
    if (t <= t_.front())
        return t - log_w0_;
    if (t >= t_.back()) {
        if (t == t_.back() || bounded_)
            return s_.back();
        throw std::domain_error("WScale: argument beyond the tabulated range");
    }
    size_t k = cell_of_t(t);
    if (t == t_[k])
        return s_[k];
    return log_add(s_[k], log_cell_integral_gl(t_[k], t));
}

double WScale::W_at_log(double t) const {
    return std::exp(log_W_at_log(t));
}

double WScale::W(double x) const {
    if (x < 0 || std::isnan(x))
        throw std::domain_error("WScale::W: negative argument");
    if (x == 0)
        return 0.0;
    return W_at_log(std::log(x));
}

double WScale::lambda(double u) const {
    if (!(u >= 0))
        throw std::domain_error("WScale::lambda: negative or NaN argument");
    if (u == 0)
        return -std::numeric_limits<double>::infinity();
    double s = std::log(u);
    if (s <= s_.front())
        return s + log_w0_;
    if (s > s_.back())
        throw std::domain_error("WScale::lambda: argument beyond the W hull");
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    size_t k = static_cast<size_t>(it - s_.begin()) - 1;
    if (s_[k] == s)
        return t_[k];
    if (k + 1 >= t_.size())
        return t_.back();
    double ta = t_[k], h = t_[k + 1] - ta;
    double ya = s_[k], yb = s_[k + 1], da = d_[k] * h, db = d_[k + 1] * h;
    auto F = [&](double x) {
        double x2 = x * x, x3 = x2 * x;
        return (2 * x3 - 3 * x2 + 1) * ya + (x3 - 2 * x2 + x) * da + (-2 * x3 + 3 * x2) * yb +
               (x3 - x2) * db - s;
    };
    auto dF = [&](double x) {
        double x2 = x * x;
        return (6 * x2 - 6 * x) * ya + (3 * x2 - 4 * x + 1) * da + (-6 * x2 + 6 * x) * yb +
               (3 * x2 - 2 * x) * db;
    };
    double lo = 0, hi = 1, x = (s - ya) / (yb - ya);
    for (int i = 0; i < 100; ++i) {
        double f = F(x);
        if (f == 0)
            break;
        (f < 0 ? lo : hi) = x;
        double d = dF(x);
        double xn = d > 0 ? x - f / d : 0.5 * (lo + hi);
        if (!(xn > lo && xn < hi))
            xn = 0.5 * (lo + hi);
        bool done = std::abs(xn - x) < 1e-15;
        x = xn;
        if (done)
            break;
    }
    double t = ta + x * h;
    if (opt_.polish) {
        for (int i = 0; i < 1; ++i) {
            double S = log_add(s_[k], log_cell_integral_gl(ta, t));
            double dS = std::exp(phi(t) - S);
            double step = (S - s) / dS;
            double tn = std::clamp(t - step, ta, t_[k + 1]);
            if (tn == t)
                break;
            t = tn;
        }
    }
    return t;
}

double WScale::kappa(double u) const {
    if (u == 0)
        return log_w0_;
    return spec_.log_w_at_log(lambda(u));
}

double WScale::W_inv(double u) const {
    if (u == 0)
        return 0.0;
    return std::exp(lambda(u));
}

} // namespace vrrw
