#include "vrrw/grid_fn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vrrw {

namespace {

const char* rule_name(TailRule r) {
    switch (r) {
    case TailRule::Constant:
        return "constant";
    case TailRule::LinearInLog:
        return "linear-in-log";
    case TailRule::Power:
        return "power";
    }
    return "constant";
}

TailRule rule_from(const std::string& s) {
    if (s == "constant")
        return TailRule::Constant;
    if (s == "linear-in-log")
        return TailRule::LinearInLog;
    if (s == "power")
        return TailRule::Power;
    throw std::invalid_argument("unknown tail rule '" + s + "'");
}

double tail_eval(const Tail& t, double x_end, double v_end, double x) {
    switch (t.rule) {
    case TailRule::Constant:
        return v_end;
    case TailRule::LinearInLog:
        return v_end + t.slope * std::log(x / x_end);
    case TailRule::Power:
        if (x == 0.0)
            return t.slope > 0 ? 0.0 : v_end;
        if (t.slope == 1.0)
            return (v_end / x_end) * x;
        return v_end * std::pow(x / x_end, t.slope);
    }
    return v_end;
}

// Solves tail(x) = y; returns NaN when the tail never reaches y.
double tail_solve(const Tail& t, double x_end, double v_end, double y) {
    switch (t.rule) {
    case TailRule::Constant:
        return y == v_end ? x_end : std::numeric_limits<double>::quiet_NaN();
    case TailRule::LinearInLog:
        if (t.slope <= 0)
            return std::numeric_limits<double>::quiet_NaN();
        return x_end * std::exp((y - v_end) / t.slope);
    case TailRule::Power:
        if (t.slope <= 0 || v_end <= 0)
            return std::numeric_limits<double>::quiet_NaN();
        if (y == 0.0)
            return 0.0;
        if (t.slope == 1.0)
            return y / (v_end / x_end);
        return x_end * std::pow(y / v_end, 1.0 / t.slope);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

GridFn::GridFn(std::vector<double> nodes, std::vector<double> values,
               std::vector<double> slopes, Tail lo, Tail hi)
    : nodes_(std::move(nodes)), values_(std::move(values)), slopes_(std::move(slopes)),
      lo_(lo), hi_(hi) {
    prepare();
}

void GridFn::prepare() {
    size_t n = nodes_.size();
    if (n < 2 || values_.size() != n)
        throw std::invalid_argument("GridFn needs >= 2 nodes and matching values");
    if (!slopes_.empty() && slopes_.size() != n)
        throw std::invalid_argument("GridFn slopes size mismatch");
    for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
            throw std::invalid_argument("GridFn sample " + std::to_string(i) + " is not finite");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw std::invalid_argument("GridFn nodes must be strictly increasing");
    }
    monotone_ = true;
    for (size_t i = 1; i < n; ++i)
        if (values_[i] < values_[i - 1])
            monotone_ = false;
    bool positive = nodes_[0] > 0;
    for (double v : values_)
        positive = positive && v > 0;
    interp_ = positive ? Interp::LogLog : Interp::Linear;

    X_.resize(n);
    Y_.resize(n);
    D_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        X_[i] = positive ? std::log(nodes_[i]) : nodes_[i];
        Y_[i] = positive ? std::log(values_[i]) : values_[i];
    }
    std::vector<double> delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
        delta[i] = (Y_[i + 1] - Y_[i]) / (X_[i + 1] - X_[i]);

    if (!slopes_.empty()) {
        for (size_t i = 0; i < n; ++i)
            D_[i] = positive ? slopes_[i] * nodes_[i] / values_[i] : slopes_[i];
    } else {
        D_[0] = delta[0];
        D_[n - 1] = delta[n - 2];
        for (size_t i = 1; i + 1 < n; ++i)
            D_[i] = delta[i - 1] * delta[i] <= 0 ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
    }
    if (monotone_) {
        // Fritsch-Carlson limiter keeps each cubic piece monotone.
        for (size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                D_[i] = 0.0;
                D_[i + 1] = 0.0;
                continue;
            }
            double a = D_[i] / delta[i], b = D_[i + 1] / delta[i];
            if (a < 0)
                D_[i] = a = 0;
            if (b < 0)
                D_[i + 1] = b = 0;
            double s = a * a + b * b;
            if (s > 9.0) {
                double tau = 3.0 / std::sqrt(s);
                D_[i] = tau * a * delta[i];
                D_[i + 1] = tau * b * delta[i];
            }
        }
    }
    slopes_.resize(n);
    for (size_t i = 0; i < n; ++i)
        slopes_[i] = positive ? D_[i] * values_[i] / nodes_[i] : D_[i];
}

double GridFn::cell_eval(size_t i, double x) const {
    if (power_cell(i)) {
        double p = D_[i];
        if (p == 1.0)
            return (values_[i] / nodes_[i]) * x;
        return values_[i] * std::pow(x / nodes_[i], p);
    }
    double X = interp_ == Interp::LogLog ? std::log(x) : x;
    double h = X_[i + 1] - X_[i];
    double t = (X - X_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    double Y = h00 * Y_[i] + h10 * h * D_[i] + h01 * Y_[i + 1] + h11 * h * D_[i + 1];
    if (monotone_) {
        // Guard against rounding outside the cell's value range.
        Y = std::clamp(Y, std::min(Y_[i], Y_[i + 1]), std::max(Y_[i], Y_[i + 1]));
    }
    return interp_ == Interp::LogLog ? std::exp(Y) : Y;
}

bool GridFn::power_cell(size_t i) const {
    if (interp_ != Interp::LogLog)
        return false;
    double secant = (Y_[i + 1] - Y_[i]) / (X_[i + 1] - X_[i]);
    return D_[i] == secant && D_[i + 1] == secant && secant > 0;
}

double GridFn::eval_forward(double x) const {
    if (std::isnan(x))
        throw std::domain_error("GridFn evaluated at NaN");
    if (x <= nodes_.front()) {
        if (x == nodes_.front())
            return values_.front();
        return tail_eval(lo_, nodes_.front(), values_.front(), x);
    }
    if (x >= nodes_.back()) {
        if (x == nodes_.back())
            return values_.back();
        return tail_eval(hi_, nodes_.back(), values_.back(), x);
    }
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    size_t j = static_cast<size_t>(it - nodes_.begin());
    if (nodes_[j - 1] == x)
        return values_[j - 1];
    return cell_eval(j - 1, x);
}

double GridFn::solve_forward(double y) const {
    if (!monotone_)
        throw std::domain_error("inverse of a non-monotone GridFn");
    if (std::isnan(y))
        throw std::domain_error("GridFn inverse at NaN");
    if (y < values_.front()) {
        double x = tail_solve(lo_, nodes_.front(), values_.front(), y);
        if (std::isnan(x))
            throw std::domain_error("GridFn inverse below range");
        return x;
    }
    if (y > values_.back()) {
        double x = tail_solve(hi_, nodes_.back(), values_.back(), y);
        if (std::isnan(x))
            throw std::domain_error("GridFn inverse above range (bounded function)");
        return x;
    }
    auto it = std::lower_bound(values_.begin(), values_.end(), y);
    size_t j = static_cast<size_t>(it - values_.begin());
    if (values_[j] == y)
        return nodes_[j];
    size_t i = j - 1;
    if (power_cell(i)) {
        double p = D_[i];
        if (p == 1.0)
            return y / (values_[i] / nodes_[i]);
        return nodes_[i] * std::pow(y / values_[i], 1.0 / p);
    }
    double Yt = interp_ == Interp::LogLog ? std::log(y) : y;
    double h = X_[i + 1] - X_[i];
    auto F = [&](double t) {
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * Y_[i] + (t3 - 2 * t2 + t) * h * D_[i] +
               (-2 * t3 + 3 * t2) * Y_[i + 1] + (t3 - t2) * h * D_[i + 1] - Yt;
    };
    auto dF = [&](double t) {
        double t2 = t * t;
        return (6 * t2 - 6 * t) * Y_[i] + (3 * t2 - 4 * t + 1) * h * D_[i] +
               (-6 * t2 + 6 * t) * Y_[i + 1] + (3 * t2 - 2 * t) * h * D_[i + 1];
    };
    double lo = 0, hi = 1;
    double t = (Y_[i + 1] > Y_[i]) ? (Yt - Y_[i]) / (Y_[i + 1] - Y_[i]) : 0.5;
    t = std::clamp(t, 0.0, 1.0);
    for (int it2 = 0; it2 < 200; ++it2) {
        double f = F(t);
        if (f == 0)
            break;
        if (f < 0)
            lo = t;
        else
            hi = t;
        double d = dF(t);
        double tn = d > 0 ? t - f / d : 0.5 * (lo + hi);
        if (!(tn > lo && tn < hi))
            tn = 0.5 * (lo + hi);
        if (std::abs(tn - t) <= 1e-16 || hi - lo <= 1e-16) {
            t = tn;
            break;
        }
        t = tn;
    }
    double X = X_[i] + t * h;
    double x = interp_ == Interp::LogLog ? std::exp(X) : X;
    return std::clamp(x, nodes_[i], nodes_[i + 1]);
}

double GridFn::operator()(double x) const {
    return inverted_ ? solve_forward(x) : eval_forward(x);
}

double GridFn::inverse(double y) const {
    return inverted_ ? eval_forward(y) : solve_forward(y);
}

GridFn GridFn::inverted() const {
    if (!monotone_)
        throw std::domain_error("cannot invert a non-monotone GridFn");
    for (size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i] > values_[i - 1]))
            throw std::domain_error("cannot invert a GridFn with a flat stretch");
    GridFn g = *this;
    g.inverted_ = !inverted_;
    return g;
}

std::string GridFn::to_json() const {
    nlohmann::json j;
    j["nodes"] = nodes_;
    j["values"] = values_;
    j["slopes"] = slopes_;
    j["lo_tail"] = {{"rule", rule_name(lo_.rule)}, {"slope", lo_.slope}};
    j["hi_tail"] = {{"rule", rule_name(hi_.rule)}, {"slope", hi_.slope}};
    j["interp"] = interp_ == Interp::LogLog ? "log-log" : "linear";
    j["monotone"] = monotone_;
    j["inverted"] = inverted_;
    return j.dump();
}

GridFn GridFn::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Tail lo{rule_from(j.at("lo_tail").at("rule")), j.at("lo_tail").at("slope")};
    Tail hi{rule_from(j.at("hi_tail").at("rule")), j.at("hi_tail").at("slope")};
    GridFn g(j.at("nodes").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
             j.at("slopes").get<std::vector<double>>(), lo, hi);
    g.inverted_ = j.value("inverted", false);
    return g;
}

std::string GridFn::to_csv() const {
    std::ostringstream os;
    char buf[96];
    std::snprintf(buf, sizeof buf, "# lo_tail=%s:%.17g hi_tail=%s:%.17g\n", rule_name(lo_.rule),
                  lo_.slope, rule_name(hi_.rule), hi_.slope);
    os << buf << "node,value\n";
    const auto& xs = nodes();
    const auto& ys = values();
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", xs[i], ys[i]);
        os << buf;
    }
    return os.str();
}

GridFn GridFn::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> xs, ys;
    Tail lo{TailRule::Power, 1.0}, hi{TailRule::Constant, 0.0};
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            char lr[32], hr[32];
            double ls, hs;
            if (std::sscanf(line.c_str(), "# lo_tail=%31[^:]:%lg hi_tail=%31[^:]:%lg", lr, &ls, hr,
                            &hs) == 4) {
                lo = {rule_from(lr), ls};
                hi = {rule_from(hr), hs};
            }
            continue;
        }
        if (line.rfind("node", 0) == 0)
            continue;
        auto c = line.find(',');
        if (c == std::string::npos)
            throw std::invalid_argument("GridFn CSV row without comma: " + line);
        xs.push_back(std::stod(line.substr(0, c)));
        ys.push_back(std::stod(line.substr(c + 1)));
    }
    return GridFn(std::move(xs), std::move(ys), {}, lo, hi);
}

std::vector<double> geometric_nodes(double lo, double hi, int nodes_per_decade) {
    if (!(lo > 0 && hi > lo) || nodes_per_decade < 1)
        throw std::invalid_argument("geometric_nodes: need 0 < lo < hi");
    double decades = std::log10(hi / lo);
    int n = static_cast<int>(std::ceil(decades * nodes_per_decade - 1e-9));
    std::vector<double> out(n + 1);
    for (int k = 0; k < n; ++k)
        out[k] = lo * std::pow(10.0, double(k) / nodes_per_decade);
    out[n] = hi;
    if (n >= 1 && !(out[n] > out[n - 1]))
        out.erase(out.begin() + n - 1);
    return out;
}

} // namespace vrrw
