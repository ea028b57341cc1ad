#include "vrrw/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vrrw {

namespace {

const double kE = std::exp(1.0);
const double kE2 = std::exp(2.0);

double critical_core(double x) {
    double lx = std::log(x);
    return x * std::exp(-lx / std::log(lx));
}

// Shortest text that reads back to the same double.
std::string fmt_param(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

double parse_number(const std::string& s, const std::string& what) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number for " + what + ": '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v))
        throw std::invalid_argument("bad number for " + what + ": '" + s + "'");
    return v;
}

} // namespace

WeightSpec WeightSpec::linear(double c) {
    if (!(c > 0) || !std::isfinite(c))
        throw std::invalid_argument("linear weight needs c > 0");
    WeightSpec s;
    s.family_ = Family::Linear;
    s.param_ = c;
    s.low_ = c;
    return s;
}

WeightSpec WeightSpec::power(double p) {
    if (!(p > 0) || !std::isfinite(p))
        throw std::invalid_argument("power weight needs p > 0");
    WeightSpec s;
    s.family_ = Family::Power;
    s.param_ = p;
    s.low_ = 1.0;
    return s;
}

WeightSpec WeightSpec::polylog(double alpha) {
    if (!(alpha > 0 && alpha < 1))
        throw std::invalid_argument("polylog weight needs alpha in (0,1)");
    WeightSpec s;
    s.family_ = Family::PolyLog;
    s.param_ = alpha;
    s.floor_ = kE;
    s.low_ = 1.0;
    return s;
}

WeightSpec WeightSpec::critical() {
    WeightSpec s;
    s.family_ = Family::Critical;
    s.param_ = 0.0;
    s.floor_ = kE2;
    s.low_ = critical_core(kE2);
    return s;
}

WeightSpec WeightSpec::tabulated(std::vector<double> xs, std::vector<double> ws,
                                 std::string source) {
    if (xs.size() < 2 || xs.size() != ws.size())
        throw std::invalid_argument("weight table needs at least two (x,w) rows");
    if (!(xs.front() >= 0.0))
        throw std::invalid_argument("weight table x must be >= 0");
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ws[i]) || !(ws[i] > 0))
            throw std::invalid_argument("weight table row " + std::to_string(i) +
                                        " is not finite/positive");
        if (i > 0 && !(xs[i] > xs[i - 1]))
            throw std::invalid_argument("weight table x must be strictly ascending");
        if (i > 0 && ws[i] < ws[i - 1])
            throw std::invalid_argument("weight table w must be non-decreasing");
    }
    WeightSpec s;
    s.family_ = Family::Tabulated;
    s.param_ = 0.0;
    s.low_ = ws.front();
    s.tx_ = std::move(xs);
    s.tw_ = std::move(ws);
    s.source_ = std::move(source);
    return s;
}

WeightSpec WeightSpec::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open weight table '" + path + "'");
    std::vector<double> xs, ws;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected x,w");
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        if (lineno == 1 && (a == "x" || a == "node"))
            continue;
        while (!b.empty() && (b.back() == '\r' || b.back() == ' '))
            b.pop_back();
        xs.push_back(parse_number(a, path + ":" + std::to_string(lineno)));
        ws.push_back(parse_number(b, path + ":" + std::to_string(lineno)));
    }
    return tabulated(std::move(xs), std::move(ws), path);
}

WeightSpec WeightSpec::parse(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "critical") {
        if (!arg.empty())
            throw std::invalid_argument("critical weight takes no parameter");
        return critical();
    }
    if (arg.empty())
        throw std::invalid_argument("weight '" + text + "' needs a parameter");
    if (head == "linear")
        return linear(parse_number(arg, "linear:c"));
    if (head == "power")
        return power(parse_number(arg, "power:p"));
    if (head == "polylog")
        return polylog(parse_number(arg, "polylog:alpha"));
    if (head == "table")
        return from_csv(arg);
    throw std::invalid_argument("unknown weight family '" + head + "'");
}

double WeightSpec::w(double x) const {
    if (!std::isfinite(x) || x < 0)
        throw std::domain_error("weight argument must be finite and >= 0");
    switch (family_) {
    case Family::Linear:
        return x + param_;
    case Family::Power:
        return std::pow(x + 1.0, param_);
    case Family::PolyLog:
        if (x <= kE)
            return 1.0;
        return x * std::exp(-std::pow(std::log(x), param_));
    case Family::Critical:
        if (x <= kE2)
            return low_;
        return critical_core(x);
    case Family::Tabulated: {
        if (x > tx_.back() || x < tx_.front())
            throw std::domain_error("weight table evaluated outside its hull");
        auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
        if (it == tx_.end())
            return tw_.back();
        size_t i = static_cast<size_t>(it - tx_.begin()) - 1;
        double t = (x - tx_[i]) / (tx_[i + 1] - tx_[i]);
        return tw_[i] + t * (tw_[i + 1] - tw_[i]);
    }
    }
    return 1.0;
}

double WeightSpec::ell(double x) const {
    if (!(x > 0))
        throw std::domain_error("ell is undefined at x <= 0");
    return x / w(x);
}

double WeightSpec::log_w_at_log(double t) const {
    if (std::isnan(t))
        throw std::domain_error("log_w_at_log: NaN");
    switch (family_) {
    case Family::Linear: {
        double c = param_;
        if (t > 0)
            return t + std::log1p(c * std::exp(-t));
        return std::log(c + std::exp(t));
    }
    case Family::Power:
        if (t > 0)
            return param_ * (t + std::log1p(std::exp(-t)));
        return param_ * std::log1p(std::exp(t));
    case Family::PolyLog:
        if (t <= 1.0)
            return 0.0;
        return t - std::pow(t, param_);
    case Family::Critical:
        if (t <= 2.0)
            return std::log(low_);
        return t - t / std::log(t);
    case Family::Tabulated:
        if (t > std::log(tx_.back()) || std::exp(t) < tx_.front())
            throw std::domain_error("weight table evaluated outside its hull");
        return std::log(w(std::exp(t)));
    }
    return 0.0;
}

double WeightSpec::log_ell_at_log(double t) const {
    switch (family_) {
    case Family::Linear:
        if (t > 0)
            return -std::log1p(param_ * std::exp(-t));
        return t - std::log(param_ + std::exp(t));
    case Family::Power:
        if (t > 0)
            return (1.0 - param_) * t - param_ * std::log1p(std::exp(-t));
        return t - param_ * std::log1p(std::exp(t));
    case Family::PolyLog:
        if (t <= 1.0)
            return t;
        return std::pow(t, param_);
    case Family::Critical:
        if (t <= 2.0)
            return t - std::log(low_);
        return t / std::log(t);
    case Family::Tabulated:
        return t - log_w_at_log(t);
    }
    return t;
}

std::vector<double> WeightSpec::log_breakpoints() const {
    switch (family_) {
    case Family::PolyLog:
        return {1.0};
    case Family::Critical:
        return {2.0};
    case Family::Tabulated: {
        std::vector<double> out;
        for (size_t i = 1; i < tx_.size(); ++i)
            out.push_back(std::log(tx_[i]));
        return out;
    }
    default:
        return {};
    }
}

double WeightSpec::hull_top() const {
    if (family_ == Family::Tabulated)
        return tx_.back();
    return std::numeric_limits<double>::infinity();
}

std::string WeightSpec::name() const {
    switch (family_) {
    case Family::Linear:
        return "linear:" + fmt_param(param_);
    case Family::Power:
        return "power:" + fmt_param(param_);
    case Family::PolyLog:
        return "polylog:" + fmt_param(param_);
    case Family::Critical:
        return "critical";
    case Family::Tabulated:
        return "table:" + source_;
    }
    return "?";
}

AssumptionReport check_assumption(const WeightSpec& spec, double grid_top,
                                  int nodes_per_decade) {
    AssumptionReport r;
    double top = std::min(grid_top, spec.hull_top());
    double lo = 1e-3;
    int n = static_cast<int>(std::ceil(std::log10(top / lo) * nodes_per_decade));
    std::vector<double> xs(n + 1), ws(n + 1), ls(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = i == n ? top : lo * std::pow(10.0, double(i) / nodes_per_decade);
        ws[i] = spec.w(xs[i]);
        ls[i] = xs[i] / ws[i];
    }
    for (int i = 1; i <= n; ++i)
        if (ws[i] < ws[i - 1])
            r.monotone = false;
    // ell is only required to be eventually monotone; look at the upper half.
    for (int i = n / 2 + 1; i <= n; ++i)
        if (ls[i] < ls[i - 1])
            r.ell_eventually_nondecreasing = false;
    double x = top / 20.0;
    for (int k = 0; k <= 32; ++k) {
        double xk = x * std::pow(10.0, k / 32.0);
        if (2 * xk > top)
            break;
        double ratio = spec.ell(2 * xk) / spec.ell(xk);
        r.slow_variation_ratio = std::max(r.slow_variation_ratio, std::abs(ratio - 1.0));
    }
    return r;
}

} // namespace vrrw
