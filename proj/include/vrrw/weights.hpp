#pragma once

#include <string>
#include <vector>

namespace vrrw {

enum class Family { Linear, Power, PolyLog, Critical, Tabulated };

// Positive non-decreasing reinforcement weight.
//
// Closed forms:
//   linear:c     w(x) = x + c
//   power:p      w(x) = (x + 1)^p
//   polylog:a    w(x) = x exp(-(log x)^a) for x >= e, 1 on [0, e]
//   critical     w(x) = x exp(-log x / log log x) for x >= e^2, w(e^2) below
//   table:path   piecewise linear through (x, w) rows, x ascending from 0
class WeightSpec {
public:
    static WeightSpec linear(double c);
    static WeightSpec power(double p);
    static WeightSpec polylog(double alpha);
    static WeightSpec critical();
    static WeightSpec tabulated(std::vector<double> xs, std::vector<double> ws,
                                std::string source = "inline");
    static WeightSpec from_csv(const std::string& path);
    // Accepts the config-file names listed above.
    static WeightSpec parse(const std::string& text);

    double w(double x) const;
    double ell(double x) const;

    // log w(e^t), valid for any finite t. Avoids forming e^t so that the
    // calculus module can work far beyond the double range of x.
    double log_w_at_log(double t) const;

    // log ell(e^t) = t - log w(e^t), computed without cancellation.
    double log_ell_at_log(double t) const;

    // Values of t = log x where w has a derivative jump.
    std::vector<double> log_breakpoints() const;

    // Largest x at which w is defined (infinity for closed forms).
    double hull_top() const;

    Family family() const { return family_; }
    double param() const { return param_; }
    double domain_floor() const { return floor_; }
    double low_value() const { return low_; }
    const std::vector<double>& table_x() const { return tx_; }
    const std::vector<double>& table_w() const { return tw_; }

    // Canonical string, round-trips through parse() for closed forms.
    std::string name() const;

private:
    Family family_ = Family::Linear;
    double param_ = 1.0;
    double floor_ = 0.0;
    double low_ = 1.0;
    std::vector<double> tx_, tw_;
    std::string source_;
};

struct AssumptionReport {
    bool monotone = true;
    double slow_variation_ratio = 0.0;
    bool ell_eventually_nondecreasing = true;
};

// Sampled diagnostic on a geometric grid up to grid_top (>= 1e3).
AssumptionReport check_assumption(const WeightSpec& spec, double grid_top,
                                  int nodes_per_decade = 32);

} // namespace vrrw
