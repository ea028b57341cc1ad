#pragma once

#include <string>
#include <vector>

namespace vrrw {

enum class TailRule { Constant, LinearInLog, Power };

// Extrapolation beyond the end nodes, anchored at the end node value.
//   Constant     f(x) = v_end
//   LinearInLog  f(x) = v_end + slope * log(x / x_end)
//   Power        f(x) = v_end * (x / x_end)^slope
struct Tail {
    TailRule rule = TailRule::Constant;
    double slope = 0.0;
};

// Interpolation coordinates. LogLog interpolates log f against log x and
// needs strictly positive nodes and values.
enum class Interp { LogLog, Linear };

// Sampled monotone scalar function with cubic Hermite interpolation.
//
// Slopes are df/dx at the nodes. When none are given they are chosen by the
// Fritsch-Carlson rule, so the interpolant is monotone whenever the data are.
// inverse() solves the forward interpolant itself, hence f(inverse(y)) == y
// up to the solver tolerance and not merely up to interpolation error.
class GridFn {
public:
    GridFn() = default;
    GridFn(std::vector<double> nodes, std::vector<double> values,
           std::vector<double> slopes = {}, Tail lo = {TailRule::Power, 1.0},
           Tail hi = {TailRule::Constant, 0.0});

    double operator()(double x) const;
    double inverse(double y) const;

    // The inverse function as a GridFn (shares data, swaps roles).
    GridFn inverted() const;

    // Nodes and values as seen by the caller (swapped when inverted).
    const std::vector<double>& nodes() const { return inverted_ ? values_ : nodes_; }
    const std::vector<double>& values() const { return inverted_ ? nodes_ : values_; }
    size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    double top() const { return nodes().back(); }
    double bottom() const { return nodes().front(); }
    bool monotone() const { return monotone_; }
    bool is_inverted() const { return inverted_; }
    Interp interp() const { return interp_; }
    const Tail& lo_tail() const { return lo_; }
    const Tail& hi_tail() const { return hi_; }
    const std::vector<double>& raw_slopes() const { return slopes_; }

    std::string to_json() const;
    static GridFn from_json(const std::string& text);
    std::string to_csv() const;
    static GridFn from_csv(const std::string& text);

private:
    double eval_forward(double x) const;
    double solve_forward(double y) const;
    double cell_eval(size_t i, double x) const;
    // A log-log cell whose end slopes equal its secant is an exact power law
    // and is evaluated (and inverted) in closed form.
    bool power_cell(size_t i) const;

    std::vector<double> nodes_, values_, slopes_;
    // Interpolation-space copies: X, Y and dY/dX.
    std::vector<double> X_, Y_, D_;
    Tail lo_, hi_;
    Interp interp_ = Interp::Linear;
    bool monotone_ = false;
    bool inverted_ = false;

    void prepare();
};

// Geometric grid lo * r^k, last node exactly hi.
std::vector<double> geometric_nodes(double lo, double hi, int nodes_per_decade);

// Sample a callable on nodes, with optional exact derivative.
template <class F>
GridFn sample(const std::vector<double>& nodes, F&& f, Tail lo = {TailRule::Power, 1.0},
              Tail hi = {TailRule::Constant, 0.0}) {
    std::vector<double> v(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        v[i] = f(nodes[i]);
    return GridFn(nodes, std::move(v), {}, lo, hi);
}

} // namespace vrrw
