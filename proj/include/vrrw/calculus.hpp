#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vrrw/grid_fn.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

// W(x) = int_0^x du / w(u) on a geometric x-grid anchored at 1e-3.
// Cells are integrated by adaptive Simpson in the variable log u.
GridFn compute_W(const WeightSpec& spec, double x_max, int nodes_per_decade = 32);

// Monotone inverse of a W grid (solves the forward interpolant).
GridFn invert_W(const GridFn& W);

// W_psi(x) = int_0^x du / w(u + psi(u)). A null psi gives W through the very
// same code path, so the two agree bit for bit.
using PsiFn = std::function<double(double)>;
GridFn compute_W_psi(const WeightSpec& spec, const PsiFn& psi, double x_max,
                     int nodes_per_decade = 32);

// W in logarithmic coordinates, tabulated far past the double range of x.
//
// With t = log x and s = log W(e^t), the table stores (t_k, s_k, ds/dt) on a
// grid adapted so that s moves by at most ds_step per cell. Lookups invert
// the cubic Hermite interpolant and then polish with Newton steps on the
// exact cell integral, so lambda() is accurate to a few ulps in s.
class WScale {
public:
    struct Options {
        double u_max = 1e300;   // largest W value that must be invertible
        double ds_step = 0.01;  // max change of log W per cell
        double t_start = -40.0; // W(x) = x / w(0) below e^t_start
        double cell_rel_tol = 1e-12;
        bool polish = true;
    };

    explicit WScale(const WeightSpec& spec);
    WScale(const WeightSpec& spec, const Options& opt);

    // W(e^t) and log W(e^t).
    double log_W_at_log(double t) const;
    double W_at_log(double t) const;
    double W(double x) const;

    // lambda(u) = log W^{-1}(u); -inf at u = 0.
    double lambda(double u) const;
    // kappa(u) = log w(W^{-1}(u)).
    double kappa(double u) const;
    // W^{-1}(u); may overflow to +inf for large u.
    double W_inv(double u) const;
    double log_w_at_log(double t) const { return spec_.log_w_at_log(t); }

    // Supremum of representable W values: u_max unless 1/w is integrable or
    // the weight table ends first.
    double u_sup() const { return u_sup_; }
    bool bounded_W() const { return bounded_; }
    size_t table_size() const { return t_.size(); }
    const WeightSpec& spec() const { return spec_; }

private:
    double phi(double t) const { return spec_.log_ell_at_log(t); }
    double log_cell_integral(double a, double b) const;
    double log_cell_integral_gl(double a, double b) const;
    size_t cell_of_t(double t) const;
    void build();

    WeightSpec spec_;
    Options opt_;
    double log_w0_ = 0;
    std::vector<double> t_, s_, d_;
    double u_sup_ = 0;
    bool bounded_ = false;
};

} // namespace vrrw
