#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vrrw/calculus.hpp"
#include "vrrw/grid_fn.hpp"
#include "vrrw/weights.hpp"

namespace vrrw {

// Index values use kInfinite for "no bounded iterate found up to the cap".
constexpr int kInfinite = std::numeric_limits<int>::max();

enum class Verdict { Bounded, Unbounded, Undetermined };
const char* verdict_name(Verdict v);

struct TailOptions {
    double tol_sat = 0.02;
    double slope_lo = 0.02;
    double slope_hi = 0.10;
};

struct TailClass {
    Verdict verdict = Verdict::Undetermined;
    double fitted_exponent = 0; // log-log slope over the fit window
    double fit_lo = 0, fit_hi = 0;
    double saturation_ratio = 0; // f(X) / f(sqrt X)
};

// Dual criterion on the top of f's hull X:
//   Bounded      f(X)/f(sqrt X) <= 1 + tol_sat and slope <= slope_lo
//   Unbounded    slope >= slope_hi
//   Undetermined otherwise
// where slope is the log-log slope of f over [X/100, X].
TailClass classify_tail(const GridFn& f, const TailOptions& opt = {});

class UndeterminedTail : public std::runtime_error {
public:
    UndeterminedTail(const std::string& what, TailClass tc)
        : std::runtime_error(what), evidence(tc) {}
    TailClass evidence;
};

struct OperatorConfig {
    // W-coordinate grid used by the G/h/phi iterations.
    double u_lo = 1e-6;
    double u_hi = 1e300;
    int u_nodes_per_decade = 16;
    // x-space grid used by H, Phi, Psi and f_eta.
    double x_lo = 1e-3;
    double x_hi = 1e12;
    int x_nodes_per_decade = 32;
    int gauss_points = 8;
    int j_max = 8;
    TailOptions tail;
};

// Shared, immutable state for one weight: the log-domain W table plus the
// quadrature points of both grids with kappa/lambda cached on them.
class OperatorContext {
public:
    OperatorContext(const WeightSpec& spec, OperatorConfig cfg = {});

    const WeightSpec& spec() const { return scale_->spec(); }
    const WScale& scale() const { return *scale_; }
    const OperatorConfig& config() const { return cfg_; }
    const std::vector<double>& u_nodes() const { return u_nodes_; }
    const std::vector<double>& x_nodes() const { return x_nodes_; }

    // Cell c covers [node_{c-1}, node_c] (cell 0 is [0, node_0]).
    struct Quad {
        std::vector<double> nodes;
        std::vector<double> points;  // cells * G abscissae
        std::vector<double> weights; // G normalised weights
        std::vector<double> lambda;  // lambda at points
        std::vector<double> kappa;   // kappa at points
        int G = 8;
        bool log_variable = false;
    };
    const Quad& u_quad() const { return uq_; }
    const Quad& x_quad() const { return xq_; }

    // Identity and eta*Id sampled on the W grid.
    GridFn scaled_identity_u(double eta) const;
    GridFn scaled_identity_x(double eta) const;

private:
    std::shared_ptr<WScale> scale_;
    OperatorConfig cfg_;
    std::vector<double> u_nodes_, x_nodes_;
    Quad uq_, xq_;
};

// G(f)(x) = int_0^x w(W^{-1}(f(u))) / w(W^{-1}(u)) du, on f's nodes (W coordinates).
GridFn apply_G(const OperatorContext& ctx, const GridFn& f);

// H(f)(x) = W^{-1}(int_0^x du / w(f^{-1}(u))), on f's nodes (x space).
GridFn apply_H(const OperatorContext& ctx, const GridFn& f);

// Closed form Phi_{eta,2}(x) = W^{-1}(eta W(x / eta)).
double phi2_closed(const OperatorContext& ctx, double eta, double x);

struct Sequence {
    std::vector<GridFn> fns;        // first entry has index `first_index`
    std::vector<TailClass> verdicts; // aligned with fns
    int first_index = 1;
    int index = kInfinite;          // first bounded index, or kInfinite
};

// g_{eta,k} = G^{k-1}(eta Id); index i_eta = first k >= 2 with a bounded g.
// Stops at the first Bounded verdict; throws UndeterminedTail on Undetermined.
Sequence g_sequence(const OperatorContext& ctx, double eta, int k_max);

// Raw iterates g_{eta,1..k} with no classification.
std::vector<GridFn> g_iterates(const OperatorContext& ctx, double eta, int k);

// h_{eta,2} = eta Id and
// h_{eta,j+1}(x) = eta int_0^x w(W^{-1}(h_{eta,j}(u))) / w(eta W^{-1}(u)) du.
// index j_eta = first j >= 3 with a bounded h.
Sequence conjugate_iterate(const OperatorContext& ctx, double eta, int j_max);
std::vector<GridFn> h_iterates(const OperatorContext& ctx, double eta, int j);

// Phi_{eta,1} = eta Id, Phi_{eta,j+1} = H(Phi_{eta,j}) in x space. Phi_2 is
// computed with apply_H; later members come from the W-conjugate
// phi_j = W o Phi_j o W^{-1}, iterated as
//   phi_{j+1}(x) = int_0^x exp(kappa(z) - kappa(phi_j^{-1}(z))) dz
// on the part of the hull where phi_j^{-1} is known. Verdicts are taken on
// phi_j. `conjugates` holds phi_1.. (phi_1 is implicit and left empty).
struct PhiFamily {
    std::vector<GridFn> Phi;        // x-space Phi_{eta,1..}
    std::vector<GridFn> conjugates; // phi_{eta,2..}
    std::vector<TailClass> verdicts; // for j = 2..
    int index = kInfinite;           // j_eta by this route
};
PhiFamily phi_family(const OperatorContext& ctx, double eta, int j_max);

struct EtaIndex {
    double eta = 0.5;
    int i = kInfinite;
    int j = kInfinite;
    int j_phi = kInfinite; // cross-check route, kInfinite when not run
    std::vector<TailClass> g_evidence, h_evidence;
};

struct IndexReport {
    std::string family;
    std::string params;
    std::vector<EtaIndex> rows;
    int i_minus = kInfinite, i_plus = kInfinite;
    int j_minus = kInfinite, j_plus = kInfinite;
    bool two_value = true;
    bool j_is_i_plus_1 = true;
    std::string to_json() const;
};

EtaIndex index_at(const OperatorContext& ctx, double eta, bool cross_check = false);

// Sweep over an explicit eta grid (must straddle 1/2). Aborts when j_eta is
// not non-decreasing along the grid.
IndexReport index_limits(const OperatorContext& ctx, const std::vector<double>& etas,
                         bool cross_check = false);
// n_eta points on each side of 1/2 within eta_half_width, plus 1/2 itself.
std::vector<double> eta_grid(double eta_half_width, int n_eta);

struct GrowthReport {
    double alpha = 0, eta = 0.5;
    int k = 1;
    double fitted_exponent = 0;
    double predicted_exponent = 0;
    double rel_error = 0;
    bool precondition_ok = true;
    bool fit_ok = true;
    std::string note;
};

// Fits e in g_{eta,k}(x) = x exp(-c (log x)^e) over the top two decades.
GrowthReport growth_sandwich_check(const OperatorContext& ctx, double eta, int k);

// Psi_{1/2,i}, i = 1..i_max, on the x grid. Psi_1 = x/4 exactly.
std::vector<GridFn> psi_profile(const OperatorContext& ctx, int i_max);

struct FEta {
    GridFn f;
    bool used_correction = true; // false when h was dropped
    double check_b = 0;          // f(X)/X
    double check_c = 0;          // (W - W_f)(X) / ell(X)
    bool check_d = false;        // W - W_f increasing and above mid-hull value
    bool verified = true;        // false only in non-strict mode
    std::vector<std::string> warnings;
};

// f = Phi_{eta,2} + x/(1+log(1+x))^2 on [1e-3, x_top], then verified.
// With strict unset, a candidate failing (c)/(d) is returned with
// verified = false instead of throwing.
FEta build_f_eta(const OperatorContext& ctx, double eta, double x_top = 1e10,
                 bool strict = true);

// Largest eps in {2^-5, ..., 2^-12} with i_{1/2+3 eps} = i_plus.
double choose_epsilon(const OperatorContext& ctx, int i_plus);

} // namespace vrrw
