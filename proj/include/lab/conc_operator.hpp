#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lab/common.hpp"
#include "lab/geometry.hpp"
#include "lab/kernel.hpp"

namespace lab::op {

// Nystrom discretization of the compressed kernel M_chi K M_chi on a window:
// A[j][k] = sqrt(w_j w_k) K(x_j, x_k). Nonzero spectrum matches the
// concentration operator P M_W P.
struct ConcentrationOperator {
    ker::KernelId kernel;
    geom::QuadratureGrid grid;
    Eigen::MatrixXcd matrix;
};

struct Spectrum {
    std::vector<double> eigenvalues;  // descending, clamped to [0,1]
    double trace = 0.0;
    double hs_sq = 0.0;          // sum of squares
    double clamp_excursion = 0.0;  // worst distance outside [0,1] before clamping
};

struct BuildOptions {
    double h = 0.1;             // grid pitch (caller rescales for zoomed windows)
    std::size_t node_cap = 6000;
    // For degree-n kernels the window is first intersected with the inflated
    // droplet S + B_{(M+s)/sqrt(n)}; for half-plane kernels it is truncated at
    // Re z <= l + 12 (the profile is < 1e-60 beyond).
    double M = 4.0;
    double s = 0.3;
};

ConcentrationOperator build(const ker::KernelId& kernel, const geom::Window& w,
                            const BuildOptions& opt = {});

Spectrum spectrum(const ConcentrationOperator& op);

// Build + eigensolve at pitch h and h/sqrt(2); reject the result if any of the
// first 2|W|/pi eigenvalues moves by 0.01 or more.
Spectrum checked_spectrum(const ker::KernelId& kernel, const geom::Window& w,
                          const BuildOptions& opt = {});

long counting(const Spectrum& s, double alpha);

// ceil((tr - hs) / (delta (1 - delta))), an upper bound on the number of
// eigenvalues strictly between delta and 1 - delta.
long two_moment_plunge_bound(const Spectrum& s, double delta);

struct BoundParams {
    double C_univ = 1.0;  // fitted stand-in for the universal constant
    double eta = 1.0;
    double kappa = 1.0;
};

enum class BoundSide { upper, lower };

// Counting-function sandwich right-hand side:
//   |W|/pi +- (C/kappa) H^1(dW) (sqrt(log 1/a) + log(1/a)/eta) log(1 + log 1/a),
// the lower side additionally scaled by h(a), h(x) = 1 for x <= 2, x^2 log x above.
double counting_rhs(const geom::Window& w, double alpha, double a,
                const BoundParams& params, BoundSide side);

double plunge_weight(double x);

}  // namespace lab::op
