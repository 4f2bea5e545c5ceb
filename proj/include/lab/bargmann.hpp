#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lab/common.hpp"
#include "lab/geometry.hpp"

namespace lab::barg {

// Hermite functions psi_k(t) = c_k H_k(sqrt(2) t) e^{-t^2}, orthonormal in
// L^2(R), generated by the stable recurrence
// psi_{k+1} = (2t/sqrt(k+1)) psi_k - sqrt(k/(k+1)) psi_{k-1}.
class HermiteBasis {
  public:
    HermiteBasis(long m, double T);

    long m() const { return m_; }
    double T() const { return T_; }

    // psi_0(t) .. psi_{m-1}(t)
    std::vector<double> psi_all(double t) const;

    // Full-line Gram matrix under the Gauss-Hermite grid; identity up to
    // quadrature error.
    Eigen::MatrixXd fullline_gram() const;

  private:
    long m_;
    double T_;
    std::vector<double> nodes_, weights_;  // e^{-2t^2}-adapted Gauss-Hermite
};

// G[j][k] = int_{-inf}^{l} psi_j psi_k dt. Compression of a projection:
// symmetric with eigenvalues in [0,1].
Eigen::MatrixXd halfline_gram(const HermiteBasis& basis, double l);

// Normalized Fock-space monomials e_k(z) = z^k e^{-|z|^2/2} / sqrt(k!).
class FockBasis {
  public:
    explicit FockBasis(long m);
    long m() const { return m_; }
    cplx e(long k, cplx z) const;

  private:
    long m_;
};

// A[j][k] = <e_j, P_l e_k> by nested 2D quadrature of the half-plane kernel.
// Throws if the internal quadrature residual exceeds 1e-4.
Eigen::MatrixXcd erfc_matrix_direct(const FockBasis& fock, double l);

// <e_j, chi_W e_k> over a window, for covariance checks.
Eigen::MatrixXcd window_matrix(const FockBasis& fock, const geom::Window& w,
                               double h = 0.02);

// Numerical Bargmann transform of psi_k at z (Gauss-Hermite in t).
cplx bargmann_transform(const HermiteBasis& basis, long k, cplx z);

// Max-entry gap between the two realizations of the half-line projection
// compressed to the leading m basis vectors.
double factorization_residual(long m, double l);

}  // namespace lab::barg
