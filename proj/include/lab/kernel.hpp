#pragma once

#include <variant>
#include <vector>

#include "lab/common.hpp"
#include "lab/potential.hpp"

namespace lab::ker {

// Complementary-error-function profile F(z) = erfc(z / sqrt(2)) / 2.
// Far in the right half-plane the value underflows double precision; the
// status records that the returned 0 (or 1 on the other side) is a clamp.
struct FStatus {
    bool underflow = false;
};

cplx erfc_F(cplx z, FStatus* status = nullptr);

// Scaled complex complementary error function, w(z) valid for Im z >= 0.
cplx faddeeva_upper(cplx z);

struct Ginibre {};

// Half-plane concentration profile: G(z,w) * F(z + conj(w) - 2l).
struct Erfc {
    double l;
};

// Reproducing kernel of the degree-< n weighted polynomial space for a
// radial field. Basis functions are normalized monomials
// phi_k(z) = z^k e^{-n Q(z)/2} / nu_k, and the squared norms
// nu_k^2 = 2 int_0^inf r^{2k+1} e^{-n Q(r)} dr are tabulated in log form so
// sums stay finite well past n ~ 700.
class FiniteN {
  public:
    FiniteN(pot::Potential pot, long n, long n_cap = 20000);

    long n() const { return n_; }
    const pot::Potential& potential() const { return pot_; }

    cplx eval(cplx z, cplx w) const;
    cplx phi(long k, cplx z) const;
    double log_nu2(long k) const { return lognu2_[static_cast<std::size_t>(k)]; }

  private:
    pot::Potential pot_;
    long n_;
    std::vector<double> lognu2_;
};

using KernelId = std::variant<Ginibre, Erfc, FiniteN>;

cplx eval(const KernelId& k, cplx z, cplx w);

// Modulus of the zoomed-in kernel at a boundary (or bulk) point:
// |K_m(inv(z), inv(w))| / (m DQ), m = floor(rho n), with the affine zoom
// u -> sqrt(m DQ(p_n)) (u - p_n) e^{-i theta_n}. Moduli only: the unimodular
// cocycle factors cancel there.
double rescaled_modulus(const pot::Potential& pot, cplx p_n, long n, double rho,
                        cplx z, cplx w);
// Same map with a prebuilt kernel of index m = floor(rho n).
double rescaled_modulus(const FiniteN& km, cplx p_n, long n, cplx z, cplx w);

// |K_n(z,z) - n DQ(z)|, the pointwise density mismatch.
double diag_check(const pot::Potential& pot, cplx z, long n);

// Worst-case off-diagonal modulus max_phi |K_n(z, z + r e^{i phi})| per radius.
std::vector<double> offdiag_decay_profile(const FiniteN& kn, cplx z,
                                          const std::vector<double>& radii);

// Least-squares decay rate eps in |K_n(z, z+r e^{i phi})| <~ n e^{-eps sqrt(n) r}.
double fit_decay_rate(const std::vector<double>& radii,
                      const std::vector<double>& profile, long n);

}  // namespace lab::ker
