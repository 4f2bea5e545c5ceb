#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lab/kernel.hpp"

using namespace lab;
using namespace lab::ker;
using pot::Potential;

namespace {

// Reference erfc by the alternating Maclaurin series of erf in extended
// precision; trustworthy for |z| <= 3.5 or so.
std::complex<long double> erfc_series(std::complex<long double> z) {
    std::complex<long double> term = z, sum = z;
    const std::complex<long double> z2 = z * z;
    for (int n = 1; n < 200; ++n) {
        term *= -z2 / static_cast<long double>(n);
        std::complex<long double> add = term / static_cast<long double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-25L * std::abs(sum) && n > 10) break;
    }
    const long double two_over_sqrt_pi = 1.128379167095512573896L;
    return 1.0L - two_over_sqrt_pi * sum;
}

cplx oracle_F(cplx z) {
    std::complex<long double> zeta(z.real(), z.imag());
    zeta /= std::sqrt(2.0L);
    auto v = 0.5L * erfc_series(zeta);
    return cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
}

}  // namespace

TEST_CASE("F on the real axis agrees with std::erfc") {
    CHECK(erfc_F(0.0).real() == doctest::Approx(0.5));
    CHECK(erfc_F(0.0).imag() == 0.0);
    // standard normal tail at 1
    CHECK(erfc_F(1.0).real() == doctest::Approx(0.158655253931).epsilon(1e-10));
    for (double x = -10.0; x <= 10.0; x += 0.0917) {
        double ref = 0.5 * std::erfc(x / std::sqrt(2.0));
        CHECK(erfc_F(x).real() == doctest::Approx(ref).epsilon(1e-12));
        CHECK(std::abs(erfc_F(x).imag()) < 1e-15 * std::max(1.0, ref));
    }
}

TEST_CASE("F reflection and complex accuracy") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        cplx z(3.0 * u(rng), 3.0 * u(rng));
        cplx s = erfc_F(z) + erfc_F(-z);
        CHECK(std::abs(s - 1.0) < 1e-10);
        if (std::abs(z) <= 3.4) {
            cplx ref = oracle_F(z);
            CHECK(std::abs(erfc_F(z) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
    // taller imaginary strip, modest real part: cross-check via reflection of
    // the series-validated region and against itself
    for (double y = -8.0; y <= 8.0; y += 0.53) {
        cplx z(0.7, y);
        CHECK(std::abs(erfc_F(z) + erfc_F(-z) - 1.0) <
              1e-10 * std::max(1.0, std::abs(erfc_F(z))));
    }
}

TEST_CASE("F clamps far out on the real direction") {
    FStatus st;
    CHECK(erfc_F(cplx(-45.0, 1.0), &st) == cplx(1.0));
    CHECK(!st.underflow);
    CHECK(erfc_F(cplx(45.0, 1.0), &st) == cplx(0.0));
    CHECK(st.underflow);
}

TEST_CASE("Ginibre kernel closed form") {
    KernelId g = Ginibre{};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        CHECK(std::abs(eval(g, z, z) - 1.0) < 1e-14);
        CHECK(std::abs(std::abs(eval(g, z, w)) -
                       std::exp(-0.5 * std::norm(z - w))) < 1e-14);
        CHECK(std::abs(eval(g, z, w) - std::conj(eval(g, w, z))) < 1e-14);
    }
    CHECK(std::abs(eval(g, 0.0, 2.0)) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("half-plane kernel is Hermitian") {
    KernelId f = Erfc{0.5};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 50; ++t) {
        cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        cplx a = eval(f, z, w), b = eval(f, w, z);
        CHECK(std::abs(a - std::conj(b)) < 1e-12);
    }
    // diagonal at the cut line is one half
    CHECK(std::abs(eval(KernelId(Erfc{0.0}), 0.0, 0.0) - 0.5) < 1e-13);
}

TEST_CASE("monomial norms: closed forms for p=1 and p=2") {
    // p=1: nu_k^2 = k!/n^{k+1} (used internally); check the numeric
    // integrator against the p=2 closed form nu_k^2 = Gamma((k+1)/2)/(2 n^{(k+1)/2})
    long n = 256;
    FiniteN k2(Potential(2.0), n);
    for (long k : {0L, 1L, 5L, 64L, 255L}) {
        double ref = std::lgamma((k + 1) / 2.0) - std::log(2.0) -
                     0.5 * (k + 1) * std::log(static_cast<double>(n));
        CHECK(k2.log_nu2(k) == doctest::Approx(ref).epsilon(1e-10));
    }
    FiniteN k1(Potential(1.0), n);
    for (long k : {0L, 7L, 100L}) {
        double ref = std::lgamma(k + 1.0) - (k + 1) * std::log(static_cast<double>(n));
        CHECK(k1.log_nu2(k) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("finite kernel values and guards") {
    long n = 1024;
    FiniteN kn(Potential(1.0), n);
    CHECK(kn.eval(0.0, 0.0).real() == doctest::Approx(static_cast<double>(n)));
    CHECK(kn.eval(0.0, 0.0).imag() == 0.0);
    // Hermitian
    cplx z(0.3, -0.2), w(-0.5, 0.7);
    CHECK(std::abs(kn.eval(z, w) - std::conj(kn.eval(w, z))) <
          1e-12 * std::abs(kn.eval(z, w)) + 1e-12);
    CHECK_THROWS_AS(FiniteN(Potential(1.0), 50000), ResourceError);
    CHECK_THROWS_AS(FiniteN(Potential(1.0), 0), InvalidArgumentError);
}

TEST_CASE("diagonal density mismatch") {
    Potential gin(1.0);
    CHECK(diag_check(gin, 0.0, 64) == doctest::Approx(0.0));
    CHECK(diag_check(gin, std::polar(0.8, 1.1), 1024) <= 1e-6);
    // at the droplet edge, half the mass is missing
    double n = 1024;
    CHECK(diag_check(gin, std::polar(1.0, -0.4), 1024) ==
          doctest::Approx(n / 2.0).epsilon(0.05));
}

TEST_CASE("off-diagonal decay") {
    long n = 1024;
    FiniteN kn(Potential(1.0), n);
    double rn = std::sqrt(static_cast<double>(n));
    std::vector<double> radii = {0.0, 1.0 / rn, 2.0 / rn, 3.0 / rn, 4.0 / rn};
    auto prof = offdiag_decay_profile(kn, 0.0, radii);
    CHECK(prof[0] == doctest::Approx(static_cast<double>(n)));
    CHECK(prof[4] <= prof[1]);
    double eps = fit_decay_rate({radii.begin() + 1, radii.end()},
                                {prof.begin() + 1, prof.end()}, n);
    CHECK(eps >= 0.5);
}

TEST_CASE("reproducing identity under quadrature") {
    // polar product rule: trapezoid in angle (exact for the trigonometric
    // degree at hand), composite Gauss-Legendre radially
    long n = 48;
    FiniteN kn(Potential(1.0), n);
    const int n_theta = 4 * static_cast<int>(n) + 32;
    const int panels = 40;
    const double r_cut = 3.0;
    // 8-point GL half-rule
    const double gx[4] = {0.1834346424956498, 0.5255324099163290,
                          0.7966664774136267, 0.9602898564975363};
    const double gw[4] = {0.3626837833783620, 0.3137066458778873,
                          0.2223810344533745, 0.1012285362903763};
    cplx z(0.4, 0.2), w(-0.3, 0.6);
    cplx acc = 0.0;
    for (int panel = 0; panel < panels; ++panel) {
        double a = r_cut * panel / panels, b = r_cut * (panel + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 4; ++i)
            for (double sgn : {-1.0, 1.0}) {
                double r = mid + sgn * half * gx[i];
                double wr = gw[i] * half * r * (2.0 * kPi / n_theta) / kPi;
                for (int j = 0; j < n_theta; ++j) {
                    cplx u = std::polar(r, 2.0 * kPi * j / n_theta);
                    acc += wr * kn.eval(z, u) * kn.eval(u, w);
                }
            }
    }
    cplx ref = kn.eval(z, w);
    CHECK(std::abs(acc - ref) <= 1e-6 * std::abs(ref));
}

TEST_CASE("half-plane kernel is idempotent") {
    // The product F_l(z,u)F_l(u,w) decays only like 1/|Im u|^2 along the cut
    // line (tail mass ~ 0.11/Y), so the integration band must extend far in
    // the imaginary direction; the grid is graded there.
    for (double l : {0.0, 1.0}) {
        KernelId f = Erfc{l};
        cplx z(0.3, 0.1), w(-0.2, 0.5);
        std::vector<double> ys, hys;
        for (double y = -12.0; y < 12.0; y += 0.05) {
            ys.push_back(y + 0.025);
            hys.push_back(0.05);
        }
        for (double y = 12.0; y < 1500.0;) {
            double h = std::clamp(0.05 * y / 12.0, 0.05, 0.5);
            ys.push_back(y + 0.5 * h);
            ys.push_back(-y - 0.5 * h);
            hys.push_back(h);
            hys.push_back(h);
            y += h;
        }
        cplx acc = 0.0;
        const double hx = 0.05;
        for (double x = -7.0; x < l + 7.0; x += hx) {
            cplx row = 0.0;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                cplx u(x + 0.5 * hx, ys[j]);
                row += hys[j] * eval(f, z, u) * eval(f, u, w);
            }
            acc += hx * row;
        }
        acc /= kPi;  // dA is Lebesgue/pi
        CHECK(std::abs(acc - eval(f, z, w)) <= 1e-4);
    }
}

TEST_CASE("zoomed kernel modulus approaches its limits") {
    Potential gin(1.0);
    long n = 4096;
    double rn = std::sqrt(static_cast<double>(n));

    // bulk normalization
    CHECK(rescaled_modulus(gin, 0.0, 1024, 1.0, 0.0, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-3));

    // edge value at the origin of the zoom
    CHECK(rescaled_modulus(gin, 1.0, n, 1.0, 0.0, 0.0) ==
          doctest::Approx(0.5).epsilon(0.04));

    FiniteN kn(gin, n);
    // Hermitian symmetry of the modulus
    CHECK(rescaled_modulus(kn, 1.0, n, cplx(0.4, 0.3), cplx(-0.2, 1.0)) ==
          doctest::Approx(rescaled_modulus(kn, 1.0, n, cplx(-0.2, 1.0),
                                           cplx(0.4, 0.3))));

    // sup over a boundary patch vs the half-plane profile
    for (double l : {-1.0, 0.0, 2.0}) {
        cplx p_n = 1.0 - l / rn;
        double sup = 0.0;
        for (double zx = -2.0; zx <= 2.0; zx += 0.5)
            for (double zy = -2.0; zy <= 2.0; zy += 0.5)
                for (double wx = -2.0; wx <= 2.0; wx += 0.5)
                    for (double wy = -2.0; wy <= 2.0; wy += 0.5) {
                        cplx z(zx, zy), w(wx, wy);
                        double got = rescaled_modulus(kn, p_n, n, z, w);
                        double want = std::abs(eval(KernelId(Erfc{l}), z, w));
                        sup = std::max(sup, std::abs(got - want));
                    }
        CHECK(sup <= 0.05);
    }

    // bulk patch vs the translation-invariant profile
    double sup = 0.0;
    for (double zx = -2.0; zx <= 2.0; zx += 0.5)
        for (double zy = -2.0; zy <= 2.0; zy += 0.5)
            for (double wx = -2.0; wx <= 2.0; wx += 0.5)
                for (double wy = -2.0; wy <= 2.0; wy += 0.5) {
                    cplx z(zx, zy), w(wx, wy);
                    double got = rescaled_modulus(kn, 0.0, n, z, w);
                    double want = std::abs(eval(KernelId(Ginibre{}), z, w));
                    sup = std::max(sup, std::abs(got - want));
                }
    CHECK(sup <= 0.05);
}
