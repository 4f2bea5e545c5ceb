#include "lab/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace lab::ker {
namespace {

// Rational approximation of the Faddeeva function on the closed upper
// half-plane (Weideman's tangent-circle construction). Coefficients are the
// Fourier modes of exp(-t^2)(L^2+t^2) under t = L tan(theta/2), computed once
// by direct DFT.
constexpr int kFadN = 64;

struct FadTable {
    double L;
    double a[kFadN];

    FadTable() {
        const int M = 2 * kFadN;       // half the sampling rate
        const int M2 = 2 * M;          // sampling points on the circle
        L = std::sqrt(kFadN / std::sqrt(2.0));
        for (int n = 1; n <= kFadN; ++n) {
            double acc = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k) {
                double theta = k * kPi / M;
                double t = L * std::tan(0.5 * theta);
                double f = std::exp(-t * t) * (L * L + t * t);
                acc += f * std::cos(n * theta);
            }
            a[n - 1] = acc / M2;
        }
    }
};

const FadTable& fad_table() {
    static const FadTable table;
    return table;
}

// log nu_k^2 for the Ginibre field: nu_k^2 = k! / n^{k+1}.
double log_nu2_ginibre(long k, long n) {
    return std::lgamma(static_cast<double>(k) + 1.0) -
           (k + 1) * std::log(static_cast<double>(n));
}

// Radial norm integrand in log form, g(r) = (2k+1) log r - n Q(r).
double log_integrand(const pot::Potential& pot, long n, long k, double r) {
    return (2.0 * k + 1.0) * std::log(r) - n * pot.Q(r);
}

// Solve g(r) = target by bisection on a bracket where g is monotone.
double bisect_level(const pot::Potential& pot, long n, long k, double target,
                    double lo, double hi, bool increasing) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        bool below = log_integrand(pot, n, k, mid) < target;
        if (below == increasing)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// 32-point Gauss-Legendre half-rule (symmetric).
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
    0.3318686022821276498, 0.4213512761306353454, 0.5068999089322293900,
    0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896804,
    0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396892, 0.9647622555875064308, 0.9856115115452683354,
    0.9972638618494815635};
constexpr double kGLw[kGL] = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
    0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
    0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
    0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
    0.0070186100094700966};

double log_nu2_numeric(const pot::Potential& pot, long n, long k) {
    // peak of the log-concave integrand
    double p = pot.p();
    double r_peak = std::pow((2.0 * k + 1.0) / (2.0 * n * p), 1.0 / (2.0 * p));
    double gmax = log_integrand(pot, n, k, r_peak);
    double target = gmax - 80.0;
    double lo_bracket = r_peak;
    while (log_integrand(pot, n, k, lo_bracket) > target) lo_bracket *= 0.5;
    double r_lo = bisect_level(pot, n, k, target, lo_bracket, r_peak, true);
    double hi_bracket = r_peak;
    while (log_integrand(pot, n, k, hi_bracket) > target) hi_bracket *= 2.0;
    double r_hi = bisect_level(pot, n, k, target, r_peak, hi_bracket, false);

    const int panels = 12;
    double total = 0.0;
    for (int panel = 0; panel < panels; ++panel) {
        double a = r_lo + (r_hi - r_lo) * panel / panels;
        double b = r_lo + (r_hi - r_lo) * (panel + 1) / panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < kGL; ++i)
            for (double sgn : {-1.0, 1.0}) {
                double r = mid + sgn * half * kGLx[i];
                total += kGLw[i] * half * std::exp(log_integrand(pot, n, k, r) - gmax);
            }
    }
    return gmax + std::log(2.0 * total);
}

}  // namespace

cplx faddeeva_upper(cplx z) {
    const FadTable& tab = fad_table();
    cplx iz(-z.imag(), z.real());
    cplx d = tab.L - iz;
    cplx Z = (tab.L + iz) / d;
    cplx poly = 0.0;
    for (int n = kFadN - 1; n >= 0; --n) poly = poly * Z + tab.a[n];
    return 2.0 * poly / (d * d) + (1.0 / std::sqrt(kPi)) / d;
}

cplx erfc_F(cplx z, FStatus* status) {
    if (status) *status = FStatus{};
    if (z.real() < -40.0) return 1.0;
    if (z.real() > 40.0) {
        if (status) status->underflow = true;
        return 0.0;
    }
    cplx zeta = z / std::sqrt(2.0);
    if (zeta.real() >= 0.0) {
        // erfc(zeta) = exp(-zeta^2) w(i zeta); i*zeta lies in the closed
        // upper half-plane exactly when Re zeta >= 0
        return 0.5 * std::exp(-zeta * zeta) * faddeeva_upper(cplx(0.0, 1.0) * zeta);
    }
    cplx m = -zeta;
    return 1.0 - 0.5 * std::exp(-m * m) * faddeeva_upper(cplx(0.0, 1.0) * m);
}

FiniteN::FiniteN(pot::Potential pot, long n, long n_cap) : pot_(pot), n_(n) {
    if (n <= 0) throw InvalidArgumentError("kernel index must be positive");
    if (n > n_cap) throw ResourceError("kernel index exceeds configured cap");
    lognu2_.resize(static_cast<std::size_t>(n));
    const bool ginibre = pot.p() == 1.0;
    for (long k = 0; k < n; ++k)
        lognu2_[static_cast<std::size_t>(k)] =
            ginibre ? log_nu2_ginibre(k, n) : log_nu2_numeric(pot, n, k);
}

cplx FiniteN::phi(long k, cplx z) const {
    if (k < 0 || k >= n_) throw InvalidArgumentError("basis index out of range");
    double r = std::abs(z);
    if (r == 0.0)
        return k == 0 ? std::exp(-0.5 * lognu2_[0]) : cplx(0.0);
    double lmag = k * std::log(r) - 0.5 * n_ * pot_.Q(z) -
                  0.5 * lognu2_[static_cast<std::size_t>(k)];
    return std::polar(std::exp(lmag), k * std::arg(z));
}

cplx FiniteN::eval(cplx z, cplx w) const {
    double rz = std::abs(z), rw = std::abs(w);
    double base = -0.5 * n_ * (pot_.Q(z) + pot_.Q(w));
    if (rz == 0.0 || rw == 0.0) return std::exp(base - lognu2_[0]);
    double lr = std::log(rz) + std::log(rw);
    double dphi = std::arg(z) - std::arg(w);
    // two passes: locate the largest log-magnitude, then accumulate around it
    double lmax = -1e300;
    for (long k = 0; k < n_; ++k)
        lmax = std::max(lmax, k * lr - lognu2_[static_cast<std::size_t>(k)]);
    cplx acc = 0.0;
    cplx rot = std::polar(1.0, dphi), ph = 1.0;
    for (long k = 0; k < n_; ++k, ph *= rot) {
        double lm = k * lr - lognu2_[static_cast<std::size_t>(k)] - lmax;
        if (lm < -746.0) continue;
        acc += std::exp(lm) * ph;
    }
    return acc * std::exp(base + lmax);
}

cplx eval(const KernelId& k, cplx z, cplx w) {
    return std::visit(
        [&](const auto& v) -> cplx {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Ginibre>) {
                return std::exp(z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w));
            } else if constexpr (std::is_same_v<T, Erfc>) {
                // G(z,w) F(u), u = z + conj(w) - 2l. F(u) alone overflows for
                // large |Im u|, so fold its exponential into the Gaussian
                // factor: G F = (1/2) exp(g - u^2/2) w(i u / sqrt 2), whose
                // exponent stays bounded on the product.
                cplx g = z * std::conj(w) - 0.5 * std::norm(z) - 0.5 * std::norm(w);
                cplx u = z + std::conj(w) - 2.0 * v.l;
                if (u.real() > 40.0) return 0.0;
                if (u.real() < -40.0) return std::exp(g);
                cplx zeta = u / std::sqrt(2.0);
                if (u.real() >= 0.0)
                    return 0.5 * std::exp(g - 0.5 * u * u) *
                           faddeeva_upper(cplx(0.0, 1.0) * zeta);
                return std::exp(g) - 0.5 * std::exp(g - 0.5 * u * u) *
                                         faddeeva_upper(cplx(0.0, -1.0) * zeta);
            } else {
                return v.eval(z, w);
            }
        },
        k);
}

double rescaled_modulus(const FiniteN& km, cplx p_n, long n, cplx z, cplx w) {
    (void)n;
    long m = km.n();
    double dq = km.potential().laplacian(p_n);
    double scale = std::sqrt(m * dq);
    cplx dir = p_n == cplx(0.0) ? cplx(1.0) : p_n / std::abs(p_n);
    auto inv = [&](cplx u) { return p_n + u * dir / scale; };
    return std::abs(km.eval(inv(z), inv(w))) / (m * dq);
}

double rescaled_modulus(const pot::Potential& pot, cplx p_n, long n, double rho,
                        cplx z, cplx w) {
    if (!(rho > 0.0 && rho < 2.0)) throw InvalidArgumentError("rho outside (0,2)");
    long m = static_cast<long>(std::floor(rho * n));
    if (m < 1) throw InvalidArgumentError("floor(rho n) must be positive");
    FiniteN km(pot, m);
    return rescaled_modulus(km, p_n, n, z, w);
}

double diag_check(const pot::Potential& pot, cplx z, long n) {
    FiniteN kn(pot, n);
    return std::abs(kn.eval(z, z) - static_cast<double>(n) * pot.laplacian(z));
}

std::vector<double> offdiag_decay_profile(const FiniteN& kn, cplx z,
                                          const std::vector<double>& radii) {
    const int n_ang = 32;
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        double worst = 0.0;
        for (int j = 0; j < n_ang; ++j) {
            cplx w = z + std::polar(r, 2.0 * kPi * j / n_ang);
            worst = std::max(worst, std::abs(kn.eval(z, w)));
        }
        out.push_back(worst);
    }
    return out;
}

double fit_decay_rate(const std::vector<double>& radii,
                      const std::vector<double>& profile, long n) {
    if (radii.size() != profile.size() || radii.empty())
        throw InvalidArgumentError("mismatched decay profile");
    // least squares of -log(profile/n) = eps sqrt(n) r through the origin
    double num = 0.0, den = 0.0;
    double rn = std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(profile[i] > 0.0) || radii[i] <= 0.0) continue;
        double x = rn * radii[i];
        double y = -std::log(profile[i] / static_cast<double>(n));
        num += x * y;
        den += x * x;
    }
    if (den == 0.0) throw NumericalError("degenerate decay fit");
    return num / den;
}

}  // namespace lab::ker
