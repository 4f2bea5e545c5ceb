#include "lab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

namespace lab::pot {
namespace {

// 32-point Gauss-Legendre nodes/weights on [-1,1] (Abramowitz-Stegun values).
constexpr int kGL = 16;  // half, symmetric
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

}  // namespace

Potential::Potential(double p) : p_(p) {
    if (!(p >= 0.5)) throw InvalidArgumentError("potential exponent must be >= 1/2");
}

double Potential::Q(cplx z) const { return std::pow(std::norm(z), p_); }

cplx Potential::grad(cplx z) const {
    double r2 = std::norm(z);
    if (r2 == 0.0) return p_ > 0.5 ? cplx(0.0) : cplx(std::numeric_limits<double>::quiet_NaN());
    return 2.0 * p_ * std::pow(r2, p_ - 1.0) * z;
}

double Potential::laplacian(cplx z) const {
    double r2 = std::norm(z);
    if (r2 == 0.0 && p_ < 1.0) return std::numeric_limits<double>::infinity();
    return p_ * p_ * std::pow(r2, p_ - 1.0);
}

double droplet_radius(const Potential& pot) {
    return std::pow(pot.p(), -1.0 / (2.0 * pot.p()));
}

double equilibrium_mass(const Potential& pot, const geom::Window& w) {
    // Radial-angular product rule: mu has radial density 2 p^2 r^{2p-1} dr,
    // so mu(W) = int_0^R 2 p^2 r^{2p-1} frac(r) dr with frac(r) the fraction
    // of the circle of radius r lying inside W. Angles are sampled uniformly,
    // radii by composite Gauss-Legendre.
    const double R = droplet_radius(pot);
    auto [lo, hi] = geom::bounding_box(w);
    // circle misses the window entirely when radius is outside [rmin, rmax]
    double rmax = std::min(R, std::max({std::abs(lo), std::abs(hi),
                                        std::abs(cplx(lo.real(), hi.imag())),
                                        std::abs(cplx(hi.real(), lo.imag()))}));
    if (rmax <= 0.0) return 0.0;
    const int n_ang = 4096;
    const int n_panels = 8;
    const double pp = pot.p();
    double total = 0.0;
    for (int panel = 0; panel < n_panels; ++panel) {
        double a = rmax * panel / n_panels, b = rmax * (panel + 1) / n_panels;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < kGL; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                double r = mid + sgn * half * kGLx[i];
                long inside = 0;
                for (int j = 0; j < n_ang; ++j) {
                    double th = 2.0 * kPi * (j + 0.5) / n_ang;
                    if (geom::contains(w, std::polar(r, th))) ++inside;
                }
                if (inside == 0) continue;
                double frac = static_cast<double>(inside) / n_ang;
                total += kGLw[i] * half * 2.0 * pp * pp * std::pow(r, 2.0 * pp - 1.0) * frac;
            }
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

double signed_distance(const Potential& pot, cplx z) {
    return droplet_radius(pot) - std::abs(z);
}

MicroFrame micro_frame(const Potential& pot, cplx p_n, long n, const FrameOptions& opt) {
    if (n <= 0) throw InvalidArgumentError("n must be positive");
    double l = std::sqrt(static_cast<double>(n)) * signed_distance(pot, p_n);
    if (l >= opt.bulk_threshold)
        return MicroFrame{p_n == cplx(0.0) ? 0.0 : std::arg(p_n),
                          std::numeric_limits<double>::infinity()};
    if (p_n == cplx(0.0))
        throw InvalidArgumentError("no boundary direction at the origin");
    return MicroFrame{std::arg(p_n), l};
}

void to_json(nlohmann::json& j, const Potential& pot) {
    j = nlohmann::json{{"family", "radial"}, {"p", pot.p()}};
}

void from_json(const nlohmann::json& j, Potential& pot) {
    if (j.at("family").get<std::string>() != "radial")
        throw InvalidArgumentError("unsupported potential family");
    pot = Potential(j.at("p").get<double>());
}

}  // namespace lab::pot
