#pragma once

#include <cmath>

#include <nlohmann/json_fwd.hpp>

#include "lab/common.hpp"
#include "lab/geometry.hpp"

namespace lab::pot {

// Radial external field Q(z) = |z|^{2p}. The Laplacian here is a quarter of
// the usual one, Delta = (d_xx + d_yy)/4, and dA is Lebesgue/pi; with these
// normalizations the droplet is the disk of radius p^{-1/(2p)} carrying the
// unit-mass density Delta Q.
class Potential {
  public:
    Potential() : p_(1.0) {}  // Ginibre by default; needed for deserialization
    explicit Potential(double p);

    double p() const { return p_; }

    double Q(cplx z) const;
    cplx grad(cplx z) const;       // (d_x Q, d_y Q) packed as re/im
    double laplacian(cplx z) const;  // quarter-Laplacian, p^2 |z|^{2p-2}

  private:
    double p_;
};

// Outward boundary frame at a point: normal angle theta and the rescaled
// signed position l = sqrt(n) * dist(z, boundary). Deep-bulk points carry
// l = +infinity instead of a huge finite value.
struct MicroFrame {
    double theta = 0.0;
    double l = 0.0;

    bool bulk() const { return std::isinf(l) && l > 0; }
};

double droplet_radius(const Potential& pot);

// Equilibrium mass of a window, mu(W) = int_{W cap S} Delta Q dA.
double equilibrium_mass(const Potential& pot, const geom::Window& w);

// Positive inside the droplet, negative outside, zero on the circle.
double signed_distance(const Potential& pot, cplx z);

struct FrameOptions {
    double bulk_threshold = 50.0;  // l at or beyond this reports +infinity
};

MicroFrame micro_frame(const Potential& pot, cplx p_n, long n,
                       const FrameOptions& opt = {});

void to_json(nlohmann::json& j, const Potential& pot);
void from_json(const nlohmann::json& j, Potential& pot);

}  // namespace lab::pot
