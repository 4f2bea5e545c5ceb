#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lab/common.hpp"
#include "lab/potential.hpp"

namespace lab::gas {

// Counter-based generator: every draw is a pure function of
// (seed, particle, sweep, counter), so results do not depend on evaluation
// order or threading.
struct CounterRng {
    std::uint64_t seed = 1;

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t particle,
                             std::uint64_t sweep, std::uint64_t counter);
    // uniform in [0, 1)
    double uniform(std::uint64_t particle, std::uint64_t sweep,
                   std::uint64_t counter) const;
    // standard normal pair (Box-Muller), consumes counters c and c+1
    void gaussian_pair(std::uint64_t particle, std::uint64_t sweep,
                       std::uint64_t counter, double& g1, double& g2) const;
};

struct Configuration {
    std::vector<cplx> points;

    long n() const { return static_cast<long>(points.size()); }
    static Configuration of(std::vector<cplx> pts);  // finite + distinct
};

struct SamplerConfig {
    double c = 2.0;            // beta = c log n
    double proposal_sigma = 0.0;  // in 1/sqrt(n) units; 0 = 1/sqrt(n beta)
    long sweeps = 300;
    long burn_in = 150;
    std::uint64_t seed = 1;
};

// Sum over ordered pairs: each unordered pair contributes twice.
// Coincident points give +infinity.
double hamiltonian(const Configuration& cfg, const pot::Potential& pot);

// d/dz_j as a 2-vector packed into a complex number.
std::vector<cplx> gradient(const Configuration& cfg, const pot::Potential& pot);

struct SampleResult {
    Configuration cfg;
    double acceptance = 0.0;    // post burn-in
    double sigma = 0.0;         // adapted proposal width (absolute units)
    bool tuning_warning = false;  // acceptance escaped [0.1, 0.9]
};

SampleResult sample(long n, const pot::Potential& pot, const SamplerConfig& sc);

// Equilibrium-measure i.i.d. draw (radial inverse-CDF), the sampler's start.
Configuration equilibrium_draw(long n, const pot::Potential& pot,
                               std::uint64_t seed);

struct FeketeResult {
    Configuration cfg;
    double energy = 0.0;
    double grad_max = 0.0;
    long iterations = 0;
    bool converged = false;
};

FeketeResult fekete(long n, const pot::Potential& pot, double tol,
                    std::uint64_t seed = 7, long max_iter = 20000);

struct LagrangeLog {
    double log_mag;  // -inf when z hits another node
    cplx phase;      // unit modulus
};

// Weighted Lagrange polynomial attached to node j, in log form.
LagrangeLog lagrange_log(const Configuration& cfg, const pot::Potential& pot,
                         long j, cplx z);

// |K_n(z,w) - sum_j l_j(z) K_n(z_j,w)| / (1 + |K_n(z,w)|); exact identity,
// so this measures rounding only. Needs n <= 64.
double reproducing_identity_residual(const Configuration& cfg,
                                     const pot::Potential& pot, cplx z, cplx w);

// max over random weighted polynomials of |f(z0)| / ((n/s^2) int_{B} |f| dA),
// B = B_{s/sqrt n}(z0).
double submean_ratio(const pot::Potential& pot, long n, cplx z0, double s,
                     std::uint64_t seed = 5, int trials = 20);

// max over random f in the degree-< floor(rho n) subspace of
// ||f||^2 / ((1/n) sum_j |f(z_j)|^2).
double sampling_inequality_ratio(const Configuration& cfg,
                                 const pot::Potential& pot, double rho,
                                 int trials = 20, std::uint64_t seed = 5);

// Least-norm interpolation of delta data at node j0 from the inflated
// degree-< ceil(rho n) subspace; returns n (rho-1)^2 ||f||^2 / sum |a_j|^2.
double interpolation_norm_ratio(const Configuration& cfg,
                                const pot::Potential& pot, double rho, long j0);

double min_separation(const Configuration& cfg);

struct ConfigurationMeta {
    long n = 0;
    double c = 0.0;
    std::uint64_t seed = 0;
    long sweeps = 0;
    pot::Potential potential;
};

void save_configuration(const Configuration& cfg, const ConfigurationMeta& meta,
                        const std::string& csv_path, const std::string& json_path);
Configuration load_configuration(const std::string& csv_path);

void to_json(nlohmann::json& j, const ConfigurationMeta& meta);
void from_json(const nlohmann::json& j, ConfigurationMeta& meta);

}  // namespace lab::gas
