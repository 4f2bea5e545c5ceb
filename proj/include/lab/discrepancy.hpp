#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lab/gas.hpp"
#include "lab/geometry.hpp"
#include "lab/potential.hpp"

namespace lab::disc {

// Which expected-count formula to evaluate. Exact: n mu(p + W/sqrt n).
// LocalBulk: DQ(p) |W| / pi. Scaled: (n/pi) DQ(p) |(p + W/sqrt n) cap S|,
// the finite-n form that the sup-discrepancy sweeps compare against.
enum class ExpectedMode { ExactMu, LocalBulk, Scaled };

// Boundary limit of the scaled form: DQ(p) |W cap {Re(z e^{-i theta}) <= l}| / pi.
struct BoundaryLimit {
    double theta = 0.0;
    double l = 0.0;
};

// Points of cfg falling in the closed window p + W/sqrt n.
long count_in(const gas::Configuration& cfg, cplx p, const geom::Window& w, long n);

double expected_count(const pot::Potential& pot, cplx p, const geom::Window& w,
                      long n, ExpectedMode mode);
double expected_count(const pot::Potential& pot, cplx p, const geom::Window& w,
                      const BoundaryLimit& limit);

struct SupResult {
    double sup = 0.0;
    cplx argmax;
    double spacing = 0.0;  // the grid sup is a lower bound of the continuum sup
};

// Max of |count - expected(Scaled)| over a p-grid covering S + B_{10/sqrt n}.
// Requires spacing <= 0.2/sqrt n.
SupResult sup_discrepancy(const gas::Configuration& cfg, const pot::Potential& pot,
                          const geom::Window& w, long n, double p_grid_spacing,
                          cplx grid_offset = 0.0);

struct DiscrepancyRow {
    long n = 0;
    double c = 0.0;
    std::uint64_t seed = 0;
    std::string window_id;
    double scale = 0.0;
    cplx p;
    long count = 0;
    double expected = 0.0;
    double discrepancy = 0.0;
    bool skipped = false;
};

struct DiscrepancyReport {
    std::vector<DiscrepancyRow> rows;
    std::vector<double> scales;      // distinct L, ascending
    std::vector<double> mean_sup;    // per scale, averaged over (n, seed)
    std::vector<double> normalized;  // mean_sup / (L sqrt(log L) log log L)
    double slope = 0.0;              // log-log fit over scales >= 2
    double sup_over_perimeter = 0.0;
};

// Sample the gas at each (n, seed), sweep disk windows of radius L over the
// boundary band |sqrt n * signed_distance(p)| <= 2, fit log sup vs log L.
DiscrepancyReport boundary_sweep(const pot::Potential& pot, double c,
                                 const std::vector<long>& n_list,
                                 const std::vector<double>& L_list,
                                 const std::vector<std::uint64_t>& seeds);

// Same sweep deep in the bulk: p with d(p, S^c) >= M_bulk log n / sqrt n,
// against the local-bulk expected count. Empty bulk regions yield flagged rows.
DiscrepancyReport bulk_sweep(const pot::Potential& pot, double c,
                             const std::vector<long>& n_list,
                             const geom::Window& w,
                             const std::vector<std::uint64_t>& seeds,
                             double M_bulk);

struct SandwichReport {
    long n_minus = 0;  // count in the eroded window
    long n_count = 0;
    long n_plus = 0;   // count in the dilated window
    long upper_threshold_count = 0;  // eigenvalues of the deficient-index
                                     // operator above 1 - gamma^2/C
    long lower_threshold_count = 0;  // eigenvalues of the excessive-index
                                     // operator above gamma^2/C
    bool upper_ok = false;           // n_plus >= upper_threshold_count
    bool lower_ok = false;           // n_minus <= lower_threshold_count ... <=
};

// Spectral sandwich for the counts of a configuration in p + W/sqrt n, via the
// concentration operators of index floor((1 -+ gamma) n) on the same window.
// Disk windows only (erosion/dilation by s/sqrt n must stay in the class).
// s = 0 selects 0.3 * sqrt(n) * min_separation(cfg).
SandwichReport landau_sandwich(const gas::Configuration& cfg,
                               const pot::Potential& pot, cplx p,
                               const geom::Window& w, long n, double gamma,
                               double c_fit, double big_m = 4.0, double s = 0.0);

void write_csv(const DiscrepancyReport& report, const std::string& path);
nlohmann::json summary_json(const DiscrepancyReport& report);

}  // namespace lab::disc
