#include "lab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lab/conc_operator.hpp"
#include "lab/kernel.hpp"

namespace lab::disc {
namespace {

// Area of the intersection of two closed disks at center distance d.
double disk_overlap(double d, double r1, double r2) {
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        double r = std::min(r1, r2);
        return kPi * r * r;
    }
    double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1),
                                     -1.0, 1.0));
    double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2),
                                     -1.0, 1.0));
    double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(std::max(k, 0.0));
}

// Evaluator of the scaled expected count with the window geometry hoisted out
// of the p loop; generic windows fall back to the window's own quadrature.
struct ScaledExpected {
    const pot::Potential& pot;
    long n;
    double R;
    double rn;
    bool disk = false;
    cplx c0;
    double r = 0.0;
    geom::QuadratureGrid grid;

    ScaledExpected(const pot::Potential& pot_, const geom::Window& w, long n_)
        : pot(pot_), n(n_), R(pot::droplet_radius(pot_)),
          rn(std::sqrt(static_cast<double>(n_))) {
        if (const auto* d = std::get_if<geom::Disk>(&w.shape())) {
            disk = true;
            c0 = d->center;
            r = d->radius;
        } else {
            double h = std::min(0.25, geom::diameter(w) / 4.0);
            grid = geom::quadrature(w, h, {.node_cap = 200000});
        }
    }

    double operator()(cplx p) const {
        double local_over_pi;
        if (disk) {
            // window disk against the droplet, both in rescaled coordinates
            local_over_pi =
                disk_overlap(std::abs(c0 + rn * p), r, rn * R) / kPi;
        } else {
            local_over_pi = 0.0;
            for (cplx u : grid.nodes)
                if (std::abs(p + u / rn) <= R) local_over_pi += grid.weight;
        }
        return pot.laplacian(p) * local_over_pi;
    }
};

template <typename Keep>
SupResult sup_over_grid(const gas::Configuration& cfg, const pot::Potential& pot,
                        const geom::Window& w, long n, double spacing,
                        cplx offset, Keep&& keep) {
    const double rn = std::sqrt(static_cast<double>(n));
    const double range = pot::droplet_radius(pot) + 10.0 / rn;
    const long K = static_cast<long>(std::ceil(range / spacing));
    ScaledExpected expected(pot, w, n);
    SupResult out;
    out.spacing = spacing;
    for (long i = -K; i <= K; ++i)
        for (long j = -K; j <= K; ++j) {
            cplx p = offset + spacing * cplx(static_cast<double>(i),
                                             static_cast<double>(j));
            if (std::abs(p) > range) continue;
            if (!keep(p)) continue;
            double d = std::abs(static_cast<double>(count_in(cfg, p, w, n)) -
                                expected(p));
            if (d > out.sup) {
                out.sup = d;
                out.argmax = p;
            }
        }
    return out;
}

double fit_slope(const std::vector<double>& scales,
                 const std::vector<double>& sups) {
    // least squares on (log L, log sup) for L >= 2 only
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long m = 0;
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 2.0 || sups[i] <= 0.0) continue;
        double x = std::log(scales[i]), y = std::log(sups[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void finish_scale_summary(DiscrepancyReport& rep) {
    std::vector<double> scales;
    for (const auto& row : rep.rows)
        if (!row.skipped) scales.push_back(row.scale);
    std::sort(scales.begin(), scales.end());
    scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
    rep.scales = scales;
    rep.mean_sup.assign(scales.size(), 0.0);
    std::vector<long> counts(scales.size(), 0);
    for (const auto& row : rep.rows) {
        if (row.skipped) continue;
        auto it = std::lower_bound(scales.begin(), scales.end(), row.scale);
        std::size_t idx = static_cast<std::size_t>(it - scales.begin());
        rep.mean_sup[idx] += row.discrepancy;
        ++counts[idx];
    }
    rep.normalized.assign(scales.size(), 0.0);
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (counts[i] > 0) rep.mean_sup[i] /= counts[i];
        double L = scales[i];
        // positive for all L > 1 (log(1 + log L) stands in for loglog L)
        double denom = L * std::sqrt(std::max(std::log(L), 1e-9)) *
                       std::log(1.0 + std::log(std::max(L, 1.0)));
        if (denom > 0.0) rep.normalized[i] = rep.mean_sup[i] / denom;
    }
    rep.slope = fit_slope(rep.scales, rep.mean_sup);
}

std::string window_label(const geom::Window& w) {
    struct V {
        std::string operator()(const geom::Disk& d) const {
            return "disk-r" + std::to_string(d.radius);
        }
        std::string operator()(const geom::Rect&) const { return "rect"; }
        std::string operator()(const geom::Polygon&) const { return "polygon"; }
        std::string operator()(const geom::Cut& c) const {
            return "cut:" + std::visit(V{}, c.base->shape());
        }
    };
    return std::visit(V{}, w.shape());
}

}  // namespace

long count_in(const gas::Configuration& cfg, cplx p, const geom::Window& w,
              long n) {
    const double rn = std::sqrt(static_cast<double>(n));
    long count = 0;
    for (cplx z : cfg.points)
        if (geom::contains(w, rn * (z - p))) ++count;
    return count;
}

double expected_count(const pot::Potential& pot, cplx p, const geom::Window& w,
                      long n, ExpectedMode mode) {
    switch (mode) {
        case ExpectedMode::ExactMu: {
            const double rn = std::sqrt(static_cast<double>(n));
            return n * pot::equilibrium_mass(
                           pot, geom::translated(geom::scaled(w, 1.0 / rn), p));
        }
        case ExpectedMode::LocalBulk:
            return pot.laplacian(p) * geom::area(w) / kPi;
        case ExpectedMode::Scaled:
            return ScaledExpected(pot, w, n)(p);
    }
    throw InvalidArgumentError("unknown expected-count mode");
}

double expected_count(const pot::Potential& pot, cplx p, const geom::Window& w,
                      const BoundaryLimit& limit) {
    geom::Window half = geom::Window::cut(w, limit.theta, limit.l);
    return pot.laplacian(p) * geom::area(half) / kPi;
}

SupResult sup_discrepancy(const gas::Configuration& cfg,
                          const pot::Potential& pot, const geom::Window& w,
                          long n, double p_grid_spacing, cplx grid_offset) {
    const double rn = std::sqrt(static_cast<double>(n));
    if (!(p_grid_spacing > 0.0) || p_grid_spacing > 0.2 / rn + 1e-15)
        throw InvalidArgumentError("p-grid spacing must be at most 0.2/sqrt(n)");
    return sup_over_grid(cfg, pot, w, n, p_grid_spacing, grid_offset,
                         [](cplx) { return true; });
}

DiscrepancyReport boundary_sweep(const pot::Potential& pot, double c,
                                 const std::vector<long>& n_list,
                                 const std::vector<double>& L_list,
                                 const std::vector<std::uint64_t>& seeds) {
    if (n_list.empty() || L_list.empty() || seeds.empty())
        throw InvalidArgumentError("empty sweep list");
    DiscrepancyReport rep;
    for (long n : n_list) {
        const double rn = std::sqrt(static_cast<double>(n));
        for (std::uint64_t seed : seeds) {
            gas::SamplerConfig sc;
            sc.c = c;
            sc.seed = seed;
            sc.sweeps = 160;
            sc.burn_in = 80;
            gas::Configuration cfg = gas::sample(n, pot, sc).cfg;
            for (double L : L_list) {
                geom::Window w = geom::Window::disk(0.0, L);
                SupResult s = sup_over_grid(
                    cfg, pot, w, n, 0.2 / rn, 0.0, [&](cplx p) {
                        return std::abs(rn * pot::signed_distance(pot, p)) <= 2.0;
                    });
                DiscrepancyRow row;
                row.n = n;
                row.c = c;
                row.seed = seed;
                row.window_id = window_label(w);
                row.scale = L;
                row.p = s.argmax;
                row.count = count_in(cfg, s.argmax, w, n);
                row.expected =
                    expected_count(pot, s.argmax, w, n, ExpectedMode::Scaled);
                row.discrepancy = s.sup;
                rep.rows.push_back(row);
            }
        }
    }
    finish_scale_summary(rep);
    return rep;
}

DiscrepancyReport bulk_sweep(const pot::Potential& pot, double c,
                             const std::vector<long>& n_list,
                             const geom::Window& w,
                             const std::vector<std::uint64_t>& seeds,
                             double M_bulk) {
    if (n_list.empty() || seeds.empty())
        throw InvalidArgumentError("empty sweep list");
    DiscrepancyReport rep;
    const double per = geom::perimeter(w);
    for (long n : n_list) {
        const double rn = std::sqrt(static_cast<double>(n));
        const double margin = M_bulk * std::log(static_cast<double>(n)) / rn;
        const double bulk_radius = pot::droplet_radius(pot) - margin;
        for (std::uint64_t seed : seeds) {
            DiscrepancyRow row;
            row.n = n;
            row.c = c;
            row.seed = seed;
            row.window_id = window_label(w);
            row.scale = geom::diameter(w) / 2.0;
            if (bulk_radius <= 0.0) {
                row.skipped = true;  // bulk condition empties the p-region
                rep.rows.push_back(row);
                continue;
            }
            gas::SamplerConfig sc;
            sc.c = c;
            sc.seed = seed;
            sc.sweeps = 160;
            sc.burn_in = 80;
            gas::Configuration cfg = gas::sample(n, pot, sc).cfg;
            SupResult best;
            best.spacing = 0.2 / rn;
            const long K =
                static_cast<long>(std::ceil(bulk_radius / best.spacing));
            for (long i = -K; i <= K; ++i)
                for (long j = -K; j <= K; ++j) {
                    cplx p = best.spacing * cplx(static_cast<double>(i),
                                                 static_cast<double>(j));
                    if (std::abs(p) > bulk_radius) continue;
                    double d = std::abs(
                        static_cast<double>(count_in(cfg, p, w, n)) -
                        expected_count(pot, p, w, n, ExpectedMode::LocalBulk));
                    if (d > best.sup) {
                        best.sup = d;
                        best.argmax = p;
                    }
                }
            row.p = best.argmax;
            row.count = count_in(cfg, best.argmax, w, n);
            row.expected = expected_count(pot, best.argmax, w, n,
                                          ExpectedMode::LocalBulk);
            row.discrepancy = best.sup;
            rep.rows.push_back(row);
            rep.sup_over_perimeter =
                std::max(rep.sup_over_perimeter, best.sup / per);
        }
    }
    finish_scale_summary(rep);
    return rep;
}

SandwichReport landau_sandwich(const gas::Configuration& cfg,
                               const pot::Potential& pot, cplx p,
                               const geom::Window& w, long n, double gamma,
                               double c_fit, double big_m, double s) {
    const auto* d = std::get_if<geom::Disk>(&w.shape());
    if (d == nullptr)
        throw InvalidArgumentError("sandwich erosion needs a disk window");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw InvalidArgumentError("gamma outside (0,1)");
    if (!(c_fit > 0.0)) throw InvalidArgumentError("threshold constant <= 0");
    const double rn = std::sqrt(static_cast<double>(n));
    if (s <= 0.0) s = 0.3 * rn * gas::min_separation(cfg);

    SandwichReport rep;
    rep.n_count = count_in(cfg, p, w, n);
    rep.n_plus =
        count_in(cfg, p, geom::Window::disk(d->center, d->radius + s), n);
    rep.n_minus =
        d->radius - s > 0.0
            ? count_in(cfg, p, geom::Window::disk(d->center, d->radius - s), n)
            : 0;

    geom::Window omega_n = geom::translated(geom::scaled(w, 1.0 / rn), p);
    op::BuildOptions bo;
    bo.h = 0.2 / rn;
    bo.node_cap = 20000;
    bo.M = big_m;
    bo.s = s;
    const long m_lo = static_cast<long>(std::floor((1.0 - gamma) * n));
    const long m_hi = static_cast<long>(std::floor((1.0 + gamma) * n));
    op::Spectrum lo = op::spectrum(
        op::build(ker::FiniteN(pot, m_lo), omega_n, bo));
    op::Spectrum hi = op::spectrum(
        op::build(ker::FiniteN(pot, m_hi), omega_n, bo));
    const double t = gamma * gamma / c_fit;
    rep.upper_threshold_count = op::counting(lo, 1.0 - t);
    rep.lower_threshold_count = op::counting(hi, t);
    rep.upper_ok = rep.n_plus >= rep.upper_threshold_count;
    rep.lower_ok = rep.n_minus <= rep.lower_threshold_count;
    return rep;
}

void write_csv(const DiscrepancyReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write " + path);
    out << "n,c,seed,window,scale,p_re,p_im,count,expected,discrepancy,skipped\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof buf,
                      "%ld,%.12g,%llu,%s,%.12g,%.12g,%.12g,%ld,%.12g,%.12g,%d\n",
                      r.n, r.c, static_cast<unsigned long long>(r.seed),
                      r.window_id.c_str(), r.scale, r.p.real(), r.p.imag(),
                      r.count, r.expected, r.discrepancy, r.skipped ? 1 : 0);
        out << buf;
    }
}

nlohmann::json summary_json(const DiscrepancyReport& report) {
    long failures = 0;
    for (const auto& r : report.rows)
        if (r.skipped) ++failures;
    return nlohmann::json{{"rows", report.rows.size()},
                          {"scales", report.scales},
                          {"mean_sup", report.mean_sup},
                          {"normalized", report.normalized},
                          {"slope", report.slope},
                          {"sup_over_perimeter", report.sup_over_perimeter},
                          {"skipped_rows", failures}};
}

}  // namespace lab::disc
