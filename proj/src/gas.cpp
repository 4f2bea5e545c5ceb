#include "lab/gas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "lab/detail/gauss.hpp"
#include "lab/kernel.hpp"

namespace lab::gas {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double beta_of(long n, double c) { return c * std::log(static_cast<double>(n)); }

}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t seed, std::uint64_t particle,
                              std::uint64_t sweep, std::uint64_t counter) {
    std::uint64_t x = splitmix(seed ^ 0xA5A5A5A5A5A5A5A5ull);
    x = splitmix(x ^ particle);
    x = splitmix(x ^ (sweep * 0x9E3779B97F4A7C15ull));
    x = splitmix(x ^ (counter * 0xD1B54A32D192ED03ull));
    return x;
}

double CounterRng::uniform(std::uint64_t particle, std::uint64_t sweep,
                           std::uint64_t counter) const {
    return (mix(seed, particle, sweep, counter) >> 11) * 0x1.0p-53;
}

void CounterRng::gaussian_pair(std::uint64_t particle, std::uint64_t sweep,
                               std::uint64_t counter, double& g1, double& g2) const {
    double u1 = uniform(particle, sweep, counter);
    double u2 = uniform(particle, sweep, counter + 1);
    double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0 + 0x1.0p-53));
    g1 = r * std::cos(2.0 * kPi * u2);
    g2 = r * std::sin(2.0 * kPi * u2);
}

Configuration Configuration::of(std::vector<cplx> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!std::isfinite(pts[i].real()) || !std::isfinite(pts[i].imag()))
            throw InvalidArgumentError("non-finite point");
        for (std::size_t j = 0; j < i; ++j)
            if (pts[i] == pts[j])
                throw InvalidArgumentError("coincident points");
    }
    return Configuration{std::move(pts)};
}

double hamiltonian(const Configuration& cfg, const pot::Potential& pot) {
    const auto& z = cfg.points;
    const long n = cfg.n();
    double h = 0.0;
    for (long j = 0; j < n; ++j) {
        for (long k = j + 1; k < n; ++k) {
            double d = std::abs(z[static_cast<std::size_t>(j)] -
                                z[static_cast<std::size_t>(k)]);
            if (d == 0.0) return kInf;
            h -= 2.0 * std::log(d);  // ordered pairs: each one twice
        }
        h += n * pot.Q(z[static_cast<std::size_t>(j)]);
    }
    return h;
}

std::vector<cplx> gradient(const Configuration& cfg, const pot::Potential& pot) {
    const auto& z = cfg.points;
    const long n = cfg.n();
    std::vector<cplx> g(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (long k = 0; k < n; ++k) {
            if (k == j) continue;
            cplx d = z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(k)];
            double d2 = std::norm(d);
            if (d2 == 0.0) throw InvalidArgumentError("coincident points");
            acc -= 2.0 * d / d2;
        }
        g[static_cast<std::size_t>(j)] =
            acc + static_cast<double>(n) * pot.grad(z[static_cast<std::size_t>(j)]);
    }
    return g;
}

Configuration equilibrium_draw(long n, const pot::Potential& pot,
                               std::uint64_t seed) {
    CounterRng rng{seed};
    std::vector<cplx> pts;
    pts.reserve(static_cast<std::size_t>(n));
    double p = pot.p();
    for (long j = 0; j < n; ++j) {
        double u = rng.uniform(static_cast<std::uint64_t>(j), 0, 0);
        double th = rng.uniform(static_cast<std::uint64_t>(j), 0, 1);
        double r = std::pow(u / p, 1.0 / (2.0 * p));
        pts.push_back(std::polar(r, 2.0 * kPi * th));
    }
    return Configuration::of(std::move(pts));
}

SampleResult sample(long n, const pot::Potential& pot, const SamplerConfig& sc) {
    if (n < 2) throw InvalidArgumentError("need at least two particles");
    if (!(sc.c > 0.0)) throw InvalidArgumentError("c must be positive");
    if (sc.sweeps < sc.burn_in) throw InvalidArgumentError("sweeps < burn_in");
    const double beta = beta_of(n, sc.c);
    const double rn = std::sqrt(static_cast<double>(n));
    double sigma = sc.proposal_sigma > 0.0
                       ? sc.proposal_sigma / rn
                       : 1.0 / std::sqrt(static_cast<double>(n) * beta);
    CounterRng rng{sc.seed};
    Configuration cfg = equilibrium_draw(n, pot, splitmix(sc.seed ^ 0x5EEDull));
    auto& z = cfg.points;

    long accepted_tail = 0, proposed_tail = 0;
    for (long sweep = 1; sweep <= sc.sweeps; ++sweep) {
        long accepted = 0;
        for (long j = 0; j < n; ++j) {
            double g1, g2;
            rng.gaussian_pair(static_cast<std::uint64_t>(j),
                              static_cast<std::uint64_t>(sweep), 0, g1, g2);
            cplx prop = z[static_cast<std::size_t>(j)] + sigma * cplx(g1, g2);
            double dh = static_cast<double>(n) *
                        (pot.Q(prop) - pot.Q(z[static_cast<std::size_t>(j)]));
            bool reject = false;
            for (long k = 0; k < n && !reject; ++k) {
                if (k == j) continue;
                double nn = std::norm(prop - z[static_cast<std::size_t>(k)]);
                if (nn == 0.0) {
                    reject = true;  // log singularity
                    break;
                }
                double no = std::norm(z[static_cast<std::size_t>(j)] -
                                      z[static_cast<std::size_t>(k)]);
                dh += std::log(no / nn);
            }
            if (!reject) {
                double u = rng.uniform(static_cast<std::uint64_t>(j),
                                       static_cast<std::uint64_t>(sweep), 2);
                if (std::log(u + 1e-300) < -beta * dh) {
                    z[static_cast<std::size_t>(j)] = prop;
                    ++accepted;
                }
            }
        }
        if (sweep <= sc.burn_in) {
            // steer toward 0.4 acceptance during burn-in only
            double rate = static_cast<double>(accepted) / n;
            sigma *= std::exp(0.25 * (rate - 0.4));
        } else {
            accepted_tail += accepted;
            proposed_tail += n;
        }
    }
    SampleResult out;
    out.sigma = sigma;
    out.acceptance = proposed_tail > 0
                         ? static_cast<double>(accepted_tail) / proposed_tail
                         : 0.0;
    out.tuning_warning =
        proposed_tail > 0 && (out.acceptance < 0.1 || out.acceptance > 0.9);
    out.cfg = std::move(cfg);
    return out;
}

FeketeResult fekete(long n, const pot::Potential& pot, double tol,
                    std::uint64_t seed, long max_iter) {
    if (n < 1) throw InvalidArgumentError("need at least one particle");
    FeketeResult out;
    if (n == 1) {
        out.cfg = Configuration{{cplx(0.0)}};
        out.energy = static_cast<double>(n) * pot.Q(0.0);
        out.converged = true;
        return out;
    }
    Configuration cfg = equilibrium_draw(n, pot, seed);
    double h = hamiltonian(cfg, pot);
    double step = 0.1 / n;
    for (long it = 0; it < max_iter; ++it) {
        auto g = gradient(cfg, pot);
        double gmax = 0.0;
        for (cplx v : g) gmax = std::max(gmax, std::abs(v));
        out.grad_max = gmax;
        out.iterations = it;
        if (gmax <= tol * n) {
            out.converged = true;
            break;
        }
        // backtracking line search along -gradient
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            Configuration trial = cfg;
            for (long j = 0; j < n; ++j)
                trial.points[static_cast<std::size_t>(j)] -=
                    step * g[static_cast<std::size_t>(j)];
            double ht = hamiltonian(trial, pot);
            if (ht < h) {
                cfg = std::move(trial);
                h = ht;
                step *= 1.6;  // try longer next time
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    out.cfg = std::move(cfg);
    out.energy = h;
    return out;
}

LagrangeLog lagrange_log(const Configuration& cfg, const pot::Potential& pot,
                         long j, cplx z) {
    const auto& pts = cfg.points;
    const long n = cfg.n();
    if (j < 0 || j >= n) throw InvalidArgumentError("node index out of range");
    cplx zj = pts[static_cast<std::size_t>(j)];
    double lm = -0.5 * n * (pot.Q(z) - pot.Q(zj));
    double arg = 0.0;
    for (long k = 0; k < n; ++k) {
        if (k == j) continue;
        cplx num = z - pts[static_cast<std::size_t>(k)];
        cplx den = zj - pts[static_cast<std::size_t>(k)];
        if (num == cplx(0.0)) return {-kInf, 1.0};
        lm += std::log(std::abs(num)) - std::log(std::abs(den));
        arg += std::arg(num) - std::arg(den);
    }
    return {lm, std::polar(1.0, arg)};
}

double reproducing_identity_residual(const Configuration& cfg,
                                     const pot::Potential& pot, cplx z, cplx w) {
    const long n = cfg.n();
    if (n > 64) throw InvalidArgumentError("identity check limited to n <= 64");
    ker::FiniteN kn(pot, n);
    cplx lhs = kn.eval(z, w);
    cplx rhs = 0.0;
    for (long j = 0; j < n; ++j) {
        LagrangeLog lj = lagrange_log(cfg, pot, j, z);
        if (std::isinf(lj.log_mag) && lj.log_mag < 0) continue;
        rhs += std::exp(lj.log_mag) * lj.phase *
               kn.eval(cfg.points[static_cast<std::size_t>(j)], w);
    }
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

double submean_ratio(const pot::Potential& pot, long n, cplx z0, double s,
                     std::uint64_t seed, int trials) {
    ker::FiniteN kn(pot, n);
    CounterRng rng{seed};
    const double rad = s / std::sqrt(static_cast<double>(n));
    const int n_ang = 32;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<cplx> coef(static_cast<std::size_t>(n));
        for (long k = 0; k < n; ++k) {
            double g1, g2;
            rng.gaussian_pair(static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(t), 0, g1, g2);
            coef[static_cast<std::size_t>(k)] = cplx(g1, g2);
        }
        auto f = [&](cplx z) {
            cplx acc = 0.0;
            for (long k = 0; k < n; ++k)
                acc += coef[static_cast<std::size_t>(k)] * kn.phi(k, z);
            return acc;
        };
        double integral = 0.0;
        detail::gl32_sweep(0.0, rad, 2, [&](double r, double wr) {
            double ring = 0.0;
            for (int a = 0; a < n_ang; ++a)
                ring += std::abs(f(z0 + std::polar(r, 2.0 * kPi * a / n_ang)));
            integral += wr * r * ring * (2.0 * kPi / n_ang) / kPi;
        });
        double denom = (n / (s * s)) * integral;
        if (denom > 0.0) worst = std::max(worst, std::abs(f(z0)) / denom);
    }
    return worst;
}

double sampling_inequality_ratio(const Configuration& cfg,
                                 const pot::Potential& pot, double rho,
                                 int trials, std::uint64_t seed) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgumentError("rho outside (0,1)");
    const long n = cfg.n();
    const long m = static_cast<long>(std::floor(rho * n));
    if (m < 1) throw InvalidArgumentError("empty subspace");
    ker::FiniteN kn(pot, n);
    CounterRng rng{seed};
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<cplx> coef(static_cast<std::size_t>(m));
        double mass = 0.0;
        for (long k = 0; k < m; ++k) {
            double g1, g2;
            rng.gaussian_pair(static_cast<std::uint64_t>(k),
                              static_cast<std::uint64_t>(t), 0, g1, g2);
            coef[static_cast<std::size_t>(k)] = cplx(g1, g2);
            mass += g1 * g1 + g2 * g2;  // orthonormal basis: ||f||^2 exactly
        }
        double disc = 0.0;
        for (long j = 0; j < n; ++j) {
            cplx acc = 0.0;
            for (long k = 0; k < m; ++k)
                acc += coef[static_cast<std::size_t>(k)] *
                       kn.phi(k, cfg.points[static_cast<std::size_t>(j)]);
            disc += std::norm(acc);
        }
        if (disc <= 0.0) throw NumericalError("degenerate sample: all nodes null");
        worst = std::max(worst, mass / (disc / n));
    }
    return worst;
}

double interpolation_norm_ratio(const Configuration& cfg,
                                const pot::Potential& pot, double rho, long j0) {
    if (!(rho > 1.0)) throw InvalidArgumentError("rho must exceed 1");
    const long n = cfg.n();
    if (j0 < 0 || j0 >= n) throw InvalidArgumentError("node index out of range");
    const long m = static_cast<long>(std::ceil(rho * n));
    ker::FiniteN km(pot, m);
    Eigen::MatrixXcd v(n, m);
    for (long j = 0; j < n; ++j)
        for (long k = 0; k < m; ++k)
            v(j, k) = km.phi(k, cfg.points[static_cast<std::size_t>(j)]);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
    a(j0) = 1.0;
    // least-norm interpolant: ||f||^2 = a* (V V*)^{-1} a
    Eigen::MatrixXcd gram = v * v.adjoint();
    Eigen::VectorXcd x = gram.ldlt().solve(a);
    double norm_sq = std::real(a.dot(x));
    return n * (rho - 1.0) * (rho - 1.0) * norm_sq;
}

double min_separation(const Configuration& cfg) {
    const auto& z = cfg.points;
    double best = kInf;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            best = std::min(best, std::abs(z[i] - z[j]));
    return best;
}

void save_configuration(const Configuration& cfg, const ConfigurationMeta& meta,
                        const std::string& csv_path, const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw ResourceError("cannot write " + csv_path);
    csv << "re,im\n";
    char buf[80];
    for (cplx z : cfg.points) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", z.real(), z.imag());
        csv << buf;
    }
    std::ofstream js(json_path);
    if (!js) throw ResourceError("cannot write " + json_path);
    nlohmann::json j = meta;
    js << j.dump(2) << '\n';
}

Configuration load_configuration(const std::string& csv_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw ResourceError("cannot read " + csv_path);
    std::string line;
    std::getline(csv, line);  // header
    std::vector<cplx> pts;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        double re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) != 2)
            throw InvalidArgumentError("bad configuration row: " + line);
        pts.emplace_back(re, im);
    }
    return Configuration::of(std::move(pts));
}

void to_json(nlohmann::json& j, const ConfigurationMeta& meta) {
    j = nlohmann::json{{"n", meta.n},
                       {"c", meta.c},
                       {"seed", meta.seed},
                       {"sweeps", meta.sweeps},
                       {"potential", meta.potential}};
}

void from_json(const nlohmann::json& j, ConfigurationMeta& meta) {
    meta.n = j.at("n").get<long>();
    meta.c = j.at("c").get<double>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.sweeps = j.at("sweeps").get<long>();
    meta.potential = j.at("potential").get<pot::Potential>();
}

}  // namespace lab::gas
