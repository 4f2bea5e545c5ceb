#include "lab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "lab/bargmann.hpp"
#include "lab/conc_operator.hpp"
#include "lab/discrepancy.hpp"
#include "lab/gas.hpp"
#include "lab/geometry.hpp"
#include "lab/kernel.hpp"
#include "lab/potential.hpp"

namespace lab::harness {
namespace {

const char* const kExperiments[] = {"spectrum",  "gas",
                                    "fekete",    "discrepancy-boundary",
                                    "discrepancy-bulk", "sandwich",
                                    "verify"};

bool known_experiment(const std::string& name) {
    for (const char* e : kExperiments)
        if (name == e) return true;
    return false;
}

void reject_unknown(const nlohmann::json& j,
                    const std::vector<std::string>& allowed,
                    const std::string& where) {
    for (const auto& item : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) ==
            allowed.end())
            throw InvalidArgumentError("unknown field \"" + item.key() +
                                       "\" in " + where);
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Regularized lower incomplete gamma P(a, x) (series / continued fraction).
double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= x / (a + k);
            sum += term;
            if (term < sum * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, f = d;
    for (int k = 1; k < 500; ++k) {
        double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 - f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

struct ArtifactWriter {
    std::string csv_path;
    std::string json_path;
    std::string manifest_path;

    void write_text(const std::string& path, const std::string& body) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ResourceError("cannot write " + path);
        out << body;
    }
};

ArtifactWriter make_writer(const RunConfig& cfg, const std::string& hash) {
    std::filesystem::create_directories(cfg.output_dir);
    std::string base = cfg.output_dir + "/" + cfg.experiment + "-" + hash;
    return {base + ".csv", base + ".json", base + ".manifest.json"};
}

double get_or(const nlohmann::json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

long get_or(const nlohmann::json& j, const char* key, long fallback) {
    return j.contains(key) ? j.at(key).get<long>() : fallback;
}

// ---- experiment bodies; each resolves defaults into `p` first ----

void run_spectrum(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
                  nlohmann::json& summary) {
    reject_unknown(p, {"kernel", "l", "window", "h", "node_cap", "alphas",
                       "C_univ", "eta", "a"},
                   "spectrum parameters");
    std::string kind = p.contains("kernel") ? p.at("kernel").get<std::string>()
                                            : "ginibre";
    geom::Window w = p.contains("window")
                         ? p.at("window").get<geom::Window>()
                         : geom::Window::disk(0.0, 2.0);
    double h = get_or(p, "h", 0.1);
    long node_cap = get_or(p, "node_cap", 6000L);
    double C_univ = get_or(p, "C_univ", 10.0);
    double eta = get_or(p, "eta", 1.0);
    double a = get_or(p, "a", 1.0);
    std::vector<double> alphas =
        p.contains("alphas") ? p.at("alphas").get<std::vector<double>>()
                             : std::vector<double>{0.3, 0.1, 0.03, 0.01};
    ker::KernelId kernel;
    if (kind == "ginibre") {
        kernel = ker::Ginibre{};
    } else if (kind == "erfc") {
        kernel = ker::Erfc{get_or(p, "l", 0.0)};
    } else {
        throw InvalidArgumentError("unknown kernel \"" + kind + "\"");
    }
    p["kernel"] = kind;
    if (kind == "erfc") p["l"] = get_or(p, "l", 0.0);
    p["window"] = w;
    p["h"] = h;
    p["node_cap"] = node_cap;
    p["alphas"] = alphas;
    p["C_univ"] = C_univ;
    p["eta"] = eta;
    p["a"] = a;

    op::BuildOptions bo;
    bo.h = h;
    bo.node_cap = static_cast<std::size_t>(node_cap);
    op::Spectrum s = op::spectrum(op::build(kernel, w, bo));
    double kappa = geom::regularity_kappa(
        geom::boundary_polyline(w, std::min(0.05, eta / 20.0)), eta);
    op::BoundParams bp{C_univ, eta, kappa};

    csv = "alpha,count,rhs_upper,rhs_lower\n";
    for (double alpha : alphas) {
        long count = op::counting(s, alpha);
        double up = op::counting_rhs(w, alpha, a, bp, op::BoundSide::upper);
        double lo = op::counting_rhs(w, alpha, a, bp, op::BoundSide::lower);
        csv += fmt(alpha) + "," + std::to_string(count) + "," + fmt(up) + "," +
               fmt(lo) + "\n";
    }
    summary = {{"trace", s.trace},
               {"hs_sq", s.hs_sq},
               {"eigenvalue_count", s.eigenvalues.size()},
               {"fitted", {{"C_univ", C_univ}, {"eta", eta}, {"kappa", kappa}}}};
}

void run_gas(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
             nlohmann::json& summary) {
    reject_unknown(p, {"n", "c", "sweeps", "burn_in", "proposal_sigma"},
                   "gas parameters");
    gas::SamplerConfig sc;
    long n = p.at("n").get<long>();
    sc.c = get_or(p, "c", 2.0);
    sc.sweeps = get_or(p, "sweeps", 300L);
    sc.burn_in = get_or(p, "burn_in", 150L);
    sc.proposal_sigma = get_or(p, "proposal_sigma", 0.0);
    sc.seed = cfg.seed;
    p["n"] = n;
    p["c"] = sc.c;
    p["sweeps"] = sc.sweeps;
    p["burn_in"] = sc.burn_in;
    p["proposal_sigma"] = sc.proposal_sigma;

    pot::Potential pot;
    gas::SampleResult r = gas::sample(n, pot, sc);
    csv = "re,im\n";
    for (cplx z : r.cfg.points)
        csv += fmt(z.real()) + "," + fmt(z.imag()) + "\n";
    summary = {{"acceptance", r.acceptance},
               {"sigma", r.sigma},
               {"tuning_warning", r.tuning_warning},
               {"min_separation", gas::min_separation(r.cfg)},
               {"fitted", nlohmann::json::object()}};
}

void run_fekete(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
                nlohmann::json& summary, bool& numerical_failure) {
    reject_unknown(p, {"n", "tol", "max_iter"}, "fekete parameters");
    long n = p.at("n").get<long>();
    double tol = get_or(p, "tol", 1e-3);
    long max_iter = get_or(p, "max_iter", 20000L);
    p["n"] = n;
    p["tol"] = tol;
    p["max_iter"] = max_iter;

    pot::Potential pot;
    gas::FeketeResult r = gas::fekete(n, pot, tol, cfg.seed, max_iter);
    csv = "re,im\n";
    for (cplx z : r.cfg.points)
        csv += fmt(z.real()) + "," + fmt(z.imag()) + "\n";
    summary = {{"energy", r.energy},
               {"grad_max", r.grad_max},
               {"iterations", r.iterations},
               {"converged", r.converged},
               {"fitted", nlohmann::json::object()}};
    numerical_failure = !r.converged;  // best iterate is still written
}

std::string report_csv(const disc::DiscrepancyReport& rep) {
    std::string csv =
        "n,c,seed,window,scale,p_re,p_im,count,expected,discrepancy,skipped\n";
    for (const auto& r : rep.rows) {
        csv += std::to_string(r.n) + "," + fmt(r.c) + "," +
               std::to_string(r.seed) + "," + r.window_id + "," + fmt(r.scale) +
               "," + fmt(r.p.real()) + "," + fmt(r.p.imag()) + "," +
               std::to_string(r.count) + "," + fmt(r.expected) + "," +
               fmt(r.discrepancy) + "," + (r.skipped ? "1" : "0") + "\n";
    }
    return csv;
}

std::vector<std::uint64_t> seed_list(const nlohmann::json& p,
                                     std::uint64_t fallback) {
    if (p.contains("seeds")) return p.at("seeds").get<std::vector<std::uint64_t>>();
    return {fallback};
}

void run_boundary(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
                  nlohmann::json& summary) {
    reject_unknown(p, {"c", "n_list", "L_list", "seeds"},
                   "discrepancy-boundary parameters");
    double c = get_or(p, "c", 2.0);
    auto n_list = p.at("n_list").get<std::vector<long>>();
    auto L_list = p.at("L_list").get<std::vector<double>>();
    auto seeds = seed_list(p, cfg.seed);
    p["c"] = c;
    p["seeds"] = seeds;

    pot::Potential pot;
    disc::DiscrepancyReport rep = disc::boundary_sweep(pot, c, n_list, L_list, seeds);
    csv = report_csv(rep);
    summary = disc::summary_json(rep);
    summary["fitted"] = {{"slope", rep.slope}, {"normalized", rep.normalized}};
}

void run_bulk(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
              nlohmann::json& summary) {
    reject_unknown(p, {"c", "n_list", "window", "seeds", "M_bulk"},
                   "discrepancy-bulk parameters");
    double c = get_or(p, "c", 2.0);
    auto n_list = p.at("n_list").get<std::vector<long>>();
    geom::Window w = p.contains("window")
                         ? p.at("window").get<geom::Window>()
                         : geom::Window::disk(0.0, 4.0);
    auto seeds = seed_list(p, cfg.seed);
    double mb = get_or(p, "M_bulk", 3.0);
    p["c"] = c;
    p["window"] = w;
    p["seeds"] = seeds;
    p["M_bulk"] = mb;

    pot::Potential pot;
    disc::DiscrepancyReport rep = disc::bulk_sweep(pot, c, n_list, w, seeds, mb);
    csv = report_csv(rep);
    summary = disc::summary_json(rep);
    summary["fitted"] = {{"sup_over_perimeter", rep.sup_over_perimeter}};
}

void run_sandwich(const RunConfig& cfg, nlohmann::json& p, std::string& csv,
                  nlohmann::json& summary) {
    reject_unknown(p, {"n", "gamma", "C_fit", "window", "p", "source", "c",
                       "tol", "M", "s"},
                   "sandwich parameters");
    long n = p.at("n").get<long>();
    double gamma = get_or(p, "gamma", 0.3);
    double c_fit = get_or(p, "C_fit", 10.0);
    geom::Window w = p.contains("window")
                         ? p.at("window").get<geom::Window>()
                         : geom::Window::disk(0.0, 3.0);
    std::vector<double> pv = p.contains("p")
                                 ? p.at("p").get<std::vector<double>>()
                                 : std::vector<double>{1.0, 0.0};
    if (pv.size() != 2) throw InvalidArgumentError("p must be [re, im]");
    std::string source =
        p.contains("source") ? p.at("source").get<std::string>() : "fekete";
    double big_m = get_or(p, "M", 4.0);
    double s = get_or(p, "s", 0.0);
    p["n"] = n;
    p["gamma"] = gamma;
    p["C_fit"] = c_fit;
    p["window"] = w;
    p["p"] = pv;
    p["source"] = source;
    p["M"] = big_m;
    p["s"] = s;

    pot::Potential pot;
    gas::Configuration conf;
    if (source == "fekete") {
        double tol = get_or(p, "tol", 1e-3);
        p["tol"] = tol;
        conf = gas::fekete(n, pot, tol, cfg.seed).cfg;
    } else if (source == "sample") {
        double c = get_or(p, "c", 2.0);
        p["c"] = c;
        gas::SamplerConfig sc;
        sc.c = c;
        sc.seed = cfg.seed;
        conf = gas::sample(n, pot, sc).cfg;
    } else {
        throw InvalidArgumentError("unknown source \"" + source + "\"");
    }
    disc::SandwichReport rep = disc::landau_sandwich(
        conf, pot, cplx(pv[0], pv[1]), w, n, gamma, c_fit, big_m, s);
    csv =
        "n_minus,n_count,n_plus,upper_threshold_count,lower_threshold_count,"
        "upper_ok,lower_ok\n" +
        std::to_string(rep.n_minus) + "," + std::to_string(rep.n_count) + "," +
        std::to_string(rep.n_plus) + "," +
        std::to_string(rep.upper_threshold_count) + "," +
        std::to_string(rep.lower_threshold_count) + "," +
        (rep.upper_ok ? "1" : "0") + "," + (rep.lower_ok ? "1" : "0") + "\n";
    summary = {{"upper_ok", rep.upper_ok},
               {"lower_ok", rep.lower_ok},
               {"fitted", {{"C_fit", c_fit}, {"s", s}}}};
}

// ---- verification battery ----

struct Check {
    std::string name;
    std::function<bool()> fn;
};

std::vector<Check> verification_checks() {
    using geom::Window;
    pot::Potential gin;
    std::vector<Check> checks;

    checks.push_back({"erfc-profile-real-axis", [] {
        for (double x : {-3.0, -1.0, 0.0, 0.7, 2.5}) {
            cplx got = ker::erfc_F(cplx(x, 0.0));
            if (std::abs(got - 0.5 * std::erfc(x / std::sqrt(2.0))) > 1e-12)
                return false;
        }
        return true;
    }});
    checks.push_back({"kernel-diagonal-density", [gin] {
        return ker::diag_check(gin, cplx(0.5, 0.2), 256) <= 1e-6;
    }});
    checks.push_back({"kernel-bulk-scaling", [gin] {
        ker::FiniteN kn(gin, 256);
        for (double x : {-1.0, 0.0, 1.5})
            for (double y : {-1.0, 0.5}) {
                cplx z(x, y), w(0.3, -0.7);
                double got = ker::rescaled_modulus(kn, cplx(0.0), 256, z, w);
                double want = std::abs(std::exp(z * std::conj(w) -
                                                0.5 * std::norm(z) -
                                                0.5 * std::norm(w)));
                if (std::abs(got - want) > 0.05) return false;
            }
        return true;
    }});
    checks.push_back({"disk-spectrum-closed-form", [] {
        op::Spectrum s =
            op::spectrum(op::build(ker::Ginibre{}, Window::disk(0.0, 1.0), {}));
        for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
            if (s.eigenvalues[k] <= 0.01) break;
            if (std::abs(s.eigenvalues[k] -
                         gamma_p(static_cast<double>(k) + 1.0, 1.0)) > 0.01)
                return false;
        }
        return true;
    }});
    checks.push_back({"halfline-projection-diagonal", [] {
        barg::HermiteBasis basis(6, 12.0);
        Eigen::MatrixXd g = barg::halfline_gram(basis, 0.0);
        for (int k = 0; k < 6; ++k)
            if (std::abs(g(k, k) - 0.5) > 1e-8) return false;
        return true;
    }});
    checks.push_back({"transform-factorization", [] {
        return barg::factorization_residual(4, 0.0) <= 1e-3;
    }});
    checks.push_back({"cut-translation-covariance", [] {
        const double l = 0.5;
        op::BuildOptions bo;
        op::Spectrum a = op::spectrum(
            op::build(ker::Erfc{l}, Window::disk(cplx(0.2, 0.1), 1.2), bo));
        op::Spectrum b = op::spectrum(
            op::build(ker::Erfc{0.0}, Window::disk(cplx(0.2 - l, 0.1), 1.2), bo));
        std::size_t m = std::max(a.eigenvalues.size(), b.eigenvalues.size());
        for (std::size_t k = 0; k < m; ++k) {
            double x = k < a.eigenvalues.size() ? a.eigenvalues[k] : 0.0;
            double y = k < b.eigenvalues.size() ? b.eigenvalues[k] : 0.0;
            if (std::abs(x - y) > 0.01) return false;
        }
        return true;
    }});
    checks.push_back({"halfplane-domination", [] {
        Window w = Window::disk(0.0, 1.5);
        op::Spectrum cut = op::spectrum(op::build(ker::Erfc{0.3}, w, {}));
        op::Spectrum full = op::spectrum(op::build(ker::Ginibre{}, w, {}));
        for (std::size_t k = 0; k < cut.eigenvalues.size(); ++k) {
            double g = k < full.eigenvalues.size() ? full.eigenvalues[k] : 0.0;
            if (cut.eigenvalues[k] > g + 0.01) return false;
        }
        return true;
    }});
    checks.push_back({"plunge-two-moment-bound", [] {
        op::Spectrum s =
            op::spectrum(op::build(ker::Ginibre{}, Window::disk(0.0, 2.0), {}));
        long mid = op::counting(s, 0.25) - op::counting(s, 0.75);
        return mid <= op::two_moment_plunge_bound(s, 0.25);
    }});
    checks.push_back({"energy-closed-form", [gin] {
        gas::Configuration cfg{{cplx(0.0), cplx(1.0)}};
        return std::abs(gas::hamiltonian(cfg, gin) - 2.0) < 1e-12;
    }});
    checks.push_back({"gradient-finite-difference", [gin] {
        gas::Configuration cfg{{cplx(0.1, 0.3), cplx(-0.4, 0.2), cplx(0.5, -0.6)}};
        auto g = gas::gradient(cfg, gin);
        const double eps = 1e-6;
        gas::Configuration hi = cfg, lo = cfg;
        hi.points[1] += cplx(eps, 0.0);
        lo.points[1] -= cplx(eps, 0.0);
        double fd = (gas::hamiltonian(hi, gin) - gas::hamiltonian(lo, gin)) /
                    (2.0 * eps);
        return std::abs(fd - g[1].real()) < 1e-6 * std::max(1.0, std::abs(g[1]));
    }});
    checks.push_back({"minimizing-pair", [gin] {
        gas::FeketeResult f = gas::fekete(2, gin, 1e-8);
        return std::abs(std::abs(f.cfg.points[0] - f.cfg.points[1]) - 1.0) <
                   1e-6 &&
               std::abs(f.energy - 1.0) < 1e-8;
    }});
    checks.push_back({"nodal-kernel-reconstruction", [gin] {
        gas::CounterRng rng{3};
        std::vector<cplx> pts;
        for (long j = 0; j < 8; ++j)
            pts.push_back(std::polar(
                0.3 + 0.5 * rng.uniform(static_cast<std::uint64_t>(j), 0, 0),
                2.0 * kPi * (j + 0.4) / 8));
        gas::Configuration cfg = gas::Configuration::of(std::move(pts));
        return gas::reproducing_identity_residual(cfg, gin, cplx(0.4, 0.1),
                                                  cplx(-0.2, 0.3)) <= 1e-8;
    }});
    checks.push_back({"sampler-detailed-balance", [gin] {
        gas::SamplerConfig sc;
        sc.c = 2.0;
        sc.sweeps = 80;
        sc.burn_in = 40;
        const int chains = 600;
        const double b = 2.0 * std::log(2.0);
        std::vector<double> sep;
        for (int t = 0; t < chains; ++t) {
            sc.seed = 500 + static_cast<std::uint64_t>(t);
            sep.push_back(gas::min_separation(gas::sample(2, gin, sc).cfg));
        }
        std::sort(sep.begin(), sep.end());
        double ks = 0.0;
        for (int i = 0; i < chains; ++i)
            ks = std::max(ks, std::abs(gamma_p(b + 1.0, b * sep[i] * sep[i]) -
                                       (i + 0.5) / chains));
        return ks <= 0.06;
    }});
    checks.push_back({"count-additivity", [gin] {
        gas::CounterRng rng{5};
        std::vector<cplx> pts;
        for (long j = 0; j < 20; ++j)
            pts.emplace_back(2.0 * rng.uniform(static_cast<std::uint64_t>(j), 0, 0) - 1.0,
                             2.0 * rng.uniform(static_cast<std::uint64_t>(j), 0, 1) - 1.0);
        gas::Configuration cfg = gas::Configuration::of(std::move(pts));
        long a = disc::count_in(cfg, cplx(-0.1), Window::rect(cplx(0.0), 1.0, 1.0), 4);
        long b = disc::count_in(cfg, cplx(-0.1), Window::rect(cplx(1.0), 1.0, 1.0), 4);
        long u = disc::count_in(cfg, cplx(-0.1), Window::rect(cplx(0.0), 2.0, 1.0), 4);
        return a + b == u;
    }});
    checks.push_back({"boundary-expected-limit", [gin] {
        Window w = Window::disk(0.0, 2.0);
        cplx pn = std::polar(1.0, 0.3);
        double finite = disc::expected_count(gin, pn, w, 4096,
                                             disc::ExpectedMode::Scaled);
        double limit =
            disc::expected_count(gin, pn, w, disc::BoundaryLimit{0.3, 0.0});
        return std::abs(finite - limit) <= 0.05;
    }});
    return checks;
}

void run_verify(const RunConfig&, nlohmann::json& p, std::string& csv,
                nlohmann::json& summary, bool& numerical_failure) {
    reject_unknown(p, {}, "verify parameters");
    csv = "property,pass\n";
    nlohmann::json table = nlohmann::json::object();
    long failed = 0;
    for (auto& check : verification_checks()) {
        bool ok = false;
        try {
            ok = check.fn();
        } catch (const std::exception&) {
            ok = false;
        }
        csv += check.name + "," + (ok ? "1" : "0") + "\n";
        table[check.name] = ok;
        if (!ok) ++failed;
    }
    summary = {{"properties", table},
               {"failed", failed},
               {"fitted", nlohmann::json::object()}};
    numerical_failure = failed > 0;
}

}  // namespace

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidArgumentError("config must be an object");
    reject_unknown(j, {"experiment", "parameters", "seed", "threads",
                       "output_dir"},
                   "config");
    RunConfig cfg;
    if (!j.contains("experiment"))
        throw InvalidArgumentError("config is missing \"experiment\"");
    cfg.experiment = j.at("experiment").get<std::string>();
    if (!known_experiment(cfg.experiment))
        throw InvalidArgumentError("unknown experiment \"" + cfg.experiment +
                                   "\"");
    if (j.contains("parameters")) {
        if (!j.at("parameters").is_object())
            throw InvalidArgumentError("parameters must be an object");
        cfg.parameters = j.at("parameters");
    }
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) {
        cfg.threads = j.at("threads").get<int>();
        if (cfg.threads < 1) throw InvalidArgumentError("threads must be >= 1");
    }
    if (j.contains("output_dir"))
        cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // translate the byte offset into a line/column diagnostic
        std::size_t pos = std::min(e.byte, text.size());
        long line = 1, col = 1;
        for (std::size_t i = 0; i + 1 <= pos && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InvalidArgumentError("JSON syntax error at line " +
                                   std::to_string(line) + ", column " +
                                   std::to_string(col) + ": " + e.what());
    }
}

std::string config_hash(const RunConfig& cfg) {
    std::string canon = cfg.experiment + "|" + cfg.parameters.dump() + "|" +
                        std::to_string(cfg.seed);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canon)));
    return buf;
}

int run(const RunConfig& cfg_in) {
    try {
        RunConfig cfg = cfg_in;
        if (!known_experiment(cfg.experiment))
            throw InvalidArgumentError("unknown experiment \"" +
                                       cfg.experiment + "\"");
        std::string csv;
        nlohmann::json summary;
        bool numerical_failure = false;
        nlohmann::json& p = cfg.parameters;
        if (cfg.experiment == "spectrum") {
            run_spectrum(cfg, p, csv, summary);
        } else if (cfg.experiment == "gas") {
            run_gas(cfg, p, csv, summary);
        } else if (cfg.experiment == "fekete") {
            run_fekete(cfg, p, csv, summary, numerical_failure);
        } else if (cfg.experiment == "discrepancy-boundary") {
            run_boundary(cfg, p, csv, summary);
        } else if (cfg.experiment == "discrepancy-bulk") {
            run_bulk(cfg, p, csv, summary);
        } else if (cfg.experiment == "sandwich") {
            run_sandwich(cfg, p, csv, summary);
        } else {
            run_verify(cfg, p, csv, summary, numerical_failure);
        }
        ArtifactWriter aw = make_writer(cfg, config_hash(cfg));
        aw.write_text(aw.csv_path, csv);
        aw.write_text(aw.json_path, summary.dump(2) + "\n");
        nlohmann::json manifest = {{"experiment", cfg.experiment},
                                   {"parameters", cfg.parameters},
                                   {"seed", cfg.seed},
                                   {"threads", cfg.threads},
                                   {"output_dir", cfg.output_dir}};
        aw.write_text(aw.manifest_path, manifest.dump(2) + "\n");
        return numerical_failure ? 3 : 0;
    } catch (const InvalidArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

std::string describe(const std::string& experiment) {
    if (experiment == "spectrum")
        return "spectrum: eigenvalue counting of a concentration operator.\n"
               "parameters: kernel (ginibre|erfc), l (erfc cut, default 0),\n"
               "  window (geometry JSON, default disk r=2), h (grid pitch),\n"
               "  node_cap, alphas (threshold list), C_univ, eta, a.\n"
               "csv columns: alpha, count (#eigenvalues > alpha), rhs_upper,\n"
               "  rhs_lower (two-sided perimeter-law bounds; the lower side\n"
               "  carries the h(a) content factor).\n";
    if (experiment == "gas")
        return "gas: Metropolis chain at inverse temperature c*log n.\n"
               "parameters: n, c (default 2), sweeps, burn_in, proposal_sigma\n"
               "  (0 = automatic 1/sqrt(n*beta)).\n"
               "csv columns: re, im (final configuration).\n";
    if (experiment == "fekete")
        return "fekete: energy minimization by descent with backtracking.\n"
               "parameters: n, tol (stop at max gradient <= tol*n), max_iter.\n"
               "csv columns: re, im. Non-convergence exits 3, best iterate is\n"
               "still written.\n";
    if (experiment == "discrepancy-boundary")
        return "discrepancy-boundary: sup count discrepancy near the droplet\n"
               "edge for disk windows of radius L, against the scaled\n"
               "equilibrium prediction.\n"
               "parameters: c, n_list, L_list, seeds.\n"
               "csv columns: n, c, seed, window, scale, p_re, p_im, count,\n"
               "  expected, discrepancy, skipped.\n"
               "summary: slope = least-squares slope of log sup vs log L over\n"
               "  L >= 2 (perimeter-order growth gives a slope near 1);\n"
               "  normalized = mean sup / (L sqrt(log L) log(1+log L)).\n";
    if (experiment == "discrepancy-bulk")
        return "discrepancy-bulk: sup count discrepancy deep in the bulk\n"
               "against the local density prediction.\n"
               "parameters: c, n_list, window, seeds, M_bulk (bulk margin in\n"
               "  units of log n / sqrt n).\n"
               "csv columns: as discrepancy-boundary; skipped=1 marks n too\n"
               "  small for a nonempty bulk region.\n";
    if (experiment == "sandwich")
        return "sandwich: two-sided spectral bounds for a window count.\n"
               "parameters: n, gamma, C_fit, window (disk), p ([re,im]),\n"
               "  source (fekete|sample), tol or c, M, s (0 = from the\n"
               "  measured minimal separation).\n"
               "csv columns: n_minus, n_count, n_plus, upper_threshold_count,\n"
               "  lower_threshold_count, upper_ok, lower_ok.\n";
    if (experiment == "verify")
        return "verify: run the built-in property table (kernel closed forms,\n"
               "spectral oracles, transform factorization, sampler detailed\n"
               "balance, counting identities). No parameters.\n"
               "csv columns: property, pass.\n";
    throw InvalidArgumentError("unknown experiment \"" + experiment + "\"");
}

}  // namespace lab::harness
