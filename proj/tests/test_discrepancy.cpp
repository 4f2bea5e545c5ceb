#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lab/conc_operator.hpp"
#include "lab/discrepancy.hpp"
#include "lab/kernel.hpp"

using namespace lab;
using namespace lab::disc;

namespace {

gas::Configuration ring(long n, double radius, std::uint64_t seed) {
    gas::CounterRng rng{seed};
    std::vector<cplx> pts;
    for (long j = 0; j < n; ++j) {
        double r = radius * (0.7 + 0.4 * rng.uniform(static_cast<std::uint64_t>(j), 0, 0));
        double th = 2.0 * kPi * (j + 0.3) / n;
        pts.push_back(std::polar(r, th));
    }
    return gas::Configuration::of(std::move(pts));
}

}  // namespace

TEST_CASE("window counting") {
    pot::Potential gin;
    auto w = geom::Window::disk(0.0, 2.0);
    CHECK(count_in(gas::Configuration{}, cplx(0.0), w, 100) == 0);

    gas::Configuration cfg = ring(12, 0.5, 4);
    CHECK(count_in(cfg, cplx(0.0), geom::Window::disk(0.0, 50.0), 4) == 12);

    // closed convention: a point exactly on the rim is inside
    long n = 25;
    cplx p(0.1, 0.2);
    gas::Configuration edge{{p + (2.0 / 5.0) * std::polar(1.0, 0.9)}};
    CHECK(count_in(edge, p, w, n) == 1);

    // additivity over a disjoint split of a rectangle
    auto left = geom::Window::rect(cplx(0.0), 1.0, 1.0);
    auto right = geom::Window::rect(cplx(1.0), 1.0, 1.0);
    auto both = geom::Window::rect(cplx(0.0), 2.0, 1.0);
    gas::Configuration grid16 = ring(16, 0.9, 8);
    long a = count_in(grid16, cplx(-0.3), left, 9);
    long b = count_in(grid16, cplx(-0.3), right, 9);
    CHECK(a + b == count_in(grid16, cplx(-0.3), both, 9));
}

TEST_CASE("expected counts") {
    pot::Potential gin;
    auto w2 = geom::Window::disk(0.0, 2.0);
    CHECK(expected_count(gin, cplx(0.0), w2, 100, ExpectedMode::Scaled) ==
          doctest::Approx(4.0).epsilon(1e-12));
    CHECK(expected_count(gin, cplx(0.0), w2, BoundaryLimit{0.0, 0.0}) ==
          doctest::Approx(2.0).epsilon(1e-9));
    for (double L : {1.0, 2.0, 3.0})
        CHECK(expected_count(gin, cplx(0.3, 0.1), geom::Window::disk(0.0, L), 64,
                             ExpectedMode::LocalBulk) ==
              doctest::Approx(L * L).epsilon(1e-12));

    // area scaling
    double e1 = expected_count(gin, cplx(0.0), w2, 64, ExpectedMode::LocalBulk);
    double e2 = expected_count(gin, cplx(0.0), geom::scaled(w2, 2.0), 64,
                               ExpectedMode::LocalBulk);
    CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));

    // deep in the bulk the equilibrium-measure form agrees with the local one
    double em = expected_count(gin, cplx(0.0), geom::Window::disk(0.0, 1.0), 400,
                               ExpectedMode::ExactMu);
    CHECK(em == doctest::Approx(1.0).epsilon(0.02));

    // generic (non-disk) window goes through quadrature and must agree with
    // the disk fast path through a polygonal approximation of the same disk
    std::vector<cplx> poly;
    for (int k = 0; k < 96; ++k)
        poly.push_back(2.0 * std::polar(1.0, 2.0 * kPi * k / 96));
    double viapoly = expected_count(gin, cplx(0.95), geom::Window::polygon(poly),
                                    256, ExpectedMode::Scaled);
    double viadisk = expected_count(gin, cplx(0.95), w2, 256, ExpectedMode::Scaled);
    CHECK(viapoly == doctest::Approx(viadisk).epsilon(0.05));
}

TEST_CASE("scaled form approaches the half-plane limit at the boundary") {
    pot::Potential gin;
    auto w = geom::Window::disk(0.0, 2.0);
    const long n = 4096;
    const double theta = 0.7;
    for (double l : {-1.0, 0.0, 1.0}) {
        cplx pn = std::polar(1.0 - l / std::sqrt(static_cast<double>(n)), theta);
        double finite = expected_count(gin, pn, w, n, ExpectedMode::Scaled);
        double limit = expected_count(gin, pn, w, BoundaryLimit{theta, l});
        CHECK(std::abs(finite - limit) <= 0.05);
    }
}

TEST_CASE("grid sup with a tiny window sees at most one point") {
    pot::Potential gin;
    gas::Configuration cfg = ring(16, 0.8, 5);
    SupResult s = sup_discrepancy(cfg, gin, geom::Window::disk(0.0, 0.01), 16, 0.05);
    CHECK(s.sup <= 1.001);
    CHECK_THROWS_AS(sup_discrepancy(cfg, gin, geom::Window::disk(0.0, 1.0), 16, 0.2),
                    InvalidArgumentError);
}

TEST_CASE("grid sup is rotation invariant for radial data") {
    pot::Potential gin;
    gas::Configuration cfg = ring(24, 0.8, 6);
    gas::Configuration rot = cfg;
    for (cplx& z : rot.points) z *= cplx(0.0, 1.0);  // quarter turn maps the grid to itself
    auto w = geom::Window::disk(0.0, 1.5);
    SupResult s1 = sup_discrepancy(cfg, gin, w, 24, 0.04);
    SupResult s2 = sup_discrepancy(rot, gin, w, 24, 0.04);
    CHECK(s1.sup == doctest::Approx(s2.sup).epsilon(1e-12));
}

TEST_CASE("minimizer discrepancy scales with the window perimeter") {
    pot::Potential gin;
    gas::FeketeResult f = gas::fekete(256, gin, 1e-3, 7, 4000);
    auto w = geom::Window::disk(0.0, 4.0);
    double per = geom::perimeter(w);
    SupResult s0 = sup_discrepancy(f.cfg, gin, w, 256, 0.0125);
    SupResult s1 = sup_discrepancy(f.cfg, gin, w, 256, 0.0125, cplx(0.0041, 0.0023));
    CHECK(s0.sup / per <= 3.0);
    CHECK(s1.sup / per <= 3.0);
}

TEST_CASE("boundary sweep at moderate size") {
    pot::Potential gin;
    DiscrepancyReport rep =
        boundary_sweep(gin, 2.0, {256}, {0.5, 2.0, 4.0, 8.0}, {1, 2});
    REQUIRE(rep.rows.size() == 8);
    REQUIRE(rep.scales.size() == 4);
    // sub-spacing windows catch at most one point
    CHECK(rep.mean_sup[0] <= 2.0);
    // growth clearly below the L^{5/3} alternative
    CHECK(rep.slope <= 1.4);
    for (const auto& row : rep.rows) {
        CHECK(row.discrepancy >= 0.0);
        CHECK(row.count >= 0);
        CHECK(row.expected >= 0.0);
        CHECK(std::abs(row.discrepancy -
                       std::abs(row.count - row.expected)) < 1e-9);
    }
    CHECK_THROWS_AS(boundary_sweep(gin, 2.0, {}, {2.0}, {1}), InvalidArgumentError);
}

TEST_CASE("bulk sweep stays within a perimeter multiple") {
    pot::Potential gin;
    auto w = geom::Window::disk(0.0, 4.0);
    DiscrepancyReport rep = bulk_sweep(gin, 2.0, {1024}, w, {1, 2, 3, 4, 5}, 3.0);
    REQUIRE(rep.rows.size() == 5);
    for (const auto& row : rep.rows) CHECK(!row.skipped);
    CHECK(rep.sup_over_perimeter <= 2.0);

    // small n leaves no admissible bulk points
    DiscrepancyReport empty = bulk_sweep(gin, 2.0, {16}, w, {1}, 3.0);
    REQUIRE(empty.rows.size() == 1);
    CHECK(empty.rows[0].skipped);
}

TEST_CASE("spectral sandwich for the count at the boundary") {
    pot::Potential gin;
    gas::FeketeResult f = gas::fekete(64, gin, 1e-3);
    auto w = geom::Window::disk(0.0, 3.0);
    SandwichReport rep = landau_sandwich(f.cfg, gin, cplx(1.0), w, 64, 0.3, 10.0);
    CHECK(rep.n_minus <= rep.n_count);
    CHECK(rep.n_count <= rep.n_plus);
    CHECK(rep.upper_ok);
    CHECK(rep.lower_ok);

    CHECK_THROWS_AS(landau_sandwich(f.cfg, gin, cplx(1.0),
                                    geom::Window::rect(cplx(0.0), 1.0, 1.0), 64,
                                    0.3, 10.0),
                    InvalidArgumentError);
    CHECK_THROWS_AS(landau_sandwich(f.cfg, gin, cplx(1.0), w, 64, 1.5, 10.0),
                    InvalidArgumentError);
}

TEST_CASE("finite-index counting converges to the limiting operator") {
    pot::Potential gin;
    const double rho = 0.5;
    auto w = geom::Window::disk(0.0, 3.0);
    // bulk limit: Ginibre kernel on the sqrt(rho)-scaled window
    op::BuildOptions lim_opt;
    lim_opt.h = 0.1;
    lim_opt.node_cap = 20000;
    op::Spectrum lim = op::spectrum(
        op::build(ker::Ginibre{}, geom::scaled(w, std::sqrt(rho)), lim_opt));
    long lim_count = op::counting(lim, 0.5);
    for (long n : {32L, 64L, 128L}) {
        const double rn = std::sqrt(static_cast<double>(n));
        long m = static_cast<long>(std::floor(rho * n));
        op::BuildOptions bo;
        bo.h = 0.1 / rn;
        bo.node_cap = 20000;
        op::Spectrum s = op::spectrum(
            op::build(ker::FiniteN(gin, m), geom::scaled(w, 1.0 / rn), bo));
        CHECK(std::abs(op::counting(s, 0.5) - lim_count) <= 1);
    }
}

TEST_CASE("report serialization") {
    pot::Potential gin;
    DiscrepancyReport rep = boundary_sweep(gin, 2.0, {64}, {2.0, 4.0}, {1});
    write_csv(rep, "disc_rt.csv");
    std::ifstream in("disc_rt.csv");
    REQUIRE(in.good());
    std::string line;
    long lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 1 + static_cast<long>(rep.rows.size()));
    nlohmann::json j = summary_json(rep);
    CHECK(j.at("rows").get<std::size_t>() == rep.rows.size());
    CHECK(j.at("scales").size() == rep.scales.size());
    std::remove("disc_rt.csv");
}
