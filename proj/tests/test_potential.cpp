#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "lab/potential.hpp"

using namespace lab;
using namespace lab::pot;
using geom::Window;
using json = nlohmann::json;

TEST_CASE("droplet radii") {
    CHECK(droplet_radius(Potential(1.0)) == doctest::Approx(1.0));
    CHECK(droplet_radius(Potential(2.0)) == doctest::Approx(std::pow(2.0, -0.25)));
    // total mass of the density over its disk is one
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        Potential pot(p);
        double R = droplet_radius(pot);
        double mass = equilibrium_mass(pot, Window::disk(0.0, R));
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("closed-form derivatives match finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> rad(0.1, 2.0), ang(0.0, 2.0 * kPi);
    for (double p : {1.0, 1.7, 2.5}) {
        Potential pot(p);
        for (int trial = 0; trial < 40; ++trial) {
            cplx z = std::polar(rad(rng), ang(rng));
            double h = 1e-4 * std::max(1.0, std::abs(z));
            double qxx = (pot.Q(z + h) - 2.0 * pot.Q(z) + pot.Q(z - h)) / (h * h);
            double qyy = (pot.Q(z + cplx(0, h)) - 2.0 * pot.Q(z) + pot.Q(z - cplx(0, h))) /
                         (h * h);
            CHECK(0.25 * (qxx + qyy) ==
                  doctest::Approx(pot.laplacian(z)).epsilon(1e-6));
            double qx = (pot.Q(z + h) - pot.Q(z - h)) / (2.0 * h);
            double qy = (pot.Q(z + cplx(0, h)) - pot.Q(z - cplx(0, h))) / (2.0 * h);
            CHECK(qx == doctest::Approx(pot.grad(z).real()).epsilon(1e-6));
            CHECK(qy == doctest::Approx(pot.grad(z).imag()).epsilon(1e-6));
        }
    }
}

TEST_CASE("equilibrium masses of reference windows") {
    Potential gin(1.0);
    CHECK(equilibrium_mass(gin, Window::disk(0.0, 0.5)) ==
          doctest::Approx(0.25).epsilon(1e-3));
    CHECK(equilibrium_mass(gin, Window::disk(0.0, 2.0)) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(equilibrium_mass(gin, Window::cut(Window::disk(0.0, 1.0), 0.9, 0.0)) ==
          doctest::Approx(0.5).epsilon(1e-3));
    // off-center window
    double m = equilibrium_mass(gin, Window::disk(cplx(0.75, 0.0), 0.1));
    CHECK(m > 0.0);
    CHECK(m < 0.011);  // at most Delta Q * area/pi = 0.01 plus tolerance
}

TEST_CASE("equilibrium mass is monotone and additive") {
    Potential pot(2.0);
    double small = equilibrium_mass(pot, Window::disk(0.0, 0.3));
    double big = equilibrium_mass(pot, Window::disk(0.0, 0.6));
    CHECK(small <= big + 1e-6);

    auto left = Window::cut(Window::disk(0.0, 0.7), 0.0, 0.0);
    auto right = Window::cut(Window::disk(0.0, 0.7), kPi, 0.0);
    double whole = equilibrium_mass(pot, Window::disk(0.0, 0.7));
    CHECK(equilibrium_mass(pot, left) + equilibrium_mass(pot, right) ==
          doctest::Approx(whole).epsilon(2e-3));
}

TEST_CASE("signed distance") {
    Potential gin(1.0);
    CHECK(signed_distance(gin, cplx(0.5, 0.0)) == doctest::Approx(0.5));
    CHECK(signed_distance(gin, 2.0 * std::polar(1.0, kPi / 3.0)) ==
          doctest::Approx(-1.0));
    CHECK(signed_distance(gin, std::polar(1.0, 2.1)) == doctest::Approx(0.0));
}

TEST_CASE("microscopic frame") {
    Potential gin(1.0);
    long n = 4096;
    double rn = std::sqrt(static_cast<double>(n));

    auto f1 = micro_frame(gin, 1.0 - 3.0 / rn, n);
    CHECK(f1.theta == doctest::Approx(0.0));
    CHECK(f1.l == doctest::Approx(3.0));

    auto f2 = micro_frame(gin, cplx(0.0, 1.0 + 2.0 / rn), n);
    CHECK(f2.theta == doctest::Approx(kPi / 2.0));
    CHECK(f2.l == doctest::Approx(-2.0));

    auto f3 = micro_frame(gin, cplx(0.5, 0.0), 1000000);
    CHECK(f3.bulk());

    // direction matches the radial unit vector
    auto f4 = micro_frame(gin, std::polar(1.01, 1.3), n);
    CHECK(std::abs(std::polar(1.0, f4.theta) - std::polar(1.0, 1.3)) < 1e-12);

    CHECK_THROWS_AS(micro_frame(gin, 0.0, 4, FrameOptions{}), InvalidArgumentError);
}

TEST_CASE("serialization") {
    Potential pot(1.5);
    json j = pot;
    CHECK(j.at("family") == "radial");
    CHECK(j.at("p") == doctest::Approx(1.5));
    CHECK(j.get<Potential>().p() == doctest::Approx(1.5));
    json bad = {{"family", "exotic"}, {"p", 1.0}};
    Potential out;
    CHECK_THROWS_AS(from_json(bad, out), InvalidArgumentError);
    CHECK_THROWS(void(Potential(0.2)));
}
