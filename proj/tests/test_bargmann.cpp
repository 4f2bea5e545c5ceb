#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "lab/bargmann.hpp"

using namespace lab;
using namespace lab::barg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("Hermite functions are orthonormal on the grid") {
    HermiteBasis basis(10, 12.0);
    Eigen::MatrixXd g = basis.fullline_gram();
    CHECK((g - Eigen::MatrixXd::Identity(10, 10)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("half-line Gram matrix") {
    HermiteBasis basis(8, 12.0);
    Eigen::MatrixXd g0 = halfline_gram(basis, 0.0);
    for (int j = 0; j < 8; ++j) {
        CHECK(g0(j, j) == doctest::Approx(0.5).epsilon(1e-10));
        for (int k = 0; k < j; ++k)
            if ((j + k) % 2 == 0) CHECK(std::abs(g0(j, k)) < 1e-10);
    }
    // full line recovers the identity
    Eigen::MatrixXd gf = halfline_gram(basis, kInf);
    CHECK((gf - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-8);

    // compression of a projection: eigenvalues in [0,1]
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(halfline_gram(basis, 0.7));
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
    CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-8);

    CHECK_THROWS_AS(halfline_gram(basis, 5.0), InvalidArgumentError);
}

TEST_CASE("Fock basis orthonormality via plane quadrature") {
    FockBasis fock(6);
    auto w = geom::Window::disk(0.0, 7.0);
    Eigen::MatrixXcd g = window_matrix(fock, w, 0.02);
    CHECK((g - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("transform maps Hermite functions to monomials") {
    // closed form for the ground state: the Gaussian integral
    // (2/pi)^{1/2} int exp(2tz - 2t^2) dt = (pi/2)^{1/2} exp(z^2/2) collapses
    // the transform of psi_0 to exactly e_0
    HermiteBasis basis(6, 12.0);
    FockBasis fock(6);
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 12; ++t) {
        cplx z(u(rng), u(rng));
        CHECK(std::abs(bargmann_transform(basis, 0, z) - fock.e(0, z)) < 1e-10);
        for (long k = 1; k < 6; ++k) {
            cplx got = bargmann_transform(basis, k, z);
            cplx want = fock.e(k, z);
            // no phase drift in this convention: ratio pinned at +1
            CHECK(std::abs(got - want) < 1e-9 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("both routes to the half-line projection agree") {
    CHECK(factorization_residual(8, 0.0) <= 1e-3);
    CHECK(factorization_residual(8, 2.0) <= 1e-3);
    CHECK(factorization_residual(1, kInf) <= 1e-8);
}

TEST_CASE("direct matrix elements") {
    FockBasis fock(6);
    Eigen::MatrixXcd a = erfc_matrix_direct(fock, 0.0);
    CHECK(std::abs(a(0, 0) - 0.5) < 1e-4);
    CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);

    Eigen::MatrixXcd id = erfc_matrix_direct(fock, 12.0);
    CHECK((id - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-4);

    CHECK_THROWS_AS(erfc_matrix_direct(FockBasis(13), 0.0), InvalidArgumentError);
}

TEST_CASE("cut translation covariance at matrix level") {
    const long m = 16;
    const double l = 0.5;
    HermiteBasis basis(m, 14.0);
    // trim the Hermite Gram to the Fock indices
    Eigen::MatrixXd gl = halfline_gram(basis, l);
    Eigen::MatrixXd g0 = halfline_gram(basis, 0.0);
    FockBasis fock(m);
    auto w = geom::Window::disk(cplx(0.2, 0.1), 0.8);
    Eigen::MatrixXcd a = window_matrix(fock, w, 0.02);
    Eigen::MatrixXcd at = window_matrix(fock, geom::translated(w, -l), 0.02);

    Eigen::MatrixXcd lhs = gl.cast<cplx>() * a * gl.cast<cplx>();
    Eigen::MatrixXcd rhs = g0.cast<cplx>() * at * g0.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(lhs), e2(rhs);
    Eigen::VectorXd v1 = e1.eigenvalues().reverse();
    Eigen::VectorXd v2 = e2.eigenvalues().reverse();
    for (int k = 0; k < 6; ++k) CHECK(std::abs(v1(k) - v2(k)) < 1e-3);
}
