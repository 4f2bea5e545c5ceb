#include "lab/bargmann.hpp"

#include <algorithm>
#include <cmath>

#include "lab/detail/gauss.hpp"
#include "lab/kernel.hpp"

namespace lab::barg {
namespace {

// Gauss-Hermite rule for weight e^{-x^2} via the Golub-Welsch tridiagonal.
void gauss_hermite(int n, std::vector<double>& x, std::vector<double>& w) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i)
        j(i, i + 1) = j(i + 1, i) = std::sqrt(0.5 * (i + 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    x.resize(static_cast<std::size_t>(n));
    w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        w[static_cast<std::size_t>(i)] = std::sqrt(kPi) * v0 * v0;
    }
}

// 2D product Gauss-Hermite grid adapted to the Lebesgue integral of
// functions carrying an e^{-|z|^2} envelope.
struct PlaneRule {
    std::vector<cplx> z;
    std::vector<double> w;  // includes the e^{|z|^2} unfolding, excludes 1/pi
};

PlaneRule plane_rule(int n) {
    std::vector<double> x, wx;
    gauss_hermite(n, x, wx);
    PlaneRule rule;
    rule.z.reserve(static_cast<std::size_t>(n) * n);
    rule.w.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rule.z.emplace_back(x[static_cast<std::size_t>(i)],
                                x[static_cast<std::size_t>(j)]);
            rule.w.push_back(wx[static_cast<std::size_t>(i)] *
                             wx[static_cast<std::size_t>(j)] *
                             std::exp(x[static_cast<std::size_t>(i)] *
                                          x[static_cast<std::size_t>(i)] +
                                      x[static_cast<std::size_t>(j)] *
                                          x[static_cast<std::size_t>(j)]));
        }
    return rule;
}

Eigen::MatrixXcd erfc_matrix_at(const FockBasis& fock, double l, int n_gh) {
    PlaneRule rule = plane_rule(n_gh);
    const long m = fock.m();
    const std::size_t nz = rule.z.size();
    ker::KernelId kernel = ker::Erfc{l};
    // inner transform: B[k][i] = int F_l(z_i, w) e_k(w) dA(w)
    Eigen::MatrixXcd b(m, static_cast<Eigen::Index>(nz));
    std::vector<cplx> ew(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < nz; ++i) {
        for (long k = 0; k < m; ++k) ew[static_cast<std::size_t>(k)] = 0.0;
        for (std::size_t q = 0; q < nz; ++q) {
            cplx f = rule.w[q] * ker::eval(kernel, rule.z[i], rule.z[q]);
            for (long k = 0; k < m; ++k)
                ew[static_cast<std::size_t>(k)] += f * fock.e(k, rule.z[q]);
        }
        for (long k = 0; k < m; ++k)
            b(k, static_cast<Eigen::Index>(i)) =
                ew[static_cast<std::size_t>(k)] / kPi;
    }
    Eigen::MatrixXcd a(m, m);
    for (long j = 0; j < m; ++j)
        for (long k = 0; k < m; ++k) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < nz; ++i)
                acc += rule.w[i] * std::conj(fock.e(j, rule.z[i])) *
                       b(k, static_cast<Eigen::Index>(i));
            a(j, k) = acc / kPi;
        }
    return a;
}

}  // namespace

HermiteBasis::HermiteBasis(long m, double T) : m_(m), T_(T) {
    if (m <= 0) throw InvalidArgumentError("basis size must be positive");
    if (!(T > 0.0)) throw InvalidArgumentError("grid half-width must be positive");
    std::vector<double> x, w;
    gauss_hermite(static_cast<int>(4 * m + 60), x, w);
    // map weight e^{-x^2} onto e^{-2t^2}: t = x / sqrt 2
    nodes_.resize(x.size());
    weights_.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        nodes_[i] = x[i] / std::sqrt(2.0);
        weights_[i] = w[i] * std::exp(x[i] * x[i]) / std::sqrt(2.0);
    }
}

std::vector<double> HermiteBasis::psi_all(double t) const {
    std::vector<double> out(static_cast<std::size_t>(m_));
    double g = std::exp(-t * t);
    out[0] = std::pow(2.0 / kPi, 0.25) * g;
    if (m_ > 1) out[1] = 2.0 * t * out[0];
    for (long k = 1; k + 1 < m_; ++k)
        out[static_cast<std::size_t>(k + 1)] =
            (2.0 * t / std::sqrt(k + 1.0)) * out[static_cast<std::size_t>(k)] -
            std::sqrt(k / (k + 1.0)) * out[static_cast<std::size_t>(k - 1)];
    return out;
}

Eigen::MatrixXd HermiteBasis::fullline_gram() const {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        auto psi = psi_all(nodes_[i]);
        double w = weights_[i];
        for (long j = 0; j < m_; ++j)
            for (long k = j; k < m_; ++k)
                g(j, k) += w * psi[static_cast<std::size_t>(j)] *
                           psi[static_cast<std::size_t>(k)];
    }
    g = g.selfadjointView<Eigen::Upper>();
    return g;
}

Eigen::MatrixXd halfline_gram(const HermiteBasis& basis, double l) {
    const double T = basis.T();
    const bool full = std::isinf(l) && l > 0.0;
    const double hi = full ? T : l;
    if (!full && T < std::abs(l) + 10.0)
        throw InvalidArgumentError("grid half-width too small for this cut");
    const long m = basis.m();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    int panels = std::max(8, static_cast<int>(std::ceil((hi + T) / 0.25)));
    detail::gl32_sweep(-T, hi, panels, [&](double t, double w) {
        auto psi = basis.psi_all(t);
        for (long j = 0; j < m; ++j)
            for (long k = j; k < m; ++k)
                g(j, k) += w * psi[static_cast<std::size_t>(j)] *
                           psi[static_cast<std::size_t>(k)];
    });
    g = g.selfadjointView<Eigen::Upper>();
    return g;
}

FockBasis::FockBasis(long m) : m_(m) {
    if (m <= 0) throw InvalidArgumentError("basis size must be positive");
}

cplx FockBasis::e(long k, cplx z) const {
    if (k < 0 || k >= m_) throw InvalidArgumentError("basis index out of range");
    double r = std::abs(z);
    if (r == 0.0) return k == 0 ? 1.0 : 0.0;
    double lmag = k * std::log(r) - 0.5 * std::norm(z) -
                  0.5 * std::lgamma(k + 1.0);
    return std::polar(std::exp(lmag), k * std::arg(z));
}

Eigen::MatrixXcd erfc_matrix_direct(const FockBasis& fock, double l) {
    if (fock.m() > 12) throw InvalidArgumentError("direct quadrature limited to m <= 12");
    double leff = std::isinf(l) && l > 0.0 ? 12.0 : l;
    Eigen::MatrixXcd a = erfc_matrix_at(fock, leff, 48);
    Eigen::MatrixXcd check = erfc_matrix_at(fock, leff, 40);
    double residual = (a - check).cwiseAbs().maxCoeff();
    if (residual > 1e-4)
        throw NumericalError("plane quadrature residual " + std::to_string(residual));
    return a;
}

Eigen::MatrixXcd window_matrix(const FockBasis& fock, const geom::Window& w,
                               double h) {
    auto grid = geom::quadrature(w, h, {.node_cap = 2000000});
    const long m = fock.m();
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
    std::vector<cplx> e(static_cast<std::size_t>(m));
    for (cplx z : grid.nodes) {
        for (long k = 0; k < m; ++k) e[static_cast<std::size_t>(k)] = fock.e(k, z);
        for (long j = 0; j < m; ++j)
            for (long k = 0; k < m; ++k)
                a(j, k) += grid.weight * std::conj(e[static_cast<std::size_t>(j)]) *
                           e[static_cast<std::size_t>(k)];
    }
    return a;
}

cplx bargmann_transform(const HermiteBasis& basis, long k, cplx z) {
    if (k < 0 || k >= basis.m()) throw InvalidArgumentError("index out of range");
    // (2/pi)^{1/4} int psi_k(t) exp(2tz - t^2 - z^2/2 - |z|^2/2) dt by wide
    // composite quadrature; the integrand is a shifted Gaussian envelope
    cplx acc = 0.0;
    double T = 1.5 * std::abs(z) + 9.0;
    detail::gl32_sweep(-T, T, static_cast<int>(std::ceil(T * 8.0)), [&](double t, double w) {
        auto psi = basis.psi_all(t);
        acc += w * psi[static_cast<std::size_t>(k)] *
               std::exp(2.0 * t * z - t * t);
    });
    return std::pow(2.0 / kPi, 0.25) * acc *
           std::exp(-0.5 * z * z - 0.5 * std::norm(z));
}

double factorization_residual(long m, double l) {
    double leff = std::isinf(l) && l > 0.0 ? 12.0 : l;
    HermiteBasis basis(m, std::abs(leff) + 12.0);
    Eigen::MatrixXd g = halfline_gram(basis, l);
    Eigen::MatrixXcd d = erfc_matrix_direct(FockBasis(m), l);
    return (d - g.cast<cplx>()).cwiseAbs().maxCoeff();
}

}  // namespace lab::barg
