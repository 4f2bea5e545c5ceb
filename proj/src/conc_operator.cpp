#include "lab/conc_operator.hpp"

#include <algorithm>
#include <cmath>

#include <lapacke.h>

#include "lab/potential.hpp"

namespace lab::op {
namespace {

// Window-dependent node filter: degree-n kernels live on the inflated droplet,
// half-plane kernels vanish far beyond the cut line.
bool keep_node(const ker::KernelId& kernel, cplx x, const BuildOptions& opt) {
    if (const auto* fn = std::get_if<ker::FiniteN>(&kernel)) {
        double margin = (opt.M + opt.s) / std::sqrt(static_cast<double>(fn->n()));
        return pot::signed_distance(fn->potential(), x) >= -margin;
    }
    if (const auto* er = std::get_if<ker::Erfc>(&kernel))
        return x.real() <= er->l + 12.0;
    return true;
}

std::vector<double> dense_hermitian_eigs(Eigen::MatrixXcd a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    if (n == 0) return {};
    std::vector<double> w(static_cast<std::size_t>(n));
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'N', 'U', n,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
    if (info != 0)
        throw NumericalError("eigensolver failed, info=" + std::to_string(info));
    return w;
}

}  // namespace

ConcentrationOperator build(const ker::KernelId& kernel, const geom::Window& w,
                            const BuildOptions& opt) {
    ConcentrationOperator out{kernel, {}, {}};
    if (const auto* cut = std::get_if<geom::Cut>(&w.shape());
        cut && geom::cut_state(*cut) == geom::CutState::empty)
        return out;  // empty window, empty operator

    geom::QuadratureGrid grid =
        geom::quadrature(w, opt.h, {.node_cap = opt.node_cap});
    out.grid.spacing = grid.spacing;
    out.grid.weight = grid.weight;
    for (cplx x : grid.nodes)
        if (keep_node(kernel, x, opt)) out.grid.nodes.push_back(x);

    const auto& nodes = out.grid.nodes;
    const std::size_t m = nodes.size();
    out.matrix.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    if (m == 0) return out;

    if (const auto* fn = std::get_if<ker::FiniteN>(&kernel)) {
        // Gram-product build: A = (sqrt(w) Phi)(sqrt(w) Phi)^*, with
        // Phi[j][k] = phi_k(x_j), accumulated in column blocks to cap memory.
        out.matrix.setZero();
        const long nk = fn->n();
        const long block = 512;
        double sw = std::sqrt(out.grid.weight);
        Eigen::MatrixXcd phi;
        for (long k0 = 0; k0 < nk; k0 += block) {
            long nb = std::min(block, nk - k0);
            phi.resize(static_cast<Eigen::Index>(m), nb);
            for (long k = 0; k < nb; ++k)
                for (std::size_t j = 0; j < m; ++j)
                    phi(static_cast<Eigen::Index>(j), k) = sw * fn->phi(k0 + k, nodes[j]);
            out.matrix.noalias() += phi * phi.adjoint();
        }
        return out;
    }

    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = j; k < m; ++k) {
            cplx v = out.grid.weight * ker::eval(kernel, nodes[j], nodes[k]);
            out.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
            out.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
                std::conj(v);
        }
    }
    return out;
}

Spectrum spectrum(const ConcentrationOperator& op) {
    Spectrum s;
    if (op.matrix.rows() == 0) return s;
    std::vector<double> eigs = dense_hermitian_eigs(op.matrix);
    std::sort(eigs.begin(), eigs.end(), std::greater<>());
    for (double v : eigs) {
        s.trace += v;
        s.clamp_excursion =
            std::max({s.clamp_excursion, -v, v - 1.0});
    }
    if (s.clamp_excursion > 0.02)
        throw NumericalError("eigenvalue clamp excursion " +
                             std::to_string(s.clamp_excursion) +
                             " exceeds quadrature budget");
    for (double v : eigs) {
        double c = std::clamp(v, 0.0, 1.0);
        if (c < 1e-12) continue;  // numerical null space
        s.eigenvalues.push_back(c);
        s.hs_sq += c * c;
    }
    return s;
}

Spectrum checked_spectrum(const ker::KernelId& kernel, const geom::Window& w,
                          const BuildOptions& opt) {
    Spectrum coarse = spectrum(build(kernel, w, opt));
    BuildOptions fine = opt;
    fine.h = opt.h / std::sqrt(2.0);
    fine.node_cap = opt.node_cap * 2 + 16;
    Spectrum refined = spectrum(build(kernel, w, fine));
    std::size_t lead = static_cast<std::size_t>(
        std::ceil(2.0 * geom::area(w) / kPi));
    for (std::size_t k = 0; k < lead; ++k) {
        double a = k < coarse.eigenvalues.size() ? coarse.eigenvalues[k] : 0.0;
        double b = k < refined.eigenvalues.size() ? refined.eigenvalues[k] : 0.0;
        if (std::abs(a - b) >= 0.01)
            throw NumericalError("spectrum not grid-converged at index " +
                                 std::to_string(k));
    }
    return refined;
}

long counting(const Spectrum& s, double alpha) {
    long c = 0;
    for (double v : s.eigenvalues)
        if (v > alpha) ++c;
    return c;
}

long two_moment_plunge_bound(const Spectrum& s, double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw InvalidArgumentError("delta outside (0, 1/2)");
    double v = (s.trace - s.hs_sq) / (delta * (1.0 - delta));
    return static_cast<long>(std::ceil(v - 1e-12));
}

double plunge_weight(double x) { return x <= 2.0 ? 1.0 : x * x * std::log(x); }

double counting_rhs(const geom::Window& w, double alpha, double a,
                const BoundParams& params, BoundSide side) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw InvalidArgumentError("alpha outside (0, 1/2)");
    double la = std::log(1.0 / alpha);
    double gap = (params.C_univ / params.kappa) * geom::perimeter(w) *
                 (std::sqrt(la) + la / params.eta) * std::log(1.0 + la);
    double base = geom::area(w) / kPi;
    return side == BoundSide::upper ? base + gap : base - gap * plunge_weight(a);
}

}  // namespace lab::op
