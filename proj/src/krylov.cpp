#include "mbump/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mbump/parallel.hpp"

namespace mbump {

double dot(std::span<const double> a, std::span<const double> b) {
    return reduce_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

namespace {

using Vec = std::vector<double>;

void residual(const LinearMap& A, std::span<const double> b, std::span<const double> x, Vec& r) {
    A(x, r);
    parallel_for(r.size(), [&](std::size_t i) { r[i] = b[i] - r[i]; });
}

/// One MINRES cycle on A dx = r0 from dx = 0; returns iterations used.
/// Stops when the preconditioned residual estimate falls below stop.
int minres_cycle(const LinearMap& A, const LinearMap& M, const Vec& r0, Vec& dx, double stop, int max_iter,
                 Vec* alphas = nullptr, Vec* betas = nullptr) {
    const std::size_t n = r0.size();
    Vec r1 = r0, r2 = r0, y(n), v(n), w(n, 0.0), w1(n, 0.0), w2(n, 0.0);
    std::fill(dx.begin(), dx.end(), 0.0);
    M(r1, y);
    double beta1 = dot(r1, y);
    if (!(beta1 > 0.0)) return 0;
    beta1 = std::sqrt(beta1);
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
    int it = 0;
    while (it < max_iter) {
        ++it;
        const double s = 1.0 / beta;
        parallel_for(n, [&](std::size_t i) { v[i] = s * y[i]; });
        A(v, y);
        if (it >= 2) {
            const double f = beta / oldb;
            parallel_for(n, [&](std::size_t i) { y[i] -= f * r1[i]; });
        }
        const double alfa = dot(v, y);
        const double f = alfa / beta;
        parallel_for(n, [&](std::size_t i) { y[i] -= f * r2[i]; });
        std::swap(r1, r2);
        r2 = y;
        M(r2, y);
        oldb = beta;
        beta = dot(r2, y);
        if (beta < 0.0) beta = 0.0;
        beta = std::sqrt(beta);
        if (alphas) alphas->push_back(alfa);
        if (betas) betas->push_back(beta);
        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::min());
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar = sn * phibar;
        const double denom = 1.0 / gamma;
        std::swap(w1, w2);
        std::swap(w2, w);
        parallel_for(n, [&](std::size_t i) {
            w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
            dx[i] += phi * w[i];
        });
        if (phibar <= stop || beta == 0.0) break;
    }
    return it;
}

}  // namespace

KrylovResult minres(const LinearMap& A, const LinearMap& M, std::span<const double> b, std::span<double> x,
                    double rtol, int max_iter) {
    KrylovResult out;
    const std::size_t n = b.size();
    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        out.converged = true;
        return out;
    }
    Vec r(n), z(n), dx(n);
    residual(A, b, x, r);
    double rel = std::sqrt(dot(r, r)) / bnorm;
    out.history.push_back(rel);
    // The cycle monitors the M-norm; ask for a margin below the target and
    // restart from the true residual if the Euclidean norm lags behind.
    double factor = 0.1;
    while (rel > rtol && out.iterations < max_iter) {
        M(r, z);
        const double rm = std::sqrt(std::max(0.0, dot(r, z)));
        const double stop = rm * factor * rtol / rel;
        const int used = minres_cycle(A, M, r, dx, stop, max_iter - out.iterations);
        out.iterations += used;
        parallel_for(n, [&](std::size_t i) { x[i] += dx[i]; });
        residual(A, b, x, r);
        const double next = std::sqrt(dot(r, r)) / bnorm;
        out.history.push_back(next);
        if (used == 0 || !(next < rel)) {
            rel = next;
            if (used == 0) break;
            factor *= 0.1;
            continue;
        }
        if (next > rtol) factor *= 0.1;
        rel = next;
    }
    out.relative_residual = rel;
    out.converged = rel <= rtol;
    return out;
}

std::vector<double> lanczos_ritz_values(const LinearMap& A, const LinearMap& M, std::span<const double> start,
                                        int steps, double converged_tol) {
    Vec r0(start.begin(), start.end()), dx(start.size());
    Vec alphas, betas;
    minres_cycle(A, M, r0, dx, 0.0, steps, &alphas, &betas);
    const auto m = static_cast<Eigen::Index>(alphas.size());
    if (m == 0) return {};
    Eigen::VectorXd diag(m), sub(std::max<Eigen::Index>(m - 1, 1));
    for (Eigen::Index i = 0; i < m; ++i) diag[i] = alphas[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = betas[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max<Eigen::Index>(m - 1, 0)), Eigen::ComputeEigenvectors);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const double scale = std::max(std::abs(theta[0]), std::abs(theta[m - 1]));
    const double last = betas[static_cast<std::size_t>(m - 1)];
    std::vector<double> out;
    for (Eigen::Index i = 0; i < m; ++i)
        if (last * std::abs(es.eigenvectors()(m - 1, i)) <= converged_tol * scale) out.push_back(theta[i]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mbump
