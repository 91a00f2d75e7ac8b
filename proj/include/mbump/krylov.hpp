#pragma once

#include <functional>
#include <span>
#include <vector>

namespace mbump {

using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

struct KrylovResult {
    int iterations = 0;
    bool converged = false;
    double relative_residual = 0.0;  ///< ||b - A x|| / ||b|| at exit
    std::vector<double> history;     ///< true relative residual after each restart
};

/// Preconditioned MINRES for symmetric (possibly indefinite) A with symmetric
/// positive definite M.  x holds the initial guess on entry.  Stops when the
/// Euclidean residual is below rtol * ||b||.
KrylovResult minres(const LinearMap& A, const LinearMap& M, std::span<const double> b, std::span<double> x,
                    double rtol, int max_iter);

/// Ritz values of M A after `steps` Lanczos steps in the M^{-1} inner product,
/// sorted ascending.  These are Rayleigh-quotient estimates for the pencil
/// (A, M^{-1}).  Only Ritz values whose residual bound is below
/// converged_tol times the spectral scale are returned.
std::vector<double> lanczos_ritz_values(const LinearMap& A, const LinearMap& M, std::span<const double> start,
                                        int steps, double converged_tol = 1e-6);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace mbump

