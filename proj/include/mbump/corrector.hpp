#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mbump/ansatz.hpp"
#include "mbump/krylov.hpp"

namespace mbump {

/// 3 a0 U0 u^2 + a0 u^3 + beta (U0 + u)(W + v)^2
Field g0_rhs(const Field& u, const Field& v, const AnsatzFields& a);
/// 3 a1 W v^2 + a1 v^3 + beta (U0 + u)^2 (W + v) - (mu - 1) W + a1 (W^3 - sum V_i^3)
Field g1_rhs(const Field& u, const Field& v, const AnsatzFields& a);

/// -lap u + lambda u - 3 a0 U0^2 u
Field apply_L0(const Field& u, const Field& U0, const ModelParams& p);
/// -lap v + mu v - 3 a1 W^2 v
Field apply_L1(const Field& v, const Field& W, const Field& mu, const ModelParams& p);

struct LinearSolveOptions {
    double tol = 1e-9;  ///< relative Euclidean residual
    int max_iter = 4000;
    /// Project the result onto the symmetric subspace of order params.k.
    bool project = true;
};

/// MINRES with the (-lap + lambda)^{-1} preconditioner.  Throws SolverError
/// with the residual history if the tolerance is not reached.
Field solve_L0(const Field& rhs, const Field& U0, const ModelParams& p, const LinearSolveOptions& opt = {},
               const Field* guess = nullptr, KrylovResult* info = nullptr);

struct ConstrainedSolution {
    Field v;
    double lagrange = 0.0;
    KrylovResult info;
};

/// Solves  L1 v + Lambda Z = rhs,  <Z, v> = 0  as one symmetric saddle system.
/// Throws SolverError when Z vanishes or MINRES stalls.
ConstrainedSolution solve_L1_constrained(const Field& rhs, const Field& W, const Field& mu, const Field& Z,
                                         const ModelParams& p, const LinearSolveOptions& opt = {},
                                         const Field* guess = nullptr, double lagrange_guess = 0.0);

struct FixedPointOptions {
    double tol = 1e-8;    ///< on the E-norm of the step
    int max_iter = 50;
    int divergence_window = 5;
    bool project = true;
};

struct CorrectorResult {
    Field u;
    Field v;
    double norm_E = 0.0;
    int iterations = 0;
    double contraction_factor = 0.0;  ///< max step ratio
    double lagrange = 0.0;
    bool converged = false;
    std::vector<double> steps;
    double residual0 = 0.0;  ///< ||L0 u - g0(u,v)||
    double residual1 = 0.0;  ///< ||L1 v + Lambda Z - g1(u,v)||
    double constraint = 0.0;  ///< quad(Z v) / (||Z|| ||v||)
    int linear_iterations = 0;
    std::vector<std::string> warnings;
};

/// Iterates (u, v) <- (L0^{-1} g0(u, v), L1^{-1} g1(u, v)) from (0, 0).
/// Throws DivergenceError once the step ratio stays >= 1 for
/// divergence_window consecutive steps.
CorrectorResult fixed_point_iterate(const AnsatzFields& a, const FixedPointOptions& opt = {});

/// Fields are not serialised; see write_field.
void to_json(nlohmann::json& j, const CorrectorResult& r);

struct RayleighEstimate {
    double min_abs = 0.0;  ///< smallest |Ritz value|: numeric stand-in for rho_0
    double min = 0.0;
    double max = 0.0;
};

/// Lanczos estimate of <L0 phi, phi> / ||phi||_0^2 over symmetric phi.
RayleighEstimate rayleigh_L0(const Field& U0, const ModelParams& p, int steps = 80, unsigned long long seed = 1);

}  // namespace mbump
