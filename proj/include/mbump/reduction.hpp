#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbump/corrector.hpp"
#include "mbump/energy.hpp"

namespace mbump {

/// Everything needed to evaluate F(R) for one k: parameters, ground states and
/// the discretisation shared by all radii.
struct Problem {
    ModelParams params;
    Profiles profiles;
    double h = 0.125;
    double L = 0.0;  ///< 0 selects R + max(20, 15/sqrt(lambda)) at the top of S_k
    FixedPointOptions fixed_point;

    RadiusInterval interval() const;
    Grid grid() const;
    Grid grid(double spacing) const;
};

Problem make_problem(const ModelParams& p, double h, const ShootingOptions& shooting = {});

/// gamma0 and f0 for the ansatz at radius R on the problem grid.
CouplingBound coupling_bound_at(const Problem& prob, double R, double safety = 0.9);

struct ReducedEnergySample {
    double R = 0.0;
    bool converged = false;
    double F = 0.0;
    double decomposition_error = 0.0;  ///< |F - (main + l + q + h)| / |F|
    EnergyBreakdown breakdown;
    CorrectorResult corrector;  ///< u, v are dropped when stored in scans
    std::string failure;
};

/// Runs the corrector at R and evaluates F(R) and its decomposition.
/// Corrector divergence and solver failures propagate.
ReducedEnergySample reduced_energy(double R, const Problem& prob);

struct MaximizeResult {
    double R0 = 0.0;
    double F0 = 0.0;
    bool found = false;     ///< at least one finite value
    bool interior = false;  ///< R0 strictly between the second and second-to-last coarse nodes
    std::vector<double> coarse_R;
    std::vector<double> coarse_F;  ///< NaN where the objective failed
    std::vector<double> refine_R;
    std::vector<double> refine_F;
    double delta = 0.0;
    double dF_center = 0.0;  ///< (F(R0 + delta) - F(R0 - delta)) / (2 delta)
    double max_abs_dF = 0.0; ///< over consecutive coarse nodes
    bool critical = false;   ///< |dF_center| < 1e-3 max_abs_dF
};

/// Coarse scan on n_coarse equispaced radii of [lo, hi], golden-section
/// refinement around the best node down to tol_R, then the centred
/// difference check with delta = 10 tol_R.  NaN values count as failures.
MaximizeResult maximize_over_Sk(const std::function<double(double)>& F, RadiusInterval sk, int n_coarse,
                                double tol_R);

struct ReductionRun {
    MaximizeResult max;
    std::vector<ReducedEnergySample> samples;  ///< every evaluation, in call order
    double lagrange_R0 = 0.0;
    double lagrange_lo = 0.0;
    double lagrange_hi = 0.0;
    bool lagrange_available = false;
};

ReductionRun maximize_reduced_energy(const Problem& prob, int n_coarse, double tol_R);

struct Solution {
    Field U;
    Field V;
    double R0 = 0.0;
    double res_U = 0.0;
    double res_V = 0.0;
    double lagrange_at_R0 = 0.0;
    CorrectorResult corrector;
};

struct Residuals {
    double res_U;
    double res_V;
};

/// L2 norms of the defects of -lap U + lambda U = a0 U^3 + beta U V^2 and
/// -lap V + mu V = a1 V^3 + beta U^2 V, measured with the fourth-order
/// Laplacian so that the second-order discretisation error is visible.
Residuals pde_residual(const Field& U, const Field& V, const Field& mu, const ModelParams& p);

/// Corrector at R0 on the grid with spacing h (0 = problem spacing).
Solution assemble_solution(double R0, const Problem& prob, double h = 0.0);

void to_json(nlohmann::json& j, const ReducedEnergySample& s);
void to_json(nlohmann::json& j, const MaximizeResult& m);

}  // namespace mbump
