#include "mbump/reduction.hpp"

#include <cmath>
#include <limits>

#include "mbump/errors.hpp"
#include "mbump/parallel.hpp"

namespace mbump {

RadiusInterval Problem::interval() const {
    return bump_radius_interval(params.k, params.m, derive_exponents(params).delta0);
}

Grid Problem::grid() const { return grid(h); }

Grid Problem::grid(double spacing) const {
    const double half = L > 0.0 ? L : default_half_width(interval().hi, params.lambda, h);
    return Grid(params.dim, half, spacing);
}

Problem make_problem(const ModelParams& p, double h, const ShootingOptions& shooting) {
    Problem prob;
    prob.params = p;
    prob.profiles = solve_profiles(p, shooting);
    prob.h = h;
    return prob;
}

CouplingBound coupling_bound_at(const Problem& prob, double R, double safety) {
    const AnsatzFields a = build_ansatz(prob.profiles.U0, prob.profiles.V0, prob.params, R, prob.grid());
    return compute_gamma0_f0(a.U0, a.W, prob.profiles.V0.M(), safety);
}

ReducedEnergySample reduced_energy(double R, const Problem& prob) {
    const AnsatzFields a = build_ansatz(prob.profiles.U0, prob.profiles.V0, prob.params, R, prob.grid());
    ReducedEnergySample s;
    s.R = R;
    s.corrector = fixed_point_iterate(a, prob.fixed_point);
    if (!s.corrector.converged)
        throw DivergenceError("corrector did not converge within " + std::to_string(prob.fixed_point.max_iter) +
                                  " iterations",
                              s.corrector.steps);
    s.converged = true;
    s.breakdown = energy_breakdown(prob.profiles, a, s.corrector.u, s.corrector.v);
    s.F = s.breakdown.direct;
    s.decomposition_error = std::abs(s.F - s.breakdown.total) / std::abs(s.F);
    return s;
}

MaximizeResult maximize_over_Sk(const std::function<double(double)>& F, RadiusInterval sk, int n_coarse,
                                double tol_R) {
    if (n_coarse < 9) throw Error("maximize_over_Sk needs at least 9 coarse nodes");
    if (!(sk.hi > sk.lo)) throw Error("degenerate radius interval");
    MaximizeResult out;
    const double step = sk.width() / (n_coarse - 1);
    for (int i = 0; i < n_coarse; ++i) {
        const double R = i + 1 == n_coarse ? sk.hi : sk.lo + i * step;
        out.coarse_R.push_back(R);
        out.coarse_F.push_back(F(R));
    }
    int best = -1;
    for (int i = 0; i < n_coarse; ++i) {
        const double f = out.coarse_F[static_cast<std::size_t>(i)];
        if (std::isfinite(f) && (best < 0 || f > out.coarse_F[static_cast<std::size_t>(best)])) best = i;
    }
    for (int i = 0; i + 1 < n_coarse; ++i) {
        const double f0 = out.coarse_F[static_cast<std::size_t>(i)];
        const double f1 = out.coarse_F[static_cast<std::size_t>(i + 1)];
        if (std::isfinite(f0) && std::isfinite(f1)) out.max_abs_dF = std::max(out.max_abs_dF, std::abs(f1 - f0) / step);
    }
    if (best < 0) return out;
    out.found = true;
    out.R0 = out.coarse_R[static_cast<std::size_t>(best)];
    out.F0 = out.coarse_F[static_cast<std::size_t>(best)];

    auto value = [&](double R) {
        const double f = F(R);
        out.refine_R.push_back(R);
        out.refine_F.push_back(f);
        if (std::isfinite(f) && f > out.F0) {
            out.F0 = f;
            out.R0 = R;
        }
        return std::isfinite(f) ? f : -std::numeric_limits<double>::infinity();
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = out.coarse_R[static_cast<std::size_t>(std::max(best - 1, 0))];
    double c = out.coarse_R[static_cast<std::size_t>(std::min(best + 1, n_coarse - 1))];
    double x1 = c - phi * (c - a), x2 = a + phi * (c - a);
    double f1 = value(x1), f2 = value(x2);
    while (c - a > tol_R) {
        if (f1 > f2) {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - phi * (c - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (c - a);
            f2 = value(x2);
        }
    }
    out.interior = out.R0 > out.coarse_R[1] && out.R0 < out.coarse_R[static_cast<std::size_t>(n_coarse - 2)];

    out.delta = 10.0 * tol_R;
    const double R0 = out.R0;
    const double fp = F(R0 + out.delta);
    const double fm = F(R0 - out.delta);
    out.dF_center = (fp - fm) / (2.0 * out.delta);
    out.critical = std::isfinite(out.dF_center) && std::abs(out.dF_center) < 1e-3 * out.max_abs_dF;
    return out;
}

ReductionRun maximize_reduced_energy(const Problem& prob, int n_coarse, double tol_R) {
    ReductionRun run;
    auto objective = [&](double R) {
        ReducedEnergySample s;
        try {
            s = reduced_energy(R, prob);
        } catch (const Error& e) {
            s = ReducedEnergySample{};
            s.R = R;
            s.failure = e.what();
        }
        s.corrector.u = Field();
        s.corrector.v = Field();
        run.samples.push_back(s);
        return s.converged ? s.F : std::numeric_limits<double>::quiet_NaN();
    };
    run.max = maximize_over_Sk(objective, prob.interval(), n_coarse, tol_R);
    const ReducedEnergySample* lo = nullptr;
    const ReducedEnergySample* hi = nullptr;
    const ReducedEnergySample* at = nullptr;
    for (const auto& s : run.samples) {
        if (s.R == run.max.coarse_R.front() && !lo) lo = &s;
        if (s.R == run.max.coarse_R.back() && !hi) hi = &s;
        if (run.max.found && s.R == run.max.R0 && !at) at = &s;
    }
    if (lo && hi && at && lo->converged && hi->converged && at->converged) {
        run.lagrange_available = true;
        run.lagrange_lo = lo->corrector.lagrange;
        run.lagrange_hi = hi->corrector.lagrange;
        run.lagrange_R0 = at->corrector.lagrange;
    }
    return run;
}

Residuals pde_residual(const Field& U, const Field& V, const Field& mu, const ModelParams& p) {
    const Field lu = laplacian4(U);
    const Field lv = laplacian4(V);
    Field dU(U.grid()), dV(V.grid());
    parallel_for(U.size(), [&](std::size_t i) {
        const double u = U[i], v = V[i];
        dU[i] = -lu[i] + p.lambda * u - p.alpha0 * u * u * u - p.beta * u * v * v;
        dV[i] = -lv[i] + mu[i] * v - p.alpha1 * v * v * v - p.beta * u * u * v;
    });
    return {l2_norm(dU), l2_norm(dV)};
}

Solution assemble_solution(double R0, const Problem& prob, double h) {
    const Grid g = prob.grid(h > 0.0 ? h : prob.h);
    const AnsatzFields a = build_ansatz(prob.profiles.U0, prob.profiles.V0, prob.params, R0, g);
    Solution sol;
    sol.R0 = R0;
    sol.corrector = fixed_point_iterate(a, prob.fixed_point);
    if (!sol.corrector.converged)
        throw DivergenceError("corrector did not converge at R0", sol.corrector.steps);
    sol.U = a.U0 + sol.corrector.u;
    sol.V = a.W + sol.corrector.v;
    sol.lagrange_at_R0 = sol.corrector.lagrange;
    const Residuals r = pde_residual(sol.U, sol.V, a.mu, prob.params);
    sol.res_U = r.res_U;
    sol.res_V = r.res_V;
    return sol;
}

void to_json(nlohmann::json& j, const ReducedEnergySample& s) {
    j = {{"R", s.R}, {"converged", s.converged}, {"failure", s.failure}};
    if (s.converged) {
        j["F"] = s.F;
        j["decomposition_error"] = s.decomposition_error;
        j["breakdown"] = s.breakdown;
        j["corrector"] = s.corrector;
    }
}

void to_json(nlohmann::json& j, const MaximizeResult& m) {
    j = {{"R0", m.R0},           {"F0", m.F0},
         {"found", m.found},     {"interior", m.interior},
         {"coarse_R", m.coarse_R}, {"refine_R", m.refine_R},
         {"delta", m.delta},     {"dF_center", m.dF_center},
         {"max_abs_dF", m.max_abs_dF}, {"critical", m.critical}};
    // NaN is not representable in JSON; failed evaluations become null.
    auto values = nlohmann::json::array();
    for (double f : m.coarse_F) values.push_back(std::isfinite(f) ? nlohmann::json(f) : nlohmann::json());
    j["coarse_F"] = values;
    auto refine = nlohmann::json::array();
    for (double f : m.refine_F) refine.push_back(std::isfinite(f) ? nlohmann::json(f) : nlohmann::json());
    j["refine_F"] = refine;
}

}  // namespace mbump
