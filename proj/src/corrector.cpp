#include "mbump/corrector.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "mbump/dst.hpp"
#include "mbump/errors.hpp"
#include "mbump/parallel.hpp"

namespace mbump {

Field g0_rhs(const Field& u, const Field& v, const AnsatzFields& a) {
    const ModelParams& p = a.params;
    Field out(a.grid());
    parallel_for(out.size(), [&](std::size_t i) {
        const double U = a.U0[i] + u[i];
        const double V = a.W[i] + v[i];
        out[i] = 3.0 * p.alpha0 * a.U0[i] * u[i] * u[i] + p.alpha0 * u[i] * u[i] * u[i] + p.beta * U * V * V;
    });
    return out;
}

Field g1_rhs(const Field& u, const Field& v, const AnsatzFields& a) {
    const ModelParams& p = a.params;
    const double mu0 = p.mu0;
    Field out(a.grid());
    parallel_for(out.size(), [&](std::size_t i) {
        const double U = a.U0[i] + u[i];
        const double W = a.W[i];
        const double V = W + v[i];
        out[i] = 3.0 * p.alpha1 * W * v[i] * v[i] + p.alpha1 * v[i] * v[i] * v[i] + p.beta * U * U * V -
                 (a.mu[i] - mu0) * W + p.alpha1 * (W * W * W - a.W3[i]);
    });
    return out;
}

namespace {

/// -lap x + c x on spans.
void apply_operator(std::span<const double> x, std::span<double> y, const Field& c) {
    laplacian(x, y, c.grid());
    parallel_for(c.size(), [&](std::size_t i) { y[i] = c[i] * x[i] - y[i]; });
}

Field l0_coefficient(const Field& U0, const ModelParams& p) {
    Field c(U0.grid());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = p.lambda - 3.0 * p.alpha0 * U0[i] * U0[i];
    return c;
}

Field l1_coefficient(const Field& W, const Field& mu, const ModelParams& p) {
    Field c(W.grid());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = mu[i] - 3.0 * p.alpha1 * W[i] * W[i];
    return c;
}

std::string residual_message(const std::string& what, const KrylovResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: MINRES stopped at relative residual %.3g after %d iterations", what.c_str(),
                  r.relative_residual, r.iterations);
    return buf;
}

}  // namespace

Field apply_L0(const Field& u, const Field& U0, const ModelParams& p) {
    Field out(u.grid());
    apply_operator(u.values(), out.values(), l0_coefficient(U0, p));
    return out;
}

Field apply_L1(const Field& v, const Field& W, const Field& mu, const ModelParams& p) {
    Field out(v.grid());
    apply_operator(v.values(), out.values(), l1_coefficient(W, mu, p));
    return out;
}

namespace {

Field to_field(const Grid& g, std::span<const double> x) { return Field(g, std::vector<double>(x.begin(), x.end())); }

}  // namespace

// The Krylov iteration runs on the full grid, where only the node-permuting
// part of the group is preserved exactly; the result is then projected.
Field solve_L0(const Field& rhs, const Field& U0, const ModelParams& p, const LinearSolveOptions& opt,
               const Field* guess, KrylovResult* info) {
    const Grid& g = rhs.grid();
    const bool project = opt.project && g.dim() >= 2;
    const Field c = l0_coefficient(U0, p);
    const ShiftedLaplacianInverse precond(g, p.lambda);
    Field x = guess ? *guess : Field(g);
    const Field b = project ? symmetrize(rhs, p.k) : rhs;
    const KrylovResult res = minres(
        [&](std::span<const double> in, std::span<double> out) { apply_operator(in, out, c); },
        [&](std::span<const double> in, std::span<double> out) { precond.apply(in, out); }, b.values(),
        x.values(), opt.tol, opt.max_iter);
    if (info) *info = res;
    if (!res.converged) throw SolverError(residual_message("L0 solve", res), res.history);
    if (project) x = symmetrize(x, p.k);
    return x;
}

ConstrainedSolution solve_L1_constrained(const Field& rhs, const Field& W, const Field& mu, const Field& Z,
                                         const ModelParams& p, const LinearSolveOptions& opt, const Field* guess,
                                         double lagrange_guess) {
    const Grid& g = rhs.grid();
    const std::size_t n = g.size();
    const bool project = opt.project && g.dim() >= 2;
    const double zz = dot(Z.values(), Z.values());
    if (!(std::sqrt(zz) > 1e-12)) throw SolverError("degenerate constraint: Z vanishes on the grid", {});
    const Field c = l1_coefficient(W, mu, p);
    const ShiftedLaplacianInverse precond(g, 1.0);
    const Field pz = precond.apply(Z);
    const double schur = dot(Z.values(), pz.values());

    std::vector<double> b(n + 1, 0.0), x(n + 1, 0.0);
    const Field rb = project ? symmetrize(rhs, p.k) : rhs;
    std::copy(rb.values().begin(), rb.values().end(), b.begin());
    if (guess) std::copy(guess->values().begin(), guess->values().end(), x.begin());
    x[n] = lagrange_guess;

    auto op = [&](std::span<const double> in, std::span<double> out) {
        apply_operator(in.first(n), out.first(n), c);
        const double lam = in[n];
        parallel_for(n, [&](std::size_t i) { out[i] += lam * Z[i]; });
        out[n] = dot(Z.values(), in.first(n));
    };
    auto pre = [&](std::span<const double> in, std::span<double> out) {
        precond.apply(in.first(n), out.first(n));
        out[n] = in[n] / schur;
    };
    KrylovResult res = minres(op, pre, b, x, opt.tol, opt.max_iter);
    if (!res.converged) throw SolverError(residual_message("constrained L1 solve", res), res.history);

    Field v = to_field(g, std::span<const double>(x).first(n));
    if (project) {
        v = symmetrize(v, p.k);
        // Interpolated averaging moves v slightly off the constraint.
        v.axpy(-dot(Z.values(), v.values()) / zz, Z);
    }
    return {std::move(v), x[n], std::move(res)};
}

CorrectorResult fixed_point_iterate(const AnsatzFields& a, const FixedPointOptions& opt) {
    const ModelParams& p = a.params;
    const Grid& g = a.grid();
    CorrectorResult out;
    out.u = Field(g);
    out.v = Field(g);
    const RadiusInterval sk = bump_radius_interval(p.k, p.m, derive_exponents(p).delta0);
    if (!sk.contains(a.cfg.R)) out.warnings.push_back("R outside S_k");

    LinearSolveOptions lin;
    lin.tol = opt.tol / 10.0;
    lin.project = opt.project;
    int rising = 0;
    double previous = 0.0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Field r0 = g0_rhs(out.u, out.v, a);
        const Field r1 = g1_rhs(out.u, out.v, a);
        if (!std::isfinite(dot(r0.values(), r0.values()) + dot(r1.values(), r1.values())))
            throw DivergenceError("fixed-point iterates overflowed", out.steps);
        KrylovResult info0;
        Field u_next;
        ConstrainedSolution s1;
        try {
            u_next = solve_L0(r0, a.U0, p, lin, &out.u, &info0);
            s1 = solve_L1_constrained(r1, a.W, a.mu, a.Z, p, lin, &out.v, out.lagrange);
        } catch (const SolverError& e) {
            const bool overflow = !e.residuals().empty() && !std::isfinite(e.residuals().back());
            if (overflow || !std::isfinite(norm_E(out.u, out.v, p.lambda, a.mu)))
                throw DivergenceError(std::string("fixed-point iterates overflowed (") + e.what() + ")", out.steps);
            throw;
        }
        out.linear_iterations += info0.iterations + s1.info.iterations;
        const double step = norm_E(u_next - out.u, s1.v - out.v, p.lambda, a.mu);
        out.u = std::move(u_next);
        out.v = std::move(s1.v);
        out.lagrange = s1.lagrange;
        out.iterations = it;
        out.steps.push_back(step);
        if (it > 1 && previous > 0.0) {
            const double ratio = step / previous;
            out.contraction_factor = std::max(out.contraction_factor, ratio);
            rising = ratio >= 1.0 ? rising + 1 : 0;
        }
        previous = step;
        if (step < opt.tol) {
            out.converged = true;
            break;
        }
        if (rising >= opt.divergence_window)
            throw DivergenceError("fixed-point step ratio >= 1 for " + std::to_string(rising) + " consecutive steps",
                                  out.steps);
    }
    out.norm_E = norm_E(out.u, out.v, p.lambda, a.mu);
    Field d0 = apply_L0(out.u, a.U0, p) - g0_rhs(out.u, out.v, a);
    Field d1 = apply_L1(out.v, a.W, a.mu, p) - g1_rhs(out.u, out.v, a);
    d1.axpy(out.lagrange, a.Z);
    if (opt.project && g.dim() >= 2) {
        d0 = symmetrize(d0, p.k);
        d1 = symmetrize(d1, p.k);
    }
    out.residual0 = l2_norm(d0);
    out.residual1 = l2_norm(d1);
    const double zn = l2_norm(a.Z) * l2_norm(out.v);
    out.constraint = zn > 0.0 ? quad_product(a.Z, out.v) / zn : 0.0;
    return out;
}

void to_json(nlohmann::json& j, const CorrectorResult& r) {
    j = nlohmann::json{{"norm_E", r.norm_E},
                       {"iterations", r.iterations},
                       {"contraction_factor", r.contraction_factor},
                       {"lagrange", r.lagrange},
                       {"converged", r.converged},
                       {"steps", r.steps},
                       {"residual0", r.residual0},
                       {"residual1", r.residual1},
                       {"constraint", r.constraint},
                       {"linear_iterations", r.linear_iterations},
                       {"warnings", r.warnings}};
}

RayleighEstimate rayleigh_L0(const Field& U0, const ModelParams& p, int steps, unsigned long long seed) {
    const Grid& g = U0.grid();
    std::mt19937_64 rng(seed);
    Field start(g);
    for (std::size_t i = 0; i < start.size(); ++i)
        start[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    if (g.dim() >= 2) start = symmetrize(start, p.k);
    const Field c = l0_coefficient(U0, p);
    const ShiftedLaplacianInverse precond(g, p.lambda);
    const std::vector<double> ritz = lanczos_ritz_values(
        [&](std::span<const double> in, std::span<double> out) {
            apply_operator(in, out, c);
            if (g.dim() >= 2) {
                const Field s = symmetrize(to_field(g, out), p.k);
                std::copy(s.values().begin(), s.values().end(), out.begin());
            }
        },
        [&](std::span<const double> in, std::span<double> out) {
            precond.apply(in, out);
            if (g.dim() >= 2) {
                const Field s = symmetrize(to_field(g, out), p.k);
                std::copy(s.values().begin(), s.values().end(), out.begin());
            }
        },
        start.values(), steps);
    RayleighEstimate est;
    if (ritz.empty()) return est;
    est.min = ritz.front();
    est.max = ritz.back();
    est.min_abs = std::abs(ritz.front());
    for (double r : ritz) est.min_abs = std::min(est.min_abs, std::abs(r));
    return est;
}

}  // namespace mbump
