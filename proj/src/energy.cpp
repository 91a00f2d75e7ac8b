#include "mbump/energy.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mbump/errors.hpp"
#include "mbump/parallel.hpp"

namespace mbump {

namespace {

/// Trapezoid quadrature of term(i).
template <class Term>
double quad_of(const Grid& g, Term&& term) {
    return reduce_sum(g.size(), [&](std::size_t i) { return g.weight(i) * term(i); });
}

double distance(const Point& a, const Point& b) {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

}  // namespace

double energy(const Field& U, const Field& V, const Field& mu, const ModelParams& p) {
    const Grid& g = U.grid();
    const double kinetic = inner0(U, U, p.lambda) + inner1(V, V, mu);
    const double quartic = quad_of(g, [&](std::size_t i) {
        const double u2 = U[i] * U[i], v2 = V[i] * V[i];
        return p.alpha0 * u2 * u2 + p.alpha1 * v2 * v2 + 2.0 * p.beta * u2 * v2;
    });
    return 0.5 * kinetic - 0.25 * quartic;
}

ExpansionConstants expansion_constants(const RadialProfile& U0p, const RadialProfile& V0p, const ModelParams& p) {
    return {0.25 * p.alpha0 * U0p.moment4(), 0.25 * p.alpha1 * V0p.moment4(), 0.5 * p.a * V0p.moment2()};
}

InteractionTerm interaction_term(const RadialProfile& V0p, const BumpConfiguration& cfg, const Grid& g,
                                 const ModelParams& p) {
    InteractionTerm t;
    if (cfg.k < 2) return t;
    const Field V1 = single_bump(V0p, cfg, 1, g);
    const Field V1c = hadamard(hadamard(V1, V1), V1);
    for (int i = 2; i <= cfg.k; ++i) t.sum += quad_product(V1c, single_bump(V0p, cfg, i, g));
    const double power = 0.5 * (cfg.dim - 1);
    const double arc = 2.0 * std::numbers::pi * cfg.R / cfg.k;
    const double chord = nearest_neighbor_distance(cfg);
    t.J_surrogate = 0.5 * p.alpha1 * t.sum / (std::exp(-arc) * std::pow(cfg.k / cfg.R, power));
    t.J_chord = 0.5 * p.alpha1 * t.sum / (std::exp(-chord) * std::pow(2.0 * std::numbers::pi / chord, power));
    return t;
}

PotentialMoment potential_moment(const RadialProfile& V0p, const BumpConfiguration& cfg, const Grid& g,
                                 const ModelParams& p) {
    const Potential pot = p.mu();
    const Point x1 = cfg.center(1);
    const double integral = quad_of(g, [&](std::size_t i) {
        const Point y = g.point(i);
        const double v = V0p.value(distance(y, x1));
        return (pot(distance(y, Point{0.0, 0.0, 0.0})) - p.mu0) * v * v;
    });
    return {integral, p.a / std::pow(cfg.R, p.m) * V0p.moment2()};
}

std::vector<Point> sector_samples(const BumpConfiguration& cfg, int count, std::uint64_t seed, double r_max) {
    std::mt19937_64 rng(seed);
    // Explicit conversion keeps the stream identical across standard libraries.
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double half = std::numbers::pi / cfg.k;
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        // Area-uniform radius.
        const double r = r_max * std::sqrt(uniform());
        const double phi = (2.0 * uniform() - 1.0) * half;
        const double y3 = cfg.dim == 3 ? 10.0 * uniform() - 5.0 : 0.0;
        Point y{r * std::cos(phi), r * std::sin(phi), y3};
        if (sector_membership(y, cfg) != 1) continue;
        out.push_back(y);
    }
    return out;
}

BoundReport check_ksum_bound(const RadialProfile& V0p, const BumpConfiguration& cfg, double eta,
                             const std::vector<Point>& samples) {
    BoundReport rep;
    rep.eta = eta;
    rep.samples = static_cast<int>(samples.size());
    const double M = V0p.M();
    const double gap = std::exp(-eta * cfg.R * std::numbers::pi / cfg.k);
    for (const Point& y : samples) {
        const double d1 = distance(y, cfg.center(1));
        double rest = 0.0;
        for (int i = 2; i <= cfg.k; ++i) rest += V0p.value(distance(y, cfg.center(i)));
        const double total = rest + V0p.value(d1);
        const double envelope = std::exp((eta - 1.0) * d1);
        const double ratio_rest = rest / (6.0 * M * gap * envelope);
        const double ratio_total = total / (7.0 * M * envelope);
        rep.max_ratio_rest = std::max(rep.max_ratio_rest, ratio_rest);
        rep.max_ratio_total = std::max(rep.max_ratio_total, ratio_total);
        if (ratio_rest > 1.0) ++rep.violations_rest;
        if (ratio_total > 1.0) ++rep.violations_total;
    }
    rep.passed = rep.violations_rest == 0 && rep.violations_total == 0;
    return rep;
}

double ansatz_energy(const Field& U0, const Field& W, const Field& mu, const ModelParams& p) {
    return energy(U0, W, mu, p);
}

ExpansionReport expansion_compare(const Profiles& prof, const AnsatzFields& a) {
    const ModelParams& p = a.params;
    ExpansionReport r;
    r.k = a.cfg.k;
    r.R = a.cfg.R;
    r.constants = expansion_constants(prof.U0, prof.V0, p);
    r.interaction = interaction_term(prof.V0, a.cfg, a.grid(), p);
    r.interaction_energy = 0.5 * p.alpha1 * r.k * r.interaction.sum;
    r.direct = ansatz_energy(a.U0, a.W, a.mu, p);
    r.model = r.constants.A0 + r.k * (r.constants.A1 + r.constants.A2 / std::pow(r.R, p.m)) - r.interaction_energy;
    r.rho = std::abs(r.direct - r.model) / r.k;
    return r;
}

CrossDecay crossprod_decay(const Profiles& prof, const ModelParams& p, const std::vector<double>& radii, double h) {
    if (radii.size() < 2) throw Error("crossprod_decay needs at least two radii");
    CrossDecay out;
    out.radii = radii;
    for (double R : radii) {
        const Grid g(p.dim, default_half_width(R, p.lambda, h), h);
        const AnsatzFields a = build_ansatz(prof.U0, prof.V0, p, R, g);
        out.values.push_back(quad_of(g, [&](std::size_t i) {
            const double uw = a.U0[i] * a.W[i];
            return uw * uw;
        }));
    }
    // Least squares for log value = log C - 2 gamma R.
    const double n = static_cast<double>(radii.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double y = std::log(out.values[i]);
        sx += radii[i];
        sy += y;
        sxx += radii[i] * radii[i];
        sxy += radii[i] * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.gamma = -0.5 * slope;
    out.C = std::exp((sy - slope * sx) / n);
    return out;
}

EnergyBreakdown energy_breakdown(const Profiles& prof, const AnsatzFields& a, const Field& u, const Field& v) {
    const ModelParams& p = a.params;
    const Grid& g = a.grid();
    const Field& U0 = a.U0;
    const Field& W = a.W;
    const double beta = p.beta, a0 = p.alpha0, a1 = p.alpha1;
    EnergyBreakdown b;
    b.constants = expansion_constants(prof.U0, prof.V0, p);
    b.potential_term = a.cfg.k * b.constants.A2 / std::pow(a.cfg.R, p.m);
    b.interaction = interaction_term(prof.V0, a.cfg, g, p);
    b.interaction_energy = 0.5 * a1 * a.cfg.k * b.interaction.sum;
    b.main = energy(U0, W, a.mu, p);

    const double coupling = quad_of(g, [&](std::size_t i) {
        return U0[i] * U0[i] * W[i] * v[i] + U0[i] * W[i] * W[i] * u[i];
    });
    b.l_val = inner0(U0, u, p.lambda) + inner1(W, v, a.mu) -
              quad_of(g, [&](std::size_t i) {
                  return a0 * U0[i] * U0[i] * U0[i] * u[i] + a1 * W[i] * W[i] * W[i] * v[i];
              }) -
              beta * coupling;
    b.l_display = quad_of(g, [&](std::size_t i) {
                      return ((a.mu[i] - p.mu0) * W[i] + a1 * (a.W3[i] - W[i] * W[i] * W[i])) * v[i];
                  }) -
                  beta * coupling;
    b.weak_defect = b.l_val - b.l_display;

    b.q_val = 0.5 * (inner0(u, u, p.lambda) + inner1(v, v, a.mu)) - 1.5 * quad_of(g, [&](std::size_t i) {
                  return a0 * U0[i] * U0[i] * u[i] * u[i] + a1 * W[i] * W[i] * v[i] * v[i];
              });
    b.h_val = -0.25 * quad_of(g, [&](std::size_t i) {
        const double u2 = u[i] * u[i], v2 = v[i] * v[i];
        return 4.0 * a0 * U0[i] * u2 * u[i] + a0 * u2 * u2 + 4.0 * a1 * W[i] * v2 * v[i] + a1 * v2 * v2;
    }) - 0.5 * beta * quad_of(g, [&](std::size_t i) {
        const double u2 = u[i] * u[i], v2 = v[i] * v[i];
        return 2.0 * U0[i] * u[i] * v2 + 2.0 * W[i] * u2 * v[i] + u2 * v2 + U0[i] * U0[i] * v2 +
               4.0 * U0[i] * W[i] * u[i] * v[i] + W[i] * W[i] * u2;
    });
    b.total = b.main + b.l_val + b.q_val + b.h_val;
    b.direct = energy(U0 + u, W + v, a.mu, p);
    return b;
}

void to_json(nlohmann::json& j, const ExpansionConstants& c) { j = {{"A0", c.A0}, {"A1", c.A1}, {"A2", c.A2}}; }

void to_json(nlohmann::json& j, const InteractionTerm& t) {
    j = {{"sum", t.sum}, {"J_surrogate", t.J_surrogate}, {"J_chord", t.J_chord}};
}

void to_json(nlohmann::json& j, const BoundReport& r) {
    j = {{"eta", r.eta},
         {"samples", r.samples},
         {"violations_rest", r.violations_rest},
         {"violations_total", r.violations_total},
         {"max_ratio_rest", r.max_ratio_rest},
         {"max_ratio_total", r.max_ratio_total},
         {"passed", r.passed}};
}

void to_json(nlohmann::json& j, const ExpansionReport& r) {
    j = {{"k", r.k},
         {"R", r.R},
         {"direct", r.direct},
         {"model", r.model},
         {"rho", r.rho},
         {"A0", r.constants.A0},
         {"A1", r.constants.A1},
         {"A2", r.constants.A2},
         {"interaction_sum", r.interaction_energy},
         {"J_surrogate", r.interaction.J_surrogate},
         {"J_chord", r.interaction.J_chord}};
}

void to_json(nlohmann::json& j, const EnergyBreakdown& b) {
    j = {{"A0", b.constants.A0},
         {"A1", b.constants.A1},
         {"A2", b.constants.A2},
         {"potential_term", b.potential_term},
         {"interaction_sum", b.interaction_energy},
         {"J_surrogate", b.interaction.J_surrogate},
         {"J_chord", b.interaction.J_chord},
         {"main", b.main},
         {"l", b.l_val},
         {"l_display", b.l_display},
         {"weak_defect", b.weak_defect},
         {"q", b.q_val},
         {"h", b.h_val},
         {"total", b.total},
         {"F", b.direct}};
}

}  // namespace mbump
