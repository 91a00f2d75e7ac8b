#include "mbump/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbump/errors.hpp"
#include "mbump/grid.hpp"

namespace mbump {

std::string to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::Algebraic: return "algebraic";
        case PotentialKind::Shifted: return "shifted";
        case PotentialKind::Constant: return "constant";
    }
    return "unknown";
}

PotentialKind parse_potential_kind(const std::string& name) {
    if (name == "algebraic") return PotentialKind::Algebraic;
    if (name == "shifted") return PotentialKind::Shifted;
    if (name == "constant") return PotentialKind::Constant;
    throw ConfigError("unknown potential '" + name + "' (expected algebraic, shifted or constant)");
}

double Potential::operator()(double r) const {
    switch (kind) {
        case PotentialKind::Algebraic: return mu0 + a * std::pow(scale * scale + r * r, -0.5 * m);
        case PotentialKind::Shifted: return mu0 + a * std::pow(scale + r, -m);
        case PotentialKind::Constant: return mu0;
    }
    return mu0;
}

void ModelParams::validate() const {
    if (!(lambda > 0.0)) throw AssumptionError("lambda must be positive");
    if (!(alpha0 > 0.0) || !(alpha1 > 0.0)) throw AssumptionError("alpha0 and alpha1 must be positive");
    if (!(mu0 > 0.0)) throw AssumptionError("assumption (A): mu0 must be positive");
    if (!(m > 0.5)) throw AssumptionError("assumption (A) requires m > 1/2 (got m = " + std::to_string(m) + ")");
    if (!(theta > 0.0)) throw AssumptionError("assumption (A) requires theta > 0");
    if (k < 2) throw AssumptionError("the number of bumps k must be at least 2");
    if (dim != 2 && dim != 3) throw AssumptionError("dimension N must be 2 or 3");
    if (!(potential_scale > 0.0)) throw AssumptionError("potential_scale must be positive");
}

ModelParams normalize_mu0(const ModelParams& p) {
    if (p.mu0 == 1.0) return p;
    ModelParams q = p;
    const double s = p.mu0;
    q.lambda = p.lambda / s;
    q.a = p.a * std::pow(s, 0.5 * p.m - 1.0);
    q.potential_scale = p.potential_scale * std::sqrt(s);
    q.mu0 = 1.0;
    return q;
}

Exponents derive_exponents(double m, double theta, std::optional<double> tau0) {
    if (!(m > 0.5)) throw AssumptionError("assumption (A) requires m > 1/2 (got m = " + std::to_string(m) + ")");
    if (!(theta > 0.0)) throw AssumptionError("assumption (A) requires theta > 0");
    const double t = tau0.value_or(0.5 * (1.0 + 1.0 / (2.0 * m)));
    if (!(t > 0.5 && t < 1.0) || !(t * m > 0.5))
        throw AssumptionError("tau0 must satisfy 1/2 < tau0 < 1 and tau0 m > 1/2");
    const double delta0 = 0.25 * std::min({t * m - 0.5, t - 0.5, theta});
    return {t, delta0, t * m - 0.5 - delta0};
}

Exponents derive_exponents(const ModelParams& p) { return derive_exponents(p.m, p.theta, p.tau0); }

RadiusInterval bump_radius_interval(int k, double m, double delta0) {
    if (k < 2) throw AssumptionError("S_k needs k >= 2");
    const double base = k * std::log(static_cast<double>(k)) / (2.0 * std::numbers::pi);
    return {(m - delta0) * base, (m + delta0) * base};
}

void to_json(nlohmann::json& j, const ValidationReport& r) {
    j = nlohmann::json{{"clause", r.clause},
                       {"passed", r.passed},
                       {"witness_radius", r.witness_radius},
                       {"measured_bound", r.measured_bound}};
}

ValidationReport validate_potential(const ModelParams& p, std::span<const double> sample_radii) {
    if (!(p.a > 0.0)) return {"a > 0", false, 0.0, p.a};
    if (!(p.m > 0.5)) return {"m > 1/2", false, 0.0, p.m};
    if (!(p.theta > 0.0)) return {"theta > 0", false, 0.0, p.theta};
    if (sample_radii.empty()) return {"samples", false, 0.0, 0.0};

    const Potential mu = p.mu();
    std::vector<double> radii(sample_radii.begin(), sample_radii.end());
    radii.push_back(0.0);
    std::sort(radii.begin(), radii.end());

    double lo = std::numeric_limits<double>::infinity();
    double lo_r = 0.0;
    for (double r : radii) {
        const double v = mu(r);
        if (!std::isfinite(v)) return {"mu bounded", false, r, v};
        if (v < lo) lo = v, lo_r = r;
    }
    if (!(lo > 0.0)) return {"mu >= mu_min > 0", false, lo_r, lo};

    // r^(m+theta) |mu - mu0 - a/r^m| on the top decade, split in two halves.
    const double r_top = radii.back();
    const double r_mid = r_top / std::sqrt(10.0);
    const double r_low = r_top / 10.0;
    double lower_half = 0.0;
    double upper_half = 0.0;
    double witness = r_top;
    for (double r : radii) {
        if (r < r_low || r <= 0.0) continue;
        const double rem = std::abs(mu(r) - p.mu0 - p.a * std::pow(r, -p.m));
        const double scaled = std::pow(r, p.m + p.theta) * rem;
        if (r < r_mid) {
            lower_half = std::max(lower_half, scaled);
        } else if (scaled > upper_half) {
            upper_half = scaled;
            witness = r;
        }
    }
    const double measured = std::max(lower_half, upper_half);
    const bool bounded = upper_half <= 1.5 * lower_half + 1e-12;
    if (!bounded) return {"mu = mu0 + a/|y|^m + O(|y|^-(m+theta))", false, witness, measured};
    return {"all", true, witness, measured};
}

std::vector<double> default_validation_radii(const ModelParams& p, int count) {
    const Exponents e = derive_exponents(p);
    const double top = 10.0 * bump_radius_interval(p.k, p.m, e.delta0).hi;
    std::vector<double> r(static_cast<std::size_t>(count));
    const double lt = std::log(std::max(top, 10.0));
    for (int i = 0; i < count; ++i) r[static_cast<std::size_t>(i)] = std::exp(lt * i / (count - 1));
    return r;
}

CouplingBound compute_gamma0_f0(const Field& U0, const Field& bump_sum, double M, double safety) {
    if (!(safety > 0.0 && safety < 1.0)) throw ConfigError("f0 safety factor must lie in (0, 1)");
    if (!(U0.grid() == bump_sum.grid())) throw GridError("U0 and the bump sum must share a grid");
    double gamma0 = 0.0;
    double sup_u = 0.0;
    for (std::size_t i = 0; i < U0.size(); ++i) {
        gamma0 = std::max({gamma0, U0[i] * U0[i], bump_sum[i] * bump_sum[i]});
        sup_u = std::max(sup_u, std::abs(U0[i]));
    }
    if (!(gamma0 > 0.0)) throw Error("gamma0 vanishes: both fields are zero");
    const double crude = std::pow(std::max(sup_u, 7.0 * M), 2);
    return {gamma0, safety / gamma0, crude};
}

}  // namespace mbump
