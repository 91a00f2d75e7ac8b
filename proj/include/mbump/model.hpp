#pragma once

#include <optional>
#include <span>
#include <string>

#include <json.hpp>

namespace mbump {

class Field;

/// Radial potential families for the second species.
///   algebraic: mu(r) = mu0 + a (s^2 + r^2)^(-m/2)
///   shifted:   mu(r) = mu0 + a (s + r)^(-m)
///   constant:  mu(r) = mu0
/// Both non-constant forms behave like mu0 + a / r^m + O(r^(-m-2)) resp.
/// O(r^(-m-1)) at infinity.
enum class PotentialKind { Algebraic, Shifted, Constant };

std::string to_string(PotentialKind kind);
PotentialKind parse_potential_kind(const std::string& name);

struct Potential {
    PotentialKind kind = PotentialKind::Algebraic;
    double mu0 = 1.0;
    double a = 1.0;
    double m = 1.0;
    double scale = 1.0;

    double operator()(double r) const;
};

struct ModelParams {
    double lambda = 1.0;
    double alpha0 = 1.0;
    double alpha1 = 1.0;
    double beta = 0.0;
    double mu0 = 1.0;
    double a = 1.0;
    double m = 1.0;
    double theta = 2.0;
    int k = 16;
    int dim = 2;
    PotentialKind potential = PotentialKind::Algebraic;
    double potential_scale = 1.0;
    std::optional<double> tau0;

    Potential mu() const { return {potential, mu0, a, m, potential_scale}; }

    /// Throws AssumptionError naming the violated requirement.
    void validate() const;
};

/// Rescales a problem with mu0 != 1 to the equivalent one with mu0 = 1 by the
/// dilation U(x) = sqrt(mu0) U~(sqrt(mu0) x); alpha and beta are unchanged.
ModelParams normalize_mu0(const ModelParams& p);

struct Exponents {
    double tau0;
    double delta0;
    double p;
};

Exponents derive_exponents(double m, double theta, std::optional<double> tau0 = std::nullopt);
Exponents derive_exponents(const ModelParams& p);

struct RadiusInterval {
    double lo;
    double hi;

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    bool contains(double R) const { return R >= lo && R <= hi; }
};

RadiusInterval bump_radius_interval(int k, double m, double delta0);

struct ValidationReport {
    std::string clause;
    bool passed = true;
    double witness_radius = 0.0;
    double measured_bound = 0.0;
};

void to_json(nlohmann::json& j, const ValidationReport& r);

/// Checks hypothesis (A) on the sampled radii: a > 0, m > 1/2, positivity and
/// boundedness of mu, and that r^(m+theta) |mu(r) - 1 - a/r^m| stays bounded on
/// the largest decade of samples.  Reports the first failed clause.
ValidationReport validate_potential(const ModelParams& p, std::span<const double> sample_radii);

/// Log-spaced radii from 1 to 10 * hi(S_k), the sampling validate_potential expects.
std::vector<double> default_validation_radii(const ModelParams& p, int count = 400);

struct CouplingBound {
    double gamma0;
    double f0;
    double gamma0_crude;
};

CouplingBound compute_gamma0_f0(const Field& U0, const Field& bump_sum, double M, double safety = 0.9);

}  // namespace mbump
