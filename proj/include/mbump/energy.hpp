#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "mbump/ansatz.hpp"

namespace mbump {

/// I(U, V) = 1/2 (<U,U>_0 + <V,V>_1) - 1/4 quad(a0 U^4 + a1 V^4 + 2 beta U^2 V^2)
double energy(const Field& U, const Field& V, const Field& mu, const ModelParams& p);

struct ExpansionConstants {
    double A0;  ///< (a0/4) int U0^4
    double A1;  ///< (a1/4) int V0^4
    double A2;  ///< (a/2) int V0^2
};

ExpansionConstants expansion_constants(const RadialProfile& U0p, const RadialProfile& V0p, const ModelParams& p);

struct InteractionTerm {
    double sum = 0.0;          ///< sum_{i>=2} quad(V_1^3 V_i)
    double J_surrogate = 0.0;  ///< (a1/2) sum / [exp(-2 pi R/k) (k/R)^((N-1)/2)]
    double J_chord = 0.0;      ///< same with 2 pi R/k replaced by the chord 2R sin(pi/k)
};

InteractionTerm interaction_term(const RadialProfile& V0p, const BumpConfiguration& cfg, const Grid& g,
                                 const ModelParams& p);

struct PotentialMoment {
    double integral;  ///< quad((mu - mu0) V_1^2)
    double leading;   ///< (a / R^m) int V0^2
};

PotentialMoment potential_moment(const RadialProfile& V0p, const BumpConfiguration& cfg, const Grid& g,
                                 const ModelParams& p);

struct BoundReport {
    double eta = 1.0;
    int samples = 0;
    int violations_rest = 0;   ///< sum_{i>=2} V_i <= 6M e^{-eta R pi/k} e^{(eta-1)|y-x_1|}
    int violations_total = 0;  ///< sum_i V_i <= 7M e^{(eta-1)|y-x_1|}
    double max_ratio_rest = 0.0;
    double max_ratio_total = 0.0;
    bool passed = true;
};

/// Uniform samples of the sector of x_1 with |(y1, y2)| <= r_max (and
/// |y3| <= 5 for N = 3), drawn from a 64-bit Mersenne twister.
std::vector<Point> sector_samples(const BumpConfiguration& cfg, int count, std::uint64_t seed, double r_max);

BoundReport check_ksum_bound(const RadialProfile& V0p, const BumpConfiguration& cfg, double eta,
                             const std::vector<Point>& samples);

double ansatz_energy(const Field& U0, const Field& W, const Field& mu, const ModelParams& p);

struct ExpansionReport {
    int k = 0;
    double R = 0.0;
    double direct = 0.0;  ///< I(U0, sum V_i) on the grid
    double model = 0.0;   ///< A0 + k (A1 + A2/R^m) - (a1/2) k sum
    double rho = 0.0;     ///< |direct - model| / k
    ExpansionConstants constants{};
    InteractionTerm interaction;
    double interaction_energy = 0.0;  ///< (a1/2) k sum
};

ExpansionReport expansion_compare(const Profiles& prof, const AnsatzFields& a);

/// quad(U0^2 W^2) over a range of radii and the fit value ~ C exp(-2 gamma R).
struct CrossDecay {
    std::vector<double> radii;
    std::vector<double> values;
    double gamma = 0.0;
    double C = 0.0;
};

CrossDecay crossprod_decay(const Profiles& prof, const ModelParams& p, const std::vector<double>& radii, double h);

struct EnergyBreakdown {
    ExpansionConstants constants{};
    double potential_term = 0.0;  ///< k A2 / R^m
    InteractionTerm interaction;
    double interaction_energy = 0.0;
    double main = 0.0;        ///< I(U0, W)
    double l_val = 0.0;       ///< exact first variation of I at (U0, W) along (u, v)
    double l_display = 0.0;   ///< the same with the ground-state equations substituted
    double weak_defect = 0.0; ///< l_val - l_display, zero up to discretisation
    double q_val = 0.0;
    double h_val = 0.0;
    double total = 0.0;   ///< main + l + q + h
    double direct = 0.0;  ///< I(U0 + u, W + v)
};

EnergyBreakdown energy_breakdown(const Profiles& prof, const AnsatzFields& a, const Field& u, const Field& v);

void to_json(nlohmann::json& j, const ExpansionConstants& c);
void to_json(nlohmann::json& j, const InteractionTerm& t);
void to_json(nlohmann::json& j, const BoundReport& r);
void to_json(nlohmann::json& j, const ExpansionReport& r);
void to_json(nlohmann::json& j, const EnergyBreakdown& b);

}  // namespace mbump
