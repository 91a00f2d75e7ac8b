#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mbump/errors.hpp"
#include "mbump/grid.hpp"
#include "mbump/model.hpp"

using namespace mbump;

namespace {

// Independent evaluation of 4 delta0 = min{tau0 m - 1/2, tau0 - 1/2, theta}.
Exponents oracle_exponents(double m, double theta) {
    const double tau0 = 0.5 * (1.0 + 0.5 / m);
    const double four_delta = std::min({tau0 * m - 0.5, tau0 - 0.5, theta});
    return {tau0, four_delta / 4.0, tau0 * m - 0.5 - four_delta / 4.0};
}

}  // namespace

TEST_CASE("derive_exponents examples") {
    const Exponents e = derive_exponents(1.0, 2.0);
    CHECK(e.tau0 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(e.delta0 == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(e.p == doctest::Approx(0.1875).epsilon(1e-15));

    const Exponents f = derive_exponents(0.6, 0.1);
    CHECK(f.tau0 == doctest::Approx(0.91667).epsilon(1e-4));
    CHECK(f.delta0 == doctest::Approx(0.0125).epsilon(1e-12));
    CHECK(f.p == doctest::Approx(0.0375).epsilon(1e-12));

    CHECK_THROWS_AS(derive_exponents(0.5, 1.0), AssumptionError);
    try {
        derive_exponents(0.4, 1.0);
    } catch (const AssumptionError& err) {
        CHECK(std::string(err.what()).find("m > 1/2") != std::string::npos);
    }
}

TEST_CASE("derive_exponents property over random m and theta") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> um(0.5, 5.0), ut(0.0, 5.0);
    for (int i = 0; i < 2000; ++i) {
        double m = um(rng), theta = ut(rng);
        if (m <= 0.5 || theta <= 0.0) continue;
        const Exponents e = derive_exponents(m, theta);
        const Exponents o = oracle_exponents(m, theta);
        CHECK(e.tau0 > 0.5);
        CHECK(e.tau0 < 1.0);
        CHECK(e.delta0 > 0.0);
        CHECK(e.p > 0.0);
        CHECK(e.delta0 == doctest::Approx(o.delta0).epsilon(1e-14));
        CHECK(e.p == doctest::Approx(o.p).epsilon(1e-14));
    }
}

TEST_CASE("tau0 override is validated") {
    CHECK(derive_exponents(1.0, 2.0, 0.8).tau0 == 0.8);
    CHECK_THROWS_AS(derive_exponents(1.0, 2.0, 0.4), AssumptionError);
    CHECK_THROWS_AS(derive_exponents(0.6, 2.0, 0.7), AssumptionError);
}

TEST_CASE("bump_radius_interval") {
    auto formula = [](int k, double m, double d) {
        const double base = k * std::log(static_cast<double>(k)) / (2.0 * std::numbers::pi);
        return RadiusInterval{(m - d) * base, (m + d) * base};
    };
    for (int k : {8, 16}) {
        const RadiusInterval s = bump_radius_interval(k, 1.0, 0.0625);
        const RadiusInterval o = formula(k, 1.0, 0.0625);
        CHECK(s.lo == doctest::Approx(o.lo).epsilon(1e-14));
        CHECK(s.hi == doctest::Approx(o.hi).epsilon(1e-14));
        CHECK(s.lo < s.hi);
    }
    // Quoted four-digit reference values.
    CHECK(std::abs(bump_radius_interval(8, 1.0, 0.0625).lo - 2.4823) < 1e-3);
    CHECK(std::abs(bump_radius_interval(8, 1.0, 0.0625).hi - 2.8133) < 1e-3);
    CHECK(std::abs(bump_radius_interval(16, 1.0, 0.0625).lo - 6.6178) < 2e-3);
    CHECK(std::abs(bump_radius_interval(16, 1.0, 0.0625).hi - 7.5003) < 2e-3);

    const RadiusInterval deg = bump_radius_interval(2, 1.0, 0.0);
    CHECK(deg.lo == deg.hi);
    CHECK(deg.lo == doctest::Approx(std::log(2.0) / std::numbers::pi));

    for (int k = 3; k < 64; ++k) {
        const RadiusInterval a = bump_radius_interval(k, 1.0, 0.0625);
        const RadiusInterval b = bump_radius_interval(k + 1, 1.0, 0.0625);
        CHECK(b.lo > a.lo);
        CHECK(b.hi > a.hi);
    }
    CHECK_THROWS(bump_radius_interval(1, 1.0, 0.0625));
}

TEST_CASE("validate_potential") {
    ModelParams p;
    const ValidationReport ok = validate_potential(p, default_validation_radii(p));
    CHECK(ok.passed);
    CHECK(ok.measured_bound > 0.0);
    CHECK(std::isfinite(ok.measured_bound));

    ModelParams zero = p;
    zero.a = 0.0;
    zero.potential = PotentialKind::Constant;
    const ValidationReport z = validate_potential(zero, default_validation_radii(p));
    CHECK_FALSE(z.passed);
    CHECK(z.clause == "a > 0");

    // mu = 1 - 2/(1 + r): the sign of a is what fails.
    ModelParams neg = p;
    neg.potential = PotentialKind::Shifted;
    neg.a = -2.0;
    neg.m = 1.0;
    const ValidationReport n = validate_potential(neg, default_validation_radii(p));
    CHECK_FALSE(n.passed);
    CHECK(n.clause == "a > 0");

    // A remainder decaying only like r^-(m+1) is flagged when theta = 2 is declared.
    ModelParams slow = p;
    slow.potential = PotentialKind::Shifted;
    slow.theta = 2.0;
    const ValidationReport s = validate_potential(slow, default_validation_radii(p));
    CHECK_FALSE(s.passed);

    nlohmann::json j = ok;
    CHECK(j.contains("clause"));
    CHECK(j.contains("passed"));
    CHECK(j.contains("witness_radius"));
    CHECK(j.contains("measured_bound"));
}

TEST_CASE("ModelParams::validate and mu0 normalisation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.m = 0.4;
    CHECK_THROWS_AS(p.validate(), AssumptionError);
    p.m = 1.0;
    p.dim = 4;
    CHECK_THROWS_AS(p.validate(), AssumptionError);
    p.dim = 2;
    p.k = 1;
    CHECK_THROWS_AS(p.validate(), AssumptionError);

    ModelParams q;
    q.mu0 = 4.0;
    q.lambda = 2.0;
    const ModelParams n = normalize_mu0(q);
    CHECK(n.mu0 == 1.0);
    CHECK(n.lambda == doctest::Approx(0.5));
    // mu(r) / mu0 of the original equals the normalised potential at the dilated radius.
    for (double r : {0.0, 0.7, 3.0, 11.0}) {
        const double lhs = q.mu()(r) / q.mu0;
        const double rhs = n.mu()(std::sqrt(q.mu0) * r);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
}

TEST_CASE("compute_gamma0_f0") {
    const Grid g(2, 1.0, 0.5);
    Field U0(g, 0.0), W(g, 0.0);
    W[12] = 1.5;
    const CouplingBound one = compute_gamma0_f0(U0, W, 2.0, 0.9);
    CHECK(one.gamma0 == doctest::Approx(2.25));
    CHECK(one.gamma0_crude == doctest::Approx(196.0));

    Field U(g, 0.0);
    U[3] = std::sqrt(2.0);
    const CouplingBound cb = compute_gamma0_f0(U, 0.0 * W, 0.1, 0.5);
    CHECK(cb.gamma0 == doctest::Approx(2.0));
    CHECK(cb.f0 == doctest::Approx(0.25));
    CHECK(cb.f0 * cb.gamma0 < 1.0);

    CHECK_THROWS(compute_gamma0_f0(U, W, 1.0, 1.0));
}
