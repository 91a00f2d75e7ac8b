#include <doctest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "mbump/radial.hpp"

using namespace mbump;

namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

const RadialProfile& sech_profile() {
    static const RadialProfile p = solve_ground_state(1.0, 1.0, 1);
    return p;
}

const RadialProfile& townes() {
    static const RadialProfile p = solve_ground_state(1.0, 1.0, 2);
    return p;
}

}  // namespace

TEST_CASE("N=1 profile matches sqrt(2) sech") {
    const auto t0 = std::chrono::steady_clock::now();
    const RadialProfile p = solve_ground_state(1.0, 1.0, 1);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(seconds < 1.0);
    CHECK(p.peak() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    double err = 0.0;
    for (std::size_t j = 0; j < p.values().size(); ++j)
        err = std::max(err, std::abs(p.values()[j] - std::sqrt(2.0) * sech(p.radius(j))));
    CHECK(err < 1e-6);
    CHECK(p.values().back() < 1e-10 * p.peak());
}

TEST_CASE("scaling identity for the peak") {
    const RadialProfile p = solve_ground_state(4.0, 1.0, 1);
    CHECK(p.peak() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("eval_profile and its derivative") {
    const RadialProfile& p = sech_profile();
    CHECK(eval_profile(p, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(eval_profile(p, 1.0) == doctest::Approx(std::sqrt(2.0) * sech(1.0)).epsilon(1e-8));
    CHECK(eval_profile(p, 1.0) == doctest::Approx(0.918).epsilon(1e-3));
    CHECK(eval_profile_deriv(p, 0.0) == 0.0);
    const double exact = -std::sqrt(2.0) * sech(1.0) * std::tanh(1.0);
    CHECK(eval_profile_deriv(p, 1.0) == doctest::Approx(exact).epsilon(1e-7));
    CHECK(exact == doctest::Approx(-0.699).epsilon(1e-3));

    // Centred difference of the interpolant, away from nodes.
    for (double r : {0.333, 1.2345, 4.71}) {
        const double h = 1e-4;
        const double fd = (eval_profile(p, r + h) - eval_profile(p, r - h)) / (2 * h);
        CHECK(eval_profile_deriv(p, r) == doctest::Approx(fd).epsilon(1e-6));
    }
    double prev = eval_profile(p, p.r_max());
    for (double r = p.r_max() + 0.5; r < p.r_max() + 20.0; r += 0.5) {
        const double v = eval_profile(p, r);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    for (double r = 0.0; r < p.r_max(); r += 0.37) CHECK(eval_profile_deriv(p, r) <= 0.0);
}

TEST_CASE("decay constant") {
    const RadialProfile& p = sech_profile();
    const double M = decay_constant(p);
    // sqrt(2) sech r <= 2 sqrt(2) e^-r with equality as r -> infinity.
    CHECK(M == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-2));
    for (std::size_t j = 0; j < p.values().size(); ++j)
        CHECK(p.values()[j] <= M * std::exp(-p.radius(j)) * (1 + 1e-12));

    const RadialProfile& t = townes();
    CHECK(std::isfinite(t.M()));
    for (std::size_t j = 1; j < t.values().size(); ++j) {
        const double r = t.radius(j);
        CHECK(t.values()[j] <= t.M() * std::exp(-r) * std::min(1.0, 1.0 / std::sqrt(r)) * (1 + 1e-12));
    }
}

TEST_CASE("moments") {
    const Moments m = moments(sech_profile());
    CHECK(m.moment2 == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(m.moment4 == doctest::Approx(16.0 / 3.0).epsilon(1e-8));
    const Moments coarse = moments(sech_profile(), 2);
    CHECK(std::abs(coarse.moment2 - m.moment2) / m.moment2 < 1e-6);

    // V(r) = sqrt(c/alpha) W(sqrt(c) r): int V^2 = (c/alpha) c^(-N/2) int W^2.
    const RadialProfile s = solve_ground_state(4.0, 1.0, 1);
    CHECK(s.moment2() == doctest::Approx(4.0 * 0.5 * 4.0).epsilon(1e-8));
    CHECK(s.moment4() == doctest::Approx(16.0 * 0.5 * 16.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("Townes profile") {
    const RadialProfile& p = townes();
    CHECK(p.peak() == doctest::Approx(2.206).epsilon(1e-3));
    CHECK(p.moment2() == doctest::Approx(11.70).epsilon(1e-3));
    ShootingOptions fine;
    fine.dr = 0.0025;
    const RadialProfile q = solve_ground_state(1.0, 1.0, 2, fine);
    CHECK(std::abs(q.moment2() - p.moment2()) / q.moment2() < 1e-3);
    CHECK(std::abs(q.peak() - p.peak()) / q.peak() < 1e-3);

    double worst = 0.0;
    for (double r : ode_residual(p)) worst = std::max(worst, r);
    CHECK(worst < 1e-8 * p.peak());
    for (std::size_t j = 1; j < p.values().size(); ++j) {
        CHECK(p.values()[j] > 0.0);
        CHECK(p.values()[j] < p.values()[j - 1]);
        CHECK(p.derivatives()[j] <= 0.0);
    }
}

TEST_CASE("scaling covariance in two dimensions") {
    const RadialProfile& W = townes();
    for (auto [c, alpha] : {std::pair{4.0, 1.0}, std::pair{1.0, 2.0}, std::pair{2.0, 3.0}}) {
        const RadialProfile V = solve_ground_state(c, alpha, 2);
        for (double r : {0.0, 0.5, 1.3, 2.7, 5.0}) {
            const double expect = std::sqrt(c / alpha) * W.value(std::sqrt(c) * r);
            CHECK(V.value(r) == doctest::Approx(expect).epsilon(1e-6));
        }
    }
}

TEST_CASE("N=3 ground state") {
    const RadialProfile p = solve_ground_state(1.0, 1.0, 3);
    double worst = 0.0;
    for (double r : ode_residual(p)) worst = std::max(worst, r);
    CHECK(worst < 1e-8 * p.peak());
    CHECK(p.peak() > 0.0);
    CHECK(p.values().back() < 1e-10 * p.peak());
}

TEST_CASE("profile CSV round trip") {
    std::stringstream ss;
    write_profile_csv(ss, sech_profile());
    const std::string text = ss.str();
    CHECK(text.rfind("# c=1 alpha=1 N=1", 0) == 0);
    const RadialProfile back = read_profile_csv(ss);
    CHECK(back.values() == sech_profile().values());
    CHECK(back.derivatives() == sech_profile().derivatives());
    CHECK(back.M() == sech_profile().M());
    CHECK(back.moment2() == sech_profile().moment2());
}

TEST_CASE("invalid shooting input") {
    CHECK_THROWS(solve_ground_state(-1.0, 1.0, 2));
    CHECK_THROWS(solve_ground_state(1.0, 0.0, 2));
    CHECK_THROWS(solve_ground_state(1.0, 1.0, 4));
}
