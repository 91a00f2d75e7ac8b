#include <doctest.h>

#include <cmath>
#include <random>

#include "mbump/energy.hpp"
#include "mbump/geometry.hpp"

using namespace mbump;

namespace {

const Profiles& profiles() {
    static const Profiles p = solve_profiles(ModelParams{});
    return p;
}

Field random_symmetric(const Grid& g, int k, unsigned seed, double scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Field f(g);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point y = g.point(i);
        f[i] = scale * u(rng) * std::exp(-0.05 * (y[0] * y[0] + y[1] * y[1]));
    }
    return symmetrize(f, k);
}

Field smooth(const Grid& g, double a, double b) {
    return sample(g, [&](const Point& y) {
        return a * std::exp(-0.2 * (y[0] * y[0] + y[1] * y[1])) * (1 + b * (y[0] * y[0] - y[1] * y[1]) * (y[0] * y[0] - y[1] * y[1]));
    });
}

}  // namespace

TEST_CASE("energy of simple states") {
    ModelParams p;
    const ExpansionConstants c = expansion_constants(profiles().U0, profiles().V0, p);
    double prev = 0.0;
    for (double h : {0.25, 0.125, 0.0625}) {
        const Grid g(2, 16.0, h);
        const AnsatzFields a = build_ansatz(profiles().U0, profiles().V0, p, 5.0, g);
        const Field zero(g, 0.0);
        CHECK(energy(zero, zero, a.mu, p) == 0.0);
        const double e = energy(a.U0, zero, a.mu, p);
        const double quartic = 0.25 * p.alpha0 * quad(hadamard(hadamard(a.U0, a.U0), hadamard(a.U0, a.U0)));
        // The quartic term is integrated to spectral accuracy; the gradient term carries the O(h^2) error.
        CHECK(quartic == doctest::Approx(c.A0).epsilon(1e-6));
        const double defect = std::abs(e - quartic) / quartic;
        if (prev > 0.0) CHECK(prev / defect > 3.5);
        prev = defect;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("energy additivity without coupling") {
    ModelParams p;
    p.beta = 0.0;
    const Grid g(2, 12.0, 0.125);
    const AnsatzFields a = build_ansatz(profiles().U0, profiles().V0, p, 4.0, g);
    const Field zero(g, 0.0);
    const double both = energy(a.U0, a.W, a.mu, p);
    const double sum = energy(a.U0, zero, a.mu, p) + energy(zero, a.W, a.mu, p);
    CHECK(std::abs(both - sum) <= 1e-12 * std::abs(both));
}

TEST_CASE("energy is invariant under quarter turns") {
    ModelParams p;
    p.beta = 0.3;
    const Grid g(2, 6.0, 0.25);
    const Field U = smooth(g, 1.0, 0.1);
    Field V = sample(g, [](const Point& y) { return std::exp(-0.3 * ((y[0] - 1) * (y[0] - 1) + y[1] * y[1])); });
    Field Vr(g);
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) Vr[g.index(i, j)] = V[g.index(g.n() - 1 - j, i)];
    const Field mu = sample(g, [&](const Point& y) { return p.mu()(std::hypot(y[0], y[1])); });
    CHECK(energy(U, V, mu, p) == doctest::Approx(energy(U, Vr, mu, p)).epsilon(1e-13));
}

TEST_CASE("expansion constants") {
    ModelParams p;
    p.dim = 1;
    const RadialProfile s = solve_ground_state(1.0, 1.0, 1);
    const ExpansionConstants c = expansion_constants(s, s, p);
    CHECK(c.A0 == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(c.A1 == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(c.A2 == doctest::Approx(2.0).epsilon(1e-8));

    ModelParams q;
    const ExpansionConstants base = expansion_constants(profiles().U0, profiles().V0, q);
    q.a = 0.0;
    CHECK(expansion_constants(profiles().U0, profiles().V0, q).A2 == 0.0);
    q.a = 3.0;
    CHECK(expansion_constants(profiles().U0, profiles().V0, q).A2 == doctest::Approx(3.0 * base.A2).epsilon(1e-15));
    CHECK(base.A2 == doctest::Approx(0.5 * profiles().V0.moment2()).epsilon(1e-15));
    CHECK(base.A1 == doctest::Approx(0.25 * profiles().V0.moment4()).epsilon(1e-15));
}

TEST_CASE("interaction term") {
    ModelParams p;
    const Grid g(2, 16.0, 0.125);
    const RadialProfile& V0 = profiles().V0;

    // k = 2: the single pair term, symmetric in the two bumps.
    const BumpConfiguration two = bump_centers(2, 3.0, 2);
    const InteractionTerm t = interaction_term(V0, two, g, p);
    const Field v1 = single_bump(V0, two, 1, g), v2 = single_bump(V0, two, 2, g);
    const double i12 = quad(hadamard(hadamard(v1, hadamard(v1, v1)), v2));
    const double i21 = quad(hadamard(hadamard(v2, hadamard(v2, v2)), v1));
    CHECK(t.sum == doctest::Approx(i12).epsilon(1e-12));
    CHECK(i12 == doctest::Approx(i21).epsilon(1e-12));
    CHECK(2 * t.sum == doctest::Approx(i12 + i21).epsilon(1e-12));

    // int V1^3 V2 / [e^-d d^-(N-1)/2] at d = 8 and d = 12.
    double ratio[2];
    int n = 0;
    for (double d : {8.0, 12.0}) {
        const BumpConfiguration c = bump_centers(2, 0.5 * d, 2);
        const Grid gg(2, 0.5 * d + 16.0, 0.125);
        ratio[n++] = interaction_term(V0, c, gg, p).sum / (std::exp(-d) / std::sqrt(d));
    }
    CHECK(std::abs(ratio[0] - ratio[1]) / std::min(ratio[0], ratio[1]) < 0.2);

    double prev = INFINITY;
    for (double R : {2.0, 3.0, 4.0, 5.0, 6.0}) {
        const InteractionTerm it = interaction_term(V0, bump_centers(6, R, 2), g, p);
        CHECK(it.sum > 0.0);
        CHECK(it.sum < prev);
        prev = it.sum;
        CHECK(it.J_chord > 0.0);
        CHECK(it.J_surrogate > 0.0);
    }
}

TEST_CASE("potential moment") {
    ModelParams p;
    const RadialProfile& V0 = profiles().V0;
    ModelParams zero = p;
    zero.a = 0.0;
    const Grid g(2, 30.0, 0.125);
    CHECK(potential_moment(V0, bump_centers(4, 10.0, 2), g, zero).integral == 0.0);

    auto deviation = [&](double R) {
        const Grid gg(2, R + 20.0, 0.125);
        const PotentialMoment m = potential_moment(V0, bump_centers(4, R, 2), gg, p);
        CHECK(m.leading == doctest::Approx(p.a / R * V0.moment2()).epsilon(1e-15));
        return std::abs(m.integral - m.leading);
    };
    CHECK(deviation(8.0) / deviation(16.0) >= 1.8);
}

TEST_CASE("k-sum bound") {
    ModelParams p;
    const RadialProfile& V0 = profiles().V0;
    const RadiusInterval sk = bump_radius_interval(16, p.m, derive_exponents(p).delta0);
    const BumpConfiguration cfg = bump_centers(16, sk.mid(), 2);
    const auto pts = sector_samples(cfg, 1000, 42, 2 * cfg.R + 10);
    REQUIRE(pts.size() == 1000);
    for (const Point& y : pts) CHECK(sector_membership(y, cfg) == 1);
    const BoundReport r = check_ksum_bound(V0, cfg, 1.0, pts);
    CHECK(r.passed);
    CHECK(r.violations_rest == 0);
    CHECK(r.max_ratio_rest <= 1.0);

    // Outside the hypotheses the check only reports.
    const BumpConfiguration tiny = bump_centers(2, 0.05, 2);
    CHECK_NOTHROW(check_ksum_bound(V0, tiny, 1.0, sector_samples(tiny, 100, 1, 5.0)));

    const BumpConfiguration single = bump_centers(1, 3.0, 2);
    const BoundReport s = check_ksum_bound(V0, single, 0.5, sector_samples(single, 100, 2, 10.0));
    CHECK(s.passed);
    CHECK(s.max_ratio_rest == 0.0);

    // Same seed, same samples.
    const auto again = sector_samples(cfg, 1000, 42, 2 * cfg.R + 10);
    CHECK(again == pts);
}

TEST_CASE("decoupled non-interacting limit") {
    ModelParams p;
    p.beta = 0.0;
    p.a = 0.0;
    p.potential = PotentialKind::Constant;
    p.k = 2;
    double prev = 0.0;
    for (double h : {0.25, 0.125}) {
        const Grid g(2, 45.0, h);
        const AnsatzFields a = build_ansatz(profiles().U0, profiles().V0, p, 25.0, g);
        const ExpansionReport r = expansion_compare(profiles(), a);
        const ExpansionConstants c = r.constants;
        const double err = std::abs(r.direct - (c.A0 + 2 * c.A1)) / (c.A0 + 2 * c.A1);
        CHECK(r.interaction.sum < 1e-15);
        CHECK(err == doctest::Approx(std::abs(r.direct - r.model) / (c.A0 + 2 * c.A1)).epsilon(1e-6));
        if (prev > 0.0) CHECK(prev / err > 3.5);
        prev = err;
    }
    CHECK(prev < 4e-3);
}

TEST_CASE("cross-product decay") {
    ModelParams p;
    const CrossDecay d = crossprod_decay(profiles(), p, {3.0, 4.0, 5.0, 6.0}, 0.25);
    CHECK(d.gamma > 0.5);
    for (std::size_t i = 1; i < d.values.size(); ++i) CHECK(d.values[i] < d.values[i - 1]);
}

TEST_CASE("energy decomposition is exact algebra") {
    ModelParams p;
    p.k = 4;
    p.beta = 0.07;
    const Grid g(2, 12.0, 0.25);
    const AnsatzFields a = build_ansatz(profiles().U0, profiles().V0, p, 4.0, g);
    for (unsigned seed : {1u, 2u, 3u}) {
        const Field u = random_symmetric(g, 4, seed, 0.3);
        const Field v = random_symmetric(g, 4, seed + 10, 0.3);
        const EnergyBreakdown b = energy_breakdown(profiles(), a, u, v);
        CHECK(std::abs(b.direct - b.total) / std::abs(b.direct) < 1e-10);
        CHECK(b.direct == doctest::Approx(energy(a.U0 + u, a.W + v, a.mu, p)).epsilon(1e-15));
        CHECK(b.main == doctest::Approx(energy(a.U0, a.W, a.mu, p)).epsilon(1e-15));
        CHECK(b.weak_defect == doctest::Approx(b.l_val - b.l_display).epsilon(1e-12));
        // The quadratic part is the second variation.
        const double t = 1e-3;
        const EnergyBreakdown s = energy_breakdown(profiles(), a, t * u, t * v);
        CHECK(s.q_val == doctest::Approx(t * t * b.q_val).epsilon(1e-12));
        CHECK(std::abs(s.h_val) < 1e-2 * std::abs(s.q_val));
    }
}
