#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "mbump/errors.hpp"
#include "mbump/reduction.hpp"

using namespace mbump;

namespace {

const Profiles& profiles() {
    static const Profiles p = solve_profiles(ModelParams{});
    return p;
}

}  // namespace

TEST_CASE("maximize_over_Sk matches an independent optimiser on the surrogate") {
    const ModelParams p;
    const int k = 16;
    const RadiusInterval sk = bump_radius_interval(k, p.m, derive_exponents(p).delta0);
    const double A2 = 0.5 * p.a * profiles().V0.moment2();
    // Choose c so that the surrogate is critical at 40% of S_k.
    const double Rc = sk.lo + 0.4 * sk.width();
    auto shape = [&](double R) { return std::exp(-2 * std::numbers::pi * R / k) * std::sqrt(k / R); };
    const double dshape = shape(Rc) * (-2 * std::numbers::pi / k - 0.5 / Rc);
    const double c = -p.m * A2 / std::pow(Rc, p.m + 1) / dshape;
    auto g = [&](double R) { return A2 / std::pow(R, p.m) - c * shape(R); };

    const double tol_R = 1e-4;
    const MaximizeResult m = maximize_over_Sk(g, sk, 11, tol_R);
    const auto brent = boost::math::tools::brent_find_minima([&](double R) { return -g(R); }, sk.lo, sk.hi, 40);
    CHECK(m.found);
    CHECK(m.interior);
    CHECK(std::abs(m.R0 - brent.first) < tol_R);
    CHECK(std::abs(m.R0 - Rc) < tol_R);
    CHECK(m.critical);
    CHECK(m.delta == doctest::Approx(10 * tol_R));
    CHECK(m.coarse_R.size() == 11);
    CHECK(m.coarse_R.front() == sk.lo);
    CHECK(m.coarse_R.back() == sk.hi);
}

TEST_CASE("monotone objective gives an endpoint maximum") {
    const RadiusInterval sk{6.0, 7.0};
    const MaximizeResult m = maximize_over_Sk([](double R) { return 5.85 / R; }, sk, 9, 1e-4);
    CHECK(m.found);
    CHECK_FALSE(m.interior);
    CHECK(m.R0 < sk.lo + 0.2);
    CHECK_FALSE(m.critical);
}

TEST_CASE("failed evaluations are skipped") {
    const RadiusInterval sk{1.0, 2.0};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto f = [&](double R) { return R < 1.3 ? nan : -(R - 1.6) * (R - 1.6); };
    const MaximizeResult m = maximize_over_Sk(f, sk, 11, 1e-4);
    CHECK(m.found);
    CHECK(m.R0 == doctest::Approx(1.6).epsilon(1e-3));
    CHECK(std::isnan(m.coarse_F.front()));

    const MaximizeResult none = maximize_over_Sk([&](double) { return nan; }, sk, 9, 1e-3);
    CHECK_FALSE(none.found);
    CHECK_FALSE(none.interior);

    CHECK_THROWS(maximize_over_Sk(f, sk, 8, 1e-3));
    nlohmann::json j = m;
    CHECK(j["coarse_F"][0].is_null());
}

TEST_CASE("pde residual of the single-species state") {
    ModelParams p;
    double prev = 0.0;
    for (double h : {0.25, 0.125}) {
        const Grid g(2, 16.0, h);
        const AnsatzFields a = build_ansatz(profiles().U0, profiles().V0, p, 5.0, g);
        const Field zero(g, 0.0);
        const Residuals r = pde_residual(a.U0, zero, a.mu, p);
        CHECK(r.res_V == 0.0);
        if (prev > 0.0) CHECK(prev / r.res_U >= 3.5);
        prev = r.res_U;
    }
}

TEST_CASE("reduced energy at a converged radius") {
    ModelParams p;
    p.k = 4;
    Problem prob;
    prob.params = p;
    prob.profiles = profiles();
    prob.h = 0.25;
    prob.L = 16.0;
    const CouplingBound cb = coupling_bound_at(prob, 7.0);
    prob.params.beta = 0.5 * cb.f0;
    const ReducedEnergySample s = reduced_energy(7.0, prob);
    CHECK(s.converged);
    CHECK(s.decomposition_error < 1e-10);
    CHECK(s.F == s.breakdown.direct);
    const AnsatzFields a = build_ansatz(prob.profiles.U0, prob.profiles.V0, prob.params, 7.0, prob.grid());
    CHECK(s.F == doctest::Approx(energy(a.U0 + s.corrector.u, a.W + s.corrector.v, a.mu, prob.params)).epsilon(1e-14));
    // R = 7 lies far outside S_4.
    CHECK_FALSE(s.corrector.warnings.empty());

    nlohmann::json j = s;
    CHECK(j["converged"] == true);
    CHECK(j.contains("breakdown"));
}

TEST_CASE("decoupled limit of the reduced energy") {
    ModelParams p;
    p.k = 2;
    p.beta = 0.0;
    p.a = 0.0;
    p.potential = PotentialKind::Constant;
    Problem prob;
    prob.params = p;
    prob.profiles = profiles();
    prob.L = 40.0;
    const ExpansionConstants c = expansion_constants(profiles().U0, profiles().V0, p);
    double prev = 0.0;
    for (double h : {0.25, 0.125}) {
        prob.h = h;
        const ReducedEnergySample s = reduced_energy(15.0, prob);
        // The remaining gap is the O(h^2) error of the discrete gradient term.
        const double err = std::abs(s.F - (c.A0 + 2 * c.A1)) / (c.A0 + 2 * c.A1);
        if (prev > 0.0) CHECK(prev / err > 3.5);
        prev = err;
    }
    CHECK(prev < 4e-3);
}

TEST_CASE("corrector divergence propagates") {
    ModelParams p;
    p.k = 4;
    p.beta = 3.0;
    Problem prob;
    prob.params = p;
    prob.profiles = profiles();
    prob.h = 0.25;
    prob.L = 16.0;
    CHECK_THROWS_AS(reduced_energy(7.0, prob), DivergenceError);
}

TEST_CASE("problem grid") {
    const Problem prob = make_problem(ModelParams{}, 0.125);
    const Grid g = prob.grid();
    CHECK(g.h() == 0.125);
    CHECK(g.L() >= prob.interval().hi + 20.0);
    CHECK(prob.grid(0.0625).L() == g.L());
}
