#include "mbump/ansatz.hpp"

#include <cmath>

namespace mbump {

AnsatzFields build_ansatz(const RadialProfile& U0p, const RadialProfile& V0p, const ModelParams& p, double R,
                          const Grid& g) {
    BumpConfiguration cfg = bump_centers(p.k, R, g.dim());
    RingFields ring = ring_fields(V0p, cfg, g);
    const Potential pot = p.mu();
    auto radius = [](const Point& y) { return std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]); };
    Field U0 = sample(g, [&](const Point& y) { return U0p.value(radius(y)); });
    Field mu = sample(g, [&](const Point& y) { return pot(radius(y)); });
    return {p, std::move(cfg), std::move(U0), std::move(ring.sum), std::move(ring.cube_sum), std::move(ring.Z),
            std::move(mu)};
}

Profiles solve_profiles(const ModelParams& p, const ShootingOptions& opts) {
    return {solve_ground_state(p.lambda, p.alpha0, p.dim, opts), solve_ground_state(1.0, p.alpha1, p.dim, opts)};
}

}  // namespace mbump
