#pragma once

#include "mbump/geometry.hpp"
#include "mbump/grid.hpp"
#include "mbump/model.hpp"
#include "mbump/radial.hpp"

namespace mbump {

/// The approximate solution (U0, sum V_i) at one ring radius, sampled on a grid,
/// together with the fields every later stage needs.
struct AnsatzFields {
    ModelParams params;
    BumpConfiguration cfg;
    Field U0;   ///< first-species ground state centred at the origin
    Field W;    ///< sum_i V_i
    Field W3;   ///< sum_i V_i^3
    Field Z;    ///< sum_i V_i^2 dV_i/dR
    Field mu;   ///< mu(|y|)

    const Grid& grid() const { return U0.grid(); }
};

AnsatzFields build_ansatz(const RadialProfile& U0p, const RadialProfile& V0p, const ModelParams& p, double R,
                          const Grid& g);

/// Ground states of both species for the parameters (c = lambda, alpha0) and
/// (c = 1, alpha1).
struct Profiles {
    RadialProfile U0;
    RadialProfile V0;
};

Profiles solve_profiles(const ModelParams& p, const ShootingOptions& opts = {});

}  // namespace mbump
