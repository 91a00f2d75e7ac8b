#pragma once

#include <vector>

#include "mbump/grid.hpp"
#include "mbump/radial.hpp"

namespace mbump {

/// k points on the circle of radius R in the (y1, y2) plane, x_1 on the
/// positive y1 axis.  For N = 3 the third coordinate is 0.
struct BumpConfiguration {
    int k = 2;
    double R = 1.0;
    int dim = 2;
    std::vector<Point> centers;

    /// x_i / R (first two coordinates); i is 1-based.
    std::array<double, 2> normal(int i) const;
    const Point& center(int i) const { return centers[static_cast<std::size_t>(i - 1)]; }
};

/// Centres are generated so that for k divisible by 4 the set is mapped onto
/// itself bit-exactly by quarter turns and by y2 -> -y2.
BumpConfiguration bump_centers(int k, double R, int dim);

double nearest_neighbor_distance(const BumpConfiguration& cfg);

/// Sector index i (1-based) with z_i . z >= R |z| cos(pi/k); ties go to the
/// smaller index and the origin belongs to sector 1.
int sector_membership(const Point& y, const BumpConfiguration& cfg);

/// Average over the group generated by the rotation by 2 pi / k in (y1, y2)
/// and the reflections y_n -> -y_n, n >= 2.  Quarter turns and reflections map
/// nodes onto nodes; other rotations use 4-point cubic interpolation.
Field symmetrize(const Field& f, int k);

/// True when every group element maps nodes to nodes (k = 1, 2, 4), so that
/// symmetrize is an exact orthogonal projector.
bool symmetry_is_exact(int k);

/// dV_i/dR at y: -V0'(|y - x_i|) ((y - x_i) . n_i) / |y - x_i|, zero at x_i.
double d_bump_dR(const RadialProfile& profile, const BumpConfiguration& cfg, int i, const Point& y);

/// Fields built from the translated bumps V_i = V0(. - x_i).
struct RingFields {
    Field sum;       ///< sum_i V_i
    Field cube_sum;  ///< sum_i V_i^3
    Field Z;         ///< sum_i V_i^2 dV_i/dR
};

RingFields ring_fields(const RadialProfile& profile, const BumpConfiguration& cfg, const Grid& grid);

/// V_0(|y - x_i|) sampled on the grid; i is 1-based.
Field single_bump(const RadialProfile& profile, const BumpConfiguration& cfg, int i, const Grid& grid);

}  // namespace mbump
