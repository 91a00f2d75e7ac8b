#include "mbump/geometry.hpp"

#include <cmath>
#include <numbers>

#include "mbump/errors.hpp"
#include "mbump/parallel.hpp"

namespace mbump {

namespace {

/// (cos, sin) of 2 pi j / k, reduced to the first octant when k % 4 == 0 so
/// that symmetric indices give bitwise-mirrored values.
std::array<double, 2> unit_direction(int j, int k) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (k % 4 != 0) {
        if (2 * j > k) {
            const auto [c, s] = unit_direction(k - j, k);
            return {c, -s};
        }
        if (2 * j == k) return {-1.0, 0.0};
        return {std::cos(two_pi * j / k), std::sin(two_pi * j / k)};
    }
    const int quarter = k / 4;
    const int q = j / quarter;
    const int rem = j % quarter;
    double c = 1.0;
    double s = 0.0;
    if (rem != 0) {
        if (2 * rem > quarter) {
            const int mirrored = quarter - rem;
            c = std::sin(two_pi * mirrored / k);
            s = std::cos(two_pi * mirrored / k);
        } else if (2 * rem == quarter) {
            c = s = std::sqrt(0.5);
        } else {
            c = std::cos(two_pi * rem / k);
            s = std::sin(two_pi * rem / k);
        }
    }
    for (int t = 0; t < q; ++t) {
        const double nc = -s;
        s = c;
        c = nc;
    }
    return {c, s};
}

double cubic_weight(int offset, double t) {
    switch (offset) {
        case -1: return -t * (t - 1.0) * (t - 2.0) / 6.0;
        case 0: return (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
        case 1: return -(t + 1.0) * t * (t - 2.0) / 2.0;
        default: return (t + 1.0) * t * (t - 1.0) / 6.0;
    }
}

}  // namespace

std::array<double, 2> BumpConfiguration::normal(int i) const {
    const Point& x = center(i);
    return {x[0] / R, x[1] / R};
}

BumpConfiguration bump_centers(int k, double R, int dim) {
    if (k < 1) throw Error("need at least one bump");
    if (!(R > 0.0)) throw Error("ring radius must be positive");
    BumpConfiguration cfg{k, R, dim, {}};
    cfg.centers.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        const auto [c, s] = unit_direction(j, k);
        cfg.centers.push_back({R * c, R * s, 0.0});
    }
    return cfg;
}

double nearest_neighbor_distance(const BumpConfiguration& cfg) {
    return 2.0 * cfg.R * std::sin(std::numbers::pi / cfg.k);
}

int sector_membership(const Point& y, const BumpConfiguration& cfg) {
    const double rz = std::hypot(y[0], y[1]);
    if (rz == 0.0) return 1;
    const double threshold = cfg.R * rz * std::cos(std::numbers::pi / cfg.k);
    const double slack = 1e-12 * cfg.R * rz;
    for (int i = 1; i <= cfg.k; ++i) {
        const Point& x = cfg.center(i);
        if (x[0] * y[0] + x[1] * y[1] >= threshold - slack) return i;
    }
    // Unreachable for exact arithmetic; pick the closest direction.
    int best = 1;
    double best_dot = -1e300;
    for (int i = 1; i <= cfg.k; ++i) {
        const Point& x = cfg.center(i);
        const double d = x[0] * y[0] + x[1] * y[1];
        if (d > best_dot) best_dot = d, best = i;
    }
    return best;
}

namespace {

/// Exact part of the symmetry group: 4 = dihedral of order 8 (quarter turns),
/// 2 = half turn and reflections, 1 = reflections only.  The remaining
/// rotations by 2 pi j / k, 0 < j < cosets, are applied by interpolation.
struct SymmetryPlan {
    int exact;
    int cosets;
};

SymmetryPlan symmetry_plan(int k) {
    if (k < 1) throw Error("symmetry order must be positive");
    if (k % 4 == 0) return {4, k / 4};
    if (k % 2 == 0) return {2, k / 2};
    return {1, k};
}

struct Stencil {
    int base1;
    int base2;
    double w1[4];
    double w2[4];
    bool inside;
};

/// Tensor cubic stencil for f(Q y), Q the rotation (c, -s; s, c).
Stencil rotated_stencil(const Grid& g, double c, double s, double y1, double y2) {
    const int n = g.n();
    const double origin = g.coord(0);
    const double u1 = (c * y1 - s * y2 - origin) / g.h();
    const double u2 = (s * y1 + c * y2 - origin) / g.h();
    const double fl1 = std::floor(u1);
    const double fl2 = std::floor(u2);
    Stencil st;
    st.base1 = static_cast<int>(fl1);
    st.base2 = static_cast<int>(fl2);
    st.inside = !(st.base1 < -2 || st.base2 < -2 || st.base1 > n || st.base2 > n);
    for (int o = 0; o < 4; ++o) {
        st.w1[o] = cubic_weight(o - 1, u1 - fl1);
        st.w2[o] = cubic_weight(o - 1, u2 - fl2);
    }
    return st;
}

/// Average over the node maps of the exact subgroup (and y3 -> -y3 for N = 3).
Field exact_average(const Field& f, int exact) {
    const Grid& g = f.grid();
    const std::size_t sn = static_cast<std::size_t>(g.n());
    const int dim = g.dim();
    const std::size_t depth = dim == 3 ? sn : 1;
    const int turns = exact == 4 ? 4 : exact;
    const int step = exact == 4 ? 1 : 2;
    const int refl3 = dim == 3 ? 2 : 1;
    const double count = static_cast<double>(turns * 2 * refl3);
    Field out(g);
    parallel_for(sn, [&](std::size_t i0) {
        for (std::size_t i1 = 0; i1 < sn; ++i1) {
            for (std::size_t i2 = 0; i2 < depth; ++i2) {
                double acc = 0.0;
                for (int r3 = 0; r3 < refl3; ++r3) {
                    const std::size_t j2 = r3 ? sn - 1 - i2 : i2;
                    for (int r2 = 0; r2 < 2; ++r2) {
                        std::size_t a = i0, b = r2 ? sn - 1 - i1 : i1;
                        for (int t = 0; t < turns; ++t) {
                            acc += f[(a * sn + b) * depth + j2];
                            for (int q = 0; q < step; ++q) {
                                const std::size_t na = sn - 1 - b;
                                b = a;
                                a = na;
                            }
                        }
                    }
                }
                out[(i0 * sn + i1) * depth + i2] = acc / count;
            }
        }
    });
    return out;
}

}  // namespace

bool symmetry_is_exact(int k) { return symmetry_plan(k).cosets == 1; }

Field symmetrize(const Field& f, int k) {
    const Grid& g = f.grid();
    if (g.dim() < 2) throw GridError("symmetrize needs N >= 2");
    const SymmetryPlan plan = symmetry_plan(k);
    Field base = exact_average(f, plan.exact);
    if (plan.cosets == 1) return base;

    const int n = g.n();
    const std::size_t sn = static_cast<std::size_t>(n);
    const int dim = g.dim();
    const std::size_t depth = dim == 3 ? sn : 1;
    const int mid = (n - 1) / 2;
    std::vector<std::array<double, 2>> rot;
    for (int j = 1; j < plan.cosets; ++j) rot.push_back(unit_direction(j, k));

    // The result is invariant under the exact subgroup, so it is evaluated on
    // one fundamental cell and copied along each orbit.
    Field out(g);
    parallel_for(sn, [&](std::size_t i0) {
        const int a = static_cast<int>(i0) - mid;
        if (plan.exact == 4 ? a < 0 : (plan.exact == 2 ? a < 0 : false)) return;
        const double y1 = g.coord(static_cast<int>(i0));
        for (std::size_t i1 = 0; i1 < sn; ++i1) {
            const int b = static_cast<int>(i1) - mid;
            if (b < 0 || (plan.exact == 4 && b > a)) continue;
            const double y2 = g.coord(static_cast<int>(i1));
            std::vector<Stencil> st;
            st.reserve(rot.size());
            for (const auto& cs : rot) st.push_back(rotated_stencil(g, cs[0], cs[1], y1, y2));
            for (std::size_t i2 = 0; i2 < depth; ++i2) {
                if (dim == 3 && static_cast<int>(i2) < mid) continue;
                double acc = base[(i0 * sn + i1) * depth + i2];
                for (const Stencil& s : st) {
                    if (!s.inside) continue;
                    double v = 0.0;
                    for (int o1 = 0; o1 < 4; ++o1) {
                        const int p = s.base1 + o1 - 1;
                        if (p < 0 || p >= n) continue;
                        double row = 0.0;
                        for (int o2 = 0; o2 < 4; ++o2) {
                            const int q = s.base2 + o2 - 1;
                            if (q < 0 || q >= n) continue;
                            row += s.w2[o2] * base[(static_cast<std::size_t>(p) * sn + static_cast<std::size_t>(q)) * depth + i2];
                        }
                        v += s.w1[o1] * row;
                    }
                    acc += v;
                }
                acc /= plan.cosets;
                // Orbit of (a, b) under the exact subgroup.
                const int third = dim == 3 ? 2 : 1;
                for (int r3 = 0; r3 < third; ++r3) {
                    const std::size_t j2 = r3 ? sn - 1 - i2 : i2;
                    for (int sa = -1; sa <= 1; sa += 2) {
                        if (plan.exact == 1 && sa < 0) continue;
                        for (int sb = -1; sb <= 1; sb += 2) {
                            const int pa = plan.exact == 1 ? a : sa * a;
                            const int pb = sb * b;
                            out[(static_cast<std::size_t>(mid + pa) * sn + static_cast<std::size_t>(mid + pb)) * depth + j2] = acc;
                            if (plan.exact == 4)
                                out[(static_cast<std::size_t>(mid + pb) * sn + static_cast<std::size_t>(mid + pa)) * depth + j2] = acc;
                        }
                    }
                }
            }
        }
    });
    return out;
}

double d_bump_dR(const RadialProfile& profile, const BumpConfiguration& cfg, int i, const Point& y) {
    const Point& x = cfg.center(i);
    const double d0 = y[0] - x[0];
    const double d1 = y[1] - x[1];
    const double d2 = cfg.dim == 3 ? y[2] - x[2] : 0.0;
    const double rho = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
    if (rho == 0.0) return 0.0;
    const auto nrm = cfg.normal(i);
    return -profile.derivative(rho) * (d0 * nrm[0] + d1 * nrm[1]) / rho;
}

RingFields ring_fields(const RadialProfile& profile, const BumpConfiguration& cfg, const Grid& grid) {
    RingFields out{Field(grid), Field(grid), Field(grid)};
    const int dim = grid.dim();
    std::vector<std::array<double, 2>> normals;
    for (int i = 1; i <= cfg.k; ++i) normals.push_back(cfg.normal(i));
    parallel_for(grid.size(), [&](std::size_t idx) {
        const Point y = grid.point(idx);
        double sum = 0.0, cube = 0.0, z = 0.0;
        for (int i = 0; i < cfg.k; ++i) {
            const Point& x = cfg.centers[static_cast<std::size_t>(i)];
            const double d0 = y[0] - x[0];
            const double d1 = y[1] - x[1];
            const double d2 = dim == 3 ? y[2] - x[2] : 0.0;
            const double rho = std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
            const double v = profile.value(rho);
            sum += v;
            cube += v * v * v;
            if (rho > 0.0) {
                const auto& nrm = normals[static_cast<std::size_t>(i)];
                z += v * v * (-profile.derivative(rho) * (d0 * nrm[0] + d1 * nrm[1]) / rho);
            }
        }
        out.sum[idx] = sum;
        out.cube_sum[idx] = cube;
        out.Z[idx] = z;
    });
    return out;
}

Field single_bump(const RadialProfile& profile, const BumpConfiguration& cfg, int i, const Grid& grid) {
    const Point x = cfg.center(i);
    const int dim = grid.dim();
    return sample(grid, [&](const Point& y) {
        const double d0 = y[0] - x[0];
        const double d1 = y[1] - x[1];
        const double d2 = dim == 3 ? y[2] - x[2] : 0.0;
        return profile.value(std::sqrt(d0 * d0 + d1 * d1 + d2 * d2));
    });
}

}  // namespace mbump
