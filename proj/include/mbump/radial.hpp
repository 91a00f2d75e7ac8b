#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbump {

/// Positive, radially decreasing solution of
///     -w'' - ((N-1)/r) w' + c w = alpha w^3,   w'(0) = 0,  w -> 0,
/// tabulated on the uniform radial grid r_j = j dr, 0 <= r_j <= r_max.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(double c, double alpha, int dim, double dr, std::vector<double> values,
                  std::vector<double> derivatives);

    double mass() const { return c_; }
    double alpha() const { return alpha_; }
    int dim() const { return dim_; }
    double dr() const { return dr_; }
    double r_max() const { return dr_ * static_cast<double>(values_.size() - 1); }
    double peak() const { return values_.front(); }
    double M() const { return M_; }
    double moment2() const { return moment2_; }
    double moment4() const { return moment4_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& derivatives() const { return derivatives_; }
    double radius(std::size_t j) const { return dr_ * static_cast<double>(j); }

    /// Cubic Hermite interpolation; exponential continuation past r_max.
    double value(double r) const;
    double derivative(double r) const;

private:
    double c_ = 1.0;
    double alpha_ = 1.0;
    int dim_ = 2;
    double dr_ = 0.01;
    std::vector<double> values_;
    std::vector<double> derivatives_;
    double M_ = 0.0;
    double moment2_ = 0.0;
    double moment4_ = 0.0;
};

struct ShootingOptions {
    double dr = 0.01;
    /// 0 selects max(30, 30/sqrt(c)).
    double r_max = 0.0;
    double rtol = 1e-13;
    int max_bisections = 200;
};

/// Bisection on w(0) between trajectories that cross zero and ones that turn
/// back up, followed by matching to the decaying Bessel tail of the
/// linearised equation once the two bracketing trajectories separate.
RadialProfile solve_ground_state(double c, double alpha, int dim, const ShootingOptions& opts = {});

double eval_profile(const RadialProfile& p, double r);
double eval_profile_deriv(const RadialProfile& p, double r);

/// Smallest M with w(r) <= M e^{-sqrt(c) r} min{1, r^{-(N-1)/2}} at every node.
double decay_constant(const RadialProfile& p);

struct Moments {
    double moment2;
    double moment4;
};

/// Integrals of w^2 and w^4 over R^N (composite Simpson in r with the
/// surface-measure weight).  stride > 1 uses every stride-th node only.
Moments moments(const RadialProfile& p, int stride = 1);

/// |w'' + ((N-1)/r) w' - c w + alpha w^3| at interior nodes, w'' from an
/// eighth-order difference of the tabulated derivative.
std::vector<double> ode_residual(const RadialProfile& p);

void write_profile_csv(std::ostream& os, const RadialProfile& p);
void write_profile_csv(const std::string& path, const RadialProfile& p);
RadialProfile read_profile_csv(std::istream& is);

}  // namespace mbump
