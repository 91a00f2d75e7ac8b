#include "mbump/radial.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "mbump/errors.hpp"

namespace mbump {

namespace {

using State = std::array<double, 2>;

double sphere_area(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        default: return 4.0 * std::numbers::pi;
    }
}

enum class Outcome { CrossesZero, TurnsUp };

struct Trajectory {
    Outcome outcome = Outcome::TurnsUp;
    std::vector<double> w;
    std::vector<double> dw;
};

/// Integrates from the origin, recording the uniform nodes, until the
/// trajectory crosses zero, turns back up, or reaches the last node.
Trajectory shoot(double w0, double c, double alpha, int dim, double dr, std::size_t nodes, double rtol) {
    namespace odeint = boost::numeric::odeint;
    const double curvature = c * w0 - alpha * w0 * w0 * w0;
    const double bend = static_cast<double>(dim - 1);
    auto rhs = [&](const State& x, State& dx, double r) {
        dx[0] = x[1];
        dx[1] = -bend / r * x[1] + c * x[0] - alpha * x[0] * x[0] * x[0];
    };

    Trajectory t;
    t.w.push_back(w0);
    t.dw.push_back(0.0);

    // Regular series start w = w0 + k r^2/(2N), w' = k r/N.
    const double r0 = 1e-5;
    State x{w0 + curvature * r0 * r0 / (2.0 * dim), curvature * r0 / dim};
    auto stepper = odeint::make_dense_output(rtol * 1e-3, rtol, dr, odeint::runge_kutta_dopri5<State>());
    stepper.initialize(x, r0, 0.25 * dr);

    std::size_t next = 1;
    while (next < nodes) {
        const auto [from, to] = stepper.do_step(rhs);
        (void)from;
        while (next < nodes && dr * static_cast<double>(next) <= to) {
            State s;
            stepper.calc_state(dr * static_cast<double>(next), s);
            if (s[0] < 0.0) {
                t.outcome = Outcome::CrossesZero;
                return t;
            }
            if (s[1] > 0.0) {
                t.outcome = Outcome::TurnsUp;
                return t;
            }
            t.w.push_back(s[0]);
            t.dw.push_back(s[1]);
            ++next;
        }
        const State& cur = stepper.current_state();
        if (cur[0] < 0.0) {
            t.outcome = Outcome::CrossesZero;
            return t;
        }
        if (cur[1] > 0.0 && to > r0 * 10) {
            t.outcome = Outcome::TurnsUp;
            return t;
        }
    }
    t.outcome = Outcome::TurnsUp;
    return t;
}

/// r^{-nu} K_nu(sqrt(c) r) with nu = (N-2)/2 and its r-derivative: the
/// decaying solution of the linearised radial equation.
double tail(double r, double c, int dim) {
    const double nu = 0.5 * (dim - 2);
    return std::pow(r, -nu) * std::cyl_bessel_k(std::abs(nu), std::sqrt(c) * r);
}

double tail_deriv(double r, double c, int dim) {
    const double nu = 0.5 * (dim - 2);
    return -std::sqrt(c) * std::pow(r, -nu) * std::cyl_bessel_k(nu + 1.0, std::sqrt(c) * r);
}

}  // namespace

RadialProfile::RadialProfile(double c, double alpha, int dim, double dr, std::vector<double> values,
                             std::vector<double> derivatives)
    : c_(c), alpha_(alpha), dim_(dim), dr_(dr), values_(std::move(values)), derivatives_(std::move(derivatives)) {
    if (values_.size() < 7 || values_.size() != derivatives_.size())
        throw Error("radial profile needs matching value/derivative tables");
    M_ = decay_constant(*this);
    const Moments mom = moments(*this);
    moment2_ = mom.moment2;
    moment4_ = mom.moment4;
}

double RadialProfile::value(double r) const {
    r = std::abs(r);
    const double rmax = r_max();
    if (r >= rmax) return values_.back() * std::exp(-std::sqrt(c_) * (r - rmax));
    const auto j = static_cast<std::size_t>(r / dr_);
    const double t = r / dr_ - static_cast<double>(j);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values_[j] + (t3 - 2 * t2 + t) * dr_ * derivatives_[j] +
           (-2 * t3 + 3 * t2) * values_[j + 1] + (t3 - t2) * dr_ * derivatives_[j + 1];
}

double RadialProfile::derivative(double r) const {
    r = std::abs(r);
    const double rmax = r_max();
    if (r >= rmax) return -std::sqrt(c_) * values_.back() * std::exp(-std::sqrt(c_) * (r - rmax));
    const auto j = static_cast<std::size_t>(r / dr_);
    const double t = r / dr_ - static_cast<double>(j);
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * values_[j] + (-6 * t2 + 6 * t) * values_[j + 1]) / dr_ +
           (3 * t2 - 4 * t + 1) * derivatives_[j] + (3 * t2 - 2 * t) * derivatives_[j + 1];
}

RadialProfile solve_ground_state(double c, double alpha, int dim, const ShootingOptions& opts) {
    if (!(c > 0.0) || !(alpha > 0.0)) throw Error("ground state needs c > 0 and alpha > 0");
    if (dim < 1 || dim > 3) throw Error("ground state dimension must be 1, 2 or 3");
    const double dr = opts.dr;
    double r_max = opts.r_max > 0.0 ? opts.r_max : std::max(30.0, 30.0 / std::sqrt(c));
    std::size_t intervals = static_cast<std::size_t>(std::ceil(r_max / dr - 1e-9));
    if (intervals % 2) ++intervals;
    const std::size_t nodes = intervals + 1;

    std::vector<double> history;
    double lo = std::sqrt(c / alpha);
    double hi = 2.0 * lo;
    for (int grow = 0;; ++grow) {
        history.push_back(hi);
        if (shoot(hi, c, alpha, dim, dr, nodes, opts.rtol).outcome == Outcome::CrossesZero) break;
        if (grow > 60) throw ShootingError("could not bracket the ground-state amplitude", history);
        lo = hi;
        hi *= 1.5;
    }
    int it = 0;
    for (; it < opts.max_bisections && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        history.push_back(mid);
        if (shoot(mid, c, alpha, dim, dr, nodes, opts.rtol).outcome == Outcome::CrossesZero)
            hi = mid;
        else
            lo = mid;
    }
    if (hi - lo > 1e-12 * hi) throw ShootingError("bisection did not resolve the amplitude", history);

    const Trajectory below = shoot(lo, c, alpha, dim, dr, nodes, opts.rtol);
    const Trajectory above = shoot(hi, c, alpha, dim, dr, nodes, opts.rtol);
    const std::size_t common = std::min(below.w.size(), above.w.size());

    // Keep the shot solution while the bracketing pair agrees to 1e-6 relative.
    std::size_t match = 0;
    for (std::size_t j = 1; j < common; ++j) {
        const double mean = 0.5 * (below.w[j] + above.w[j]);
        if (std::abs(below.w[j] - above.w[j]) > 1e-6 * mean) break;
        match = j;
    }
    if (match < 10) throw ShootingError("shooting trajectories separated immediately", history);

    std::vector<double> w(nodes);
    std::vector<double> dw(nodes);
    for (std::size_t j = 0; j <= match; ++j) {
        w[j] = 0.5 * (below.w[j] + above.w[j]);
        dw[j] = 0.5 * (below.dw[j] + above.dw[j]);
    }
    const double r_match = dr * static_cast<double>(match);
    const double scale = w[match] / tail(r_match, c, dim);
    for (std::size_t j = match + 1; j < nodes; ++j) {
        const double r = dr * static_cast<double>(j);
        w[j] = scale * tail(r, c, dim);
        dw[j] = scale * tail_deriv(r, c, dim);
    }
    return RadialProfile(c, alpha, dim, dr, std::move(w), std::move(dw));
}

double eval_profile(const RadialProfile& p, double r) { return p.value(r); }
double eval_profile_deriv(const RadialProfile& p, double r) { return p.derivative(r); }

double decay_constant(const RadialProfile& p) {
    const double sc = std::sqrt(p.mass());
    const double power = 0.5 * (p.dim() - 1);
    double M = 0.0;
    const auto& w = p.values();
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double r = p.radius(j);
        const double envelope = std::exp(-sc * r) * std::min(1.0, r > 0.0 ? std::pow(r, -power) : 1.0);
        M = std::max(M, w[j] / envelope);
    }
    return M;
}

Moments moments(const RadialProfile& p, int stride) {
    const auto& w = p.values();
    const std::size_t s = static_cast<std::size_t>(stride);
    std::size_t intervals = (w.size() - 1) / s;
    if (intervals % 2) --intervals;
    const double h = p.dr() * static_cast<double>(s);
    const double area = sphere_area(p.dim());
    double m2 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double coef = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double r = h * static_cast<double>(i);
        const double jac = std::pow(r, p.dim() - 1);
        const double v2 = w[i * s] * w[i * s];
        m2 += coef * jac * v2;
        m4 += coef * jac * v2 * v2;
    }
    return {area * m2 * h / 3.0, area * m4 * h / 3.0};
}

std::vector<double> ode_residual(const RadialProfile& p) {
    const auto& w = p.values();
    const auto& dw = p.derivatives();
    const double h = p.dr();
    std::vector<double> res;
    for (std::size_t j = 4; j + 4 < w.size(); ++j) {
        const double d2 = (3.0 * (dw[j - 4] - dw[j + 4]) - 32.0 * (dw[j - 3] - dw[j + 3]) +
                           168.0 * (dw[j - 2] - dw[j + 2]) - 672.0 * (dw[j - 1] - dw[j + 1])) /
                          (840.0 * h);
        const double r = p.radius(j);
        res.push_back(std::abs(d2 + (p.dim() - 1) / r * dw[j] - p.mass() * w[j] + p.alpha() * w[j] * w[j] * w[j]));
    }
    return res;
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "# c=%.17g alpha=%.17g N=%d M=%.17g moment2=%.17g moment4=%.17g\n", p.mass(),
                  p.alpha(), p.dim(), p.M(), p.moment2(), p.moment4());
    os << buf << "r,value,derivative\n";
    for (std::size_t j = 0; j < p.values().size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.radius(j), p.values()[j], p.derivatives()[j]);
        os << buf;
    }
}

void write_profile_csv(const std::string& path, const RadialProfile& p) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_profile_csv(os, p);
}

RadialProfile read_profile_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("#", 0) != 0) throw Error("profile CSV: missing metadata line");
    double c = 0, alpha = 0, M = 0, m2 = 0, m4 = 0;
    int dim = 0;
    if (std::sscanf(line.c_str(), "# c=%lf alpha=%lf N=%d M=%lf moment2=%lf moment4=%lf", &c, &alpha, &dim, &M, &m2,
                    &m4) != 6)
        throw Error("profile CSV: malformed metadata '" + line + "'");
    std::getline(is, line);
    std::vector<double> r, w, dw;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double a = 0, b = 0, d = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &d) != 3) throw Error("profile CSV: bad row '" + line + "'");
        r.push_back(a);
        w.push_back(b);
        dw.push_back(d);
    }
    if (r.size() < 2) throw Error("profile CSV: too few rows");
    return RadialProfile(c, alpha, dim, r[1] - r[0], std::move(w), std::move(dw));
}

}  // namespace mbump
