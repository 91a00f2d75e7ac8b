#include "mbump/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mbump/errors.hpp"
#include "mbump/parallel.hpp"

namespace mbump {

double pairwise_sum(std::span<const double> terms) {
    if (terms.empty()) return 0.0;
    if (terms.size() == 1) return terms[0];
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.subspan(0, half)) + pairwise_sum(terms.subspan(half));
}

Grid::Grid(int dim, double L, double h) : dim_(dim), L_(L), h_(h) {
    if (dim < 1 || dim > 3) throw GridError("grid dimension must be 1, 2 or 3");
    if (!(h > 0.0) || !(L > 0.0)) throw GridError("grid needs L > 0 and h > 0");
    const double cells = 2.0 * L / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
        throw GridError("L/h must be an integer (L=" + std::to_string(L) + ", h=" + std::to_string(h) + ")");
    n_ = static_cast<int>(rounded) + 1;
    size_ = 1;
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_);
}

Point Grid::point(std::size_t idx) const {
    Point p{0.0, 0.0, 0.0};
    const auto n = static_cast<std::size_t>(n_);
    for (int d = dim_ - 1; d >= 0; --d) {
        p[static_cast<std::size_t>(d)] = coord(static_cast<int>(idx % n));
        idx /= n;
    }
    return p;
}

std::size_t Grid::index(int i0, int i1, int i2) const {
    const auto n = static_cast<std::size_t>(n_);
    switch (dim_) {
        case 1: return static_cast<std::size_t>(i0);
        case 2: return static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1);
        default: return (static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1)) * n + static_cast<std::size_t>(i2);
    }
}

double Grid::cell_volume() const { return std::pow(h_, dim_); }

double Grid::weight(std::size_t idx) const {
    const auto n = static_cast<std::size_t>(n_);
    double w = cell_volume();
    for (int d = 0; d < dim_; ++d) {
        const std::size_t j = idx % n;
        if (j == 0 || j + 1 == n) w *= 0.5;
        idx /= n;
    }
    return w;
}

Grid make_grid(int dim, double L, double h) { return Grid(dim, L, h); }

double default_half_width(double R, double lambda, double h) {
    const double L = R + std::max(20.0, 15.0 / std::sqrt(lambda));
    return std::ceil(L / h - 1e-9) * h;
}

double default_spacing(int dim) { return dim == 3 ? 0.25 : 0.125; }

Field::Field(const Grid& g, std::vector<double> data) : grid_(g), data_(std::move(data)) {
    if (data_.size() != g.size()) throw GridError("field size does not match its grid");
}

namespace {
void require_same(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw GridError("fields live on different grids");
}
}  // namespace

Field& Field::operator+=(const Field& o) {
    require_same(*this, o);
    parallel_for(size(), [&](std::size_t i) { data_[i] += o.data_[i]; });
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same(*this, o);
    parallel_for(size(), [&](std::size_t i) { data_[i] -= o.data_[i]; });
    return *this;
}

Field& Field::operator*=(double s) {
    parallel_for(size(), [&](std::size_t i) { data_[i] *= s; });
    return *this;
}

void Field::axpy(double s, const Field& x) {
    require_same(*this, x);
    parallel_for(size(), [&](std::size_t i) { data_[i] += s * x.data_[i]; });
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
    require_same(a, b);
    Field out(a.grid());
    parallel_for(a.size(), [&](std::size_t i) { out[i] = a[i] * b[i]; });
    return out;
}

Field sample(const Grid& g, const std::function<double(const Point&)>& fn) {
    Field f(g);
    parallel_for(g.size(), [&](std::size_t i) { f[i] = fn(g.point(i)); });
    return f;
}

void laplacian(std::span<const double> in, std::span<double> out, const Grid& g) {
    const int n = g.n();
    const double inv_h2 = 1.0 / (g.h() * g.h());
    const int dim = g.dim();
    const double diag = -2.0 * dim * inv_h2;
    if (dim == 1) {
        for (int i = 0; i < n; ++i) {
            const double l = i > 0 ? in[i - 1] : 0.0;
            const double r = i + 1 < n ? in[i + 1] : 0.0;
            out[i] = diag * in[i] + inv_h2 * (l + r);
        }
        return;
    }
    const std::size_t sn = static_cast<std::size_t>(n);
    if (dim == 2) {
        parallel_for(sn, [&](std::size_t i0) {
            const double* row = in.data() + i0 * sn;
            const double* up = i0 > 0 ? row - sn : nullptr;
            const double* down = i0 + 1 < sn ? row + sn : nullptr;
            double* o = out.data() + i0 * sn;
            for (std::size_t i1 = 0; i1 < sn; ++i1) {
                double s = diag * row[i1];
                if (up) s += inv_h2 * up[i1];
                if (down) s += inv_h2 * down[i1];
                if (i1 > 0) s += inv_h2 * row[i1 - 1];
                if (i1 + 1 < sn) s += inv_h2 * row[i1 + 1];
                o[i1] = s;
            }
        });
        return;
    }
    const std::size_t plane = sn * sn;
    parallel_for(sn, [&](std::size_t i0) {
        for (std::size_t i1 = 0; i1 < sn; ++i1) {
            const std::size_t base = i0 * plane + i1 * sn;
            for (std::size_t i2 = 0; i2 < sn; ++i2) {
                const std::size_t idx = base + i2;
                double s = diag * in[idx];
                if (i0 > 0) s += inv_h2 * in[idx - plane];
                if (i0 + 1 < sn) s += inv_h2 * in[idx + plane];
                if (i1 > 0) s += inv_h2 * in[idx - sn];
                if (i1 + 1 < sn) s += inv_h2 * in[idx + sn];
                if (i2 > 0) s += inv_h2 * in[idx - 1];
                if (i2 + 1 < sn) s += inv_h2 * in[idx + 1];
                out[idx] = s;
            }
        }
    });
}

Field laplacian(const Field& f) {
    Field out(f.grid());
    laplacian(f.values(), out.values(), f.grid());
    return out;
}

Field laplacian4(const Field& f) {
    const Grid& g = f.grid();
    const auto n = static_cast<std::ptrdiff_t>(g.n());
    const int dim = g.dim();
    std::ptrdiff_t stride[3] = {1, 1, 1};
    for (int d = dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * n;
    const double c0 = -30.0 / 12.0, c1 = 16.0 / 12.0, c2 = -1.0 / 12.0;
    const double inv_h2 = 1.0 / (g.h() * g.h());
    Field out(g);
    parallel_for(f.size(), [&](std::size_t i) {
        const auto si = static_cast<std::ptrdiff_t>(i);
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            const std::ptrdiff_t j = (si / stride[d]) % n;
            auto at = [&](std::ptrdiff_t off) {
                const std::ptrdiff_t jj = j + off;
                return jj < 0 || jj >= n ? 0.0 : f[static_cast<std::size_t>(si + off * stride[d])];
            };
            s += c0 * f[i] + c1 * (at(-1) + at(1)) + c2 * (at(-2) + at(2));
        }
        out[i] = s * inv_h2;
    });
    return out;
}

double quad(const Field& f, bool* boundary_warning) {
    const Grid& g = f.grid();
    if (boundary_warning) *boundary_warning = boundary_fraction(f) > 1e-10;
    return reduce_sum(f.size(), [&](std::size_t i) { return g.weight(i) * f[i]; });
}

double quad_product(const Field& a, const Field& b) {
    require_same(a, b);
    const Grid& g = a.grid();
    return reduce_sum(a.size(), [&](std::size_t i) { return g.weight(i) * a[i] * b[i]; });
}

double boundary_fraction(const Field& f) {
    const Grid& g = f.grid();
    const auto n = static_cast<std::size_t>(g.n());
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = std::abs(f[i]);
        peak = std::max(peak, v);
        std::size_t idx = i;
        bool on_boundary = false;
        for (int d = 0; d < g.dim(); ++d) {
            const std::size_t j = idx % n;
            if (j == 0 || j + 1 == n) on_boundary = true;
            idx /= n;
        }
        if (on_boundary) edge = std::max(edge, v);
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

double gradient_form(const Field& u, const Field& v) {
    require_same(u, v);
    const Grid& g = u.grid();
    const auto n = static_cast<std::size_t>(g.n());
    const int dim = g.dim();
    std::size_t stride[3] = {1, 1, 1};
    for (int d = dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * n;
    const double scale = std::pow(g.h(), dim - 2);
    return scale * reduce_sum(u.size(), [&](std::size_t i) {
        double s = 0.0;
        for (int d = 0; d < dim; ++d) {
            const std::size_t j = (i / stride[d]) % n;
            const double un = j + 1 < n ? u[i + stride[d]] : 0.0;
            const double vn = j + 1 < n ? v[i + stride[d]] : 0.0;
            s += (un - u[i]) * (vn - v[i]);
            if (j == 0) s += u[i] * v[i];
        }
        return s;
    });
}

double inner0(const Field& u, const Field& v, double lambda) {
    return gradient_form(u, v) + lambda * quad_product(u, v);
}

double inner1(const Field& u, const Field& v, const Field& mu) {
    require_same(u, v);
    require_same(u, mu);
    const Grid& g = u.grid();
    const double mass = reduce_sum(u.size(), [&](std::size_t i) { return g.weight(i) * mu[i] * u[i] * v[i]; });
    return gradient_form(u, v) + mass;
}

double norm0(const Field& u, double lambda) { return std::sqrt(std::max(0.0, inner0(u, u, lambda))); }
double norm1(const Field& u, const Field& mu) { return std::sqrt(std::max(0.0, inner1(u, u, mu))); }

double norm_E(const Field& u, const Field& v, double lambda, const Field& mu) {
    return std::max(norm0(u, lambda), norm1(v, mu));
}

double l2_norm(const Field& f) { return std::sqrt(quad_product(f, f)); }

void write_field(std::ostream& os, const Field& f) {
    const Grid& g = f.grid();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n", g.dim(), g.L(), g.h());
    os << buf;
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g\n", f[i]);
        os << buf;
    }
}

void write_field(const std::string& path, const Field& f) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_field(os, f);
}

Field read_field(std::istream& is) {
    int dim = 0;
    double L = 0.0;
    double h = 0.0;
    std::string line;
    if (!std::getline(is, line)) throw Error("field dump: missing header");
    std::istringstream header(line);
    if (!(header >> dim >> L >> h)) throw Error("field dump: malformed header '" + line + "'");
    Grid g(dim, L, h);
    std::vector<double> data;
    data.reserve(g.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        data.push_back(std::strtod(line.c_str(), nullptr));
    }
    if (data.size() != g.size())
        throw Error("field dump: expected " + std::to_string(g.size()) + " values, got " + std::to_string(data.size()));
    return Field(g, std::move(data));
}

Field read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_field(is);
}

}  // namespace mbump
