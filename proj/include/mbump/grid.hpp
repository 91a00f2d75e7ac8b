#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mbump {

using Point = std::array<double, 3>;

/// Uniform grid on the box [-L, L]^N, nodes at -L + j h, j = 0..n-1.
/// Values outside the box are taken to be zero.
class Grid {
public:
    Grid() = default;
    Grid(int dim, double L, double h);

    int dim() const { return dim_; }
    double L() const { return L_; }
    double h() const { return h_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }

    /// Computed as (2j - (n-1)) h/2 so that coord(n-1-j) == -coord(j) exactly.
    double coord(int j) const { return 0.5 * h_ * static_cast<double>(2 * j - (n_ - 1)); }
    Point point(std::size_t idx) const;
    std::size_t index(int i0, int i1, int i2 = 0) const;

    /// Trapezoid weight (h^N with halving on boundary faces).
    double weight(std::size_t idx) const;
    double cell_volume() const;

    bool operator==(const Grid& o) const { return dim_ == o.dim_ && n_ == o.n_ && L_ == o.L_ && h_ == o.h_; }

private:
    int dim_ = 2;
    double L_ = 1.0;
    double h_ = 1.0;
    int n_ = 3;
    std::size_t size_ = 9;
};

Grid make_grid(int dim, double L, double h);

/// Box half-width used for a ring of radius R: R + max(20, 15/sqrt(lambda)),
/// rounded up to a multiple of h.
double default_half_width(double R, double lambda, double h);
double default_spacing(int dim);

class Field {
public:
    Field() = default;
    explicit Field(const Grid& g, double value = 0.0) : grid_(g), data_(g.size(), value) {}
    Field(const Grid& g, std::vector<double> data);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    std::span<double> values() { return data_; }
    std::span<const double> values() const { return data_; }

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
    void axpy(double s, const Field& x);

    double max_abs() const;

private:
    Grid grid_;
    std::vector<double> data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

Field sample(const Grid& g, const std::function<double(const Point&)>& fn);

/// (2N+1)-point Laplacian with zero ghost values outside the box.
Field laplacian(const Field& f);
void laplacian(std::span<const double> in, std::span<double> out, const Grid& g);
/// Fourth-order (4N+1)-point Laplacian, zero ghosts.  Used to measure
/// continuous-equation defects of grid solutions.
Field laplacian4(const Field& f);

/// Trapezoid quadrature of f over the box.  When boundary_warning is given it
/// is set if the integrand has not decayed to 1e-10 of its max on the boundary.
double quad(const Field& f, bool* boundary_warning = nullptr);
/// quad(a * b) without materialising the product.
double quad_product(const Field& a, const Field& b);
/// max |f| on boundary nodes divided by max |f|.
double boundary_fraction(const Field& f);

/// sum over grid edges of h^N (D u)(D v), forward differences centred on edges,
/// zero ghosts.  Pairs with laplacian() by summation by parts.
double gradient_form(const Field& u, const Field& v);

double inner0(const Field& u, const Field& v, double lambda);
double inner1(const Field& u, const Field& v, const Field& mu);
double norm0(const Field& u, double lambda);
double norm1(const Field& u, const Field& mu);
double norm_E(const Field& u, const Field& v, double lambda, const Field& mu);
double l2_norm(const Field& f);

/// Text dump: header "N L h" then one value per line, row-major, %.17g.
void write_field(std::ostream& os, const Field& f);
void write_field(const std::string& path, const Field& f);
Field read_field(std::istream& is);
Field read_field(const std::string& path);

}  // namespace mbump
