#pragma once

#include <span>

#include "mbump/grid.hpp"

namespace mbump {

/// Exact inverse of (-laplacian + shift) on a grid with zero ghost values,
/// applied with type-I sine transforms.  shift must be positive.
class ShiftedLaplacianInverse {
public:
    ShiftedLaplacianInverse(const Grid& g, double shift);

    void apply(std::span<const double> in, std::span<double> out) const;
    Field apply(const Field& f) const;
    double shift() const { return shift_; }

private:
    Grid grid_;
    double shift_;
    std::vector<double> eig_;  // one-axis eigenvalues of -laplacian
};

}  // namespace mbump
