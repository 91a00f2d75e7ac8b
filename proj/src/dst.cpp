#include "mbump/dst.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "mbump/errors.hpp"

namespace mbump {

namespace {

// Planning is not thread safe in FFTW; plans are created once per shape and
// reused through the new-array execute interface.
std::mutex plan_mutex;

fftw_plan plan_for(int dim, int n) {
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard lock(plan_mutex);
    const auto key = std::make_pair(dim, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(n);
    double* buf = fftw_alloc_real(total);
    int dims[3] = {n, n, n};
    fftw_r2r_kind kinds[3] = {FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00};
    fftw_plan p = fftw_plan_r2r(dim, dims, buf, buf, kinds, FFTW_ESTIMATE);
    fftw_free(buf);
    if (!p) throw Error("FFTW could not plan a sine transform");
    cache.emplace(key, p);
    return p;
}

}  // namespace

ShiftedLaplacianInverse::ShiftedLaplacianInverse(const Grid& g, double shift) : grid_(g), shift_(shift) {
    if (!(shift > 0.0)) throw Error("preconditioner shift must be positive");
    const int n = g.n();
    const double h = g.h();
    eig_.resize(static_cast<std::size_t>(n));
    for (int m = 1; m <= n; ++m) {
        const double s = std::sin(std::numbers::pi * m / (2.0 * (n + 1)));
        eig_[static_cast<std::size_t>(m - 1)] = 4.0 / (h * h) * s * s;
    }
    plan_for(g.dim(), n);
}

void ShiftedLaplacianInverse::apply(std::span<const double> in, std::span<double> out) const {
    const int dim = grid_.dim();
    const int n = grid_.n();
    const std::size_t total = grid_.size();
    const std::size_t sn = static_cast<std::size_t>(n);
    fftw_plan plan = plan_for(dim, n);
    double* buf = fftw_alloc_real(total);
    std::copy(in.begin(), in.end(), buf);
    fftw_execute_r2r(plan, buf, buf);
    const double norm = std::pow(2.0 * (n + 1), dim);
    for (std::size_t i = 0; i < total; ++i) {
        double lam = shift_;
        std::size_t rest = i;
        for (int d = 0; d < dim; ++d) {
            lam += eig_[rest % sn];
            rest /= sn;
        }
        buf[i] /= lam * norm;
    }
    fftw_execute_r2r(plan, buf, buf);
    std::copy(buf, buf + total, out.begin());
    fftw_free(buf);
}

Field ShiftedLaplacianInverse::apply(const Field& f) const {
    Field out(f.grid());
    apply(f.values(), out.values());
    return out;
}

}  // namespace mbump
