#include "wavepacket/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wpk {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

} // namespace

Grid1D::Grid1D(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
    if (!(x_min < x_max)) {
        throw std::invalid_argument("Grid1D: x_min must be strictly less than x_max");
    }
    if (!is_power_of_two(n_points)) {
        throw std::invalid_argument("Grid1D: n_points must be a power of two and >= 2");
    }
    h_ = (x_max - x_min) / static_cast<double>(n_);
    if (!(h_ > 0.0) || !std::isfinite(h_)) {
        throw std::invalid_argument("Grid1D: spacing must be strictly positive and finite");
    }
}

bool Grid1D::symmetric() const {
    return std::abs(x_min_ + x_max_) <= 1e-12 * (std::abs(x_min_) + std::abs(x_max_));
}

bool Grid1D::operator==(const Grid1D& other) const {
    return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_;
}

SampledField::SampledField(Grid1D g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n_points()) {
        throw std::invalid_argument("SampledField: values length must equal grid.n_points");
    }
}

SampledField SampledField::zeros(Grid1D g) {
    std::vector<Complex> v(g.n_points(), Complex(0.0, 0.0));
    return SampledField(g, std::move(v));
}

void require_finite(const SampledField& f, const char* context) {
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const Complex& z = f.values[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            std::ostringstream msg;
            msg << context << ": non-finite value at grid point x = " << f.grid.point(i);
            throw std::invalid_argument(msg.str());
        }
    }
}

double l2_norm(const SampledField& f) {
    const double h = f.grid.spacing();
    double acc = 0.0;
    const std::size_t n = f.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::norm(f.values[i]);
    }
    return std::sqrt(acc * h);
}

Complex inner_product(const SampledField& f, const SampledField& g) {
    if (!(f.grid == g.grid)) {
        throw std::invalid_argument("inner_product: fields live on different grids");
    }
    const double h = f.grid.spacing();
    Complex acc(0.0, 0.0);
    const std::size_t n = f.values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::conj(f.values[i]) * g.values[i];
    }
    return acc * h;
}

double boundary_mass_fraction(const SampledField& f, double fraction) {
    const std::size_t n = f.values.size();
    const std::size_t edge = static_cast<std::size_t>(std::ceil(fraction * 0.5 * static_cast<double>(n)));
    double total = 0.0;
    double outer = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::norm(f.values[i]);
        total += m;
        if (i < edge || i >= n - edge) outer += m;
    }
    if (total == 0.0) return 0.0;
    return outer / total;
}

} // namespace wpk
