#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wpk {

using Complex = std::complex<double>;

/// Uniform 1-D grid on [x_min, x_max) with a power-of-two number of points.
/// The right endpoint is excluded so the grid doubles as the sample set of a
/// periodic spectral method.
class Grid1D {
public:
    Grid1D(double x_min, double x_max, std::size_t n_points);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t n_points() const { return n_; }
    double spacing() const { return h_; }
    double point(std::size_t i) const { return x_min_ + static_cast<double>(i) * h_; }
    double length() const { return x_max_ - x_min_; }

    /// True when the grid is symmetric about the origin (x_min == -x_max).
    bool symmetric() const;

    bool operator==(const Grid1D& other) const;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double h_;
};

/// Complex-valued samples of a function on a Grid1D.
struct SampledField {
    Grid1D grid;
    std::vector<Complex> values;

    SampledField(Grid1D g, std::vector<Complex> v);
    static SampledField zeros(Grid1D g);
};

/// Throws std::invalid_argument if any entry is NaN or infinite.
void require_finite(const SampledField& f, const char* context);

/// Trapezoid-rule L2 norm over the grid points.
double l2_norm(const SampledField& f);

/// Trapezoid-rule inner product, conjugate on the first argument.
/// Throws on grid mismatch.
Complex inner_product(const SampledField& f, const SampledField& g);

/// Fraction of the squared L2 mass lying in the outer `fraction` of the grid
/// (split evenly between the two ends).
double boundary_mass_fraction(const SampledField& f, double fraction = 0.05);

} // namespace wpk
