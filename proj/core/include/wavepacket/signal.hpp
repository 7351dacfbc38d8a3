#pragma once

#include "wavepacket/grid.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace wpk {

/// Frequency directions attached to a singular point of a signal.
enum class WfDirections { plus, minus, both };

/// A point of the ground-truth wave front set: singular position plus the
/// set of frequency directions along which the signal is singular there.
struct WfPoint {
    double x_sing;
    WfDirections directions;
};

/// Interval [lo, hi]; empty when lo > hi.
struct Interval {
    double lo;
    double hi;
    bool empty() const { return lo > hi; }
};

struct GaussianSignal {
    double center;
    double width;
};

/// H(x - jump) * exp(-(x-jump)^2 / (2 width^2)). The Gaussian envelope keeps
/// the signal in L2; the jump is the only singularity.
struct HeavisideGaussianSignal {
    double jump_point;
    double width;
};

/// |x - jump|^alpha * exp(-(x-jump)^2 / (2 width^2)), alpha > 0.
struct AbsPowerSignal {
    double exponent;
    double jump_point;
    double width;
};

/// Normalized Gaussian spike of width epsilon approximating a point mass.
struct DiracApproxSignal {
    double center;
    double epsilon;
};

class SignalSpec;

/// exp(i eta x) * base(x).
struct ModulatedSignal {
    std::shared_ptr<const SignalSpec> base;
    double frequency;
};

/// Analytic prototype of initial data with a known ground-truth wave front
/// set. Pointwise evaluable; immutable after construction.
class SignalSpec {
public:
    using Kind = std::variant<GaussianSignal, HeavisideGaussianSignal, AbsPowerSignal,
                              DiracApproxSignal, ModulatedSignal>;

    explicit SignalSpec(Kind kind);

    static SignalSpec gaussian(double center, double width);
    static SignalSpec heaviside_gaussian(double jump_point, double width);
    static SignalSpec abs_power(double exponent, double jump_point, double width);
    static SignalSpec dirac_approx(double center, double epsilon);
    static SignalSpec modulated(SignalSpec base, double frequency);

    Complex operator()(double x) const;

    /// Interval outside which |f| is below ~1e-16 of its peak scale.
    Interval effective_support() const;

    /// Upper bound on the internal oscillation frequency (rad per unit x);
    /// quadratures add this to the transform frequency when choosing steps.
    double osc_frequency_hint() const;

    /// Ground-truth wave front set as a finite list of singular points.
    std::vector<WfPoint> wave_front() const;

    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_;
};

/// Evaluates the spec at every grid point. Throws (naming the point) if an
/// evaluation is non-finite.
SampledField sample(const SignalSpec& spec, const Grid1D& grid);

/// Quadrature L2 norm of the spec over its effective support.
double signal_l2_norm(const SignalSpec& spec);

} // namespace wpk
