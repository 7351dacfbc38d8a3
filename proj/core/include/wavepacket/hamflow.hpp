#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpk {

/// Raised when a trajectory leaves the finite range; carries the step index.
class FlowDivergenceError : public std::runtime_error {
public:
    FlowDivergenceError(std::size_t step, const std::string& what)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

enum class PotentialKind { zero, power, smoothed_abs, custom };

/// Sub-quadratic perturbation v(t, x) with growth exponent rho in [0, 2):
///   zero          v = 0
///   power         v = c (1 + x^2)^{rho/2}
///   smoothed_abs  v = a sqrt(x^2 + eps^2)   (rho = 1)
///   custom        user-supplied v and grad_v
class Potential {
public:
    static Potential zero();
    static Potential power(double c, double rho);
    static Potential smoothed_abs(double a, double eps = 1e-3);
    static Potential custom(double rho, std::function<double(double, double)> v,
                            std::function<double(double, double)> grad_v);

    double v(double t, double x) const;
    double grad_v(double t, double x) const;

    PotentialKind kind() const { return kind_; }
    double rho() const { return rho_; }
    double power_c() const { return c_; }
    double abs_amplitude() const { return a_; }
    double abs_epsilon() const { return eps_; }

private:
    Potential() = default;
    void check_gradient() const;

    PotentialKind kind_ = PotentialKind::zero;
    double rho_ = 0.0;
    double c_ = 0.0;   // power
    double a_ = 0.0;   // smoothed_abs amplitude
    double eps_ = 0.0; // smoothed_abs smoothing
    std::function<double(double, double)> v_fn_;
    std::function<double(double, double)> grad_fn_;
};

struct PhasePoint {
    double x;
    double xi;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;
};

/// Exact flow of xdot = xi, xidot = -x (v == 0): rotation by s - t0.
PhasePoint exact_ho_flow(double t0, double s, PhasePoint p);

/// Fixed-step RK4 for xdot = xi, xidot = -x - grad_v(s, x), data at s = t0.
/// Supports s_end < t0 (backward integration).
Trajectory integrate_flow(const Potential& pot, double t0, PhasePoint p0, double s_end,
                          std::size_t n_steps);

/// Endpoint-only variant of integrate_flow.
PhasePoint flow_endpoint(const Potential& pot, double t0, PhasePoint p0, double s_end,
                         std::size_t n_steps);

/// The state at s = 0 of the trajectory with data x(t0) = x, xi(t0) = lambda xi.
PhasePoint backward_endpoint(const Potential& pot, double t0, double x, double xi,
                             double lambda, std::size_t n_steps);

/// c_tilde = integral_0^pi sin(tau) v0_grad(tau, -xi sin(tau)) dtau for a
/// degree-0 homogeneous v0_grad, by adaptive composite Simpson quadrature.
/// The large-lambda limit of the backward position is -x - c_tilde.
double asymptotic_shift(const std::function<double(double, double)>& v0_grad, double xi);

struct GrowthFit {
    double slope;
    double residual;
};

/// Least-squares slope of log |x(0; pi, x, lambda xi)| against log lambda.
GrowthFit growth_exponent(const Potential& pot, double x, double xi,
                          const std::vector<double>& lambdas, std::size_t n_steps);

struct DerivativeBound {
    int order;
    double c_alpha;   // smallest constant with |d^a v| <= C (1+|x|)^{rho-a} on the samples
    double argmax_x;  // sample where the ratio peaks
    bool violation;   // ratio keeps growing at the boundary of the sample range
};

struct AssumptionReport {
    std::vector<DerivativeBound> bounds;
    bool any_violation;
};

/// Central finite differences of orders 0..max_order at the sample points;
/// reports the empirical constants of the sub-quadratic bound and flags
/// ratios that grow toward the edge of the sampled range.
AssumptionReport validate_assumption(const Potential& pot, int max_order,
                                     const std::vector<double>& sample_points,
                                     double t = 0.0);

} // namespace wpk
