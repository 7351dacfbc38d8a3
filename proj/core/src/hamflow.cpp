#include "wavepacket/hamflow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wpk {

namespace {

struct LinearFit {
    double slope;
    double intercept;
    double rms_residual;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    const double slope = (dn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ss += r * r;
    }
    return {slope, intercept, std::sqrt(ss / dn)};
}

} // namespace

Potential Potential::zero() {
    Potential p;
    p.kind_ = PotentialKind::zero;
    p.rho_ = 0.0;
    return p;
}

Potential Potential::power(double c, double rho) {
    if (!(rho >= 0.0 && rho < 2.0)) {
        throw std::invalid_argument("Potential::power: rho must lie in [0, 2)");
    }
    Potential p;
    p.kind_ = PotentialKind::power;
    p.rho_ = rho;
    p.c_ = c;
    return p;
}

Potential Potential::smoothed_abs(double a, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("Potential::smoothed_abs: eps must be positive");
    Potential p;
    p.kind_ = PotentialKind::smoothed_abs;
    p.rho_ = 1.0;
    p.a_ = a;
    p.eps_ = eps;
    return p;
}

Potential Potential::custom(double rho, std::function<double(double, double)> v,
                            std::function<double(double, double)> grad_v) {
    if (!(rho >= 0.0 && rho < 2.0)) {
        throw std::invalid_argument("Potential::custom: rho must lie in [0, 2)");
    }
    Potential p;
    p.kind_ = PotentialKind::custom;
    p.rho_ = rho;
    p.v_fn_ = std::move(v);
    p.grad_fn_ = std::move(grad_v);
    p.check_gradient();
    return p;
}

double Potential::v(double t, double x) const {
    switch (kind_) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::power:
            return c_ * std::pow(1.0 + x * x, 0.5 * rho_);
        case PotentialKind::smoothed_abs:
            return a_ * std::sqrt(x * x + eps_ * eps_);
        case PotentialKind::custom:
            return v_fn_(t, x);
    }
    return 0.0;
}

double Potential::grad_v(double t, double x) const {
    switch (kind_) {
        case PotentialKind::zero:
            return 0.0;
        case PotentialKind::power:
            return c_ * rho_ * x * std::pow(1.0 + x * x, 0.5 * rho_ - 1.0);
        case PotentialKind::smoothed_abs:
            return a_ * x / std::sqrt(x * x + eps_ * eps_);
        case PotentialKind::custom:
            return grad_fn_(t, x);
    }
    return 0.0;
}

void Potential::check_gradient() const {
    const double fd_h = 1e-5;
    for (double t : {0.0, 0.7}) {
        for (double x : {-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0}) {
            const double fd = (v(t, x + fd_h) - v(t, x - fd_h)) / (2.0 * fd_h);
            if (std::abs(fd - grad_v(t, x)) > 1e-6 * std::max(1.0, std::abs(grad_v(t, x)))) {
                std::ostringstream msg;
                msg << "Potential: grad_v disagrees with d/dx v at (t, x) = (" << t << ", " << x
                    << "); fd = " << fd << ", grad_v = " << grad_v(t, x);
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

PhasePoint exact_ho_flow(double t0, double s, PhasePoint p) {
    const double c = std::cos(s - t0);
    const double sn = std::sin(s - t0);
    return {p.x * c + p.xi * sn, -p.x * sn + p.xi * c};
}

namespace {

inline void rk4_step(const Potential& pot, double s, double h, PhasePoint& p) {
    const auto fx = [](const PhasePoint& q) { return q.xi; };
    const auto fxi = [&pot](double t, const PhasePoint& q) {
        return -q.x - pot.grad_v(t, q.x);
    };
    const PhasePoint k1{fx(p), fxi(s, p)};
    const PhasePoint p2{p.x + 0.5 * h * k1.x, p.xi + 0.5 * h * k1.xi};
    const PhasePoint k2{fx(p2), fxi(s + 0.5 * h, p2)};
    const PhasePoint p3{p.x + 0.5 * h * k2.x, p.xi + 0.5 * h * k2.xi};
    const PhasePoint k3{fx(p3), fxi(s + 0.5 * h, p3)};
    const PhasePoint p4{p.x + h * k3.x, p.xi + h * k3.xi};
    const PhasePoint k4{fx(p4), fxi(s + h, p4)};
    p.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    p.xi += h / 6.0 * (k1.xi + 2.0 * k2.xi + 2.0 * k3.xi + k4.xi);
}

template <typename Record>
PhasePoint integrate_core(const Potential& pot, double t0, PhasePoint p0, double s_end,
                          std::size_t n_steps, Record&& record) {
    if (n_steps < 1) throw std::invalid_argument("integrate_flow: n_steps must be >= 1");
    const double h = (s_end - t0) / static_cast<double>(n_steps);
    PhasePoint p = p0;
    record(t0, p);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double s = t0 + static_cast<double>(i) * h;
        rk4_step(pot, s, h, p);
        if (!std::isfinite(p.x) || !std::isfinite(p.xi)) {
            std::ostringstream msg;
            msg << "integrate_flow: non-finite state at step " << i + 1 << " (s = " << s + h << ")";
            throw FlowDivergenceError(i + 1, msg.str());
        }
        record(t0 + static_cast<double>(i + 1) * h, p);
    }
    return p;
}

} // namespace

Trajectory integrate_flow(const Potential& pot, double t0, PhasePoint p0, double s_end,
                          std::size_t n_steps) {
    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.states.reserve(n_steps + 1);
    integrate_core(pot, t0, p0, s_end, n_steps, [&traj](double s, PhasePoint p) {
        traj.times.push_back(s);
        traj.states.push_back(p);
    });
    return traj;
}

PhasePoint flow_endpoint(const Potential& pot, double t0, PhasePoint p0, double s_end,
                         std::size_t n_steps) {
    return integrate_core(pot, t0, p0, s_end, n_steps, [](double, PhasePoint) {});
}

PhasePoint backward_endpoint(const Potential& pot, double t0, double x, double xi, double lambda,
                             std::size_t n_steps) {
    if (!(lambda >= 1.0)) throw std::domain_error("backward_endpoint: lambda must be >= 1");
    if (t0 == 0.0) return {x, lambda * xi};
    return flow_endpoint(pot, t0, {x, lambda * xi}, 0.0, n_steps);
}

double asymptotic_shift(const std::function<double(double, double)>& v0_grad, double xi) {
    if (xi == 0.0) {
        throw std::domain_error("asymptotic_shift: xi = 0 leaves the direction undefined");
    }
    const auto integrand = [&](double tau) {
        return std::sin(tau) * v0_grad(tau, -xi * std::sin(tau));
    };
    const auto simpson = [&](std::size_t n) {
        const double h = M_PI / static_cast<double>(n);
        double acc = integrand(0.0) + integrand(M_PI);
        for (std::size_t i = 1; i < n; ++i) {
            acc += integrand(static_cast<double>(i) * h) * ((i % 2 == 1) ? 4.0 : 2.0);
        }
        return acc * h / 3.0;
    };
    std::size_t n = 64;
    double prev = simpson(n);
    for (; n <= (1u << 22); ) {
        n *= 2;
        const double next = simpson(n);
        if (std::abs(next - prev) < 1e-10 * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    return prev;
}

GrowthFit growth_exponent(const Potential& pot, double x, double xi,
                          const std::vector<double>& lambdas, std::size_t n_steps) {
    if (lambdas.size() < 4) {
        throw std::invalid_argument("growth_exponent: need at least 4 lambda values");
    }
    if (!std::is_sorted(lambdas.begin(), lambdas.end()) ||
        std::adjacent_find(lambdas.begin(), lambdas.end()) != lambdas.end()) {
        throw std::invalid_argument("growth_exponent: lambdas must be strictly increasing");
    }
    if (xi == 0.0) throw std::invalid_argument("growth_exponent: xi must be nonzero");

    std::vector<double> log_l, log_x;
    log_l.reserve(lambdas.size());
    log_x.reserve(lambdas.size());
    for (double lambda : lambdas) {
        const PhasePoint end = backward_endpoint(pot, M_PI, x, xi, lambda, n_steps);
        const double mag = std::abs(end.x);
        if (mag == 0.0) {
            std::ostringstream msg;
            msg << "growth_exponent: |x(0)| = 0 at lambda = " << lambda << " (degenerate fit)";
            throw std::runtime_error(msg.str());
        }
        log_l.push_back(std::log(lambda));
        log_x.push_back(std::log(mag));
    }
    const LinearFit fit = least_squares(log_l, log_x);
    return {fit.slope, fit.rms_residual};
}

namespace {

double central_derivative(const Potential& pot, double t, double x, int order, double h) {
    const auto vv = [&](double y) { return pot.v(t, y); };
    switch (order) {
        case 0:
            return vv(x);
        case 1:
            return (vv(x + h) - vv(x - h)) / (2.0 * h);
        case 2:
            return (vv(x + h) - 2.0 * vv(x) + vv(x - h)) / (h * h);
        case 3:
            return (vv(x + 2 * h) - 2.0 * vv(x + h) + 2.0 * vv(x - h) - vv(x - 2 * h)) /
                   (2.0 * h * h * h);
        case 4:
            return (vv(x + 2 * h) - 4.0 * vv(x + h) + 6.0 * vv(x) - 4.0 * vv(x - h) +
                    vv(x - 2 * h)) /
                   (h * h * h * h);
        default:
            throw std::invalid_argument("validate_assumption: max_order must be <= 4");
    }
}

} // namespace

AssumptionReport validate_assumption(const Potential& pot, int max_order,
                                     const std::vector<double>& sample_points, double t) {
    if (max_order < 0 || max_order > 4) {
        throw std::invalid_argument("validate_assumption: max_order must lie in [0, 4]");
    }
    if (sample_points.empty()) {
        throw std::invalid_argument("validate_assumption: no sample points");
    }
    std::vector<double> abs_sorted;
    abs_sorted.reserve(sample_points.size());
    for (double x : sample_points) abs_sorted.push_back(std::abs(x));
    std::sort(abs_sorted.begin(), abs_sorted.end());
    const double median_abs = abs_sorted[abs_sorted.size() / 2];
    const double outer_abs = abs_sorted[(3 * abs_sorted.size()) / 4];

    AssumptionReport report;
    report.any_violation = false;
    for (int order = 0; order <= max_order; ++order) {
        DerivativeBound bound{order, 0.0, 0.0, false};
        double inner_max = 0.0;
        double outer_max = 0.0;
        for (double x : sample_points) {
            const double h = 1e-2 * (1.0 + std::abs(x));
            const double d = central_derivative(pot, t, x, order, h);
            const double ratio =
                std::abs(d) / std::pow(1.0 + std::abs(x), pot.rho() - static_cast<double>(order));
            if (ratio > bound.c_alpha) {
                bound.c_alpha = ratio;
                bound.argmax_x = x;
            }
            if (std::abs(x) <= median_abs) inner_max = std::max(inner_max, ratio);
            if (std::abs(x) >= outer_abs) outer_max = std::max(outer_max, ratio);
        }
        // A bounded ratio settles toward a constant; steady growth at the
        // boundary of the sampled range signals an unbounded constant.
        bound.violation = outer_max > 4.0 * inner_max + 1e-300;
        // Tiny finite-difference residue on an exactly-polynomial tail is
        // not growth; ignore ratios at roundoff scale.
        if (outer_max < 1e-9) bound.violation = false;
        report.any_violation = report.any_violation || bound.violation;
        report.bounds.push_back(bound);
    }
    return report;
}

} // namespace wpk
