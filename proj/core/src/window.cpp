#include "wavepacket/window.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpk {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

double hermite_support_w(double eps_rel) {
    // Smallest w with w e^{-w^2/2 + 1/2} <= eps_rel (peak of w e^{-w^2/2}
    // normalized to 1). Monotone beyond w = 1; bisection is plenty.
    double lo = 1.0, hi = 64.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = mid * std::exp(-0.5 * mid * mid + 0.5);
        (v > eps_rel ? lo : hi) = mid;
    }
    return hi;
}

} // namespace

WindowSpec::WindowSpec(Base base, double b) : base_(std::move(base)), b_(b) {
    if (!(b > 0.0 && b < 1.0)) {
        throw std::invalid_argument("WindowSpec: scale exponent b must satisfy 0 < b < 1");
    }
    if (const auto* g = std::get_if<GaussianBase>(&base_)) {
        if (!(g->a0.real() > 0.0)) {
            throw std::invalid_argument("WindowSpec: gaussian base needs Re a0 > 0");
        }
        norm_ = std::pow(M_PI / g->a0.real(), 0.25);
    } else if (std::holds_alternative<Hermite1Base>(base_)) {
        norm_ = std::sqrt(0.5 * kSqrtPi);
    } else {
        const auto& c = std::get<CustomBase>(base_);
        norm_ = l2_norm(c.profile);
        if (!(norm_ > 0.0)) {
            throw std::invalid_argument("WindowSpec: custom profile must not be identically zero");
        }
    }
}

WindowSpec WindowSpec::gaussian(Complex a0, double b) { return WindowSpec(GaussianBase{a0}, b); }
WindowSpec WindowSpec::hermite1(double b) { return WindowSpec(Hermite1Base{}, b); }
WindowSpec WindowSpec::custom(SampledField profile, double b) {
    return WindowSpec(CustomBase{std::move(profile)}, b);
}

WindowInstance::WindowInstance(Rep rep, double lambda, double b, double time_tag)
    : rep_(std::move(rep)), lambda_(lambda), b_(b), time_tag_(time_tag) {
    if (!(lambda >= 1.0)) {
        throw std::domain_error("WindowInstance: lambda must be >= 1");
    }
    if (const auto* g = std::get_if<GaussianChirpRep>(&rep_)) {
        if (!(g->width.real() > 0.0)) {
            throw std::invalid_argument("WindowInstance: gaussian chirp needs Re a > 0");
        }
    } else if (const auto* h = std::get_if<HermiteChirpRep>(&rep_)) {
        if (!(h->width.real() > 0.0)) {
            throw std::invalid_argument("WindowInstance: hermite chirp needs Re a > 0");
        }
    }
}

const GaussianChirpRep& WindowInstance::gaussian_chirp() const {
    if (const auto* g = std::get_if<GaussianChirpRep>(&rep_)) return *g;
    throw std::logic_error("WindowInstance: not a gaussian chirp");
}

const SampledRep& WindowInstance::sampled() const {
    if (const auto* s = std::get_if<SampledRep>(&rep_)) return *s;
    throw std::logic_error("WindowInstance: not sampled");
}

Complex WindowInstance::value(double u) const {
    return std::visit(
        [u](const auto& r) -> Complex {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, GaussianChirpRep>) {
                return r.amplitude * std::exp(-0.5 * r.width * (u * u));
            } else if constexpr (std::is_same_v<T, HermiteChirpRep>) {
                return r.amplitude * (r.scale * u) * std::exp(-0.5 * r.width * (u * u));
            } else {
                const Grid1D& g = r.field.grid;
                if (u < g.x_min() || u >= g.x_max()) return Complex(0.0, 0.0);
                const double t = (u - g.x_min()) / g.spacing();
                const std::size_t i = std::min(static_cast<std::size_t>(t), g.n_points() - 1);
                const double frac = t - static_cast<double>(i);
                const Complex lo = r.field.values[i];
                const Complex hi = (i + 1 < g.n_points()) ? r.field.values[i + 1] : Complex(0, 0);
                return lo + frac * (hi - lo);
            }
        },
        rep_);
}

double WindowInstance::support_radius(double eps_tail) const {
    if (!(eps_tail > 0.0 && eps_tail < 1.0)) {
        throw std::invalid_argument("WindowInstance: eps_tail must lie in (0, 1)");
    }
    return std::visit(
        [eps_tail](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, GaussianChirpRep>) {
                return std::sqrt(2.0 * std::log(1.0 / eps_tail) / r.width.real());
            } else if constexpr (std::is_same_v<T, HermiteChirpRep>) {
                return hermite_support_w(eps_tail) / std::sqrt(r.width.real());
            } else {
                const auto& f = r.field;
                double peak = 0.0;
                for (const Complex& z : f.values) peak = std::max(peak, std::abs(z));
                if (peak == 0.0) return 0.0;
                double radius = 0.0;
                for (std::size_t i = 0; i < f.values.size(); ++i) {
                    if (std::abs(f.values[i]) > eps_tail * peak) {
                        radius = std::max(radius, std::abs(f.grid.point(i)));
                    }
                }
                return radius + f.grid.spacing();
            }
        },
        rep_);
}

double WindowInstance::max_abs() const {
    return std::visit(
        [](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, GaussianChirpRep>) {
                return std::abs(r.amplitude);
            } else if constexpr (std::is_same_v<T, HermiteChirpRep>) {
                return std::abs(r.amplitude) * r.scale / std::sqrt(r.width.real()) *
                       std::exp(-0.5);
            } else {
                double peak = 0.0;
                for (const Complex& z : r.field.values) peak = std::max(peak, std::abs(z));
                return peak;
            }
        },
        rep_);
}

double WindowInstance::l2_norm() const {
    return std::visit(
        [](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, GaussianChirpRep>) {
                return std::abs(r.amplitude) * std::pow(M_PI / r.width.real(), 0.25);
            } else if constexpr (std::is_same_v<T, HermiteChirpRep>) {
                const double re = r.width.real();
                return std::abs(r.amplitude) * r.scale * std::sqrt(0.5 * kSqrtPi) *
                       std::pow(re, -0.75);
            } else {
                return wpk::l2_norm(r.field);
            }
        },
        rep_);
}

double WindowInstance::chirp_frequency_bound(double radius) const {
    return std::visit(
        [radius](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SampledRep>) {
                (void)r;
                return 0.0;
            } else {
                return std::abs(r.width.imag()) * radius;
            }
        },
        rep_);
}

double WindowInstance::envelope_scale() const {
    return std::visit(
        [](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SampledRep>) {
                return r.field.grid.spacing() * 8.0;
            } else {
                return 1.0 / std::sqrt(r.width.real());
            }
        },
        rep_);
}

WindowInstance scaled_window(const WindowSpec& spec, double lambda) {
    if (!(lambda >= 1.0)) {
        throw std::domain_error("scaled_window: lambda must be >= 1");
    }
    const double b = spec.b();
    const double amp = std::pow(lambda, 0.5 * b);
    const double dil = std::pow(lambda, b);
    return std::visit(
        [&](const auto& base) -> WindowInstance {
            using T = std::decay_t<decltype(base)>;
            if constexpr (std::is_same_v<T, GaussianBase>) {
                return WindowInstance(GaussianChirpRep{Complex(amp, 0.0), base.a0 * dil * dil},
                                      lambda, b, 0.0);
            } else if constexpr (std::is_same_v<T, Hermite1Base>) {
                return WindowInstance(HermiteChirpRep{Complex(amp, 0.0), Complex(dil * dil, 0.0), dil},
                                      lambda, b, 0.0);
            } else {
                // Dilation maps grid nodes to grid nodes: sample exactly on
                // the shrunken grid instead of interpolating.
                const Grid1D& g = base.profile.grid;
                Grid1D scaled(g.x_min() / dil, g.x_max() / dil, g.n_points());
                std::vector<Complex> values(g.n_points());
                for (std::size_t i = 0; i < values.size(); ++i) {
                    values[i] = amp * base.profile.values[i];
                }
                return WindowInstance(SampledRep{SampledField(scaled, std::move(values))},
                                      lambda, b, 0.0);
            }
        },
        spec.base());
}

namespace {

Complex quadrature_inner(const WindowInstance& psi, const WindowInstance& phi) {
    // Fallback for sampled representations: trapezoid on the intersection of
    // the effective supports, step fine enough for both envelopes.
    const double eps = 1e-14;
    const double r = std::max(psi.support_radius(eps), phi.support_radius(eps));
    const double step = std::min(psi.envelope_scale(), phi.envelope_scale()) / 16.0;
    const std::size_t n = std::max<std::size_t>(64, static_cast<std::size_t>(2.0 * r / step));
    const double h = 2.0 * r / static_cast<double>(n);
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = -r + static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * std::conj(psi.value(u)) * phi.value(u);
    }
    return acc * h;
}

} // namespace

Complex window_inner_product(const WindowInstance& psi, const WindowInstance& phi) {
    const auto* gp = std::get_if<GaussianChirpRep>(&psi.rep());
    const auto* gq = std::get_if<GaussianChirpRep>(&phi.rep());
    const auto* hp = std::get_if<HermiteChirpRep>(&psi.rep());
    const auto* hq = std::get_if<HermiteChirpRep>(&phi.rep());
    if (gp && gq) {
        const Complex c = std::conj(gp->width) + gq->width;
        return std::conj(gp->amplitude) * gq->amplitude * std::sqrt(2.0 * M_PI / c);
    }
    if ((gp && hq) || (hp && gq)) {
        return Complex(0.0, 0.0); // odd integrand
    }
    if (hp && hq) {
        const Complex c = std::conj(hp->width) + hq->width;
        return std::conj(hp->amplitude) * hq->amplitude * hp->scale * hq->scale *
               std::sqrt(2.0 * M_PI) * std::pow(c, -1.5);
    }
    if (psi.is_sampled() && phi.is_sampled() && psi.sampled().field.grid == phi.sampled().field.grid) {
        return inner_product(psi.sampled().field, phi.sampled().field);
    }
    return quadrature_inner(psi, phi);
}

SampledField sample_window(const WindowInstance& w, const Grid1D& grid) {
    if (const auto* s = std::get_if<SampledRep>(&w.rep())) {
        if (s->field.grid == grid) return s->field;
    }
    std::vector<Complex> values(grid.n_points());
    for (std::size_t i = 0; i < grid.n_points(); ++i) {
        values[i] = w.value(grid.point(i));
    }
    return SampledField(grid, std::move(values));
}

} // namespace wpk
