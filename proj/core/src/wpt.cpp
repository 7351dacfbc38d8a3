#include "wavepacket/wpt.hpp"

#include "wavepacket/fft.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wpk {

namespace {

void check_opts(const WptOptions& opts) {
    if (!(opts.eps_tail > 0.0 && opts.eps_tail < 1.0)) {
        throw std::invalid_argument("wpt: eps_tail must lie in (0, 1)");
    }
    if (!(opts.max_phase_step > 0.0)) {
        throw std::invalid_argument("wpt: max_phase_step must be positive");
    }
}

[[noreturn]] void coverage_error(double lo, double hi, const Grid1D& g) {
    std::ostringstream msg;
    msg << "wpt: sampled field on [" << g.x_min() << ", " << g.x_max()
        << ") does not cover the window support [" << lo << ", " << hi << "]";
    throw std::invalid_argument(msg.str());
}

// Trapezoid quadrature of conj(phi(y-x)) f(y) e^{-i y xi} over [lo, hi] with
// the step bounded so no factor advances more than max_phase_step radians
// per node. Also accumulates the L1 mass of the integrand.
template <typename WindowEval, typename SignalEval>
WptPointResult oscillatory_quadrature(WindowEval&& phi, SignalEval&& f, double x, double xi,
                                      double lo, double hi, double envelope_scale,
                                      double total_freq, double max_phase_step) {
    if (!(lo < hi)) return {Complex(0.0, 0.0), 0.0};
    const double step =
        std::min(envelope_scale / 6.0, max_phase_step / std::max(1.0, total_freq));
    const std::size_t n =
        std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil((hi - lo) / step)));
    const double h = (hi - lo) / static_cast<double>(n);

    Complex acc(0.0, 0.0);
    double l1 = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double y = lo + static_cast<double>(i) * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const Complex term = std::conj(phi(y - x)) * f(y) * std::polar(1.0, -y * xi);
        acc += w * term;
        l1 += w * std::abs(term);
    }
    return {acc * h, l1 * h};
}

WptPointResult point_analytic_signal(const SignalSpec& f, const WindowInstance& w, double x,
                                     double xi, const WptOptions& opts) {
    if (const auto* s = std::get_if<SampledRep>(&w.rep())) {
        // Sampled window: its own grid supplies the nodes. Accuracy at large
        // |xi| is limited by that grid's resolution.
        const Grid1D& g = s->field.grid;
        const Interval fs = f.effective_support();
        const double h = g.spacing();
        Complex acc(0.0, 0.0);
        double l1 = 0.0;
        for (std::size_t j = 0; j < g.n_points(); ++j) {
            const double y = x + g.point(j);
            if (y < fs.lo || y > fs.hi) continue;
            const Complex term = std::conj(s->field.values[j]) * f(y) * std::polar(1.0, -y * xi);
            acc += term;
            l1 += std::abs(term);
        }
        return {acc * h, l1 * h};
    }

    const double radius = w.support_radius(opts.eps_tail);
    const Interval fs = f.effective_support();
    const double lo = std::max(x - radius, fs.lo);
    const double hi = std::min(x + radius, fs.hi);
    const double total_freq =
        std::abs(xi) + f.osc_frequency_hint() + w.chirp_frequency_bound(radius);
    return oscillatory_quadrature([&w](double u) { return w.value(u); },
                                  [&f](double y) { return f(y); }, x, xi, lo, hi,
                                  w.envelope_scale(), total_freq, opts.max_phase_step);
}

WptPointResult point_sampled_signal(const SampledField& f, const WindowInstance& w, double x,
                                    double xi, const WptOptions& opts) {
    const Grid1D& g = f.grid;
    const double h = g.spacing();

    if (const auto* s = std::get_if<SampledRep>(&w.rep())) {
        if (!(s->field.grid == g)) {
            throw std::invalid_argument(
                "wpt: sampled window and sampled field must share one grid");
        }
        // phi(y_j - x) lands on grid nodes only when x is itself a node offset.
        const double k_real = x / h;
        const long k = std::lround(k_real);
        if (std::abs(k_real - static_cast<double>(k)) > 1e-9) {
            throw std::invalid_argument(
                "wpt: sampled-window transform requires x aligned to the grid");
        }
        Complex acc(0.0, 0.0);
        double l1 = 0.0;
        const long n = static_cast<long>(g.n_points());
        for (long j = 0; j < n; ++j) {
            const long ju = j - k;
            if (ju < 0 || ju >= n) continue;
            const double y = g.point(static_cast<std::size_t>(j));
            const Complex term =
                std::conj(s->field.values[static_cast<std::size_t>(ju)]) *
                f.values[static_cast<std::size_t>(j)] * std::polar(1.0, -y * xi);
            acc += term;
            l1 += std::abs(term);
        }
        return {acc * h, l1 * h};
    }

    const double radius = w.support_radius(opts.eps_tail);
    if (x - radius < g.x_min() || x + radius > g.x_max()) {
        coverage_error(x - radius, x + radius, g);
    }
    const auto j_lo = static_cast<std::size_t>(std::max(0.0, std::ceil((x - radius - g.x_min()) / h)));
    const auto j_hi = static_cast<std::size_t>(
        std::min(static_cast<double>(g.n_points() - 1), std::floor((x + radius - g.x_min()) / h)));
    Complex acc(0.0, 0.0);
    double l1 = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        const double y = g.point(j);
        const Complex term = std::conj(w.value(y - x)) * f.values[j] * std::polar(1.0, -y * xi);
        acc += term;
        l1 += std::abs(term);
    }
    return {acc * h, l1 * h};
}

} // namespace

WptPointResult wpt_point_detailed(const SignalSpec& f, const WindowInstance& w, double x,
                                  double xi, const WptOptions& opts) {
    check_opts(opts);
    return point_analytic_signal(f, w, x, xi, opts);
}

WptPointResult wpt_point_detailed(const SampledField& f, const WindowInstance& w, double x,
                                  double xi, const WptOptions& opts) {
    check_opts(opts);
    return point_sampled_signal(f, w, x, xi, opts);
}

Complex wpt_point(const SignalSpec& f, const WindowInstance& w, double x, double xi,
                  const WptOptions& opts) {
    return wpt_point_detailed(f, w, x, xi, opts).value;
}

Complex wpt_point(const SampledField& f, const WindowInstance& w, double x, double xi,
                  const WptOptions& opts) {
    return wpt_point_detailed(f, w, x, xi, opts).value;
}

WptGridResult wpt_grid(const SampledField& f, const WindowInstance& w,
                       const std::vector<double>& x_grid, const WptOptions& opts) {
    check_opts(opts);
    if (x_grid.empty()) throw std::invalid_argument("wpt_grid: empty x_grid");

    const Grid1D& g = f.grid;
    const std::size_t n = g.n_points();
    const double h = g.spacing();
    const double radius = w.support_radius(opts.eps_tail);
    if (2.0 * radius > g.length()) {
        coverage_error(-radius, radius, g);
    }

    // Ascending frequency grid; wrap index (m + n/2) mod n maps into FFT order.
    const double d_xi = 2.0 * M_PI / (static_cast<double>(n) * h);
    std::vector<double> xi_grid(n);
    for (std::size_t m = 0; m < n; ++m) {
        xi_grid[m] = (static_cast<double>(m) - static_cast<double>(n / 2)) * d_xi;
    }

    WptGridResult result{x_grid, xi_grid, std::vector<Complex>(x_grid.size() * n), g};

    std::vector<Complex> buf(n);
    std::vector<Complex> window_on_grid;
    const auto* sampled_w = std::get_if<SampledRep>(&w.rep());
    if (sampled_w && !(sampled_w->field.grid == g)) {
        throw std::invalid_argument("wpt_grid: sampled window must share the field grid");
    }

    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
        const double x = x_grid[ix];
        std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
        if (sampled_w) {
            const double k_real = x / h;
            const long k = std::lround(k_real);
            if (std::abs(k_real - static_cast<double>(k)) > 1e-9) {
                throw std::invalid_argument(
                    "wpt_grid: sampled-window transform requires x aligned to the grid");
            }
            const long nn = static_cast<long>(n);
            for (long j = 0; j < nn; ++j) {
                const long ju = j - k;
                if (ju < 0 || ju >= nn) continue;
                buf[static_cast<std::size_t>(j)] =
                    std::conj(sampled_w->field.values[static_cast<std::size_t>(ju)]) *
                    f.values[static_cast<std::size_t>(j)];
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) {
                const double u = g.point(j) - x;
                if (std::abs(u) > radius) continue;
                buf[j] = std::conj(w.value(u)) * f.values[j];
            }
        }
        fft_forward(buf);
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t k = (m + n / 2) % n;
            result.values[ix * n + m] =
                h * std::polar(1.0, -g.x_min() * xi_grid[m]) * buf[k];
        }
    }
    return result;
}

namespace {

struct EmbeddingLayout {
    std::size_t offset;
    std::size_t stride;
};

EmbeddingLayout embedding_layout(const WptGridResult& F) {
    const Grid1D& g = F.source_grid;
    const double h = g.spacing();
    if (F.x_grid.size() < 2) {
        throw std::invalid_argument("wpt_adjoint: need at least two x samples");
    }
    const double hy = F.x_grid[1] - F.x_grid[0];
    const double stride_real = hy / h;
    const long stride = std::lround(stride_real);
    const double off_real = (F.x_grid[0] - g.x_min()) / h;
    const long offset = std::lround(off_real);
    if (stride < 1 || std::abs(stride_real - static_cast<double>(stride)) > 1e-9 ||
        std::abs(off_real - static_cast<double>(offset)) > 1e-9 || offset < 0) {
        throw std::invalid_argument(
            "wpt_adjoint: x_grid must be a uniform subgrid of the source grid");
    }
    for (std::size_t i = 0; i < F.x_grid.size(); ++i) {
        const double expect = g.x_min() + static_cast<double>(offset + static_cast<long>(i) * stride) * h;
        if (std::abs(F.x_grid[i] - expect) > 1e-9 * std::max(1.0, std::abs(expect))) {
            throw std::invalid_argument("wpt_adjoint: x_grid is not uniformly embedded");
        }
    }
    const std::size_t last = static_cast<std::size_t>(offset) +
                             (F.x_grid.size() - 1) * static_cast<std::size_t>(stride);
    if (last >= g.n_points()) {
        throw std::invalid_argument("wpt_adjoint: x_grid exceeds the source grid");
    }
    return {static_cast<std::size_t>(offset), static_cast<std::size_t>(stride)};
}

} // namespace

SampledField wpt_adjoint(const WptGridResult& F, const WindowInstance& w) {
    const Grid1D& g = F.source_grid;
    const std::size_t n = g.n_points();
    const double h = g.spacing();
    if (F.values.size() != F.x_grid.size() * F.xi_grid.size()) {
        throw std::invalid_argument("wpt_adjoint: inconsistent value array");
    }
    const EmbeddingLayout layout = embedding_layout(F);
    const double hy = F.x_grid.size() > 1 ? F.x_grid[1] - F.x_grid[0] : h;
    const double h_xi = F.xi_grid.size() > 1 ? F.xi_grid[1] - F.xi_grid[0] : 1.0;

    // Kernel of the inner y-convolution: psi at signed grid offsets.
    std::vector<Complex> kernel_fft(n, Complex(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (j < n / 2) ? static_cast<double>(j) * h
                                     : (static_cast<double>(j) - static_cast<double>(n)) * h;
        kernel_fft[j] = w.value(u);
    }
    fft_forward(kernel_fft);

    std::vector<Complex> out(n, Complex(0.0, 0.0));
    std::vector<Complex> slice(n);
    const std::size_t n_xi = F.xi_grid.size();
    const std::size_t n_y = F.x_grid.size();

    for (std::size_t k = 0; k < n_xi; ++k) {
        bool all_zero = true;
        for (std::size_t i = 0; i < n_y; ++i) {
            if (F.values[i * n_xi + k] != Complex(0.0, 0.0)) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) continue;

        std::fill(slice.begin(), slice.end(), Complex(0.0, 0.0));
        for (std::size_t i = 0; i < n_y; ++i) {
            slice[layout.offset + i * layout.stride] = F.values[i * n_xi + k];
        }
        fft_forward(slice);
        for (std::size_t j = 0; j < n; ++j) slice[j] *= kernel_fft[j];
        fft_inverse(slice);

        const double xi = F.xi_grid[k];
        // e^{i x_j xi} by geometric recurrence along the row, refreshed
        // periodically to keep roundoff drift in check.
        const Complex step = std::polar(1.0, h * xi);
        Complex phase = std::polar(1.0, g.x_min() * xi);
        const double weight = hy * h_xi;
        for (std::size_t j = 0; j < n; ++j) {
            if ((j & 1023u) == 0u) phase = std::polar(1.0, g.point(j) * xi);
            out[j] += weight * phase * slice[j];
            phase *= step;
        }
    }
    return SampledField(g, std::move(out));
}

SampledField invert(const WptGridResult& F, const WindowInstance& analysis_w,
                    const WindowInstance& synthesis_w) {
    const Complex ip = window_inner_product(synthesis_w, analysis_w);
    if (std::abs(ip) < 1e-12) {
        std::ostringstream msg;
        msg << "invert: window pair is numerically orthogonal, |<psi, phi>| = " << std::abs(ip);
        throw std::invalid_argument(msg.str());
    }
    SampledField out = wpt_adjoint(F, synthesis_w);
    const Complex scale = 1.0 / (2.0 * M_PI * ip);
    for (Complex& z : out.values) z *= scale;
    return out;
}

} // namespace wpk
