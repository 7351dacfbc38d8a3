#pragma once

#include "wavepacket/grid.hpp"
#include "wavepacket/signal.hpp"

#include <optional>
#include <variant>

namespace wpk {

/// phi0(x) = exp(-a0 x^2 / 2), Re a0 > 0.
struct GaussianBase {
    Complex a0;
};

/// phi0(x) = x exp(-x^2 / 2) (first Hermite function, odd).
struct Hermite1Base {};

/// Arbitrary sampled profile.
struct CustomBase {
    SampledField profile;
};

/// Window prototype phi0 together with the scale exponent b of the family
/// phi_{0,lambda}(x) = lambda^{b/2} phi0(lambda^b x).
class WindowSpec {
public:
    using Base = std::variant<GaussianBase, Hermite1Base, CustomBase>;

    WindowSpec(Base base, double b);

    static WindowSpec gaussian(Complex a0, double b);
    static WindowSpec hermite1(double b);
    static WindowSpec custom(SampledField profile, double b);

    const Base& base() const { return base_; }
    double b() const { return b_; }
    /// L2 norm of the unscaled prototype (analytic for gaussian/hermite1).
    double base_l2_norm() const { return norm_; }

    WindowSpec with_b(double b) const { return WindowSpec(base_, b); }

private:
    Base base_;
    double b_;
    double norm_;
};

/// A e^{-a u^2 / 2}, Re a > 0.
struct GaussianChirpRep {
    Complex amplitude;
    Complex width; // the exponent coefficient a
};

/// A (s u) e^{-a u^2 / 2}: lambda-scaled Hermite window, closed under the
/// lambda^b dilation but not under harmonic evolution.
struct HermiteChirpRep {
    Complex amplitude;
    Complex width;
    double scale;
};

struct SampledRep {
    SampledField field;
};

/// A concrete window: either phi_{0,lambda} or its harmonic-oscillator
/// evolution phi_lambda(t, .). time_tag records the t of the evolution
/// (0 means unevolved).
class WindowInstance {
public:
    using Rep = std::variant<GaussianChirpRep, HermiteChirpRep, SampledRep>;

    WindowInstance(Rep rep, double lambda, double b, double time_tag);

    const Rep& rep() const { return rep_; }
    double lambda() const { return lambda_; }
    double b() const { return b_; }
    double time_tag() const { return time_tag_; }

    bool is_gaussian_chirp() const { return std::holds_alternative<GaussianChirpRep>(rep_); }
    bool is_sampled() const { return std::holds_alternative<SampledRep>(rep_); }
    const GaussianChirpRep& gaussian_chirp() const;
    const SampledRep& sampled() const;

    /// Pointwise value phi(u). For sampled windows u must hit a grid node
    /// up to rounding; use the node accessors in quadratures instead.
    Complex value(double u) const;

    /// Radius R such that |phi(u)| <= eps_tail * max|phi| for |u| > R.
    double support_radius(double eps_tail) const;

    double max_abs() const;
    double l2_norm() const;

    /// Upper bound on the chirp's instantaneous frequency over |u| <= R.
    double chirp_frequency_bound(double radius) const;

    /// Width scale of |phi|, used to resolve the envelope in quadratures.
    double envelope_scale() const;

private:
    Rep rep_;
    double lambda_;
    double b_;
    double time_tag_;
};

/// phi_{0,lambda}(x) = lambda^{b/2} phi0(lambda^b x). Throws std::domain_error
/// for lambda < 1. For a Gaussian base a0 this is the chirp
/// (A, a) = (lambda^{b/2}, a0 lambda^{2b}).
WindowInstance scaled_window(const WindowSpec& spec, double lambda);

/// <psi, phi> = integral conj(psi) phi; closed form for analytic pairs,
/// quadrature otherwise.
Complex window_inner_product(const WindowInstance& psi, const WindowInstance& phi);

/// Samples the window on a grid (for numeric evolution and plotting).
SampledField sample_window(const WindowInstance& w, const Grid1D& grid);

} // namespace wpk
