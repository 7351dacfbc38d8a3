#pragma once

#include "wavepacket/hamflow.hpp"
#include "wavepacket/propagator.hpp"
#include "wavepacket/signal.hpp"
#include "wavepacket/window.hpp"
#include "wavepacket/wpt.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wpk {

class DetectorConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampling plan and thresholds for wave-front-set detection. The scan
/// samples a neighborhood K of x0 (nbhd_samples points, half-width
/// nbhd_radius), the ray through xi0 perturbed by cone_halfwidth (3 factors),
/// and the |xi| band [1/a_band, a_band] (3 magnitudes), and measures the
/// decay of sup |W| across lambda_schedule.
struct DetectionConfig {
    double b = 0.25;
    std::vector<double> lambda_schedule; // default 2^{k/2}, k = 0..20
    double nbhd_radius = 0.1;
    double cone_halfwidth = 0.1;
    double a_band = 2.0;
    int nbhd_samples = 5;
    double order_singular_max = 2.0;
    double order_smooth_min = 4.0;
    std::size_t flow_steps = 4096; // RK4 steps per pi of backward time

    static std::vector<double> default_lambda_schedule(double log2_min = 0.0,
                                                       double log2_max = 10.0,
                                                       int per_octave = 2);
    static DetectionConfig with_defaults(double b);
};

/// Validates schedule monotonicity, threshold ordering, and (when rho is
/// supplied) the window-scale hypothesis b < min(1/2, (2 - rho)/2).
void validate(const DetectionConfig& cfg, std::optional<double> rho = std::nullopt);

/// Per-lambda suprema of |W| over the sampled K x Gamma band, the fitted
/// decay order, and the censoring bookkeeping that records when a measured
/// supremum fell below what quadrature roundoff can resolve.
struct DecayProfile {
    std::vector<double> lambdas;
    std::vector<double> sup_values;
    double fitted_order = 0.0;
    double fit_residual = 0.0;

    std::vector<double> measurement_floors;
    std::vector<bool> censored;
    std::size_t n_censored = 0;
};

enum class Verdict { singular, smooth, indeterminate };

std::string to_string(Verdict v);

struct WFVerdict {
    PhasePoint point;
    Verdict verdict;
    DecayProfile profile;
};

struct ScanResult {
    std::vector<WFVerdict> verdicts;
    std::vector<std::pair<std::size_t, std::string>> errors; // candidate index, message
};

/// Least-squares slope of -log(sup) against log(lambda) over the largest
/// half of the schedule; residual is the RMS of the fit. Values below 1e-300
/// are clipped; if every value is clipped the order is +infinity.
struct OrderFit {
    double order;
    double residual;
};
OrderFit fit_order(const std::vector<double>& lambdas, const std::vector<double>& sup_values);

using WindowProvider = std::function<WindowInstance(double lambda)>;

/// Decay profile of |W f(x, lambda xi)| at the candidate point, with windows
/// phi_{0,lambda} built from wspec (cfg.b overrides wspec's exponent) or
/// supplied by window_at for evolved-window scans.
DecayProfile decay_profile(const SignalSpec& f, const WindowSpec& wspec, PhasePoint p,
                           const DetectionConfig& cfg,
                           const WindowProvider& window_at = nullptr);
DecayProfile decay_profile(const SampledField& f, const WindowSpec& wspec, PhasePoint p,
                           const DetectionConfig& cfg,
                           const WindowProvider& window_at = nullptr);

Verdict classify(const DecayProfile& profile, const DetectionConfig& cfg);

/// Static detection: classifies each candidate (x0, xi0) against f itself.
/// Candidates are independent pure tasks; with threads > 1 they run on a
/// small pool and are merged by index, so results do not depend on
/// scheduling.
ScanResult static_wf_scan(const SignalSpec& f, const WindowSpec& wspec,
                          const std::vector<PhasePoint>& candidates,
                          const DetectionConfig& cfg, unsigned threads = 1);
ScanResult static_wf_scan(const SampledField& f, const WindowSpec& wspec,
                          const std::vector<PhasePoint>& candidates,
                          const DetectionConfig& cfg, unsigned threads = 1);

/// Dynamic detection along backward flows: for each candidate and lambda the
/// sampled (x, xi) band is carried to s = 0 by the classical flow with data
/// xi(t0) = lambda xi, the window is evolved to phi_lambda(-t0), and
/// |W_{phi_lambda(-t0)} u0| is measured at the endpoint with the full
/// endpoint momentum as the frequency argument. A smooth verdict asserts
/// that (x0, xi0) is not in the wave front set of u(t0, .).
ScanResult propagated_wf_scan(const SignalSpec& u0, double t0, const Potential& pot,
                              const WindowSpec& wspec,
                              const std::vector<PhasePoint>& candidates,
                              const DetectionConfig& cfg,
                              const PropagatorConfig* window_prop_cfg = nullptr,
                              unsigned threads = 1);

/// rho = 1 shift diagnostics: compares the numeric backward-position limit
/// with -x - c_tilde from the homogeneous part of grad v, and checks the
/// detector's singular cells against the shifted prediction.
struct ShiftCheckReport {
    double x_probe;
    double xi_probe;
    double lambda_limit;
    double numeric_limit_x0;   // x(0; pi, x, lambda xi) at the largest lambda
    double predicted_x0;       // -x - c_tilde
    double difference;         // numeric - predicted
    double c_tilde;
    std::vector<WFVerdict> verdicts;
    std::vector<double> predicted_singular_x; // one entry per scanned direction sign
    bool detector_matches_prediction;         // within one candidate-grid cell
};

ShiftCheckReport shift_limit_check(const SignalSpec& u0, const Potential& pot,
                                   const WindowSpec& wspec, const DetectionConfig& cfg,
                                   PhasePoint probe, double lambda_limit,
                                   const std::vector<PhasePoint>& candidates);

} // namespace wpk
