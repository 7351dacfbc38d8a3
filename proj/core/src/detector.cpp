#include "wavepacket/detector.hpp"

#include "wavepacket/window_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace wpk {

namespace {

constexpr double kClipFloor = 1e-300;
// Measurement floors: quadrature roundoff relative to the integrand's L1
// mass, plus the support-truncation tail relative to the Cauchy-Schwarz
// scale. Suprema at or below the floor certify decay but carry no slope
// information, so the fit treats them as censored upper bounds.
constexpr double kRoundoffFactor = 64.0 * std::numeric_limits<double>::epsilon();
constexpr double kTailFactor = 4e-12;

struct LinearFit {
    double slope;
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
    const double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / dn;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (slope * xs[i] + intercept);
        ss += r * r;
    }
    return {slope, std::sqrt(ss / dn)};
}

} // namespace

std::vector<double> DetectionConfig::default_lambda_schedule(double log2_min, double log2_max,
                                                             int per_octave) {
    if (!(log2_max >= log2_min) || per_octave < 1) {
        throw DetectorConfigError("default_lambda_schedule: bad range");
    }
    std::vector<double> schedule;
    const int steps = static_cast<int>(std::round((log2_max - log2_min) * per_octave));
    schedule.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        schedule.push_back(
            std::exp2(log2_min + static_cast<double>(k) / static_cast<double>(per_octave)));
    }
    return schedule;
}

DetectionConfig DetectionConfig::with_defaults(double b) {
    DetectionConfig cfg;
    cfg.b = b;
    cfg.lambda_schedule = default_lambda_schedule();
    return cfg;
}

void validate(const DetectionConfig& cfg, std::optional<double> rho) {
    if (!(cfg.b > 0.0 && cfg.b < 1.0)) {
        throw DetectorConfigError("DetectionConfig: b must satisfy 0 < b < 1");
    }
    if (cfg.lambda_schedule.size() < 4) {
        throw DetectorConfigError("DetectionConfig: lambda_schedule needs at least 4 entries");
    }
    if (cfg.lambda_schedule.front() < 1.0) {
        throw DetectorConfigError("DetectionConfig: lambda_schedule must start at >= 1");
    }
    for (std::size_t i = 1; i < cfg.lambda_schedule.size(); ++i) {
        if (!(cfg.lambda_schedule[i] > cfg.lambda_schedule[i - 1])) {
            throw DetectorConfigError("DetectionConfig: lambda_schedule must be strictly increasing");
        }
    }
    if (!(cfg.order_singular_max < cfg.order_smooth_min)) {
        throw DetectorConfigError(
            "DetectionConfig: order_singular_max must be below order_smooth_min");
    }
    if (cfg.nbhd_samples < 1 || !(cfg.nbhd_radius >= 0.0)) {
        throw DetectorConfigError("DetectionConfig: bad neighborhood sampling");
    }
    if (!(cfg.a_band >= 1.0) || !(cfg.cone_halfwidth >= 0.0 && cfg.cone_halfwidth < 1.0)) {
        throw DetectorConfigError("DetectionConfig: bad band parameters");
    }
    if (rho) {
        const double limit = std::min(0.5, 0.5 * (2.0 - *rho));
        if (!(cfg.b < limit)) {
            std::ostringstream msg;
            msg << "DetectionConfig: b = " << cfg.b << " violates b < min(1/2, (2 - rho)/2) = "
                << limit << " for rho = " << *rho;
            throw DetectorConfigError(msg.str());
        }
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::singular: return "singular";
        case Verdict::smooth: return "smooth";
        default: return "indeterminate";
    }
}

OrderFit fit_order(const std::vector<double>& lambdas, const std::vector<double>& sup_values) {
    if (lambdas.size() != sup_values.size()) {
        throw std::invalid_argument("fit_order: array length mismatch");
    }
    if (lambdas.size() < 4) {
        throw std::invalid_argument("fit_order: need at least 4 points");
    }
    const std::size_t start = lambdas.size() / 2; // largest half of the schedule
    std::vector<double> xs, ys;
    std::size_t clipped = 0;
    for (std::size_t i = start; i < lambdas.size(); ++i) {
        double s = sup_values[i];
        if (!(s > kClipFloor)) {
            ++clipped;
            continue;
        }
        xs.push_back(std::log(lambdas[i]));
        ys.push_back(-std::log(s));
    }
    const std::size_t total = lambdas.size() - start;
    if (clipped == total || xs.size() < 2) {
        // everything at the floor: decay outran the representable range
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    const LinearFit fit = least_squares(xs, ys);
    return {fit.slope, fit.rms_residual};
}

namespace {

struct SamplePlan {
    std::vector<double> x_samples;
    std::vector<double> xi_samples; // signed frequencies before the lambda factor
};

SamplePlan build_plan(PhasePoint p, const DetectionConfig& cfg) {
    if (p.xi == 0.0) {
        throw DetectorConfigError("detector: xi = 0 leaves the frequency direction undefined");
    }
    SamplePlan plan;
    const int n = cfg.nbhd_samples;
    if (n == 1) {
        plan.x_samples.push_back(p.x);
    } else {
        for (int i = 0; i < n; ++i) {
            plan.x_samples.push_back(p.x - cfg.nbhd_radius +
                                     2.0 * cfg.nbhd_radius * static_cast<double>(i) /
                                         static_cast<double>(n - 1));
        }
    }
    const double unit = (p.xi > 0.0) ? 1.0 : -1.0;
    const std::vector<double> mags = {1.0 / cfg.a_band, 1.0, cfg.a_band};
    const std::vector<double> dirs = {1.0 - cfg.cone_halfwidth, 1.0, 1.0 + cfg.cone_halfwidth};
    for (double m : mags) {
        for (double d : dirs) {
            plan.xi_samples.push_back(unit * m * d);
        }
    }
    std::sort(plan.xi_samples.begin(), plan.xi_samples.end());
    plan.xi_samples.erase(std::unique(plan.xi_samples.begin(), plan.xi_samples.end()),
                          plan.xi_samples.end());
    return plan;
}

// Shared tail of every profile: measurement floors, censoring flags and the
// censoring-aware order fit over the largest half of the schedule.
void finish_profile(DecayProfile& profile, double window_norm, double field_norm) {
    const std::size_t n = profile.lambdas.size();
    profile.censored.resize(n);
    profile.n_censored = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double floor_i =
            std::max({kClipFloor, kRoundoffFactor * profile.measurement_floors[i],
                      kTailFactor * window_norm * field_norm});
        profile.measurement_floors[i] = floor_i;
        profile.censored[i] = !(profile.sup_values[i] > floor_i);
        if (profile.censored[i]) ++profile.n_censored;
    }

    const std::size_t start = n / 2;
    std::vector<double> xs, ys;
    double last_unc_lambda = 0.0, last_unc_sup = 0.0;
    for (std::size_t i = start; i < n; ++i) {
        if (profile.censored[i]) continue;
        xs.push_back(std::log(profile.lambdas[i]));
        ys.push_back(-std::log(profile.sup_values[i]));
        last_unc_lambda = profile.lambdas[i];
        last_unc_sup = profile.sup_values[i];
    }
    if (xs.empty()) {
        profile.fitted_order = std::numeric_limits<double>::infinity();
        profile.fit_residual = 0.0;
        return;
    }
    double order = -std::numeric_limits<double>::infinity();
    double residual = 0.0;
    if (xs.size() >= 2) {
        const LinearFit fit = least_squares(xs, ys);
        order = fit.slope;
        residual = fit.rms_residual;
    }
    // A value that fell below the floor past the last measurable point still
    // bounds the decay order from below.
    for (std::size_t i = start; i < n; ++i) {
        if (!profile.censored[i]) continue;
        if (profile.lambdas[i] <= last_unc_lambda) continue;
        const double bound = std::log(last_unc_sup / profile.measurement_floors[i]) /
                             std::log(profile.lambdas[i] / last_unc_lambda);
        order = std::max(order, bound);
    }
    if (!std::isfinite(order) && order < 0.0) {
        // single uncensored point and nothing censored beyond it
        const OrderFit plain = fit_order(profile.lambdas, profile.sup_values);
        order = plain.order;
        residual = plain.residual;
    }
    profile.fitted_order = order;
    profile.fit_residual = residual;
}

template <typename Field>
double field_norm_of(const Field& f);

template <>
double field_norm_of(const SignalSpec& f) {
    return signal_l2_norm(f);
}
template <>
double field_norm_of(const SampledField& f) {
    return l2_norm(f);
}

template <typename Field>
DecayProfile decay_profile_impl(const Field& f, const WindowSpec& wspec, PhasePoint p,
                                const DetectionConfig& cfg, const WindowProvider& window_at) {
    validate(cfg);
    const SamplePlan plan = build_plan(p, cfg);
    const WindowSpec spec_b = wspec.with_b(cfg.b);
    const double field_norm = field_norm_of(f);

    DecayProfile profile;
    profile.lambdas = cfg.lambda_schedule;
    profile.sup_values.resize(profile.lambdas.size(), 0.0);
    profile.measurement_floors.resize(profile.lambdas.size(), 0.0);

    for (std::size_t li = 0; li < profile.lambdas.size(); ++li) {
        const double lambda = profile.lambdas[li];
        const WindowInstance win = window_at ? window_at(lambda) : scaled_window(spec_b, lambda);
        double sup = 0.0;
        double l1_sup = 0.0;
        for (double xs : plan.x_samples) {
            for (double xi : plan.xi_samples) {
                const WptPointResult r = wpt_point_detailed(f, win, xs, lambda * xi);
                sup = std::max(sup, std::abs(r.value));
                l1_sup = std::max(l1_sup, r.l1_mass);
            }
        }
        profile.sup_values[li] = sup;
        profile.measurement_floors[li] = l1_sup;
    }
    finish_profile(profile, wspec.base_l2_norm(), field_norm);
    return profile;
}

} // namespace

DecayProfile decay_profile(const SignalSpec& f, const WindowSpec& wspec, PhasePoint p,
                           const DetectionConfig& cfg, const WindowProvider& window_at) {
    return decay_profile_impl(f, wspec, p, cfg, window_at);
}

DecayProfile decay_profile(const SampledField& f, const WindowSpec& wspec, PhasePoint p,
                           const DetectionConfig& cfg, const WindowProvider& window_at) {
    return decay_profile_impl(f, wspec, p, cfg, window_at);
}

Verdict classify(const DecayProfile& profile, const DetectionConfig& cfg) {
    if (profile.fitted_order >= cfg.order_smooth_min) return Verdict::smooth;
    if (profile.fitted_order <= cfg.order_singular_max) return Verdict::singular;
    return Verdict::indeterminate;
}

namespace {

// Runs one pure task per candidate on `threads` workers and merges results
// by candidate index, so the output is independent of scheduling.
ScanResult run_scan(std::size_t n_candidates,
                    const std::function<WFVerdict(std::size_t)>& task, unsigned threads) {
    std::vector<std::optional<WFVerdict>> slots(n_candidates);
    std::vector<std::pair<std::size_t, std::string>> errors(n_candidates);
    std::vector<bool> failed(n_candidates, false);

    const auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                slots[i] = task(i);
            } catch (const std::exception& e) {
                failed[i] = true;
                errors[i] = {i, e.what()};
            }
        }
    };

    if (threads <= 1 || n_candidates <= 1) {
        worker(0, n_candidates);
    } else {
        const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(n_candidates));
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) {
            const std::size_t begin = n_candidates * w / n_workers;
            const std::size_t end = n_candidates * (w + 1) / n_workers;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    ScanResult result;
    for (std::size_t i = 0; i < n_candidates; ++i) {
        if (failed[i]) {
            result.errors.push_back(errors[i]);
        } else if (slots[i]) {
            result.verdicts.push_back(std::move(*slots[i]));
        }
    }
    return result;
}

template <typename Field>
ScanResult static_scan_impl(const Field& f, const WindowSpec& wspec,
                            const std::vector<PhasePoint>& candidates,
                            const DetectionConfig& cfg, unsigned threads) {
    validate(cfg);
    return run_scan(
        candidates.size(),
        [&](std::size_t i) {
            DecayProfile profile = decay_profile(f, wspec, candidates[i], cfg);
            return WFVerdict{candidates[i], classify(profile, cfg), std::move(profile)};
        },
        threads);
}

} // namespace

ScanResult static_wf_scan(const SignalSpec& f, const WindowSpec& wspec,
                          const std::vector<PhasePoint>& candidates, const DetectionConfig& cfg,
                          unsigned threads) {
    return static_scan_impl(f, wspec, candidates, cfg, threads);
}

ScanResult static_wf_scan(const SampledField& f, const WindowSpec& wspec,
                          const std::vector<PhasePoint>& candidates, const DetectionConfig& cfg,
                          unsigned threads) {
    return static_scan_impl(f, wspec, candidates, cfg, threads);
}

ScanResult propagated_wf_scan(const SignalSpec& u0, double t0, const Potential& pot,
                              const WindowSpec& wspec, const std::vector<PhasePoint>& candidates,
                              const DetectionConfig& cfg, const PropagatorConfig* window_prop_cfg,
                              unsigned threads) {
    validate(cfg, pot.rho());
    const WindowSpec spec_b = wspec.with_b(cfg.b);
    const double field_norm = signal_l2_norm(u0);
    const std::size_t flow_steps = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::llround(static_cast<double>(cfg.flow_steps) *
                                                  std::max(1.0, std::abs(t0) / M_PI))));

    // phi_lambda(-t0): closed-form chirp law for Gaussian bases, split-step
    // fallback otherwise. Built once, shared read-only across candidates.
    const bool gaussian_base = std::holds_alternative<GaussianBase>(wspec.base());
    std::vector<WindowInstance> evolved;
    evolved.reserve(cfg.lambda_schedule.size());
    for (double lambda : cfg.lambda_schedule) {
        const WindowInstance base = scaled_window(spec_b, lambda);
        if (t0 == 0.0) {
            evolved.push_back(base);
        } else if (gaussian_base) {
            evolved.push_back(evolve_gaussian_window(base, -t0));
        } else {
            const PropagatorConfig prop =
                window_prop_cfg ? *window_prop_cfg : PropagatorConfig::standard();
            evolved.push_back(evolve_window_numeric(base, -t0, prop));
        }
    }

    return run_scan(
        candidates.size(),
        [&](std::size_t ci) {
            const SamplePlan plan = build_plan(candidates[ci], cfg);
            DecayProfile profile;
            profile.lambdas = cfg.lambda_schedule;
            profile.sup_values.resize(profile.lambdas.size(), 0.0);
            profile.measurement_floors.resize(profile.lambdas.size(), 0.0);
            for (std::size_t li = 0; li < profile.lambdas.size(); ++li) {
                const double lambda = profile.lambdas[li];
                double sup = 0.0;
                double l1_sup = 0.0;
                for (double xs : plan.x_samples) {
                    for (double xi : plan.xi_samples) {
                        const PhasePoint end =
                            backward_endpoint(pot, t0, xs, xi, lambda, flow_steps);
                        const WptPointResult r =
                            wpt_point_detailed(u0, evolved[li], end.x, end.xi);
                        sup = std::max(sup, std::abs(r.value));
                        l1_sup = std::max(l1_sup, r.l1_mass);
                    }
                }
                profile.sup_values[li] = sup;
                profile.measurement_floors[li] = l1_sup;
            }
            finish_profile(profile, wspec.base_l2_norm(), field_norm);
            return WFVerdict{candidates[ci], classify(profile, cfg), std::move(profile)};
        },
        threads);
}

namespace {

std::function<double(double, double)> homogeneous_grad_part(const Potential& pot) {
    switch (pot.kind()) {
        case PotentialKind::zero:
            return [](double, double) { return 0.0; };
        case PotentialKind::smoothed_abs: {
            const double a = pot.abs_amplitude();
            return [a](double, double x) { return a * ((x > 0.0) - (x < 0.0)); };
        }
        case PotentialKind::power: {
            if (pot.rho() == 1.0) {
                const double c = pot.power_c();
                return [c](double, double x) { return c * ((x > 0.0) - (x < 0.0)); };
            }
            break;
        }
        default:
            break;
    }
    throw std::invalid_argument(
        "shift_limit_check: potential has no degree-0 homogeneous gradient part (rho must be 1)");
}

} // namespace

ShiftCheckReport shift_limit_check(const SignalSpec& u0, const Potential& pot,
                                   const WindowSpec& wspec, const DetectionConfig& cfg,
                                   PhasePoint probe, double lambda_limit,
                                   const std::vector<PhasePoint>& candidates) {
    if (!(lambda_limit >= 1.0)) {
        throw std::invalid_argument("shift_limit_check: lambda_limit must be >= 1");
    }
    const auto v0 = homogeneous_grad_part(pot);

    ShiftCheckReport report;
    report.x_probe = probe.x;
    report.xi_probe = probe.xi;
    report.lambda_limit = lambda_limit;
    report.c_tilde = asymptotic_shift(v0, probe.xi);
    report.predicted_x0 = -probe.x - report.c_tilde;
    report.numeric_limit_x0 =
        backward_endpoint(pot, M_PI, probe.x, probe.xi, lambda_limit, cfg.flow_steps).x;
    report.difference = report.numeric_limit_x0 - report.predicted_x0;

    ScanResult scan = propagated_wf_scan(u0, M_PI, pot, wspec, candidates, cfg);
    report.verdicts = std::move(scan.verdicts);

    // Grid resolution: one cell of the candidate x spacing.
    std::vector<double> xs;
    for (const auto& c : candidates) xs.push_back(c.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double cell = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < xs.size(); ++i) cell = std::min(cell, xs[i] - xs[i - 1]);

    bool all_match = true;
    for (double dir : {1.0, -1.0}) {
        bool any_candidate = false;
        for (const auto& v : report.verdicts) {
            if ((v.point.xi > 0.0) != (dir > 0.0)) continue;
            any_candidate = true;
        }
        if (!any_candidate) continue;
        const double c_dir = asymptotic_shift(v0, dir);
        double predicted = -std::numeric_limits<double>::infinity();
        for (const WfPoint& wf : u0.wave_front()) {
            // the backward limit -x0 - c must land on the singular support
            predicted = -wf.x_sing - c_dir;
            report.predicted_singular_x.push_back(predicted);
            bool found = false;
            bool in_range = predicted >= xs.front() - 0.5 * cell && predicted <= xs.back() + 0.5 * cell;
            for (const auto& v : report.verdicts) {
                if ((v.point.xi > 0.0) != (dir > 0.0)) continue;
                if (v.verdict == Verdict::singular && std::abs(v.point.x - predicted) <= cell) {
                    found = true;
                }
            }
            if (in_range && !found) all_match = false;
        }
        // singular cells away from every prediction are mismatches too
        for (const auto& v : report.verdicts) {
            if ((v.point.xi > 0.0) != (dir > 0.0)) continue;
            if (v.verdict != Verdict::singular) continue;
            bool near = false;
            for (const WfPoint& wf : u0.wave_front()) {
                if (std::abs(v.point.x - (-wf.x_sing - c_dir)) <= cell) near = true;
            }
            if (!near) all_match = false;
        }
    }
    report.detector_matches_prediction = all_match;
    return report;
}

} // namespace wpk
