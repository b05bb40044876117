#include "thzgeo/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thzgeo/errors.hpp"
#include "thzgeo/specfun.hpp"

namespace thzgeo {

namespace {

constexpr double kPi = std::numbers::pi;

// Nearest-TBS distance for the density parameter c = pi lambda_T r^2.
double distance_of_c(double c, double lambda_t) { return std::sqrt(c / (kPi * lambda_t)); }

// Substitution u = e^{-c}: int_0^inf e^{-c} g(c) dc = int_0^1 g(-ln u) du.
double c_of_u(double u) { return -std::log(u); }

// 1 - (the smallest power of two >= 1 - u_floor). Floors snapped this way put
// the outer quadrature's bisection nodes on a shared grid.
double snap_u_floor(double width) {
    if (!(width > 0.0)) return 1.0;
    const double snapped = std::exp2(std::ceil(std::log2(width)));
    return snapped >= 1.0 ? 0.0 : 1.0 - snapped;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

// ---------------------------------------------------------------------------
// Laplace transform

void LtOptions::validate() const {
    if (truncation_L < 1) throw DomainError("LtOptions: truncation_L must be >= 1");
    if (!(term_rel_tol > 0.0)) throw DomainError("LtOptions: term_rel_tol must be > 0");
    if (max_terms < truncation_L) throw DomainError("LtOptions: max_terms must be >= truncation_L");
    if (!(divergence_guard > 1.0)) throw DomainError("LtOptions: divergence_guard must be > 1");
}

LtResult lt_thz_conditional(Complex s, double r, const NetworkParams& p, const LtOptions& opts) {
    opts.validate();
    const DerivedConstants d = derive(p);
    if (!(r > 0.0) || !std::isfinite(r))
        throw DomainError("lt_thz_conditional: r must be > 0");
    if (!(p.k_a > 0.0))
        throw DomainError("lt_thz_conditional: k_a must be > 0 (use k_a >= 1e-4 for the limit)");
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw DomainError("lt_thz_conditional: s must be finite");
    if (s.real() < 0.0)
        throw DomainError("lt_thz_conditional: requires Re(s) >= 0");
    if (s == Complex{0.0, 0.0} || p.lambda_t == 0.0) return {Complex{1.0, 0.0}, 0, false};

    // Lambda(sigma) with sigma = s F S(r) in the units of interference.hpp.
    const double c = kPi * p.lambda_t * r * r;
    const double kappa = p.k_a * r;
    const Complex sigma = s * d.main_lobe_prob * thz_signal_power(r, p, d);
    const double log_mag = std::log(std::abs(sigma));
    const double phase = std::arg(-sigma);

    Complex sum{0.0, 0.0};
    double prev = 0.0, largest = 0.0;
    int growing = 0;
    int used = 0;
    bool failed = false;
    const int limit = opts.adaptive ? opts.max_terms : opts.truncation_L;
    for (int l = 1; l <= limit; ++l) {
        // Gamma(2-2l, l kappa) (l kappa)^{2l-2} = e^{-l kappa} etilde_{2l-1}(l kappa),
        // and the e^{-l kappa} cancels against sigma's e^{kappa} normalization.
        const double log_coef =
            std::log(exp_integral_en_scaled(2 * l - 1, l * kappa)) - std::lgamma(l + 1.0);
        const double mag = std::exp(l * log_mag + log_coef);
        const Complex term = -std::polar(mag, l * phase);
        sum += term;
        used = l;
        largest = std::max(largest, mag);
        if (l > 1 && mag > opts.divergence_guard * prev) {
            if (++growing >= 3) {
                failed = true;
                break;
            }
        } else {
            growing = 0;
        }
        prev = mag;
        if (!std::isfinite(mag)) {
            failed = true;
            break;
        }
        if (opts.adaptive && l >= opts.truncation_L && mag <= opts.term_rel_tol * std::abs(sum))
            break;
        if (opts.adaptive && l == limit) failed = true;
    }
    // Cancellation: the partial sum lost more digits than the tolerance allows.
    if (opts.adaptive && !failed && largest * 1e-16 > opts.term_rel_tol * std::abs(sum))
        failed = true;

    if (failed) {
        if (!opts.adaptive || !opts.integral_fallback)
            throw ConvergenceError("lt_thz_conditional: series diverged", used, prev);
        const InterferenceShape shape(kappa);
        const Complex lambda = shape.lambda_quadrature(sigma);
        return {std::exp(-2.0 * c * lambda), used, true};
    }
    return {std::exp(-2.0 * c * sum), used, false};
}

LtAverage lt_thz_average(double s, const NetworkParams& p, const LtOptions& opts,
                         const QuadratureSpec& outer) {
    p.validate();
    outer.validate();
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("lt_thz_average: s must be >= 0");
    LtAverage out;
    if (s == 0.0 || p.lambda_t == 0.0) {
        out.value = 1.0;
        return out;
    }
    auto f = [&](double u) {
        const double r = distance_of_c(c_of_u(u), p.lambda_t);
        const LtResult lt = lt_thz_conditional(Complex(s, 0.0), r, p, opts);
        out.max_terms_used = std::max(out.max_terms_used, lt.terms_used);
        out.used_integral = out.used_integral || lt.used_integral;
        return lt.value.real();
    };
    const auto res = integrate_adaptive<double>(f, 0.0, 1.0, outer);
    if (!res.converged)
        throw QuadratureError("lt_thz_average: quadrature did not converge", res.value,
                              res.abs_error);
    out.value = res.value;
    out.error_estimate = res.abs_error;
    return out;
}

// ---------------------------------------------------------------------------
// Results

std::string to_string(CoverageMethod m) {
    switch (m) {
        case CoverageMethod::series: return "series";
        case CoverageMethod::quadrature: return "quadrature";
        case CoverageMethod::asymptotic: return "asymptotic";
        case CoverageMethod::gil_pelaez: return "gil_pelaez";
        case CoverageMethod::closed_form: return "closed_form";
    }
    return "unknown";
}

CoverageResult make_coverage(double raw, CoverageMethod method, double error, int terms) {
    CoverageResult r;
    r.unclamped = raw;
    r.probability = clamp01(raw);
    r.method = method;
    r.estimated_error = error;
    r.terms_used = terms;
    return r;
}

// ---------------------------------------------------------------------------
// THz coverage

Complex cf_omega(double omega, const NetworkParams& p,
                 const std::function<double(double)>& serving_pdf,
                 const GilPelaezOptions& opts) {
    opts.validate();
    const DerivedConstants d = derive(p);
    if (!std::isfinite(omega)) throw DomainError("cf_omega: omega must be finite");
    if (omega == 0.0) return {1.0, 0.0};
    if (omega < 0.0) return std::conj(cf_omega(-omega, p, serving_pdf, opts));

    LtOptions lt;
    lt.adaptive = true;
    auto f = [&](double r) -> Complex {
        if (!(r > 0.0)) return {0.0, 0.0};
        const double w = serving_pdf(r);
        if (w == 0.0) return {0.0, 0.0};
        const double signal = thz_signal_power(r, p, d);
        const Complex l = lt_thz_conditional(Complex(0.0, -omega * d.tau_t), r, p, lt).value;
        return w * std::polar(1.0, -omega * signal) * l;
    };
    return integrate_to_infinity<Complex>(f, 0.0, opts.outer_quadrature).value;
}

ThzConditionalCoverage::ThzConditionalCoverage(const NetworkParams& p, std::vector<double> tau_t,
                                               const GilPelaezOptions& opts)
    : params_(p), derived_(derive(p)), tau_(std::move(tau_t)), opts_(opts) {
    opts_.validate();
    if (!(p.k_a > 0.0))
        throw DomainError("THz coverage: k_a must be > 0 (interference diverges without absorption)");
    for (double t : tau_)
        if (!(t >= 0.0)) throw DomainError("THz coverage: thresholds must be >= 0");

    // Past the distance where S / N0 falls to the smallest threshold the
    // conditional coverage is exactly zero.
    const double tau_min = tau_.empty() ? 0.0 : *std::min_element(tau_.begin(), tau_.end());
    if (p.lambda_t > 0.0 && p.n0_t > 0.0 && tau_min > 0.0) {
        auto above = [&](double log_r) {
            return thz_signal_power(std::exp(log_r), p, derived_) > tau_min * p.n0_t;
        };
        double lo = std::log(1e-12);
        double hi = std::log(std::sqrt(700.0 / (kPi * p.lambda_t)));
        if (!above(lo)) {
            noise_u_floor_ = 1.0;
        } else if (!above(hi)) {
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                (above(mid) ? lo : hi) = mid;
            }
            const double r = std::exp(hi);
            noise_u_floor_ = snap_u_floor(-std::expm1(-kPi * p.lambda_t * r * r));
        }
    }
}

const ThzConditionalCoverage::Entry& ThzConditionalCoverage::entry_at_u(double u) {
    auto it = memo_.find(u);
    if (it != memo_.end()) return it->second;

    const std::size_t m = tau_.size();
    Entry e{std::vector<double>(m, 0.0), 0.0, false};
    const double c = c_of_u(u);
    const double r = distance_of_c(c, params_.lambda_t);
    const double signal = thz_signal_power(r, params_, derived_);
    const double noise_ratio = params_.n0_t / signal;
    std::vector<double> w0(m);
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (tau_[i] == 0.0) {
            e.cov[i] = 1.0;
            w0[i] = -1.0;
            continue;
        }
        w0[i] = (1.0 / tau_[i] - noise_ratio) / derived_.main_lobe_prob;
        any = any || w0[i] > 0.0;
    }
    if (any && std::isfinite(signal) && signal > 0.0) {
        const InterferenceShape shape(params_.k_a * r);
        const InterferenceCdf cdf = interference_cdf(shape, c, w0, opts_);
        for (std::size_t i = 0; i < m; ++i)
            if (w0[i] > 0.0) e.cov[i] = cdf.cdf[i];
        e.error = cdf.error_estimate;
        e.truncated = cdf.truncated;
    }
    return memo_.emplace(u, std::move(e)).first->second;
}

const std::vector<double>& ThzConditionalCoverage::at_distance(double r) {
    if (!(r > 0.0)) throw DomainError("THz coverage: r must be > 0");
    const double c = kPi * params_.lambda_t * r * r;
    return entry_at_u(std::exp(-c)).cov;
}

ThzConditionalCoverage::Integrated ThzConditionalCoverage::integrate(
    const std::function<double(double)>& h, double u_min) {
    Integrated out;
    out.values.assign(tau_.size(), 0.0);
    if (params_.lambda_t == 0.0 || !(u_min < 1.0)) return out;
    u_min = std::max(u_min, 0.0);
    auto weight_at = [&](double u) { return h(distance_of_c(c_of_u(u), params_.lambda_t)); };
    // Where noise alone defeats every threshold only the weight accumulates.
    const double cut = std::max(u_min, noise_u_floor_);
    if (cut > u_min) {
        const auto w = integrate_adaptive<double>(weight_at, u_min, std::min(cut, 1.0),
                                                  opts_.outer_quadrature);
        if (!w.converged)
            throw QuadratureError("THz coverage: weight quadrature did not converge", w.value,
                                  w.abs_error);
        out.weight = w.value;
        out.error_estimate = w.abs_error;
        u_min = cut;
    }
    if (!(u_min < 1.0)) return out;
    constexpr double kNegligibleWeight = 1e-9;
    const std::size_t m = tau_.size();
    double max_error = 0.0;
    bool truncated = false;
    auto f = [&](double u) {
        const double weight = weight_at(u);
        std::vector<double> v(m + 1, 0.0);
        v[m] = weight;
        if (weight == 0.0) return v;
        const Entry& e = entry_at_u(u);
        for (std::size_t i = 0; i < m; ++i) v[i] = e.cov[i] * weight;
        // Nodes the weight suppresses cannot spoil the result.
        max_error = std::max(max_error, std::abs(weight) * e.error);
        truncated = truncated || (e.truncated && std::abs(weight) > kNegligibleWeight);
        return v;
    };
    const auto res = integrate_adaptive<std::vector<double>>(f, u_min, 1.0, opts_.outer_quadrature);
    if (!res.converged)
        throw QuadratureError("THz coverage: outer quadrature did not converge",
                              quad_detail::norm(res.value), res.abs_error);
    out.values = res.value;
    out.values.resize(m + 1, 0.0);
    out.weight += out.values[m];
    out.values.resize(m);
    out.error_estimate += res.abs_error + max_error;
    out.truncated = truncated;
    return out;
}

std::vector<CoverageResult> coverage_thz_only(const NetworkParams& p,
                                              std::span<const double> tau_t,
                                              const GilPelaezOptions& opts) {
    ThzConditionalCoverage cond(p, std::vector<double>(tau_t.begin(), tau_t.end()), opts);
    const auto integrated = cond.integrate([](double) { return 1.0; });
    std::vector<CoverageResult> out;
    for (double v : integrated.values) {
        CoverageResult r = make_coverage(v, CoverageMethod::gil_pelaez, integrated.error_estimate);
        r.truncated = integrated.truncated;
        out.push_back(r);
    }
    return out;
}

CoverageResult coverage_thz_only(const NetworkParams& p, const GilPelaezOptions& opts) {
    const double tau = rate_thresholds(p).tau_t;
    return coverage_thz_only(p, std::span<const double>(&tau, 1), opts).front();
}

// ---------------------------------------------------------------------------
// Association

void SeriesOptions::validate() const {
    if (truncation_J < 1) throw DomainError("SeriesOptions: truncation_J must be >= 1");
    if (!(divergence_guard > 0.0)) throw DomainError("SeriesOptions: divergence_guard must be > 0");
    if (!(tail_tol > 0.0)) throw DomainError("SeriesOptions: tail_tol must be > 0");
}

double rf_exclusion_mass(double r, const NetworkParams& p, const DerivedConstants& d) {
    if (p.lambda_r == 0.0 || d.k_ratio == 0.0) return 0.0;
    if (std::isinf(d.k_ratio)) return std::numeric_limits<double>::infinity();
    const double log_mass = std::log(kPi * p.lambda_r) +
                            (2.0 / p.alpha) * (std::log(d.k_ratio) + 2.0 * std::log(r)) +
                            2.0 * p.k_a * r / p.alpha;
    return std::exp(std::min(log_mass, 700.0));
}

double thz_assoc_u_floor(const NetworkParams& p, const DerivedConstants& d) {
    // exp(-40) is far below any quadrature tolerance; beyond this distance a
    // THz station is never selected.
    constexpr double kMassCut = 40.0;
    if (p.lambda_t == 0.0 || p.lambda_r == 0.0 || d.k_ratio == 0.0 || std::isinf(d.k_ratio))
        return 0.0;
    double lo = std::log(1e-12);
    double hi = std::log(std::sqrt(700.0 / (kPi * p.lambda_t)));
    if (rf_exclusion_mass(std::exp(hi), p, d) <= kMassCut) return 0.0;
    if (rf_exclusion_mass(std::exp(lo), p, d) >= kMassCut) return 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rf_exclusion_mass(std::exp(mid), p, d) < kMassCut ? lo : hi) = mid;
    }
    const double r = std::exp(hi);
    // Memoized conditional coverages are then shared across biases.
    return snap_u_floor(-std::expm1(-kPi * p.lambda_t * r * r));
}

double assoc_prob_thz_quadrature(const NetworkParams& p, const QuadratureSpec& quad) {
    const DerivedConstants d = derive(p);
    quad.validate();
    if (p.lambda_t == 0.0 || p.b_t == 0.0) return 0.0;
    if (p.lambda_r == 0.0) return 1.0;
    auto f = [&](double u) {
        const double r = distance_of_c(c_of_u(u), p.lambda_t);
        return std::exp(-rf_exclusion_mass(r, p, d));
    };
    const double u_floor = thz_assoc_u_floor(p, d);
    if (u_floor >= 1.0) return 0.0;
    return integrate_or_throw(f, u_floor, 1.0, quad, "assoc_prob_thz_quadrature");
}

double assoc_series_term(int j, const NetworkParams& p, bool at_zero) {
    const DerivedConstants d = derive(p);
    if (j < 0) throw DomainError("assoc_series_term: j must be >= 0");
    if (p.lambda_t == 0.0) throw DomainError("assoc_series_term: lambda_t must be > 0");
    const double beta = kPi * p.lambda_t;
    const double nu = 4.0 * j / p.alpha + 2.0;
    const double eta = at_zero ? 0.0 : -2.0 * j * p.k_a / p.alpha;
    const double z = eta / std::sqrt(2.0 * beta);
    double log_mag = std::log(2.0 * kPi * p.lambda_t) - 0.5 * nu * std::log(2.0 * beta) +
                     std::lgamma(nu) - std::lgamma(j + 1.0);
    if (j > 0) {
        if (p.lambda_r == 0.0 || d.k_ratio == 0.0) return 0.0;
        log_mag += j * (std::log(kPi * p.lambda_r) + (2.0 / p.alpha) * std::log(d.k_ratio));
    }
    if (at_zero) {
        const double b = nu - 0.5;
        log_mag += 0.5 * std::log(kPi) - (b / 2.0 + 0.25) * std::log(2.0) -
                   std::lgamma(0.75 + b / 2.0);
    } else {
        log_mag += eta * eta / (8.0 * beta) + log_parabolic_cylinder_dneg(nu, z);
    }
    const double mag = std::exp(log_mag);
    return j % 2 == 0 ? mag : -mag;
}

namespace {

SeriesResult assoc_series(const NetworkParams& p, const SeriesOptions& opts, bool at_zero,
                          const char* name) {
    const DerivedConstants d = derive(p);
    opts.validate();
    if (p.lambda_t == 0.0 || p.b_t == 0.0) return {0.0, 0, 0.0};
    if (p.lambda_r == 0.0 || d.k_ratio == 0.0) return {1.0, 1, 0.0};
    if (std::isinf(d.k_ratio)) return {0.0, 0, 0.0};
    if (!at_zero) {
        const double z_max = 2.0 * opts.truncation_J * p.k_a / p.alpha /
                             std::sqrt(2.0 * kPi * p.lambda_t);
        if (z_max > kPcfMaxAbsArg)
            throw ConvergenceError(std::string(name) +
                                       ": PCF argument out of range; use the quadrature form",
                                   0, z_max, ConvergenceError::Reason::out_of_range);
    }
    SeriesResult out;
    double prev = 1.0;
    for (int j = 0; j <= opts.truncation_J; ++j) {
        const double term = assoc_series_term(j, p, at_zero);
        const double mag = std::abs(term);
        out.value += term;
        out.terms_used = j + 1;
        out.last_term = term;
        if (!std::isfinite(mag) || mag > opts.divergence_guard ||
            (j > 0 && mag > opts.divergence_guard * prev))
            throw ConvergenceError(std::string(name) +
                                       ": series diverges; use assoc_prob_thz_quadrature",
                                   j + 1, term);
        if (j > 0 && mag < opts.tail_tol) return out;
        prev = mag;
    }
    throw ConvergenceError(std::string(name) + ": no convergence within truncation_J terms; "
                                               "use assoc_prob_thz_quadrature",
                           out.terms_used, out.last_term, ConvergenceError::Reason::term_limit);
}

}  // namespace

SeriesResult assoc_prob_thz_series(const NetworkParams& p, const SeriesOptions& opts) {
    return assoc_series(p, opts, false, "assoc_prob_thz_series");
}

SeriesResult assoc_prob_thz_asymptotic(const NetworkParams& p, const SeriesOptions& opts) {
    return assoc_series(p, opts, true, "assoc_prob_thz_asymptotic");
}

// ---------------------------------------------------------------------------
// Serving distances

double serving_distance_pdf_thz(double x, const NetworkParams& p, double p_assoc_thz) {
    const DerivedConstants d = derive(p);
    if (!(x > 0.0)) throw DomainError("serving_distance_pdf_thz: x must be > 0");
    if (!(p_assoc_thz > 0.0))
        throw DegenerateError("serving_distance_pdf_thz: no user associates with the THz tier");
    const double log_pdf = std::log(2.0 * kPi * p.lambda_t * x) - kPi * p.lambda_t * x * x -
                           rf_exclusion_mass(x, p, d);
    return std::exp(log_pdf) / p_assoc_thz;
}

double serving_distance_pdf_thz(double x, const NetworkParams& p) {
    return serving_distance_pdf_thz(x, p, assoc_prob_thz_quadrature(p));
}

double mu_correction(double k_a) {
    if (!(k_a >= 0.0)) throw DomainError("mu_correction: k_a must be >= 0");
    if (k_a > 0.1) return 2.0 + 10.0 * k_a / (1.0 + 2.0 * k_a);
    return 2.0 + 15.0 * k_a / (1.0 + 10.0 * k_a);
}

std::string to_string(RfDistanceModel m) {
    switch (m) {
        case RfDistanceModel::printed_approximation: return "printed";
        case RfDistanceModel::exact_association: return "exact";
    }
    return "unknown";
}

RfServingDistance::RfServingDistance(const NetworkParams& p, RfDistanceModel model,
                                     const QuadratureSpec& quad)
    : params_(p), derived_(derive(p)), model_(model), mu_(mu_correction(p.k_a)) {
    quad.validate();
    if (p.lambda_r == 0.0) throw DegenerateError("RF serving distance: lambda_r = 0");
    p_ar_ = 1.0 - assoc_prob_thz_quadrature(p, quad);
    if (p_ar_ < 1e-12)
        throw DegenerateError("RF serving distance: P_AR < 1e-12, every user associates with THz");
    // u = e^{-pi lambda_R x^2} turns 2 pi lambda_R x e^{-pi lambda_R x^2} dx into du.
    auto f = [this](double u) {
        const double x = std::sqrt(-std::log(u) / (kPi * params_.lambda_r));
        return std::exp(-association_exponent(x));
    };
    integral_ = integrate_or_throw(f, 0.0, 1.0, quad, "RF serving distance");
    if (!(integral_ > 0.0))
        throw DegenerateError("RF serving distance: density vanishes for these parameters");
    raw_mass_ = integral_ / p_ar_;
}

double RfServingDistance::association_exponent(double x) const {
    if (params_.lambda_t == 0.0 || !(x > 0.0)) return 0.0;
    const double k = derived_.k_ratio;
    if (k == 0.0) return std::numeric_limits<double>::infinity();
    if (model_ == RfDistanceModel::printed_approximation) {
        if (std::isinf(k)) return std::numeric_limits<double>::infinity();
        const double log_inner = std::log(k) + params_.alpha * std::log(x) - std::log(kPi);
        return kPi * params_.lambda_t * std::exp(log_inner / (2.0 + mu_));
    }
    if (std::isinf(k)) return 0.0;
    // r^2 e^{k_a r} = x^alpha / K  <=>  (k_a r / 2) e^{k_a r / 2} = (k_a / 2) sqrt(x^alpha / K).
    const double root = std::exp(0.5 * (params_.alpha * std::log(x) - std::log(k)));
    double r_star;
    if (params_.k_a == 0.0) {
        r_star = root;
    } else {
        const double arg = 0.5 * params_.k_a * root;
        r_star = 2.0 / params_.k_a * lambert_w0(Complex(arg, 0.0)).real();
    }
    return kPi * params_.lambda_t * r_star * r_star;
}

double RfServingDistance::unnormalized(double x) const {
    return 2.0 * kPi * params_.lambda_r * x *
           std::exp(-kPi * params_.lambda_r * x * x - association_exponent(x));
}

double RfServingDistance::pdf(double x) const {
    if (!(x > 0.0)) throw DomainError("RF serving distance: x must be > 0");
    return unnormalized(x) / integral_;
}

double serving_distance_pdf_rf(double x, const NetworkParams& p) {
    return RfServingDistance(p, RfDistanceModel::printed_approximation).pdf(x);
}

// ---------------------------------------------------------------------------
// RF coverage

namespace {

// E[exp(-pi x^2 lambda_R Z - tau N0 x^alpha / (P_R gamma_R)) weight(x)] over the
// nearest-RF distance, in the variable u = e^{-pi lambda_R x^2}.
template <class Weight>
double rf_expectation(const NetworkParams& p, const DerivedConstants& d, double tau,
                      const QuadratureSpec& quad, Weight&& weight) {
    const double z = hypergeom_z(tau, p.alpha);
    const double noise_scale = tau * p.n0_r / (p.p_r * d.gamma_r);
    auto f = [&](double u) {
        const double y2 = -std::log(u);  // pi lambda_R x^2
        const double x = std::sqrt(y2 / (kPi * p.lambda_r));
        double log_v = -y2 * z;
        if (noise_scale > 0.0) log_v -= noise_scale * std::pow(x, p.alpha);
        return std::exp(log_v) * weight(x);
    };
    return integrate_or_throw(f, 0.0, 1.0, quad, "RF coverage");
}

}  // namespace

CoverageResult coverage_rf_only(const NetworkParams& p, double tau_r, const QuadratureSpec& quad) {
    const DerivedConstants d = derive(p);
    quad.validate();
    if (!(tau_r >= 0.0)) throw DomainError("coverage_rf_only: tau_r must be >= 0");
    if (tau_r == 0.0) return make_coverage(1.0, CoverageMethod::quadrature);
    if (p.lambda_r == 0.0) return make_coverage(0.0, CoverageMethod::quadrature);
    const double value = rf_expectation(p, d, tau_r, quad, [](double) { return 1.0; });
    double error = quad.abs_tol;
    if (p.n0_r == 0.0) error = std::max(error, std::abs(value - 1.0 / (1.0 + hypergeom_z(tau_r, p.alpha))));
    return make_coverage(value, CoverageMethod::quadrature, error);
}

CoverageResult coverage_rf_conditional(const NetworkParams& p, double tau_r, RfDistanceModel model,
                                       const QuadratureSpec& quad) {
    const DerivedConstants d = derive(p);
    if (!(tau_r >= 0.0)) throw DomainError("coverage_rf_conditional: tau_r must be >= 0");
    const RfServingDistance dist(p, model, quad);
    if (tau_r == 0.0) return make_coverage(1.0, CoverageMethod::quadrature);
    // pdf(x) dx = exp(-E(x)) du / integral, so only the exponent enters the weight.
    const double num = rf_expectation(p, d, tau_r, quad, [&dist](double x) {
        return std::exp(-dist.association_exponent(x));
    });
    return make_coverage(num / dist.normalizer(), CoverageMethod::quadrature, quad.abs_tol);
}

// ---------------------------------------------------------------------------
// Combined coverage

namespace {

CoexistingBreakdown combine(double p_at, double thz_joint, double thz_error, bool truncated,
                            double p_ar, double p_cr) {
    CoexistingBreakdown b;
    b.p_assoc_thz = p_at;
    b.p_cov_thz = p_at > 0.0 ? clamp01(thz_joint / p_at) : 0.0;
    b.p_cov_rf = p_cr;
    b.total = make_coverage(thz_joint + p_ar * p_cr, CoverageMethod::gil_pelaez, thz_error);
    b.total.truncated = truncated;
    return b;
}

double rf_conditional_or_zero(const NetworkParams& p, double tau_r, double p_ar,
                              const CoexistingOptions& opts) {
    if (p_ar < 1e-12 || p.lambda_r == 0.0) return 0.0;
    try {
        return coverage_rf_conditional(p, tau_r, opts.rf_model, opts.quadrature).probability;
    } catch (const DegenerateError&) {
        return 0.0;
    }
}

}  // namespace

CoexistingEvaluator::CoexistingEvaluator(const NetworkParams& p, std::vector<Thresholds> tau,
                                         const CoexistingOptions& opts)
    : params_(p), tau_(std::move(tau)), opts_(opts), thz_([&] {
          std::vector<double> t;
          for (const auto& x : tau_) t.push_back(x.tau_t);
          return ThzConditionalCoverage(p, t, opts.gil_pelaez);
      }()) {}

std::vector<CoexistingBreakdown> CoexistingEvaluator::evaluate(double b_t) {
    NetworkParams p = params_;
    p.b_t = b_t;
    const DerivedConstants d = derive(p);
    const double p_at = assoc_prob_thz_quadrature(p, opts_.quadrature);
    const double p_ar = 1.0 - p_at;

    // The weight is integrated on the same nodes as the coverage so that the
    // conditional THz coverage is a ratio of consistent estimates; the joint
    // term is then rescaled by the accurate association probability.
    std::vector<double> joint(tau_.size(), 0.0);
    double error = 0.0;
    bool truncated = false;
    if (p_at > 0.0) {
        const auto integrated = thz_.integrate(
            [&](double r) { return std::exp(-rf_exclusion_mass(r, p, d)); },
            thz_assoc_u_floor(p, d));
        if (integrated.weight > 0.0)
            for (std::size_t i = 0; i < joint.size(); ++i)
                joint[i] = p_at * std::clamp(integrated.values[i] / integrated.weight, 0.0, 1.0);
        error = p_at * integrated.error_estimate;
        truncated = integrated.truncated;
    }
    std::vector<CoexistingBreakdown> out;
    for (std::size_t i = 0; i < tau_.size(); ++i) {
        const double p_cr = rf_conditional_or_zero(p, tau_[i].tau_r, p_ar, opts_);
        out.push_back(combine(p_at, joint[i], error, truncated, p_ar, p_cr));
    }
    return out;
}

CoexistingBreakdown coverage_coexisting(const NetworkParams& p, const Thresholds& tau,
                                        const CoexistingOptions& opts) {
    CoexistingEvaluator eval(p, {tau}, opts);
    return eval.evaluate(p.b_t).front();
}

CoverageResult combine_hybrid(const CoverageResult& thz, const CoverageResult& rf) {
    const double value = 1.0 - (1.0 - thz.probability) * (1.0 - rf.probability);
    CoverageResult r = make_coverage(value, thz.method,
                                     thz.estimated_error + rf.estimated_error);
    r.truncated = thz.truncated;
    return r;
}

CoverageResult coverage_hybrid(const NetworkParams& p, const Thresholds& tau,
                               const GilPelaezOptions& opts) {
    const double t = tau.tau_t;
    const CoverageResult thz = p.lambda_t > 0.0
                                   ? coverage_thz_only(p, std::span<const double>(&t, 1), opts).front()
                                   : make_coverage(0.0, CoverageMethod::gil_pelaez);
    return combine_hybrid(thz, coverage_rf_only(p, tau.tau_r));
}

}  // namespace thzgeo
