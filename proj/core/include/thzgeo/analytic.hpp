#pragma once

// Interference transforms, association probabilities, serving-distance
// densities and coverage probabilities for the coexisting RF/THz network.

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "thzgeo/interference.hpp"
#include "thzgeo/netmodel.hpp"
#include "thzgeo/quadrature.hpp"

namespace thzgeo {

// ---------------------------------------------------------------------------
// Laplace transform of the THz interference

struct LtOptions {
    int truncation_L = 3;
    /// Keep adding terms (at least truncation_L) until the last one is
    /// below term_rel_tol relative to the running exponent.
    bool adaptive = false;
    double term_rel_tol = 1e-10;
    int max_terms = 400;
    /// Growth ratio between consecutive terms treated as divergence.
    double divergence_guard = 10.0;
    /// In adaptive mode, switch to direct quadrature of the exponent when
    /// the series diverges or cancels, instead of throwing.
    bool integral_fallback = true;

    void validate() const;
};

struct LtResult {
    Complex value;
    int terms_used = 0;
    bool used_integral = false;
};

/// L(s | r) = E[exp(-s I) | serving distance r], I in watts.
/// Throws DomainError for r <= 0 or k_a = 0, ConvergenceError on
/// divergence when the fallback is disabled.
LtResult lt_thz_conditional(Complex s, double r, const NetworkParams& p,
                            const LtOptions& opts = {});

struct LtAverage {
    double value = 0.0;
    double error_estimate = 0.0;
    int max_terms_used = 0;
    bool used_integral = false;
};

/// E_r[L(s | r)] over the nearest-THz distance density, real s >= 0.
LtAverage lt_thz_average(double s, const NetworkParams& p, const LtOptions& opts = {},
                         const QuadratureSpec& outer = {1e-10, 1e-8, 2000});

// ---------------------------------------------------------------------------
// Results

enum class CoverageMethod { series, quadrature, asymptotic, gil_pelaez, closed_form };

std::string to_string(CoverageMethod m);

struct CoverageResult {
    double probability = 0.0;  // clamped to [0, 1]
    double unclamped = 0.0;
    CoverageMethod method = CoverageMethod::quadrature;
    int terms_used = 0;
    double estimated_error = 0.0;
    bool truncated = false;
};

CoverageResult make_coverage(double raw, CoverageMethod method, double error = 0.0,
                             int terms = 0);

// ---------------------------------------------------------------------------
// THz coverage by Gil-Pelaez inversion

/// Characteristic function E[exp(-i omega Omega)] of Omega = S(r) - tau_T I,
/// averaged over serving distances with density `serving_pdf` on (0, inf).
Complex cf_omega(double omega, const NetworkParams& p,
                 const std::function<double(double)>& serving_pdf,
                 const GilPelaezOptions& opts = {});

/// Conditional coverage Pr[SINR_T > tau | r] for a fixed set of thresholds,
/// memoized per serving distance. Not safe for concurrent use.
class ThzConditionalCoverage {
public:
    ThzConditionalCoverage(const NetworkParams& p, std::vector<double> tau_t,
                           const GilPelaezOptions& opts = {});

    std::size_t size() const { return tau_.size(); }
    const std::vector<double>& thresholds() const { return tau_; }

    /// Pr[SINR_T > tau_i | r] for every threshold.
    const std::vector<double>& at_distance(double r);

    struct Integrated {
        std::vector<double> values;
        double weight = 0.0;  // int of the density times h alone
        double error_estimate = 0.0;
        bool truncated = false;
    };

    /// int_0^inf Pr[cov | r] 2 pi lambda_T r e^{-pi lambda_T r^2} h(r) dr for
    /// a bounded factor h (h = 1 gives nearest-TBS coverage). The integral
    /// runs in u = exp(-pi lambda_T r^2) over [u_min, 1]; pass u_min > 0 when
    /// h is negligible beyond the corresponding distance.
    Integrated integrate(const std::function<double(double)>& h, double u_min = 0.0);

    /// Evaluations of the conditional CDF performed so far.
    int evaluations() const { return static_cast<int>(memo_.size()); }

private:
    struct Entry {
        std::vector<double> cov;
        double error;
        bool truncated;
    };
    const Entry& entry_at_u(double u);

    NetworkParams params_;
    DerivedConstants derived_;
    std::vector<double> tau_;
    GilPelaezOptions opts_;
    std::map<double, Entry> memo_;
    double noise_u_floor_ = 0.0;  // below it every threshold fails on noise alone
};

/// Nearest-TBS coverage at the rate threshold of `p`.
CoverageResult coverage_thz_only(const NetworkParams& p, const GilPelaezOptions& opts = {});

/// Nearest-TBS coverage for each THz SINR threshold.
std::vector<CoverageResult> coverage_thz_only(const NetworkParams& p,
                                              std::span<const double> tau_t,
                                              const GilPelaezOptions& opts = {});

// ---------------------------------------------------------------------------
// Association

struct SeriesOptions {
    int truncation_J = 20;
    /// Largest allowed |term_j| relative to the j = 0 term.
    double divergence_guard = 10.0;
    /// The last included term must be below this, otherwise the series is
    /// reported as not converged.
    double tail_tol = 1e-7;

    void validate() const;
};

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double last_term = 0.0;
};

/// Pr[user associates with the THz tier] by adaptive quadrature over the
/// nearest-TBS distance. Exactly 0 for B_T = 0 and exactly 1 for lambda_R = 0.
double assoc_prob_thz_quadrature(const NetworkParams& p,
                                 const QuadratureSpec& quad = {1e-13, 1e-11, 2000});

/// Same probability from the parabolic-cylinder series.
/// Throws ConvergenceError when a term exceeds the divergence guard or the
/// series has not converged after truncation_J + 1 terms.
SeriesResult assoc_prob_thz_series(const NetworkParams& p, const SeriesOptions& opts = {});

/// Series with every D_{-nu}(z) replaced by D_{-nu}(0) (absorption -> 0).
SeriesResult assoc_prob_thz_asymptotic(const NetworkParams& p, const SeriesOptions& opts = {});

/// j-th term of the association series (at_zero: D evaluated at 0 and the
/// exponential factor dropped). The j = 0 term equals 1 for any parameters.
double assoc_series_term(int j, const NetworkParams& p, bool at_zero);

/// Exponent pi lambda_R (K r^2)^{2/alpha} e^{2 k_a r / alpha}: the THz tier
/// wins iff no RF station lies within the corresponding disc.
double rf_exclusion_mass(double r, const NetworkParams& p, const DerivedConstants& d);

/// Lower limit in u = exp(-pi lambda_T r^2) for association integrals: at or
/// below u at the distance where the exclusion mass reaches 40, with 1 - u a
/// power of two. 0 when no cut applies.
double thz_assoc_u_floor(const NetworkParams& p, const DerivedConstants& d);

// ---------------------------------------------------------------------------
// Serving distances

/// Density of the serving distance of THz-associated users.
double serving_distance_pdf_thz(double x, const NetworkParams& p);
double serving_distance_pdf_thz(double x, const NetworkParams& p, double p_assoc_thz);

/// Piecewise absorption correction of the RF-association exponent.
double mu_correction(double k_a);

enum class RfDistanceModel {
    /// exp(-pi lambda_T (K x^alpha / pi)^{1/(2+mu)} - pi lambda_R x^2), renormalized.
    printed_approximation,
    /// exp(-pi lambda_T r*(x)^2 - pi lambda_R x^2) with r*^2 e^{k_a r*} = x^alpha / K,
    /// the exact RF-association event.
    exact_association,
};

std::string to_string(RfDistanceModel m);

/// Serving-distance density of RF-associated users.
class RfServingDistance {
public:
    RfServingDistance(const NetworkParams& p, RfDistanceModel model,
                      const QuadratureSpec& quad = {1e-13, 1e-11, 2000});

    double pdf(double x) const;
    /// Mass of the unnormalized density (2 pi lambda_R x / P_AR) g(x).
    double raw_mass() const { return raw_mass_; }
    double assoc_prob_rf() const { return p_ar_; }
    RfDistanceModel model() const { return model_; }
    /// int g(x) dx, the renormalization constant of pdf().
    double normalizer() const { return integral_; }
    /// Exponent E(x) of the THz-exclusion factor e^{-E(x)} in the density.
    double association_exponent(double x) const;

private:
    double unnormalized(double x) const;

    NetworkParams params_;
    DerivedConstants derived_;
    RfDistanceModel model_;
    double mu_;
    double p_ar_;
    double integral_;
    double raw_mass_;
};

/// Printed-approximation density; throws DegenerateError when P_AR < 1e-12.
double serving_distance_pdf_rf(double x, const NetworkParams& p);

// ---------------------------------------------------------------------------
// RF and combined coverage

CoverageResult coverage_rf_only(const NetworkParams& p, double tau_r,
                                const QuadratureSpec& quad = {1e-12, 1e-10, 2000});

CoverageResult coverage_rf_conditional(const NetworkParams& p, double tau_r,
                                       RfDistanceModel model = RfDistanceModel::exact_association,
                                       const QuadratureSpec& quad = {1e-12, 1e-10, 2000});

struct CoexistingOptions {
    GilPelaezOptions gil_pelaez{};
    RfDistanceModel rf_model = RfDistanceModel::exact_association;
    QuadratureSpec quadrature{1e-12, 1e-10, 2000};
};

struct CoexistingBreakdown {
    CoverageResult total;
    double p_assoc_thz = 0.0;
    double p_cov_thz = 0.0;  // conditional on THz association
    double p_cov_rf = 0.0;   // conditional on RF association
};

/// Total BRSP coverage P_AT P_CT + P_AR P_CR.
CoexistingBreakdown coverage_coexisting(const NetworkParams& p, const Thresholds& tau,
                                        const CoexistingOptions& opts = {});

/// Evaluates coexisting coverage for many biases with the THz conditional
/// coverage computed once. Not safe for concurrent use.
class CoexistingEvaluator {
public:
    CoexistingEvaluator(const NetworkParams& p, std::vector<Thresholds> tau,
                        const CoexistingOptions& opts = {});

    /// One breakdown per threshold pair, at bias b_t.
    std::vector<CoexistingBreakdown> evaluate(double b_t);

private:
    NetworkParams params_;
    std::vector<Thresholds> tau_;
    CoexistingOptions opts_;
    ThzConditionalCoverage thz_;
};

/// 1 - (1 - P_T)(1 - P_R) with nearest-TBS THz coverage and RF-only coverage.
CoverageResult coverage_hybrid(const NetworkParams& p, const Thresholds& tau,
                               const GilPelaezOptions& opts = {});

CoverageResult combine_hybrid(const CoverageResult& thz, const CoverageResult& rf);

}  // namespace thzgeo
