#pragma once

// Aggregate THz interference at a user whose serving base station sits at
// distance r, measured in units of F * S(r) (main-lobe probability times the
// serving signal power). With t = x / r the interferers form a Poisson
// process of intensity 2 c t dt on t > 1, c = pi lambda_T r^2, and each one
// contributes q(t) = t^{-2} e^{-kappa (t - 1)} with kappa = k_a r.
// For W = sum_i q(t_i):
//   log E[e^{-sigma W}] = -2 c Lambda(sigma),
//   Lambda(sigma) = int_1^inf t (1 - e^{-sigma q(t)}) dt.

#include <complex>
#include <span>
#include <vector>

#include "thzgeo/quadrature.hpp"

namespace thzgeo {

using Complex = std::complex<double>;

/// Lambda(-i z) = along_zero + at_one + e^{i z} oscillating, z > 0.
struct RotatedParts {
    Complex along_zero;   // contour through p = 0 rotated onto the imaginary axis
    Complex at_one;       // z-independent part of the contour through p = 1
    Complex oscillating;  // decaying part of the contour through p = 1
};

class InterferenceShape {
public:
    /// kappa > 0. Builds the tables used by rotated().
    explicit InterferenceShape(double kappa);

    double kappa() const { return kappa_; }

    /// l-th Taylor coefficient magnitude e^{l kappa} E_{2l-1}(l kappa) / l!,
    /// so that Lambda(sigma) = -sum_{l>=1} (-sigma)^l series_coefficient(l).
    double series_coefficient(int l) const;

    /// Partial sum of the series above with `terms` terms.
    Complex lambda_series(Complex sigma, int terms) const;

    /// Lambda(sigma) by adaptive quadrature over t, Re(sigma) >= 0.
    Complex lambda_quadrature(Complex sigma, const QuadratureSpec& quad = {}) const;

    /// Lambda(sigma) by the most accurate available route: the full series
    /// for |sigma| <= kSeriesRadius, the rotated contour on the imaginary
    /// axis, quadrature otherwise.
    Complex lambda(Complex sigma) const;

    /// Contour decomposition of Lambda(-i z), z > 0.
    RotatedParts rotated(double z) const;

    /// E[W] / (2c) and Var[W] / (2c).
    double mean_per_c() const;
    double variance_per_c() const;

    /// Largest |sigma| for which lambda() uses the series.
    static constexpr double kSeriesRadius = 6.0;

private:
    double kappa_;
    std::vector<double> coef_;      // series coefficients, index l-1
    std::vector<double> grid_y_;    // log-spaced y nodes
    std::vector<Complex> w_zero_;   // weights for the p = i y contour
    std::vector<Complex> w_one_;    // weights for the p = 1 + i y contour
    Complex at_one_{};
};

/// Inversion settings for Pr(W < w) from the characteristic function.
struct GilPelaezOptions {
    /// Cutoff on the normalized frequency z (the CF argument of W).
    double omega_max = 1e8;
    /// The frequency integral stops once |CF| is provably below this.
    double cf_floor = 1e-13;
    /// Gauss-Legendre nodes per Filon panel.
    int panel_nodes = 16;
    /// Used by the quadrature fallbacks inside the inversion.
    QuadratureSpec quadrature{};
    /// Expectation over the serving distance.
    QuadratureSpec outer_quadrature{1e-7, 1e-6, 400};

    void validate() const;
};

struct InterferenceCdf {
    std::vector<double> cdf;      // Pr(W < w) per requested w
    double error_estimate = 0.0;  // max over requested points
    bool truncated = false;       // omega_max reached before the CF decayed
    int panels = 0;
};

/// Pr(W < w) for every w in `w_points` (w <= 0 gives 0) for the field with
/// shape `shape` and density parameter c >= 0, by Gil-Pelaez inversion:
///   Pr(W < w) = 1/2 - (1/pi) int_0^inf Im[e^{-i z w} E e^{i z W}] / z dz.
/// The CF is sampled once and reused for all w.
InterferenceCdf interference_cdf(const InterferenceShape& shape, double c,
                                 std::span<const double> w_points,
                                 const GilPelaezOptions& opts = {});

}  // namespace thzgeo
