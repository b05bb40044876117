#pragma once

// Derivative-free search for the THz association bias that maximizes a
// coverage functional.

#include <functional>
#include <vector>

namespace thzgeo {

struct BiasSearchSpec {
    double log10_b_min = -8.0;
    double log10_b_max = 8.0;
    int grid_points = 33;
    /// Relative tolerance on B for the golden-section stage.
    double refine_tol = 1e-3;
    /// Absolute noise level of the objective (quadrature error or MC CI).
    double noise_floor = 1e-9;

    void validate() const;
};

struct BiasTracePoint {
    double b;
    double coverage;
};

struct BiasOptimum {
    double b_star = 1.0;
    double coverage = 0.0;
    /// Every evaluation in order: the grid first, then the refinement.
    std::vector<BiasTracePoint> trace;
    /// max - min over the grid below twice the noise floor.
    bool flat = false;
    /// The grid has more than one local maximum above the noise floor.
    bool multimodal = false;
};

/// Coarse log-grid scan then golden-section refinement on the interval
/// bracketing the best grid point.
BiasOptimum optimize_bias(const BiasSearchSpec& spec,
                          const std::function<double(double)>& coverage_of_bias);

}  // namespace thzgeo
