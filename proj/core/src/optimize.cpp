#include "thzgeo/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "thzgeo/errors.hpp"

namespace thzgeo {

void BiasSearchSpec::validate() const {
    if (!(log10_b_min < log10_b_max) || !std::isfinite(log10_b_min) || !std::isfinite(log10_b_max))
        throw DomainError("BiasSearchSpec: log10_b_min must be < log10_b_max");
    if (grid_points < 3) throw DomainError("BiasSearchSpec: grid_points must be >= 3");
    if (!(refine_tol > 0.0)) throw DomainError("BiasSearchSpec: refine_tol must be > 0");
    if (!(noise_floor >= 0.0)) throw DomainError("BiasSearchSpec: noise_floor must be >= 0");
}

BiasOptimum optimize_bias(const BiasSearchSpec& spec,
                          const std::function<double(double)>& coverage_of_bias) {
    spec.validate();
    BiasOptimum out;
    auto eval = [&](double log_b) {
        const double b = std::pow(10.0, log_b);
        const double v = coverage_of_bias(b);
        out.trace.push_back({b, v});
        return v;
    };

    const int n = spec.grid_points;
    const double step = (spec.log10_b_max - spec.log10_b_min) / (n - 1);
    std::vector<double> grid(n), values(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = spec.log10_b_min + i * step;
        values[i] = eval(grid[i]);
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const int best = static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
    out.b_star = std::pow(10.0, grid[best]);
    out.coverage = values[best];
    if (*hi_it - *lo_it < 2.0 * spec.noise_floor) {
        out.flat = true;
        return out;
    }

    // Local maxima of the grid, treating differences within the noise floor as ties.
    const double eps = spec.noise_floor;
    int peaks = 0;
    for (int i = 0; i < n; ++i) {
        int j = i;
        while (j + 1 < n && std::abs(values[j + 1] - values[i]) <= eps) ++j;
        const bool left = i == 0 || values[i - 1] < values[i] - eps;
        const bool right = j == n - 1 || values[j + 1] < values[i] - eps;
        if (left && right) ++peaks;
        i = j;
    }
    out.multimodal = peaks > 1;

    double a = grid[std::max(best - 1, 0)];
    double b = grid[std::min(best + 1, n - 1)];
    const double tol = std::log10(1.0 + spec.refine_tol);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
    }
    for (const auto& t : out.trace) {
        if (t.coverage > out.coverage) {
            out.coverage = t.coverage;
            out.b_star = t.b;
        }
    }
    return out;
}

}  // namespace thzgeo
