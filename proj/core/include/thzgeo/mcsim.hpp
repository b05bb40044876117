#pragma once

// Monte Carlo simulation of the two-tier network on a finite disc centered
// at the typical user. Every trial draws its randomness from a stream seeded
// by (master_seed, trial_index) only, so estimates do not depend on the
// number of worker threads.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "thzgeo/netmodel.hpp"

namespace thzgeo {

enum class GainMode {
    /// Every interferer has max-gain power scaled by F.
    deterministic_F,
    /// Each interferer is kept with probability F at max-gain power.
    bernoulli_thinning,
    /// Each interferer draws one of the four gain products.
    four_level,
};

/// nearest_thz and nearest_rf model single-tier networks; hybrid serves from
/// both nearest stations and succeeds if either link is covered.
enum class AssociationRule { nearest_thz, nearest_rf, brsp, rsrp, hybrid };

std::string to_string(GainMode m);
std::string to_string(AssociationRule r);
GainMode parse_gain_mode(const std::string& s);
AssociationRule parse_association_rule(const std::string& s);

struct McConfig {
    std::int64_t trials = 100000;
    double disc_radius = 100.0;  // m, THz tier
    /// The RF tier is sparse (pi expected stations within 100 m at the
    /// default density) and its path loss decays slowly, so it is drawn on
    /// its own, larger disc.
    double rf_disc_radius = 1000.0;  // m
    /// Add the mean RF interference from beyond rf_disc_radius. Its relative
    /// fluctuation vanishes with the radius while the mean decays only as
    /// R^{2 - alpha}.
    bool rf_tail_mean = true;
    std::uint64_t master_seed = 1;
    GainMode gain_mode = GainMode::deterministic_F;
    AssociationRule rule = AssociationRule::brsp;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double ci95_halfwidth = 0.0;
    std::int64_t trials_used = 0;
    /// Trials redrawn because neither tier had a base station in the disc.
    std::int64_t resampled = 0;
};

enum class Tier { thz, rf };

struct TrialOutcome {
    Tier serving_tier = Tier::thz;
    double serving_distance = 0.0;  // m
    double distance_thz = 0.0;      // nearest TBS, +inf if none
    double distance_rf = 0.0;       // nearest RBS, +inf if none
    double sinr_thz = 0.0;          // from the nearest TBS; 0 if none
    double sinr_rf = 0.0;           // from the nearest RBS; 0 if none
    double agg_interference_thz = 0.0;  // W
    double agg_interference_rf = 0.0;   // W
    int resampled = 0;
};

using Rng = std::mt19937_64;

/// Generator for trial `index` of a run seeded with `master_seed`.
Rng trial_rng(std::uint64_t master_seed, std::uint64_t index);

struct Point {
    double x, y;
};

/// Homogeneous PPP of the given intensity on the disc of radius `radius`
/// centered at the origin.
std::vector<Point> sample_ppp(double intensity, double radius, Rng& rng);

/// Distances from the origin of a PPP on the disc, in increasing order.
std::vector<double> sample_ppp_radii(double intensity, double radius, Rng& rng);

/// One full realization: both tiers, fading on RF links, antenna gains per
/// gain_mode and the association decision of mc.rule.
TrialOutcome run_trial(const NetworkParams& p, const McConfig& mc, std::int64_t trial_index);

/// Mean of exp(-s I_T) with I_T from interferers beyond the nearest TBS,
/// one estimate per s (all from the same trials).
std::vector<McEstimate> estimate_lt(std::span<const double> s, const NetworkParams& p,
                                    const McConfig& mc);
McEstimate estimate_lt(double s, const NetworkParams& p, const McConfig& mc);

/// Fraction of trials covered under mc.rule, one estimate per threshold pair.
std::vector<McEstimate> estimate_coverage(const NetworkParams& p, const McConfig& mc,
                                          std::span<const Thresholds> tau);
McEstimate estimate_coverage(const NetworkParams& p, const McConfig& mc, const Thresholds& tau);

/// Fraction of trials associated with the THz tier (rule brsp or rsrp).
McEstimate estimate_association(const NetworkParams& p, const McConfig& mc);

/// Serving distances of the first `count` trials associated with `tier`
/// (rule brsp or rsrp). Throws DegenerateError if fewer than `count` are
/// found within 1000 * count trials.
std::vector<double> sample_serving_distances(const NetworkParams& p, const McConfig& mc,
                                             Tier tier, std::size_t count);

/// Coverage among trials served by `tier` only (RF-conditional coverage).
McEstimate estimate_conditional_coverage(const NetworkParams& p, const McConfig& mc,
                                         const Thresholds& tau, Tier tier);

/// Wilson score 95% interval half-width, reported around the sample mean.
McEstimate proportion_estimate(std::int64_t successes, std::int64_t trials);

/// sup_x |F_n(x) - F(x)| for a sample and a reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace thzgeo
