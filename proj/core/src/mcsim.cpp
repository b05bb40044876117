#include "thzgeo/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "thzgeo/errors.hpp"
#include "thzgeo/parallel.hpp"

namespace thzgeo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

double exponential1(Rng& rng) {
    double u;
    do {
        u = uniform01(rng);
    } while (u <= 0.0);
    return -std::log(u);
}

// Nearest-point distance of a disc PPP, or +inf if the disc is empty.
double sample_nearest(double intensity, double radius, Rng& rng) {
    if (intensity <= 0.0) return kInf;
    const double r2 = exponential1(rng) / (kPi * intensity);
    return r2 <= radius * radius ? std::sqrt(r2) : kInf;
}

struct Nearest {
    double thz, rf;
    int resampled;
};

// Nearest distances of both tiers, redrawing while both tiers are empty.
// Uses a dedicated stream per attempt so the result depends only on the index.
template <class Draw>
auto draw_nonempty(const NetworkParams& p, const McConfig& mc, std::int64_t index, Draw&& draw) {
    for (int attempt = 0;; ++attempt) {
        Rng rng = trial_rng(mc.master_seed ^ splitmix64(static_cast<std::uint64_t>(attempt)),
                            static_cast<std::uint64_t>(index));
        auto out = draw(rng);
        if (!out.empty_both()) {
            out.resampled = attempt;
            return out;
        }
        if (attempt > 1000)
            throw DegenerateError("mcsim: no base station of either tier within the disc");
    }
    (void)p;
}

bool thz_wins(double r_t, double rho, const NetworkParams& p, const DerivedConstants& d,
              double bias) {
    if (!std::isfinite(r_t)) return false;
    if (!std::isfinite(rho)) return true;
    if (bias == 0.0) return false;
    // Biased long-term powers: B P_T gamma_T e^{-k r}/r^2 vs P_R gamma_R rho^{-alpha}.
    const double log_thz = std::log(bias * p.p_t * d.gamma_t) - p.k_a * r_t - 2.0 * std::log(r_t);
    const double log_rf = std::log(p.p_r * d.gamma_r) - p.alpha * std::log(rho);
    return log_thz > log_rf;
}

double bias_for(const NetworkParams& p, AssociationRule rule) {
    return rule == AssociationRule::rsrp ? 1.0 : p.b_t;
}

struct NearestDraw {
    double thz = kInf, rf = kInf;
    int resampled = 0;
    bool empty_both() const { return !std::isfinite(thz) && !std::isfinite(rf); }
};

NearestDraw nearest_pair(const NetworkParams& p, const McConfig& mc, std::int64_t index) {
    return draw_nonempty(p, mc, index, [&](Rng& rng) {
        NearestDraw d;
        d.thz = sample_nearest(p.lambda_t, mc.disc_radius, rng);
        d.rf = sample_nearest(p.lambda_r, mc.rf_disc_radius, rng);
        return d;
    });
}

void require_association_rule(const McConfig& mc, const char* what) {
    if (mc.rule != AssociationRule::brsp && mc.rule != AssociationRule::rsrp)
        throw DomainError(std::string(what) + ": association rule must be brsp or rsrp");
}

// Applies fn(index) -> double to every trial and returns the per-trial values.
template <class Fn>
std::vector<double> per_trial(std::int64_t trials, Fn&& fn) {
    std::vector<double> v(static_cast<std::size_t>(trials));
    parallel_for(v.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) v[i] = fn(static_cast<std::int64_t>(i));
    });
    return v;
}

McEstimate mean_estimate(const std::vector<double>& v, std::int64_t resampled) {
    McEstimate est;
    const std::size_t n = v.size();
    est.trials_used = static_cast<std::int64_t>(n);
    est.resampled = resampled;
    est.mean = pairwise_sum(v.data(), n) / static_cast<double>(n);
    if (n > 1) {
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - est.mean) * (v[i] - est.mean);
        const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
        est.ci95_halfwidth = 1.959963984540054 * std::sqrt(var / static_cast<double>(n));
    }
    return est;
}

}  // namespace

std::string to_string(GainMode m) {
    switch (m) {
        case GainMode::deterministic_F: return "deterministic_F";
        case GainMode::bernoulli_thinning: return "bernoulli_thinning";
        case GainMode::four_level: return "four_level";
    }
    return "unknown";
}

std::string to_string(AssociationRule r) {
    switch (r) {
        case AssociationRule::nearest_thz: return "nearest_thz";
        case AssociationRule::nearest_rf: return "nearest_rf";
        case AssociationRule::brsp: return "brsp";
        case AssociationRule::rsrp: return "rsrp";
        case AssociationRule::hybrid: return "hybrid";
    }
    return "unknown";
}

GainMode parse_gain_mode(const std::string& s) {
    for (GainMode m : {GainMode::deterministic_F, GainMode::bernoulli_thinning, GainMode::four_level})
        if (s == to_string(m)) return m;
    throw DomainError("unknown interference gain mode '" + s + "'");
}

AssociationRule parse_association_rule(const std::string& s) {
    for (AssociationRule r : {AssociationRule::nearest_thz, AssociationRule::nearest_rf,
                              AssociationRule::brsp, AssociationRule::rsrp,
                              AssociationRule::hybrid})
        if (s == to_string(r)) return r;
    throw DomainError("unknown association rule '" + s + "'");
}

void McConfig::validate() const {
    if (trials < 1) throw DomainError("mc.trials must be >= 1");
    if (!(disc_radius > 0.0) || !std::isfinite(disc_radius))
        throw DomainError("mc.disc_radius must be > 0");
    if (!(rf_disc_radius > 0.0) || !std::isfinite(rf_disc_radius))
        throw DomainError("mc.rf_disc_radius must be > 0");
}

Rng trial_rng(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

std::vector<double> sample_ppp_radii(double intensity, double radius, Rng& rng) {
    if (!(intensity >= 0.0)) throw DomainError("sample_ppp: intensity must be >= 0");
    if (!(radius > 0.0)) throw DomainError("sample_ppp: radius must be > 0");
    std::vector<double> out;
    if (intensity == 0.0) return out;
    // Arrival "times" pi lambda r^2 of a unit-rate process, in order.
    const double scale = 1.0 / (kPi * intensity);
    const double limit = radius * radius;
    double area = 0.0;
    while (true) {
        area += exponential1(rng);
        const double r2 = area * scale;
        if (r2 > limit) break;
        out.push_back(std::sqrt(r2));
    }
    return out;
}

std::vector<Point> sample_ppp(double intensity, double radius, Rng& rng) {
    const std::vector<double> radii = sample_ppp_radii(intensity, radius, rng);
    std::vector<Point> pts;
    pts.reserve(radii.size());
    for (double r : radii) {
        const double theta = 2.0 * kPi * uniform01(rng);
        pts.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
    return pts;
}

namespace {

struct FullDraw {
    std::vector<double> thz, rf;
    int resampled = 0;
    bool empty_both() const { return thz.empty() && rf.empty(); }
};

struct TrialContext {
    const NetworkParams& p;
    const McConfig& mc;
    DerivedConstants d;
    GainDistribution gains;
    double path_const;  // (c / 4 pi f_T)^2
};

TrialContext make_context(const NetworkParams& p, const McConfig& mc) {
    mc.validate();
    const DerivedConstants d = derive(p);
    const double wl = kSpeedOfLight / (4.0 * kPi * p.f_t);
    return {p, mc, d, gain_distribution(p.tx, p.rx), wl * wl};
}

// THz interference from every TBS but the nearest, in watts.
double thz_interference(const TrialContext& ctx, const std::vector<double>& radii, Rng& rng) {
    const NetworkParams& p = ctx.p;
    const double max_power = p.p_t * ctx.d.gamma_t;
    const double f = ctx.d.main_lobe_prob;
    double sum = 0.0;
    for (std::size_t i = 1; i < radii.size(); ++i) {
        const double r = radii[i];
        const double spread = std::exp(-p.k_a * r) / (r * r);
        switch (ctx.mc.gain_mode) {
            case GainMode::deterministic_F: sum += f * max_power * spread; break;
            case GainMode::bernoulli_thinning:
                if (uniform01(rng) < f) sum += max_power * spread;
                break;
            case GainMode::four_level: {
                double u = uniform01(rng);
                double g = ctx.gains.levels[3].gain;
                for (const auto& level : ctx.gains.levels) {
                    if (u < level.probability) {
                        g = level.gain;
                        break;
                    }
                    u -= level.probability;
                }
                sum += p.p_t * ctx.path_const * g * spread;
                break;
            }
        }
    }
    return sum;
}

TrialOutcome trial(const TrialContext& ctx, std::int64_t index) {
    const NetworkParams& p = ctx.p;
    const McConfig& mc = ctx.mc;
    // Point sets come from the attempt stream; gains and fading continue on it.
    Rng rng_out;
    FullDraw draw = draw_nonempty(p, mc, index, [&](Rng& rng) {
        FullDraw d;
        d.thz = sample_ppp_radii(p.lambda_t, mc.disc_radius, rng);
        d.rf = sample_ppp_radii(p.lambda_r, mc.rf_disc_radius, rng);
        rng_out = rng;
        return d;
    });
    Rng& rng = rng_out;

    TrialOutcome out;
    out.resampled = draw.resampled;
    out.distance_thz = draw.thz.empty() ? kInf : draw.thz.front();
    out.distance_rf = draw.rf.empty() ? kInf : draw.rf.front();

    if (!draw.thz.empty()) {
        const double r = out.distance_thz;
        const double signal = thz_signal_power(r, p, ctx.d);
        out.agg_interference_thz = thz_interference(ctx, draw.thz, rng);
        out.sinr_thz = signal / (p.n0_t + out.agg_interference_thz);
    }
    if (!draw.rf.empty()) {
        const double unit = p.p_r * ctx.d.gamma_r;
        const double signal = unit * std::pow(draw.rf.front(), -p.alpha) * exponential1(rng);
        double interference = 0.0;
        for (std::size_t i = 1; i < draw.rf.size(); ++i)
            interference += unit * std::pow(draw.rf[i], -p.alpha) * exponential1(rng);
        if (mc.rf_tail_mean && p.lambda_r > 0.0)
            interference += unit * 2.0 * kPi * p.lambda_r *
                            std::pow(mc.rf_disc_radius, 2.0 - p.alpha) / (p.alpha - 2.0);
        out.agg_interference_rf = interference;
        out.sinr_rf = signal / (p.n0_r + interference);
    }

    switch (mc.rule) {
        case AssociationRule::nearest_thz:
        case AssociationRule::hybrid:
            out.serving_tier = Tier::thz;
            break;
        case AssociationRule::nearest_rf:
            out.serving_tier = Tier::rf;
            break;
        case AssociationRule::brsp:
        case AssociationRule::rsrp:
            out.serving_tier = thz_wins(out.distance_thz, out.distance_rf, p, ctx.d,
                                        bias_for(p, mc.rule))
                                   ? Tier::thz
                                   : Tier::rf;
            break;
    }
    out.serving_distance = out.serving_tier == Tier::thz ? out.distance_thz : out.distance_rf;
    return out;
}

bool covered(const TrialOutcome& t, const Thresholds& tau, AssociationRule rule) {
    const bool thz_ok = t.sinr_thz > tau.tau_t || (tau.tau_t == 0.0 && std::isfinite(t.distance_thz));
    const bool rf_ok = t.sinr_rf > tau.tau_r || (tau.tau_r == 0.0 && std::isfinite(t.distance_rf));
    switch (rule) {
        case AssociationRule::nearest_thz: return thz_ok;
        case AssociationRule::nearest_rf: return rf_ok;
        case AssociationRule::hybrid: return thz_ok || rf_ok;
        default: return t.serving_tier == Tier::thz ? thz_ok : rf_ok;
    }
}

}  // namespace

TrialOutcome run_trial(const NetworkParams& p, const McConfig& mc, std::int64_t trial_index) {
    return trial(make_context(p, mc), trial_index);
}

McEstimate proportion_estimate(std::int64_t successes, std::int64_t trials) {
    McEstimate est;
    est.trials_used = trials;
    if (trials <= 0) return est;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z = 1.959963984540054;
    const double denom = 1.0 + z * z / n;
    const double center = (phat + z * z / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
    est.mean = phat;
    est.ci95_halfwidth = std::max(std::abs(center + half - phat), std::abs(phat - (center - half)));
    return est;
}

std::vector<McEstimate> estimate_lt(std::span<const double> s, const NetworkParams& p,
                                    const McConfig& mc) {
    for (double x : s)
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("estimate_lt: s must be >= 0");
    const TrialContext ctx = make_context(p, mc);
    std::vector<std::int64_t> resampled(static_cast<std::size_t>(mc.trials), 0);
    const std::vector<double> interference = per_trial(mc.trials, [&](std::int64_t i) {
        const TrialOutcome t = trial(ctx, i);
        resampled[static_cast<std::size_t>(i)] = t.resampled;
        return t.agg_interference_thz;
    });
    std::int64_t total_resampled = 0;
    for (auto r : resampled) total_resampled += r;

    std::vector<McEstimate> out;
    std::vector<double> values(interference.size());
    for (double sv : s) {
        if (sv == 0.0) {
            McEstimate e;
            e.mean = 1.0;
            e.trials_used = mc.trials;
            e.resampled = total_resampled;
            out.push_back(e);
            continue;
        }
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::exp(-sv * interference[i]);
        out.push_back(mean_estimate(values, total_resampled));
    }
    return out;
}

McEstimate estimate_lt(double s, const NetworkParams& p, const McConfig& mc) {
    return estimate_lt(std::span<const double>(&s, 1), p, mc).front();
}

std::vector<McEstimate> estimate_coverage(const NetworkParams& p, const McConfig& mc,
                                          std::span<const Thresholds> tau) {
    for (const auto& t : tau)
        if (!(t.tau_t >= 0.0) || !(t.tau_r >= 0.0))
            throw DomainError("estimate_coverage: thresholds must be >= 0");
    const TrialContext ctx = make_context(p, mc);
    const std::size_t n = static_cast<std::size_t>(mc.trials);
    const std::size_t m = tau.size();
    // One byte per (trial, threshold) keeps memory modest for long grids.
    std::vector<unsigned char> hits(n * m, 0);
    std::vector<int> resampled(n, 0);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const TrialOutcome t = trial(ctx, static_cast<std::int64_t>(i));
            resampled[i] = t.resampled;
            for (std::size_t j = 0; j < m; ++j) hits[i * m + j] = covered(t, tau[j], mc.rule);
        }
    });
    std::int64_t total_resampled = 0;
    for (int r : resampled) total_resampled += r;
    std::vector<McEstimate> out;
    for (std::size_t j = 0; j < m; ++j) {
        std::int64_t count = 0;
        for (std::size_t i = 0; i < n; ++i) count += hits[i * m + j];
        McEstimate e = proportion_estimate(count, mc.trials);
        e.resampled = total_resampled;
        out.push_back(e);
    }
    return out;
}

McEstimate estimate_coverage(const NetworkParams& p, const McConfig& mc, const Thresholds& tau) {
    return estimate_coverage(p, mc, std::span<const Thresholds>(&tau, 1)).front();
}

McEstimate estimate_association(const NetworkParams& p, const McConfig& mc) {
    mc.validate();
    require_association_rule(mc, "estimate_association");
    const DerivedConstants d = derive(p);
    const double bias = bias_for(p, mc.rule);
    std::vector<int> resampled(static_cast<std::size_t>(mc.trials), 0);
    const std::vector<double> wins = per_trial(mc.trials, [&](std::int64_t i) {
        const NearestDraw n = nearest_pair(p, mc, i);
        resampled[static_cast<std::size_t>(i)] = n.resampled;
        return thz_wins(n.thz, n.rf, p, d, bias) ? 1.0 : 0.0;
    });
    std::int64_t count = 0, total_resampled = 0;
    for (double w : wins) count += static_cast<std::int64_t>(w);
    for (int r : resampled) total_resampled += r;
    McEstimate e = proportion_estimate(count, mc.trials);
    e.resampled = total_resampled;
    return e;
}

std::vector<double> sample_serving_distances(const NetworkParams& p, const McConfig& mc,
                                             Tier tier, std::size_t count) {
    mc.validate();
    require_association_rule(mc, "sample_serving_distances");
    const DerivedConstants d = derive(p);
    const double bias = bias_for(p, mc.rule);
    std::vector<double> out;
    out.reserve(count);
    const std::size_t batch = std::max<std::size_t>(count, 1024);
    const std::size_t max_trials = 1000 * std::max<std::size_t>(count, 1);
    std::vector<double> dist(batch);
    for (std::size_t start = 0; out.size() < count; start += batch) {
        if (start >= max_trials)
            throw DegenerateError("sample_serving_distances: too few trials associate with the tier");
        parallel_for(batch, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const NearestDraw n = nearest_pair(p, mc, static_cast<std::int64_t>(start + i));
                const bool thz = thz_wins(n.thz, n.rf, p, d, bias);
                const bool want = (tier == Tier::thz) == thz;
                dist[i] = want ? (thz ? n.thz : n.rf) : -1.0;
            }
        });
        for (double x : dist) {
            if (x >= 0.0 && out.size() < count) out.push_back(x);
        }
    }
    return out;
}

McEstimate estimate_conditional_coverage(const NetworkParams& p, const McConfig& mc,
                                         const Thresholds& tau, Tier tier) {
    require_association_rule(mc, "estimate_conditional_coverage");
    const TrialContext ctx = make_context(p, mc);
    const std::size_t n = static_cast<std::size_t>(mc.trials);
    std::vector<signed char> state(n, -1);
    parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const TrialOutcome t = trial(ctx, static_cast<std::int64_t>(i));
            if (t.serving_tier == tier) state[i] = covered(t, tau, mc.rule) ? 1 : 0;
        }
    });
    std::int64_t served = 0, hits = 0;
    for (signed char s : state) {
        if (s >= 0) ++served;
        if (s == 1) ++hits;
    }
    if (served == 0) throw DegenerateError("estimate_conditional_coverage: no trial served by tier");
    return proportion_estimate(hits, served);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw DomainError("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

}  // namespace thzgeo
