#pragma once

#include "msentropy/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace msentropy {

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

/// Non-overlapping window means of length `scale`; the trailing N mod scale
/// samples are dropped. Throws InvalidParameter if scale < 1 or scale > N.
Samples coarse_grain(std::span<const double> x, int scale);

/// Subtract the mean and divide by the sample standard deviation (N-1).
/// A constant sequence is only centered.
Samples zscore(std::span<const double> x);
MultichannelSeries normalized(const MultichannelSeries& data);

/// Unbiased (N-1) sample variance.
double sample_variance(std::span<const double> x);

/// Trace of the P x P sample covariance matrix, i.e. the sum of channel variances.
double covariance_trace(const MultichannelSeries& data);

/// Absolute matching radius for `rule` on `data`.
/// Throws DegenerateTolerance when the trace is zero, InvalidParameter when a
/// trace is requested on fewer than two samples.
double resolve_tolerance(const MultichannelSeries& data, const ToleranceRule& rule);

// ---------------------------------------------------------------------------
// Templates and matching
// ---------------------------------------------------------------------------

/// Delay-embedded templates stored component-major: component k of template i
/// is `components[k][i]`. Components are views into the source series, which
/// must outlive the set.
struct TemplateSet {
    std::size_t origin_channel = 0;
    int lag = 1;
    std::size_t count = 0;
    std::vector<std::span<const double>> components;

    std::size_t dimension() const noexcept { return components.size(); }
    double value(std::size_t i, std::size_t k) const { return components[k][i]; }
    std::vector<double> template_at(std::size_t i) const;
};

/// Templates y(i), y(i+L), ..., y(i+(dim-1)L). By default all N-(dim-1)L
/// templates are formed; `count` truncates to the first `count`.
/// Returns nullopt when fewer than two templates fit.
std::optional<TemplateSet> build_templates(std::span<const double> y, int dim, int lag,
                                           std::optional<std::size_t> count = std::nullopt,
                                           std::size_t origin_channel = 0);

/// Composite delay vectors: the per-channel delay vectors of `channels`
/// concatenated in channel order. `count` templates are formed.
std::optional<TemplateSet> build_composite_templates(std::span<const Samples> channels,
                                                     std::span<const int> dims,
                                                     std::span<const int> lags,
                                                     std::size_t count);

/// max_k |a_k - b_k|. Throws InvalidParameter on length mismatch.
double chebyshev_distance(std::span<const double> a, std::span<const double> b);

struct MatchStats {
    std::vector<std::uint32_t> counts;  // B(i), self-match excluded
    std::vector<double> local;          // R(i) = B(i) / (T - 1)
    double global = 0.0;                // Phi = mean of R(i)
};

/// Number of templates j != i within `radius` (inclusive) of each template i.
std::vector<std::uint32_t> count_matches(const TemplateSet& templates, double radius);

/// Phi for a template set: sum_i B(i) / (T (T - 1)), with the numerator
/// accumulated exactly in integers.
double match_probability(const TemplateSet& templates, double radius);

MatchStats match_stats(const TemplateSet& templates, double radius);

// ---------------------------------------------------------------------------
// Estimators
// ---------------------------------------------------------------------------

struct Estimate {
    std::optional<double> value;
    double phi_m = 0.0;
    double phi_m1 = 0.0;
};

/// -ln(phi_m1 / phi_m), undefined when either probability is zero.
Estimate log_ratio(double phi_m, double phi_m1);

/// Sample entropy with an absolute radius. Uses N-(m-1)L templates at the m
/// pass and N-mL at the m+1 pass unless `equal_template_count` is set.
Estimate sampen(std::span<const double> x, int m, double radius, int lag = 1,
                bool equal_template_count = false);

/// Univariate multiscale sample entropy. The radius is resolved once from the
/// uncoarsened (optionally normalized) input unless params.per_scale_tolerance.
EntropyCurve mse(std::span<const double> x, const EntropyParams& params);

/// Variational embedding multiscale sample entropy: channel c (0-based) is
/// embedded at dimension m + c, the per-channel match probabilities are
/// summed, and the sum is compared against the same sum with every dimension
/// incremented by one.
EntropyCurve vemse(const MultichannelSeries& data, const EntropyParams& params);

struct MmseParams {
    std::vector<int> dims;  // per-channel embedding dimension
    std::vector<int> lags;  // per-channel time lag
    std::vector<int> scales{1};
    ToleranceRule tolerance{};
    bool per_scale_tolerance = false;

    /// Uniform dims/lags for P channels.
    static MmseParams uniform(std::size_t channels, int m, int lag, std::vector<int> scales,
                              ToleranceRule tolerance);
    void validate(std::size_t channel_count) const;
};

/// Multivariate multiscale sample entropy over composite delay vectors. The
/// input is always z-scored first. Both passes use N_t - max(M)max(L)
/// templates; the m+1 probability averages the P single-channel extensions.
EntropyCurve mmse(const MultichannelSeries& data, const MmseParams& params);

}  // namespace msentropy
