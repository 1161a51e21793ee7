#include "msentropy/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace msentropy {

namespace {

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

std::vector<Samples> coarse_channels(const MultichannelSeries& data, int scale) {
    std::vector<Samples> out;
    out.reserve(data.channel_count());
    for (const auto& ch : data.channels()) out.push_back(coarse_grain(ch, scale));
    return out;
}

// Radius for one scale. nullopt when a per-scale trace degenerates.
std::optional<double> scale_radius(const std::vector<Samples>& coarse, double base_radius,
                                   const ToleranceRule& rule, bool per_scale) {
    if (!per_scale || rule.mode == ToleranceRule::Mode::Absolute) return base_radius;
    if (coarse.front().size() < 2) return std::nullopt;
    try {
        return resolve_tolerance(MultichannelSeries(coarse), rule);
    } catch (const DegenerateTolerance&) {
        return std::nullopt;
    }
}

}  // namespace

// ---------------------------------------------------------------------------

Samples coarse_grain(std::span<const double> x, int scale) {
    if (scale < 1) throw InvalidParameter("scale must be >= 1");
    const auto tau = static_cast<std::size_t>(scale);
    if (tau > x.size()) {
        throw InvalidParameter("scale " + std::to_string(scale) + " exceeds series length " +
                               std::to_string(x.size()));
    }
    const std::size_t n_out = x.size() / tau;
    Samples y(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < tau; ++k) s += x[j * tau + k];
        y[j] = s / static_cast<double>(tau);
    }
    return y;
}

Samples zscore(std::span<const double> x) {
    Samples y(x.begin(), x.end());
    if (y.empty()) return y;
    const double mu = mean_of(x);
    for (double& v : y) v -= mu;
    if (y.size() < 2) return y;
    const double sd = std::sqrt(sample_variance(x));
    if (sd > 0.0) {
        for (double& v : y) v /= sd;
    }
    return y;
}

MultichannelSeries normalized(const MultichannelSeries& data) {
    std::vector<Samples> chans;
    chans.reserve(data.channel_count());
    for (const auto& ch : data.channels()) chans.push_back(zscore(ch));
    return MultichannelSeries(std::move(chans), data.labels(), data.sample_rate_hz());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw InvalidParameter("variance needs at least two samples");
    const double mu = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - mu) * (v - mu);
    return ss / static_cast<double>(x.size() - 1);
}

double covariance_trace(const MultichannelSeries& data) {
    double tr = 0.0;
    for (const auto& ch : data.channels()) tr += sample_variance(ch);
    return tr;
}

double resolve_tolerance(const MultichannelSeries& data, const ToleranceRule& rule) {
    if (!(rule.value > 0.0) || !std::isfinite(rule.value)) {
        throw InvalidParameter("tolerance must be a positive finite number");
    }
    if (rule.mode == ToleranceRule::Mode::Absolute) return rule.value;
    if (data.empty()) throw InvalidParameter("cannot resolve tolerance on empty data");
    if (data.length() < 2) {
        throw InvalidParameter("covariance-trace tolerance needs at least two samples per channel");
    }
    const double tr = covariance_trace(data);
    if (!(tr > 0.0)) {
        throw DegenerateTolerance("covariance trace is zero (constant input); use an absolute radius");
    }
    return rule.value * tr;
}

// ---------------------------------------------------------------------------

std::vector<double> TemplateSet::template_at(std::size_t i) const {
    std::vector<double> t(components.size());
    for (std::size_t k = 0; k < components.size(); ++k) t[k] = components[k][i];
    return t;
}

std::optional<TemplateSet> build_templates(std::span<const double> y, int dim, int lag,
                                           std::optional<std::size_t> count,
                                           std::size_t origin_channel) {
    if (dim < 1) throw InvalidParameter("embedding dimension must be >= 1");
    if (lag < 1) throw InvalidParameter("lag must be >= 1");
    const auto span_len = static_cast<std::size_t>(dim - 1) * static_cast<std::size_t>(lag);
    if (y.size() < span_len + 2) return std::nullopt;
    const std::size_t available = y.size() - span_len;
    const std::size_t t = count.value_or(available);
    if (t > available) throw InvalidParameter("requested more templates than the series holds");
    if (t < 2) return std::nullopt;

    TemplateSet set;
    set.origin_channel = origin_channel;
    set.lag = lag;
    set.count = t;
    set.components.reserve(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        set.components.push_back(y.subspan(static_cast<std::size_t>(k * lag), t));
    }
    return set;
}

std::optional<TemplateSet> build_composite_templates(std::span<const Samples> channels,
                                                     std::span<const int> dims,
                                                     std::span<const int> lags,
                                                     std::size_t count) {
    if (channels.size() != dims.size() || channels.size() != lags.size()) {
        throw InvalidParameter("dims and lags must have one entry per channel");
    }
    if (count < 2) return std::nullopt;
    TemplateSet set;
    set.count = count;
    set.lag = lags.empty() ? 1 : *std::max_element(lags.begin(), lags.end());
    for (std::size_t c = 0; c < channels.size(); ++c) {
        if (dims[c] < 1 || lags[c] < 1) throw InvalidParameter("dims and lags must be >= 1");
        const auto reach = static_cast<std::size_t>(dims[c] - 1) * static_cast<std::size_t>(lags[c]);
        if (channels[c].size() < reach + count) return std::nullopt;
        std::span<const double> y(channels[c]);
        for (int k = 0; k < dims[c]; ++k) {
            set.components.push_back(y.subspan(static_cast<std::size_t>(k * lags[c]), count));
        }
    }
    return set;
}

double chebyshev_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidParameter("template lengths differ");
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

std::vector<std::uint32_t> count_matches(const TemplateSet& templates, double radius) {
    const std::size_t t = templates.count;
    const std::size_t dim = templates.dimension();
    std::vector<std::uint32_t> counts(t, 0);
    if (t < 2 || dim == 0) return counts;

    // Dense blocked sweep over j > i: distances for a block are reduced across
    // components before thresholding.
    constexpr std::size_t kBlock = 256;
    std::array<double, kBlock> dist{};
    for (std::size_t i = 0; i + 1 < t; ++i) {
        std::uint32_t own = 0;
        for (std::size_t j0 = i + 1; j0 < t; j0 += kBlock) {
            const std::size_t len = std::min(kBlock, t - j0);
            {
                const double* col = templates.components[0].data() + j0;
                const double a = templates.components[0][i];
                for (std::size_t jj = 0; jj < len; ++jj) dist[jj] = std::abs(col[jj] - a);
            }
            for (std::size_t k = 1; k < dim; ++k) {
                const double* col = templates.components[k].data() + j0;
                const double a = templates.components[k][i];
                for (std::size_t jj = 0; jj < len; ++jj) {
                    const double d = std::abs(col[jj] - a);
                    dist[jj] = dist[jj] < d ? d : dist[jj];
                }
            }
            std::uint32_t* cj = counts.data() + j0;
            for (std::size_t jj = 0; jj < len; ++jj) {
                const std::uint32_t hit = dist[jj] <= radius ? 1U : 0U;
                own += hit;
                cj[jj] += hit;
            }
        }
        counts[i] += own;
    }
    return counts;
}

double match_probability(const TemplateSet& templates, double radius) {
    const auto counts = count_matches(templates, radius);
    const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    const double t = static_cast<double>(templates.count);
    return static_cast<double>(total) / (t * (t - 1.0));
}

MatchStats match_stats(const TemplateSet& templates, double radius) {
    if (templates.count < 2) throw InvalidParameter("matching needs at least two templates");
    if (!(radius > 0.0)) throw InvalidParameter("radius must be positive");
    MatchStats s;
    s.counts = count_matches(templates, radius);
    const double denom = static_cast<double>(templates.count - 1);
    s.local.reserve(s.counts.size());
    for (auto b : s.counts) s.local.push_back(static_cast<double>(b) / denom);
    const std::uint64_t total = std::accumulate(s.counts.begin(), s.counts.end(), std::uint64_t{0});
    s.global = static_cast<double>(total) / (static_cast<double>(templates.count) * denom);
    return s;
}

// ---------------------------------------------------------------------------

Estimate log_ratio(double phi_m, double phi_m1) {
    Estimate e{std::nullopt, phi_m, phi_m1};
    if (phi_m > 0.0 && phi_m1 > 0.0) e.value = -std::log(phi_m1 / phi_m);
    return e;
}

Estimate sampen(std::span<const double> x, int m, double radius, int lag,
                bool equal_template_count) {
    if (m < 1) throw InvalidParameter("m must be >= 1");
    if (lag < 1) throw InvalidParameter("lag must be >= 1");
    if (!(radius > 0.0)) throw InvalidParameter("radius must be positive");
    const auto n = x.size();
    const auto reach_m1 = static_cast<std::size_t>(m) * static_cast<std::size_t>(lag);
    if (n < reach_m1 + 2) return {};

    const std::size_t count_m1 = n - reach_m1;
    const std::size_t count_m = equal_template_count ? count_m1 : n - reach_m1 + lag;
    const auto tm = build_templates(x, m, lag, count_m);
    const auto tm1 = build_templates(x, m + 1, lag, count_m1);
    return log_ratio(match_probability(*tm, radius), match_probability(*tm1, radius));
}

EntropyCurve mse(std::span<const double> x, const EntropyParams& params) {
    params.validate();
    const MultichannelSeries input({Samples(x.begin(), x.end())});
    const MultichannelSeries work = params.normalize ? normalized(input) : input;
    const double radius = resolve_tolerance(work, params.tolerance);
    const auto y = work.channel(0);

    EntropyCurve curve;
    curve.radius = radius;
    for (int scale : params.scales) {
        CurvePoint p;
        p.scale = scale;
        if (static_cast<std::size_t>(scale) <= y.size()) {
            std::vector<Samples> coarse{coarse_grain(y, scale)};
            if (auto r = scale_radius(coarse, radius, params.tolerance, params.per_scale_tolerance)) {
                const Estimate e = sampen(coarse.front(), params.m, *r, params.lag,
                                          params.equal_template_count);
                p.value = e.value;
                p.phi_m = e.phi_m;
                p.phi_m1 = e.phi_m1;
            }
        }
        curve.points.push_back(p);
    }
    return curve;
}

EntropyCurve vemse(const MultichannelSeries& data, const EntropyParams& params) {
    params.validate();
    if (data.empty()) throw InvalidParameter("vemse needs at least one channel");
    const MultichannelSeries work = params.normalize ? normalized(data) : data;
    const double radius = resolve_tolerance(work, params.tolerance);
    const std::size_t channels = work.channel_count();
    const auto lag = static_cast<std::size_t>(params.lag);
    // Largest dimension at the m+1 pass is m + P; it must leave two templates.
    const std::size_t widest_reach = (static_cast<std::size_t>(params.m) + channels - 1) * lag;

    EntropyCurve curve;
    curve.radius = radius;
    for (int scale : params.scales) {
        CurvePoint p;
        p.scale = scale;
        curve.points.push_back(p);
        if (static_cast<std::size_t>(scale) > work.length()) continue;

        const auto coarse = coarse_channels(work, scale);
        const std::size_t nt = coarse.front().size();
        if (nt < widest_reach + 2) continue;
        const auto r = scale_radius(coarse, radius, params.tolerance, params.per_scale_tolerance);
        if (!r) continue;

        double phi_m = 0.0;
        double phi_m1 = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
            const int dim = params.m + static_cast<int>(c);
            const std::size_t count_m1 = nt - static_cast<std::size_t>(dim) * lag;
            const std::size_t count_m = params.equal_template_count ? count_m1 : count_m1 + lag;
            const auto tm = build_templates(coarse[c], dim, params.lag, count_m, c);
            const auto tm1 = build_templates(coarse[c], dim + 1, params.lag, count_m1, c);
            phi_m += match_probability(*tm, *r);
            phi_m1 += match_probability(*tm1, *r);
        }
        const Estimate e = log_ratio(phi_m, phi_m1);
        curve.points.back().value = e.value;
        curve.points.back().phi_m = e.phi_m;
        curve.points.back().phi_m1 = e.phi_m1;
    }
    return curve;
}

// ---------------------------------------------------------------------------

MmseParams MmseParams::uniform(std::size_t channels, int m, int lag, std::vector<int> scales,
                               ToleranceRule tolerance) {
    MmseParams p;
    p.dims.assign(channels, m);
    p.lags.assign(channels, lag);
    p.scales = std::move(scales);
    p.tolerance = tolerance;
    return p;
}

void MmseParams::validate(std::size_t channel_count) const {
    if (dims.size() != channel_count || lags.size() != channel_count) {
        throw InvalidParameter("mmse needs one dimension and one lag per channel");
    }
    for (std::size_t c = 0; c < channel_count; ++c) {
        if (dims[c] < 1) throw InvalidParameter("mmse dimensions must be >= 1");
        if (lags[c] < 1) throw InvalidParameter("mmse lags must be >= 1");
    }
    EntropyParams shared;
    shared.scales = scales;
    shared.tolerance = tolerance;
    shared.validate();
}

EntropyCurve mmse(const MultichannelSeries& data, const MmseParams& params) {
    if (data.empty()) throw InvalidParameter("mmse needs at least one channel");
    params.validate(data.channel_count());
    const MultichannelSeries work = normalized(data);
    const double radius = resolve_tolerance(work, params.tolerance);
    const std::size_t channels = work.channel_count();
    const auto reach = static_cast<std::size_t>(*std::max_element(params.dims.begin(), params.dims.end())) *
                       static_cast<std::size_t>(*std::max_element(params.lags.begin(), params.lags.end()));

    EntropyCurve curve;
    curve.radius = radius;
    for (int scale : params.scales) {
        CurvePoint p;
        p.scale = scale;
        curve.points.push_back(p);
        if (static_cast<std::size_t>(scale) > work.length()) continue;

        const auto coarse = coarse_channels(work, scale);
        const std::size_t nt = coarse.front().size();
        if (nt < reach + 2) continue;
        const auto r = scale_radius(coarse, radius, params.tolerance, params.per_scale_tolerance);
        if (!r) continue;

        const std::size_t count = nt - reach;
        const auto base = build_composite_templates(coarse, params.dims, params.lags, count);
        const double phi = match_probability(*base, *r);

        double extended_sum = 0.0;
        std::vector<int> dims = params.dims;
        for (std::size_t c = 0; c < channels; ++c) {
            ++dims[c];
            const auto ext = build_composite_templates(coarse, dims, params.lags, count);
            extended_sum += match_probability(*ext, *r);
            --dims[c];
        }
        const Estimate e = log_ratio(phi, extended_sum / static_cast<double>(channels));
        curve.points.back().value = e.value;
        curve.points.back().phi_m = e.phi_m;
        curve.points.back().phi_m1 = e.phi_m1;
    }
    return curve;
}

}  // namespace msentropy
