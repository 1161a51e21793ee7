#include "msentropy/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace msentropy {

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::SampEn: return "sampen";
        case Estimator::Mse: return "mse";
        case Estimator::Mmse: return "mmse";
        case Estimator::Vemse: return "vemse";
    }
    return "?";
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::M: return "m";
        case SweepParameter::N: return "N";
        case SweepParameter::R: return "r";
        case SweepParameter::Scale: return "scale";
    }
    return "?";
}

Estimator parse_estimator(const std::string& s) {
    if (s == "sampen") return Estimator::SampEn;
    if (s == "mse") return Estimator::Mse;
    if (s == "mmse") return Estimator::Mmse;
    if (s == "vemse") return Estimator::Vemse;
    throw InvalidParameter("unknown estimator '" + s + "' (expected sampen, mse, mmse, vemse)");
}

SweepParameter parse_sweep_parameter(const std::string& s) {
    if (s == "m") return SweepParameter::M;
    if (s == "N" || s == "n") return SweepParameter::N;
    if (s == "r") return SweepParameter::R;
    if (s == "scale" || s == "tau") return SweepParameter::Scale;
    throw InvalidParameter("unknown sweep parameter '" + s + "' (expected m, N, r, scale)");
}

std::string to_string(BenchAxis a) {
    switch (a) {
        case BenchAxis::Scale: return "scale";
        case BenchAxis::Length: return "N";
        case BenchAxis::Channels: return "channels";
        case BenchAxis::M: return "m";
    }
    return "?";
}

BenchAxis parse_bench_axis(const std::string& s) {
    if (s == "scale" || s == "tau") return BenchAxis::Scale;
    if (s == "N" || s == "n") return BenchAxis::Length;
    if (s == "channels" || s == "P") return BenchAxis::Channels;
    if (s == "m") return BenchAxis::M;
    throw InvalidParameter("unknown benchmark axis '" + s + "' (expected scale, N, channels, m)");
}

// ---------------------------------------------------------------------------

double EnsemblePoint::standard_error() const {
    return defined == 0 ? 0.0 : std / std::sqrt(static_cast<double>(defined));
}

const EnsemblePoint& EnsembleResult::at(double sweep_value, std::size_t model, int scale) const {
    for (const auto& p : points) {
        if (p.sweep_value == sweep_value && p.model == model && p.scale == scale) return p;
    }
    throw InvalidParameter("no ensemble point at sweep value " + std::to_string(sweep_value));
}

const EnsemblePoint& EnsembleResult::at(double sweep_value, std::size_t model) const {
    for (const auto& p : points) {
        if (p.sweep_value == sweep_value && p.model == model) return p;
    }
    throw InvalidParameter("no ensemble point at sweep value " + std::to_string(sweep_value));
}

bool EnsembleResult::same_points(const EnsembleResult& other) const {
    return swept == other.swept && model_labels == other.model_labels && points == other.points;
}

namespace {

bool is_integral(double v) { return std::floor(v) == v; }

// Runs fn(k) for k in [0, count), on up to `jobs` threads. The first
// exception thrown by any worker is rethrown after all workers finish.
void for_each_realization(std::size_t count, std::size_t jobs,
                          const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
            workers.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

EntropyCurve undefined_curve(const std::vector<int>& scales) {
    EntropyCurve c;
    for (int s : scales) c.points.push_back(CurvePoint{s, std::nullopt, 0.0, 0.0});
    return c;
}

EntropyCurve evaluate(Estimator estimator, const MultichannelSeries& data, const EntropyParams& params) {
    try {
        switch (estimator) {
            case Estimator::Vemse: return vemse(data, params);
            case Estimator::Mse: return mse(data.channel(0), params);
            case Estimator::SampEn: {
                EntropyParams single = params;
                single.scales = {1};
                return mse(data.channel(0), single);
            }
            case Estimator::Mmse: {
                auto mp = MmseParams::uniform(data.channel_count(), params.m, params.lag, params.scales,
                                              params.tolerance);
                mp.per_scale_tolerance = params.per_scale_tolerance;
                return mmse(data, mp);
            }
        }
    } catch (const DegenerateTolerance&) {
        return undefined_curve(params.scales);
    }
    throw InvalidParameter("unknown estimator");
}

// curves[model][slot] for one realization.
using RealizationCurves = std::vector<std::vector<EntropyCurve>>;

// Builds ensemble statistics in realization order. When `slot_values` is
// empty every model has one curve per realization and each point's scale is
// its sweep value; otherwise slot i corresponds to sweep value slot_values[i].
EnsembleResult aggregate(SweepParameter swept, std::vector<std::string> labels,
                         const std::vector<double>& slot_values,
                         const std::vector<RealizationCurves>& runs, bool keep_curves) {
    EnsembleResult out;
    out.swept = swept;
    out.model_labels = std::move(labels);
    const std::size_t models = out.model_labels.size();
    const std::size_t slots = slot_values.empty() ? 1 : slot_values.size();
    const std::size_t r_count = runs.size();

    for (std::size_t slot = 0; slot < slots; ++slot) {
        const std::size_t n_points = runs.front()[0][slot].points.size();
        for (std::size_t pi = 0; pi < n_points; ++pi) {
            for (std::size_t model = 0; model < models; ++model) {
                EnsemblePoint ep;
                ep.model = model;
                ep.scale = runs.front()[model][slot].points[pi].scale;
                ep.sweep_value = slot_values.empty() ? static_cast<double>(ep.scale) : slot_values[slot];
                ep.realizations = r_count;
                double sum = 0.0;
                std::vector<double> vals;
                for (std::size_t k = 0; k < r_count; ++k) {
                    const auto& v = runs[k][model][slot].points[pi].value;
                    if (v) {
                        vals.push_back(*v);
                        sum += *v;
                    }
                }
                ep.defined = vals.size();
                if (!vals.empty()) {
                    const double mu = sum / static_cast<double>(vals.size());
                    ep.mean = mu;
                    if (vals.size() > 1) {
                        double ss = 0.0;
                        for (double v : vals) ss += (v - mu) * (v - mu);
                        ep.std = std::sqrt(ss / static_cast<double>(vals.size() - 1));
                    }
                }
                out.points.push_back(ep);
            }
        }
    }

    if (keep_curves) {
        for (std::size_t k = 0; k < r_count; ++k) {
            for (std::size_t model = 0; model < models; ++model) {
                for (std::size_t slot = 0; slot < slots; ++slot) {
                    RealizationCurve rc;
                    rc.sweep_value = slot_values.empty() ? 0.0 : slot_values[slot];
                    rc.model = model;
                    rc.realization = k;
                    rc.curve = runs[k][model][slot];
                    out.curves.push_back(std::move(rc));
                }
            }
        }
    }
    return out;
}

}  // namespace

void SweepSpec::validate() const {
    if (models.empty()) throw InvalidParameter("sweep needs at least one model");
    for (const auto& b : models) {
        if (b.channels.empty()) throw InvalidParameter("model bundle has no channels");
    }
    if (realizations < 1) throw InvalidParameter("realizations must be >= 1");
    if (values.empty()) throw InvalidParameter("sweep values are empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) throw InvalidParameter("sweep values must be strictly increasing");
    }
    for (double v : values) {
        switch (swept) {
            case SweepParameter::M:
                if (!is_integral(v) || v < 1) throw InvalidParameter("swept m values must be integers >= 1");
                break;
            case SweepParameter::N:
                if (!is_integral(v) || v < 2) throw InvalidParameter("swept N values must be integers >= 2");
                break;
            case SweepParameter::R:
                if (!(v > 0.0)) throw InvalidParameter("swept r values must be positive");
                break;
            case SweepParameter::Scale:
                if (!is_integral(v) || v < 1) throw InvalidParameter("swept scales must be integers >= 1");
                break;
        }
    }
    if (swept == SweepParameter::Scale && estimator == Estimator::SampEn) {
        throw InvalidParameter("sampen is single-scale; sweep scale with mse instead");
    }
    if (swept != SweepParameter::N && length < 2) throw InvalidParameter("length must be >= 2");
    params.validate();
}

EnsembleResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const bool by_scale = spec.swept == SweepParameter::Scale;
    const std::size_t slots = by_scale ? 1 : spec.values.size();

    std::vector<RealizationCurves> runs(spec.realizations);
    for_each_realization(spec.realizations, spec.jobs, [&](std::size_t k) {
        RealizationCurves rc(spec.models.size(), std::vector<EntropyCurve>(slots));
        for (std::size_t j = 0; j < spec.models.size(); ++j) {
            std::optional<MultichannelSeries> shared;
            if (spec.swept != SweepParameter::N) shared = spec.models[j].realize(spec.length, spec.base_seed, k);
            for (std::size_t slot = 0; slot < slots; ++slot) {
                EntropyParams p = spec.params;
                std::optional<MultichannelSeries> own;
                switch (spec.swept) {
                    case SweepParameter::M: p.m = static_cast<int>(spec.values[slot]); break;
                    case SweepParameter::R: p.tolerance.value = spec.values[slot]; break;
                    case SweepParameter::N:
                        own = spec.models[j].realize(static_cast<std::size_t>(spec.values[slot]),
                                                     spec.base_seed, k);
                        break;
                    case SweepParameter::Scale:
                        p.scales.clear();
                        for (double v : spec.values) p.scales.push_back(static_cast<int>(v));
                        break;
                }
                rc[j][slot] = evaluate(spec.estimator, own ? *own : *shared, p);
            }
        }
        runs[k] = std::move(rc);
    });

    std::vector<std::string> labels;
    for (const auto& b : spec.models) labels.push_back(b.label());
    return aggregate(spec.swept, std::move(labels), by_scale ? std::vector<double>{} : spec.values, runs,
                     spec.keep_curves);
}

// ---------------------------------------------------------------------------

EnsembleResult noise_robustness_study(const StudyConfig& config, SignalKind noise_kind, double ratio) {
    if (!(ratio >= 0.0)) throw InvalidParameter("noise ratio must be >= 0");
    if (noise_kind == SignalKind::Ar) throw InvalidParameter("noise must be wgn or flicker");

    SweepSpec spec;
    spec.estimator = Estimator::Vemse;
    spec.swept = SweepParameter::Scale;
    for (int s : config.params.scales) spec.values.push_back(s);
    spec.params = config.params;
    spec.length = config.length;
    spec.realizations = config.realizations;
    spec.base_seed = config.base_seed;
    spec.jobs = config.jobs;

    for (int order = 1; order <= 3; ++order) {
        ChannelRecipe ch{SignalKind::Ar, order, NoiseMix{noise_kind, ratio}};
        spec.models.push_back(ModelBundle{{ch, ch}});
    }
    const ChannelRecipe wgn{SignalKind::Wgn, 0, std::nullopt};
    const ChannelRecipe flicker{SignalKind::Flicker, 0, std::nullopt};
    const ChannelRecipe both{SignalKind::Flicker, 0, NoiseMix{SignalKind::Wgn, 1.0}};
    spec.models.push_back(ModelBundle{{wgn, wgn}});
    spec.models.push_back(ModelBundle{{flicker, flicker}});
    spec.models.push_back(ModelBundle{{both, both}});
    return run_sweep(spec);
}

EnsembleResult directionality_study(const std::vector<ModelBundle>& pairs, const StudyConfig& config) {
    if (pairs.empty()) throw InvalidParameter("directionality study needs at least one pair");
    for (const auto& b : pairs) {
        if (b.channels.size() != 2) throw InvalidParameter("directionality pairs must have exactly two channels");
    }
    if (config.realizations < 1) throw InvalidParameter("realizations must be >= 1");
    config.params.validate();

    std::vector<std::string> labels;
    for (const auto& b : pairs) {
        labels.push_back(b.label());
        labels.push_back(ModelBundle{{b.channels[1], b.channels[0]}}.label());
    }
    const std::size_t reversed_order[] = {1, 0};

    std::vector<RealizationCurves> runs(config.realizations);
    for_each_realization(config.realizations, config.jobs, [&](std::size_t k) {
        RealizationCurves rc;
        for (const auto& b : pairs) {
            const auto data = b.realize(config.length, config.base_seed, k);
            rc.push_back({vemse(data, config.params)});
            rc.push_back({vemse(data.select(reversed_order), config.params)});
        }
        runs[k] = std::move(rc);
    });
    return aggregate(SweepParameter::Scale, std::move(labels), {}, runs, false);
}

// ---------------------------------------------------------------------------

void BenchSpec::validate() const {
    if (values.empty()) throw InvalidParameter("benchmark grid is empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] <= values[i - 1]) throw InvalidParameter("benchmark grid must be increasing");
    }
    if (values.front() < 1) throw InvalidParameter("benchmark grid values must be >= 1");
    if (runs < 1) throw InvalidParameter("runs must be >= 1");
    if (!(r > 0.0)) throw InvalidParameter("r must be positive");
}

TimingReport timing_benchmark(const BenchSpec& spec) {
    spec.validate();
    using clock = std::chrono::steady_clock;

    TimingReport report;
    report.axis = spec.axis;
    double sink = 0.0;
    for (int value : spec.values) {
        std::size_t n = spec.length;
        std::size_t channels = spec.channels;
        int m = spec.m;
        int scale = spec.scale;
        switch (spec.axis) {
            case BenchAxis::Scale: scale = value; break;
            case BenchAxis::Length: n = static_cast<std::size_t>(value); break;
            case BenchAxis::Channels: channels = static_cast<std::size_t>(value); break;
            case BenchAxis::M: m = value; break;
        }
        std::vector<Samples> chans;
        for (std::size_t c = 0; c < channels; ++c) {
            chans.push_back(generate_wgn(n, 1.0, derive_seed(spec.seed, {static_cast<std::uint64_t>(value), c})));
        }
        const MultichannelSeries data(std::move(chans));

        EntropyParams vp;
        vp.m = m;
        vp.scales = {scale};
        vp.tolerance = ToleranceRule::trace(spec.r);
        vp.normalize = true;
        const auto mp = MmseParams::uniform(channels, m, 1, {scale}, ToleranceRule::trace(spec.r));

        auto consume = [&sink](const EntropyCurve& c) {
            if (c.points.front().value) sink += *c.points.front().value;
        };
        consume(vemse(data, vp));
        consume(mmse(data, mp));

        std::vector<double> tv;
        std::vector<double> tm;
        for (std::size_t run = 0; run < spec.runs; ++run) {
            auto t0 = clock::now();
            consume(vemse(data, vp));
            auto t1 = clock::now();
            consume(mmse(data, mp));
            auto t2 = clock::now();
            tv.push_back(std::chrono::duration<double>(t1 - t0).count());
            tm.push_back(std::chrono::duration<double>(t2 - t1).count());
        }
        auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            const std::size_t h = v.size() / 2;
            return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
        };
        report.points.push_back(TimingPoint{value, mean(tv), median(tv), mean(tm), median(tm), spec.runs});
    }
    // Keeps the timed calls observable.
    volatile double guard = sink;
    (void)guard;
    return report;
}

}  // namespace msentropy
