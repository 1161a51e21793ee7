#include "msentropy/replay.hpp"

#include <charconv>

namespace msentropy {

namespace {

constexpr const char* kFormatVersion = "1";

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ParseError("expected an unsigned integer, got '" + s + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& s) { return static_cast<std::size_t>(parse_u64(s)); }

std::string kind_name(SignalKind k) {
    switch (k) {
        case SignalKind::Wgn: return "wgn";
        case SignalKind::Flicker: return "flicker";
        case SignalKind::Ar: return "ar";
    }
    return "?";
}

SignalKind parse_noise_kind(const std::string& s) {
    if (s == "wgn") return SignalKind::Wgn;
    if (s == "flicker") return SignalKind::Flicker;
    throw ParseError("unknown noise kind '" + s + "'");
}

// The sweep metadata, minus the model list which ensemble_to_result records.
void put_header(ResultFile& f, const std::string& command) {
    std::vector<std::pair<std::string, std::string>> rest = std::move(f.metadata);
    f.metadata.clear();
    f.set("tool", "msentropy");
    f.set("format_version", kFormatVersion);
    f.set("command", command);
    for (auto& [k, v] : rest) f.set(std::move(k), std::move(v));
}

void put_study(ResultFile& f, const StudyConfig& c) {
    put_params(f, c.params);
    f.set("length", std::to_string(c.length));
    f.set("realizations", std::to_string(c.realizations));
    f.set("seed", std::to_string(c.base_seed));
}

StudyConfig study_from(const ResultFile& f) {
    StudyConfig c;
    c.params = get_params(f);
    c.length = parse_count(f.require("length"));
    c.realizations = parse_count(f.require("realizations"));
    c.base_seed = parse_u64(f.require("seed"));
    return c;
}

}  // namespace

EntropyCurve compute_curve(const ComputeConfig& config, const MultichannelSeries& data) {
    switch (config.estimator) {
        case Estimator::Vemse: return vemse(data, config.params);
        case Estimator::Mse: return mse(data.channel(0), config.params);
        case Estimator::SampEn: {
            EntropyParams single = config.params;
            single.scales = {1};
            return mse(data.channel(0), single);
        }
        case Estimator::Mmse: {
            const std::size_t p = data.channel_count();
            MmseParams mp = MmseParams::uniform(p, config.params.m, config.params.lag, config.params.scales,
                                                config.params.tolerance);
            if (!config.mmse_dims.empty()) mp.dims = config.mmse_dims;
            if (!config.mmse_lags.empty()) mp.lags = config.mmse_lags;
            mp.per_scale_tolerance = config.params.per_scale_tolerance;
            return mmse(data, mp);
        }
    }
    throw InvalidParameter("unknown estimator");
}

ResultFile run_compute(const ComputeConfig& config) {
    config.params.validate();
    const MultichannelSeries data = load_record(config.input, config.load);
    ResultFile f = curve_to_result(compute_curve(config, data));
    f.set("estimator", to_string(config.estimator));
    put_params(f, config.params);
    if (config.estimator == Estimator::Mmse) {
        f.set("mmse_dims", format_int_values(config.mmse_dims));
        f.set("mmse_lags", format_int_values(config.mmse_lags));
    }
    f.set("input", config.input.string());
    std::vector<int> cols;
    for (auto c : config.load.columns) cols.push_back(static_cast<int>(c));
    f.set("columns", format_int_values(cols));
    f.set("max_rows", config.load.max_rows ? std::to_string(*config.load.max_rows) : "");
    f.set("offset", std::to_string(config.load.offset));
    f.set("channels", std::to_string(data.channel_count()));
    f.set("length", std::to_string(data.length()));
    put_header(f, "compute");
    return f;
}

ComputeConfig compute_config_from(const ResultFile& f) {
    ComputeConfig c;
    c.estimator = parse_estimator(f.require("estimator"));
    c.params = get_params(f);
    if (c.estimator == Estimator::Mmse) {
        if (const auto& d = f.require("mmse_dims"); !d.empty()) c.mmse_dims = parse_int_values(d);
        if (const auto& l = f.require("mmse_lags"); !l.empty()) c.mmse_lags = parse_int_values(l);
    }
    c.input = f.require("input");
    if (const auto& cols = f.require("columns"); !cols.empty()) {
        for (int v : parse_int_values(cols)) c.load.columns.push_back(static_cast<std::size_t>(v));
    }
    if (const auto& mr = f.require("max_rows"); !mr.empty()) c.load.max_rows = parse_count(mr);
    c.load.offset = parse_count(f.require("offset"));
    return c;
}

ResultFile run_sweep_result(const SweepSpec& spec) {
    ResultFile f = ensemble_to_result(run_sweep(spec));
    f.set("estimator", to_string(spec.estimator));
    f.set("vary", to_string(spec.swept));
    f.set("values", format_values(spec.values));
    put_params(f, spec.params);
    f.set("length", std::to_string(spec.length));
    f.set("realizations", std::to_string(spec.realizations));
    f.set("seed", std::to_string(spec.base_seed));
    put_header(f, "sweep");
    return f;
}

SweepSpec sweep_spec_from(const ResultFile& f) {
    SweepSpec s;
    s.estimator = parse_estimator(f.require("estimator"));
    s.swept = parse_sweep_parameter(f.require("vary"));
    s.values = parse_values(f.require("values"));
    s.params = get_params(f);
    s.length = parse_count(f.require("length"));
    s.realizations = parse_count(f.require("realizations"));
    s.base_seed = parse_u64(f.require("seed"));
    const std::size_t models = parse_count(f.require("model_count"));
    for (std::size_t i = 0; i < models; ++i) s.models.push_back(ModelBundle::parse(f.require("model." + std::to_string(i))));
    return s;
}

ResultFile run_noise_study_result(const StudyConfig& config, SignalKind noise_kind, double ratio) {
    ResultFile f = ensemble_to_result(noise_robustness_study(config, noise_kind, ratio));
    f.set("noise_kind", kind_name(noise_kind));
    f.set("noise_ratio", format_double(ratio));
    put_study(f, config);
    put_header(f, "noise_study");
    return f;
}

ResultFile run_directionality_result(const std::vector<ModelBundle>& pairs, const StudyConfig& config) {
    ResultFile f = ensemble_to_result(directionality_study(pairs, config));
    f.set("pair_count", std::to_string(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) f.set("pair." + std::to_string(i), pairs[i].label());
    put_study(f, config);
    put_header(f, "directionality");
    return f;
}

ResultFile run_bench_result(const BenchSpec& spec) {
    ResultFile f = timing_to_result(timing_benchmark(spec));
    f.set("values", format_int_values(spec.values));
    f.set("length", std::to_string(spec.length));
    f.set("channels", std::to_string(spec.channels));
    f.set("m", std::to_string(spec.m));
    f.set("scale", std::to_string(spec.scale));
    f.set("r", format_double(spec.r));
    f.set("runs", std::to_string(spec.runs));
    f.set("seed", std::to_string(spec.seed));
    put_header(f, "bench");
    return f;
}

BenchSpec bench_spec_from(const ResultFile& f) {
    BenchSpec s;
    s.axis = parse_bench_axis(f.require("axis"));
    s.values = parse_int_values(f.require("values"));
    s.length = parse_count(f.require("length"));
    s.channels = parse_count(f.require("channels"));
    s.m = static_cast<int>(parse_count(f.require("m")));
    s.scale = static_cast<int>(parse_count(f.require("scale")));
    s.r = parse_double(f.require("r"));
    s.runs = parse_count(f.require("runs"));
    s.seed = parse_u64(f.require("seed"));
    return s;
}

ResultFile replay(const ResultFile& f) {
    if (f.require("tool") != "msentropy") throw ParseError("not an msentropy result file");
    const std::string& command = f.require("command");
    if (command == "compute") return run_compute(compute_config_from(f));
    if (command == "sweep") return run_sweep_result(sweep_spec_from(f));
    if (command == "noise_study") {
        return run_noise_study_result(study_from(f), parse_noise_kind(f.require("noise_kind")),
                                      parse_double(f.require("noise_ratio")));
    }
    if (command == "directionality") {
        std::vector<ModelBundle> pairs;
        const std::size_t n = parse_count(f.require("pair_count"));
        for (std::size_t i = 0; i < n; ++i) pairs.push_back(ModelBundle::parse(f.require("pair." + std::to_string(i))));
        return run_directionality_result(pairs, study_from(f));
    }
    if (command == "bench") return run_bench_result(bench_spec_from(f));
    throw ParseError("cannot replay command '" + command + "'");
}

}  // namespace msentropy
