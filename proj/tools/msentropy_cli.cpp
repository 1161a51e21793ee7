// msentropy: command-line front end for the multiscale entropy toolkit.
//
// Exit status: 0 success (undefined entropy points included), 2 invalid
// configuration, 3 unreadable or malformed input, 1 anything else.

#include "msentropy/dataio.hpp"
#include "msentropy/experiments.hpp"
#include "msentropy/replay.hpp"
#include "msentropy/signal_lab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace msentropy;

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitParse = 3;

constexpr const char* kRangeHelp =
    "Value lists accept 'a..b' (inclusive integers), 'start:step:stop' (inclusive) "
    "and comma-separated combinations, e.g. '1..20', '0.1:0.1:1.5', '1,2,5'.";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EntropyFlags {
    int m = 2;
    double r = 0.15;
    int lag = 1;
    std::string scales = "1";
    std::string tolerance = "trace";
    bool equal_template_count = false;
    bool per_scale_tolerance = false;
    bool normalize = false;

    void add(CLI::App* app) {
        app->add_option("--m", m, "Base embedding dimension")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--r", r, "Tolerance quotient (trace mode) or absolute radius")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app->add_option("--lag", lag, "Time lag L")->check(CLI::PositiveNumber)->capture_default_str();
        app->add_option("--scales", scales, "Scale factors")->capture_default_str();
        app->add_option("--tolerance", tolerance, "Radius rule: trace (r * tr(S)) or absolute")
            ->check(CLI::IsMember({"trace", "absolute"}))
            ->capture_default_str();
        app->add_flag("--equal-template-count", equal_template_count,
                      "Use N - m*L templates at both passes (classic SampEn)");
        app->add_flag("--per-scale-tolerance", per_scale_tolerance,
                      "Recompute the covariance trace at every scale");
        app->add_flag("--normalize", normalize, "z-score channels first (mmse always does)");
    }

    EntropyParams resolve() const {
        EntropyParams p;
        p.m = m;
        p.lag = lag;
        try {
            p.scales = parse_int_values(scales);
        } catch (const ParseError& e) {
            throw ConfigError(std::string("--scales: ") + e.what());
        }
        p.tolerance = tolerance == "absolute" ? ToleranceRule::absolute(r) : ToleranceRule::trace(r);
        p.equal_template_count = equal_template_count;
        p.per_scale_tolerance = per_scale_tolerance;
        p.normalize = normalize;
        try {
            p.validate();
        } catch (const InvalidParameter& e) {
            throw ConfigError(e.what());
        }
        return p;
    }
};

void print_params(std::ostream& os, const EntropyParams& p) {
    os << "  m = " << p.m << "\n"
       << "  lag = " << p.lag << "\n"
       << "  scales = " << format_int_values(p.scales) << "\n"
       << "  tolerance = "
       << (p.tolerance.mode == ToleranceRule::Mode::Absolute ? "absolute " : "trace quotient ")
       << format_double(p.tolerance.value) << "\n"
       << "  equal_template_count = " << (p.equal_template_count ? "true" : "false") << "\n"
       << "  per_scale_tolerance = " << (p.per_scale_tolerance ? "true" : "false") << "\n"
       << "  normalize = " << (p.normalize ? "true" : "false") << "\n";
}

std::optional<fs::path> resolve_output(const std::string& output) {
    if (output.empty() || output == "-") return std::nullopt;
    fs::path p(output);
    if (const char* dir = std::getenv("MSENTROPY_OUTPUT_DIR"); dir && *dir && p.is_relative()) {
        std::cerr << "output directory override (MSENTROPY_OUTPUT_DIR): " << dir << "\n";
        p = fs::path(dir) / p;
    }
    return p;
}

void emit(const ResultFile& f, const std::optional<fs::path>& out) {
    if (out) {
        write_result(f, *out);
        std::cerr << "wrote " << out->string() << "\n";
    } else {
        std::cout << format_result(f);
    }
}

void emit_plot(const ResultFile& f, const std::optional<fs::path>& out) {
    if (!out) throw ConfigError("--emit-plot requires --output");
    fs::path script = *out;
    script += ".gp";
    std::ofstream gp(script);
    if (!gp) throw IoError("cannot open '" + script.string() + "' for writing");
    const std::string data = out->filename().string();
    gp << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key outside\n";
    const std::string kind = f.require("kind");
    if (kind == "curve") {
        gp << "set xlabel 'scale'\nset ylabel 'entropy'\n"
           << "plot '" << data << "' skip 1 using 1:2 with linespoints title '" << f.get("estimator").value_or("")
           << "'\n";
    } else if (kind == "ensemble") {
        const auto models = std::stoul(f.require("model_count"));
        gp << "set xlabel '" << f.get("vary").value_or("scale") << "'\nset ylabel 'entropy'\nplot ";
        for (std::size_t i = 0; i < models; ++i) {
            if (i) gp << ", \\\n     ";
            gp << "'" << data << "' skip 1 using ($2==" << i << " ? $1 : 1/0):4:5 with yerrorlines title '"
               << f.require("model." + std::to_string(i)) << "'";
        }
        gp << "\n";
    } else if (kind == "timing") {
        gp << "set xlabel '" << f.require("axis") << "'\nset ylabel 'seconds'\n"
           << "plot '" << data << "' skip 1 using 1:2 with linespoints title 'vemse', \\\n"
           << "     '" << data << "' skip 1 using 1:4 with linespoints title 'mmse'\n";
    }
    std::cerr << "wrote " << script.string() << "\n";
}

std::vector<std::size_t> parse_columns(const std::string& text) {
    std::vector<std::size_t> cols;
    if (text.empty()) return cols;
    try {
        for (int c : parse_int_values(text)) {
            if (c < 1) throw ConfigError("--columns: column numbers start at 1");
            cols.push_back(static_cast<std::size_t>(c - 1));
        }
    } catch (const ParseError& e) {
        throw ConfigError(std::string("--columns: ") + e.what());
    }
    return cols;
}

std::vector<ModelBundle> parse_models(const std::vector<std::string>& texts, const char* flag) {
    std::vector<ModelBundle> out;
    for (const auto& t : texts) {
        try {
            out.push_back(ModelBundle::parse(t));
        } catch (const InvalidParameter& e) {
            throw ConfigError(std::string(flag) + ": " + e.what());
        }
    }
    return out;
}

template <class Fn>
auto as_config(const char* flag, Fn fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ConfigError(std::string(flag) + ": " + e.what());
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string(flag) + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiscale sample entropy toolkit: SampEn, MSE, MMSE and variational-embedding MSE.\n" +
                 std::string(kRangeHelp)};
    app.require_subcommand(1);

    // compute ---------------------------------------------------------------
    auto* compute = app.add_subcommand("compute", "Entropy curve of a recorded multichannel file");
    std::string c_estimator = "vemse";
    std::string c_input;
    std::string c_output;
    std::string c_columns;
    std::optional<std::size_t> c_max_rows;
    std::size_t c_offset = 0;
    std::string c_dims;
    std::string c_lags;
    bool c_plot = false;
    EntropyFlags c_flags;
    compute->add_option("--estimator", c_estimator, "sampen, mse, mmse or vemse")
        ->check(CLI::IsMember({"sampen", "mse", "mmse", "vemse"}))
        ->capture_default_str();
    compute->add_option("--input", c_input, "Record CSV")->required();
    compute->add_option("--output", c_output, "Result CSV (default: standard output)");
    compute->add_option("--columns", c_columns, "1-based columns to use, in order (e.g. 2,1)");
    compute->add_option("--max-rows", c_max_rows, "Use at most this many rows");
    compute->add_option("--offset", c_offset, "Skip this many data rows first");
    compute->add_option("--dims", c_dims, "mmse: per-channel embedding dimensions (default m for all)");
    compute->add_option("--lags", c_lags, "mmse: per-channel lags (default lag for all)");
    compute->add_flag("--emit-plot", c_plot, "Also write a gnuplot script next to the output");
    c_flags.add(compute);

    // sweep -----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Ensemble parameter sweep over synthetic models");
    std::string s_estimator = "vemse";
    std::string s_vary = "scale";
    std::string s_values = "1..20";
    std::vector<std::string> s_models{"wgn,wgn", "flicker,flicker", "ar1,ar1", "ar2,ar2", "ar3,ar3"};
    std::size_t s_n = 1000;
    std::size_t s_realizations = 20;
    std::uint64_t s_seed = 0;
    std::size_t s_jobs = 1;
    std::string s_output;
    bool s_plot = false;
    EntropyFlags s_flags;
    sweep->add_option("--estimator", s_estimator, "sampen, mse, mmse or vemse")
        ->check(CLI::IsMember({"sampen", "mse", "mmse", "vemse"}))
        ->capture_default_str();
    sweep->add_option("--vary", s_vary, "Swept parameter: m, N, r or scale")
        ->check(CLI::IsMember({"m", "N", "n", "r", "scale"}))
        ->capture_default_str();
    sweep->add_option("--values", s_values, "Sweep values")->capture_default_str();
    sweep->add_option("--models", s_models,
                      "Model bundles, one channel recipe per comma: <wgn|flicker|ar1|ar2|ar3>[+<wgn|flicker>*ratio]")
        ->capture_default_str();
    sweep->add_option("--n", s_n, "Samples per channel")->capture_default_str();
    sweep->add_option("--realizations", s_realizations, "Realizations per point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--seed", s_seed, "Base seed")->capture_default_str();
    sweep->add_option("--jobs", s_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--output", s_output, "Result CSV (default: standard output)");
    sweep->add_flag("--emit-plot", s_plot, "Also write a gnuplot script next to the output");
    s_flags.add(sweep);

    // study -----------------------------------------------------------------
    auto* study = app.add_subcommand("study", "Noise-robustness or directionality study (veMSE)");
    std::string st_kind = "noise";
    std::string st_noise = "wgn";
    double st_ratio = 0.2;
    std::vector<std::string> st_pairs{"wgn,ar1", "ar1,ar2", "ar2,ar3"};
    std::size_t st_n = 3000;
    std::size_t st_realizations = 20;
    std::uint64_t st_seed = 0;
    std::size_t st_jobs = 1;
    std::string st_output;
    bool st_plot = false;
    EntropyFlags st_flags;
    st_flags.scales = "1..20";
    study->add_option("--kind", st_kind, "noise or directionality")
        ->check(CLI::IsMember({"noise", "directionality"}))
        ->capture_default_str();
    study->add_option("--noise", st_noise, "Noise kind for the noise study")
        ->check(CLI::IsMember({"wgn", "flicker"}))
        ->capture_default_str();
    study->add_option("--ratio", st_ratio, "Noise amplitude relative to the signal")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    study->add_option("--pairs", st_pairs, "Two-channel bundles for the directionality study")->capture_default_str();
    study->add_option("--n", st_n, "Samples per channel")->capture_default_str();
    study->add_option("--realizations", st_realizations, "Realizations")->check(CLI::PositiveNumber)->capture_default_str();
    study->add_option("--seed", st_seed, "Base seed")->capture_default_str();
    study->add_option("--jobs", st_jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    study->add_option("--output", st_output, "Result CSV (default: standard output)");
    study->add_flag("--emit-plot", st_plot, "Also write a gnuplot script next to the output");
    st_flags.add(study);

    // generate --------------------------------------------------------------
    auto* generate = app.add_subcommand("generate", "Write a synthetic record");
    std::string g_kind = "wgn";
    std::size_t g_n = 3000;
    double g_sd = 1.0;
    std::uint64_t g_seed = 0;
    std::uint64_t g_realization = 0;
    std::optional<double> g_rate;
    std::string g_output;
    generate->add_option("--kind", g_kind, "Channel recipes, comma separated (e.g. ar3 or wgn,ar1+wgn*0.2)")
        ->capture_default_str();
    generate->add_option("--n", g_n, "Samples per channel")->check(CLI::PositiveNumber)->capture_default_str();
    generate->add_option("--sd", g_sd, "Target standard deviation")->check(CLI::PositiveNumber)->capture_default_str();
    generate->add_option("--seed", g_seed, "Base seed")->capture_default_str();
    generate->add_option("--realization", g_realization, "Realization index")->capture_default_str();
    generate->add_option("--sample-rate", g_rate, "Sample rate in Hz written to the header")
        ->check(CLI::PositiveNumber);
    generate->add_option("--output", g_output, "Record CSV (default: standard output)");

    // surrogate -------------------------------------------------------------
    auto* surrogate = app.add_subcommand("surrogate", "Shuffle every channel of a record");
    std::string su_input;
    std::string su_output;
    std::string su_columns;
    std::optional<std::size_t> su_max_rows;
    std::size_t su_offset = 0;
    std::uint64_t su_seed = 0;
    surrogate->add_option("--input", su_input, "Record CSV")->required();
    surrogate->add_option("--output", su_output, "Record CSV (default: standard output)");
    surrogate->add_option("--columns", su_columns, "1-based columns to use, in order");
    surrogate->add_option("--max-rows", su_max_rows, "Use at most this many rows");
    surrogate->add_option("--offset", su_offset, "Skip this many data rows first");
    surrogate->add_option("--seed", su_seed, "Base seed (channel c uses a derived sub-stream)")->capture_default_str();

    // bench -----------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Time vemse against mmse over a parameter grid");
    std::string b_vary = "channels";
    std::string b_values = "2..6";
    BenchSpec b_spec;
    std::string b_output;
    bool b_plot = false;
    bench->add_option("--vary", b_vary, "scale, N, channels or m")
        ->check(CLI::IsMember({"scale", "N", "n", "channels", "m"}))
        ->capture_default_str();
    bench->add_option("--values", b_values, "Grid values")->capture_default_str();
    bench->add_option("--n", b_spec.length, "Samples per channel")->capture_default_str();
    bench->add_option("--channels", b_spec.channels, "Channel count")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--m", b_spec.m, "Embedding dimension")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--scale", b_spec.scale, "Scale factor")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--r", b_spec.r, "Tolerance quotient")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--runs", b_spec.runs, "Timed runs per point")->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--seed", b_spec.seed, "Seed for the WGN input")->capture_default_str();
    bench->add_option("--output", b_output, "Timing CSV (default: standard output)");
    bench->add_flag("--emit-plot", b_plot, "Also write a gnuplot script next to the output");

    // replay ----------------------------------------------------------------
    auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a result file");
    std::string r_input;
    std::string r_output;
    replay_cmd->add_option("--input", r_input, "Result CSV")->required();
    replay_cmd->add_option("--output", r_output, "Result CSV (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (*compute) {
            ComputeConfig cfg;
            cfg.estimator = parse_estimator(c_estimator);
            cfg.params = c_flags.resolve();
            cfg.input = c_input;
            cfg.load.columns = parse_columns(c_columns);
            cfg.load.max_rows = c_max_rows;
            cfg.load.offset = c_offset;
            if (!c_dims.empty()) cfg.mmse_dims = as_config("--dims", [&] { return parse_int_values(c_dims); });
            if (!c_lags.empty()) cfg.mmse_lags = as_config("--lags", [&] { return parse_int_values(c_lags); });
            const auto out = resolve_output(c_output);

            const MultichannelSeries data = load_record(cfg.input, cfg.load);
            // Radius as each estimator resolves it.
            double radius = 0.0;
            try {
                if (cfg.estimator == Estimator::Mmse) {
                    radius = resolve_tolerance(normalized(data), cfg.params.tolerance);
                } else {
                    MultichannelSeries used = cfg.estimator == Estimator::Vemse
                                                  ? data
                                                  : MultichannelSeries({Samples(data.channel(0).begin(),
                                                                                data.channel(0).end())});
                    if (cfg.params.normalize) used = normalized(used);
                    radius = resolve_tolerance(used, cfg.params.tolerance);
                }
            } catch (const DegenerateTolerance& e) {
                throw ConfigError(std::string("--r: ") + e.what());
            }

            std::cerr << "compute\n"
                      << "  estimator = " << to_string(cfg.estimator) << "\n";
            print_params(std::cerr, cfg.params);
            if (cfg.estimator == Estimator::Mmse) {
                std::cerr << "  dims = " << (c_dims.empty() ? "m for all channels" : c_dims) << "\n"
                          << "  lags = " << (c_lags.empty() ? "lag for all channels" : c_lags) << "\n";
            }
            std::cerr << "  input = " << c_input << " (" << data.channel_count() << " channels, "
                      << data.length() << " samples)\n"
                      << "  resolved radius = " << format_double(radius) << "\n";

            const ResultFile f = run_compute(cfg);
            emit(f, out);
            if (c_plot) emit_plot(f, out);
            return 0;
        }

        if (*sweep) {
            SweepSpec spec;
            spec.estimator = parse_estimator(s_estimator);
            spec.swept = parse_sweep_parameter(s_vary);
            spec.values = as_config("--values", [&] { return parse_values(s_values); });
            spec.params = s_flags.resolve();
            spec.length = s_n;
            spec.models = parse_models(s_models, "--models");
            spec.realizations = s_realizations;
            spec.base_seed = s_seed;
            spec.jobs = s_jobs;
            as_config("sweep", [&] { spec.validate(); return 0; });
            const auto out = resolve_output(s_output);

            std::cerr << "sweep\n"
                      << "  estimator = " << to_string(spec.estimator) << "\n"
                      << "  vary = " << to_string(spec.swept) << "\n"
                      << "  values = " << format_values(spec.values) << "\n"
                      << "  N = " << spec.length << "\n"
                      << "  realizations = " << spec.realizations << "\n"
                      << "  seed = " << spec.base_seed << "\n"
                      << "  jobs = " << spec.jobs << "\n";
            for (const auto& b : spec.models) std::cerr << "  model = " << b.label() << "\n";
            print_params(std::cerr, spec.params);
            std::cerr << "  resolved radius = "
                      << (spec.params.tolerance.mode == ToleranceRule::Mode::Absolute
                              ? format_double(spec.params.tolerance.value)
                              : "quotient x covariance trace of each realization")
                      << "\n";

            const ResultFile f = run_sweep_result(spec);
            emit(f, out);
            if (s_plot) emit_plot(f, out);
            return 0;
        }

        if (*study) {
            StudyConfig cfg;
            cfg.params = st_flags.resolve();
            cfg.length = st_n;
            cfg.realizations = st_realizations;
            cfg.base_seed = st_seed;
            cfg.jobs = st_jobs;
            const auto out = resolve_output(st_output);
            std::cerr << "study\n"
                      << "  kind = " << st_kind << "\n"
                      << "  N = " << cfg.length << "\n"
                      << "  realizations = " << cfg.realizations << "\n"
                      << "  seed = " << cfg.base_seed << "\n";
            print_params(std::cerr, cfg.params);

            ResultFile f;
            if (st_kind == "noise") {
                std::cerr << "  noise = " << st_noise << "\n  ratio = " << format_double(st_ratio) << "\n";
                f = run_noise_study_result(cfg, st_noise == "flicker" ? SignalKind::Flicker : SignalKind::Wgn,
                                           st_ratio);
            } else {
                const auto pairs = parse_models(st_pairs, "--pairs");
                for (const auto& p : pairs) std::cerr << "  pair = " << p.label() << "\n";
                f = as_config("--pairs", [&] { return run_directionality_result(pairs, cfg); });
            }
            emit(f, out);
            if (st_plot) emit_plot(f, out);
            return 0;
        }

        if (*generate) {
            const auto bundle = parse_models({g_kind}, "--kind").front();
            const auto out = resolve_output(g_output);
            std::cerr << "generate\n"
                      << "  kind = " << bundle.label() << "\n"
                      << "  n = " << g_n << "\n"
                      << "  sd = " << format_double(g_sd) << "\n"
                      << "  seed = " << g_seed << "\n"
                      << "  realization = " << g_realization << "\n";
            if (g_n < 2) throw ConfigError("--n: at least two samples are required");
            MultichannelSeries unit = bundle.realize(g_n, g_seed, g_realization);
            std::vector<Samples> chans = unit.channels();
            for (auto& ch : chans) {
                for (double& v : ch) v *= g_sd;
            }
            const MultichannelSeries data(std::move(chans), unit.labels(), g_rate);
            const std::vector<std::pair<std::string, std::string>> meta{
                {"generator", "msentropy generate"},
                {"kind", bundle.label()},
                {"n", std::to_string(g_n)},
                {"sd", format_double(g_sd)},
                {"seed", std::to_string(g_seed)},
                {"realization", std::to_string(g_realization)}};
            if (out) {
                write_record(data, *out, meta);
                std::cerr << "wrote " << out->string() << "\n";
            } else {
                std::cout << format_record(data, meta);
            }
            return 0;
        }

        if (*surrogate) {
            LoadOptions load;
            load.columns = parse_columns(su_columns);
            load.max_rows = su_max_rows;
            load.offset = su_offset;
            const auto out = resolve_output(su_output);
            std::cerr << "surrogate\n"
                      << "  input = " << su_input << "\n"
                      << "  seed = " << su_seed << "\n";
            const MultichannelSeries data = load_record(su_input, load);
            std::vector<Samples> chans;
            for (std::size_t c = 0; c < data.channel_count(); ++c) {
                chans.push_back(shuffle_surrogate(data.channel(c), derive_seed(su_seed, {c})));
            }
            const MultichannelSeries shuffled(std::move(chans), data.labels(), data.sample_rate_hz());
            const std::vector<std::pair<std::string, std::string>> meta{
                {"surrogate_of", su_input}, {"seed", std::to_string(su_seed)}};
            if (out) {
                write_record(shuffled, *out, meta);
                std::cerr << "wrote " << out->string() << "\n";
            } else {
                std::cout << format_record(shuffled, meta);
            }
            return 0;
        }

        if (*bench) {
            b_spec.axis = parse_bench_axis(b_vary);
            b_spec.values = as_config("--values", [&] { return parse_int_values(b_values); });
            as_config("bench", [&] { b_spec.validate(); return 0; });
            const auto out = resolve_output(b_output);
            std::cerr << "bench\n"
                      << "  vary = " << to_string(b_spec.axis) << "\n"
                      << "  values = " << format_int_values(b_spec.values) << "\n"
                      << "  N = " << b_spec.length << "\n"
                      << "  channels = " << b_spec.channels << "\n"
                      << "  m = " << b_spec.m << "\n"
                      << "  scale = " << b_spec.scale << "\n"
                      << "  r = " << format_double(b_spec.r) << " (x covariance trace of z-scored WGN)\n"
                      << "  runs = " << b_spec.runs << "\n"
                      << "  seed = " << b_spec.seed << "\n";
            const ResultFile f = run_bench_result(b_spec);
            emit(f, out);
            if (b_plot) emit_plot(f, out);
            return 0;
        }

        if (*replay_cmd) {
            const ResultFile in = read_result(r_input);
            const auto out = resolve_output(r_output);
            std::cerr << "replay\n  input = " << r_input << "\n";
            for (const auto& [k, v] : in.metadata) std::cerr << "  " << k << " = " << v << "\n";
            emit(replay(in), out);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const DegenerateTolerance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
