#pragma once

#include "msentropy/entropy.hpp"
#include "msentropy/signal_lab.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msentropy {

enum class Estimator { SampEn, Mse, Mmse, Vemse };
enum class SweepParameter { M, N, R, Scale };

std::string to_string(Estimator e);
std::string to_string(SweepParameter p);
Estimator parse_estimator(const std::string& s);
SweepParameter parse_sweep_parameter(const std::string& s);

/// One ensemble experiment: every model bundle is realized `realizations`
/// times and evaluated at every sweep value.
///
/// Realization k of channel c is drawn from derive_seed(base_seed, {k, c, ...}),
/// so the same seeds are shared across models and sweep values, and raising
/// `realizations` only appends new draws.
struct SweepSpec {
    Estimator estimator = Estimator::Vemse;
    SweepParameter swept = SweepParameter::Scale;
    std::vector<double> values;
    EntropyParams params;      // fixed parameters; tolerance.value is the quotient r
    std::size_t length = 1000;  // N, unless N is swept
    std::vector<ModelBundle> models;
    std::size_t realizations = 20;
    std::uint64_t base_seed = 0;

    // Execution only; never affects results.
    std::size_t jobs = 1;
    bool keep_curves = false;

    void validate() const;
};

struct EnsemblePoint {
    double sweep_value = 0.0;
    std::size_t model = 0;
    int scale = 1;
    std::optional<double> mean;  // over defined realizations
    double std = 0.0;            // sample SD over defined realizations; 0 when fewer than two
    std::size_t defined = 0;
    std::size_t realizations = 0;

    /// std / sqrt(defined); 0 when nothing is defined.
    double standard_error() const;

    friend bool operator==(const EnsemblePoint&, const EnsemblePoint&) = default;
};

/// A curve from one realization, kept when SweepSpec::keep_curves is set.
struct RealizationCurve {
    double sweep_value = 0.0;
    std::size_t model = 0;
    std::size_t realization = 0;
    EntropyCurve curve;
};

struct EnsembleResult {
    SweepParameter swept = SweepParameter::Scale;
    std::vector<std::string> model_labels;
    std::vector<EnsemblePoint> points;
    std::vector<RealizationCurve> curves;

    const EnsemblePoint& at(double sweep_value, std::size_t model, int scale) const;
    const EnsemblePoint& at(double sweep_value, std::size_t model) const;

    /// Points compare equal; retained curves are ignored.
    bool same_points(const EnsembleResult& other) const;
};

EnsembleResult run_sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Property studies
// ---------------------------------------------------------------------------

struct StudyConfig {
    EntropyParams params;  // scales default to 1..20 in the studies below
    std::size_t length = 3000;
    std::size_t realizations = 20;
    std::uint64_t base_seed = 0;
    std::size_t jobs = 1;
};

/// Dual-channel veMSE curves for AR(1..3) with `ratio` noise of `noise_kind`
/// mixed into both channels, followed by the noise-only triple
/// {wgn, flicker, flicker+wgn*1}. Models 0..2 are the AR bundles.
EnsembleResult noise_robustness_study(const StudyConfig& config, SignalKind noise_kind, double ratio);

/// For every two-channel bundle, veMSE curves for the bundle (model 2i) and
/// its channel-reversed order (model 2i+1), computed on the same realization.
EnsembleResult directionality_study(const std::vector<ModelBundle>& pairs, const StudyConfig& config);

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

enum class BenchAxis { Scale, Length, Channels, M };
std::string to_string(BenchAxis a);
BenchAxis parse_bench_axis(const std::string& s);

struct BenchSpec {
    BenchAxis axis = BenchAxis::Channels;
    std::vector<int> values;
    std::size_t length = 5000;
    std::size_t channels = 2;
    int m = 2;
    int scale = 1;
    double r = 0.15;
    std::size_t runs = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TimingPoint {
    int value = 0;
    double vemse_mean_s = 0.0;
    double vemse_median_s = 0.0;
    double mmse_mean_s = 0.0;
    double mmse_median_s = 0.0;
    std::size_t runs = 0;
};

struct TimingReport {
    BenchAxis axis = BenchAxis::Channels;
    std::vector<TimingPoint> points;
};

/// Wall-clock time of vemse and mmse on identical WGN input per grid point.
/// One warm-up evaluation of each precedes the timed runs. Runs sequentially.
TimingReport timing_benchmark(const BenchSpec& spec);

}  // namespace msentropy
