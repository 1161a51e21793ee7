#pragma once

#include "msentropy/dataio.hpp"
#include "msentropy/experiments.hpp"

#include <filesystem>
#include <vector>

namespace msentropy {

// Runners that produce a ResultFile whose metadata block fully describes the
// run, and the inverse: re-executing a run from that metadata.

struct ComputeConfig {
    Estimator estimator = Estimator::Vemse;
    EntropyParams params;
    std::vector<int> mmse_dims;  // empty: params.m for every channel
    std::vector<int> mmse_lags;  // empty: params.lag for every channel
    std::filesystem::path input;
    LoadOptions load;
};

/// Computes one entropy curve for `data`. sampen evaluates scale 1 only;
/// sampen and mse use the first channel.
EntropyCurve compute_curve(const ComputeConfig& config, const MultichannelSeries& data);

ResultFile run_compute(const ComputeConfig& config);
ResultFile run_sweep_result(const SweepSpec& spec);
ResultFile run_noise_study_result(const StudyConfig& config, SignalKind noise_kind, double ratio);
ResultFile run_directionality_result(const std::vector<ModelBundle>& pairs, const StudyConfig& config);
ResultFile run_bench_result(const BenchSpec& spec);

ComputeConfig compute_config_from(const ResultFile& file);
SweepSpec sweep_spec_from(const ResultFile& file);
BenchSpec bench_spec_from(const ResultFile& file);

/// Re-runs the command recorded in `file`. Timing results will differ in
/// their measured values; all other kinds reproduce the data exactly.
ResultFile replay(const ResultFile& file);

}  // namespace msentropy
