#pragma once

#include "msentropy/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace msentropy {

// ---------------------------------------------------------------------------
// Random numbers
//
// Streams are std::mt19937_64 (bit-exact across conforming standard libraries)
// seeded with a SplitMix64-derived key. Sub-stream keys are derived from a
// base seed and a path of integers, e.g. (realization, channel, purpose):
//
//   h = splitmix64(base); for p in path: h = splitmix64(h ^ splitmix64(p))
//
// Uniforms use the top 53 bits of a draw, normals use Box-Muller, bounded
// integers use rejection sampling, so no distribution object from the
// standard library (whose algorithms are unspecified) is involved.
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1).
    double uniform();
    double normal();
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

struct ArModel {
    std::vector<double> coefficients;  // a_1..a_k in x_t = sum a_i x_{t-i} + e_t
    double innovation_sd = 1.0;
    std::size_t burn_in = 1000;

    /// All roots of 1 - a_1 z - ... - a_k z^k lie outside the unit circle.
    bool stationary() const;

    /// AR(1)..AR(3) with coefficients 0.5, 0.25, 0.125 (prefixes of that list).
    static ArModel reference(int order);
};

enum class SignalKind { Wgn, Flicker, Ar };

struct SignalSpec {
    SignalKind kind = SignalKind::Wgn;
    ArModel model;  // used when kind == Ar
    std::size_t length = 1000;
    double target_sd = 1.0;
    std::uint64_t seed = 0;
};

/// Shift to zero mean and scale to exact sample SD `sd` (no-op scale for constant input).
void rescale_to_sd(Samples& x, double sd);

Samples generate_wgn(std::size_t n, double sd, std::uint64_t seed);

/// 1/f noise: white Gaussian noise shaped by 1/sqrt(f) in the frequency
/// domain with the DC bin zeroed, inverse transformed and rescaled.
Samples generate_flicker(std::size_t n, double sd, std::uint64_t seed);

/// AR process with Gaussian innovations, burn-in discarded, rescaled to `sd`.
Samples generate_ar(const ArModel& model, std::size_t n, std::uint64_t seed, double sd = 1.0);

Samples generate(const SignalSpec& spec);

/// Fisher-Yates permutation of x.
Samples shuffle_surrogate(std::span<const double> x, std::uint64_t seed);

/// x + (ratio * SD(x) / SD(noise)) * noise.
Samples mix_noise(std::span<const double> x, std::span<const double> noise, double ratio);

// ---------------------------------------------------------------------------
// Channel recipes: "<base>[+<noise>*<ratio>]" with base in
// {wgn, flicker, ar1, ar2, ar3} and noise in {wgn, flicker}, e.g. "ar3+wgn*0.2".
// A bundle is a comma-separated list of recipes, one per channel.
// ---------------------------------------------------------------------------

struct NoiseMix {
    SignalKind kind = SignalKind::Wgn;
    double ratio = 0.0;
    friend bool operator==(const NoiseMix&, const NoiseMix&) = default;
};

struct ChannelRecipe {
    SignalKind kind = SignalKind::Wgn;
    int ar_order = 0;
    std::optional<NoiseMix> noise;

    static ChannelRecipe parse(const std::string& text);
    std::string str() const;

    /// Base signal from derive_seed(base, {realization, channel, 0}); noise
    /// (if any) from derive_seed(base, {realization, channel, 1}).
    Samples realize(std::size_t n, std::uint64_t base_seed, std::uint64_t realization,
                    std::uint64_t channel) const;

    friend bool operator==(const ChannelRecipe&, const ChannelRecipe&) = default;
};

struct ModelBundle {
    std::vector<ChannelRecipe> channels;

    static ModelBundle parse(const std::string& text);
    std::string label() const;
    MultichannelSeries realize(std::size_t n, std::uint64_t base_seed, std::uint64_t realization) const;

    friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

}  // namespace msentropy
