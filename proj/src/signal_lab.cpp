#include "msentropy/signal_lab.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>

namespace msentropy {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p));
    return h;
}

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(theta);
    return radius * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw InvalidParameter("bound must be positive");
    // Largest multiple of bound representable; draws above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

// ---------------------------------------------------------------------------

bool ArModel::stationary() const {
    // Step-down recursion: stationary iff every reflection coefficient is
    // strictly inside (-1, 1).
    std::vector<double> phi = coefficients;
    while (!phi.empty() && phi.back() == 0.0) phi.pop_back();
    while (!phi.empty()) {
        const std::size_t k = phi.size();
        const double kappa = phi[k - 1];
        if (!(std::abs(kappa) < 1.0)) return false;
        std::vector<double> next(k - 1);
        const double denom = 1.0 - kappa * kappa;
        for (std::size_t j = 0; j + 1 < k; ++j) next[j] = (phi[j] + kappa * phi[k - 2 - j]) / denom;
        phi = std::move(next);
    }
    return true;
}

ArModel ArModel::reference(int order) {
    static constexpr double kCoefficients[] = {0.5, 0.25, 0.125};
    if (order < 1 || order > 3) throw InvalidParameter("reference AR order must be 1, 2 or 3");
    ArModel m;
    m.coefficients.assign(kCoefficients, kCoefficients + order);
    return m;
}

void rescale_to_sd(Samples& x, double sd) {
    if (x.empty()) return;
    const double mu = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) v -= mu;
    if (x.size() < 2) return;
    double ss = 0.0;
    for (double v : x) ss += v * v;
    const double cur = std::sqrt(ss / static_cast<double>(x.size() - 1));
    if (cur > 0.0) {
        const double k = sd / cur;
        for (double& v : x) v *= k;
    }
}

Samples generate_wgn(std::size_t n, double sd, std::uint64_t seed) {
    if (n < 1) throw InvalidParameter("length must be >= 1");
    if (!(sd > 0.0)) throw InvalidParameter("sd must be positive");
    Rng rng(seed);
    Samples x(n);
    for (double& v : x) v = rng.normal();
    if (n >= 2) rescale_to_sd(x, sd);
    return x;
}

namespace {
// Serializes FFTW plan creation and destruction.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Samples generate_flicker(std::size_t n, double sd, std::uint64_t seed) {
    if (n < 2) throw InvalidParameter("flicker noise needs at least two samples");
    if (!(sd > 0.0)) throw InvalidParameter("sd must be positive");

    Samples x = generate_wgn(n, 1.0, seed);
    const std::size_t bins = n / 2 + 1;
    std::vector<std::complex<double>> spectrum(bins);
    auto* spec = reinterpret_cast<fftw_complex*>(spectrum.data());

    fftw_plan forward;
    fftw_plan inverse;
    {
        std::lock_guard lock(fftw_planner_mutex());
        const int len = static_cast<int>(n);
        forward = fftw_plan_dft_r2c_1d(len, x.data(), spec, FFTW_ESTIMATE);
        inverse = fftw_plan_dft_c2r_1d(len, spec, x.data(), FFTW_ESTIMATE);
    }
    fftw_execute(forward);
    spectrum[0] = 0.0;
    for (std::size_t k = 1; k < bins; ++k) spectrum[k] /= std::sqrt(static_cast<double>(k));
    fftw_execute(inverse);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(inverse);
    }
    rescale_to_sd(x, sd);
    return x;
}

Samples generate_ar(const ArModel& model, std::size_t n, std::uint64_t seed, double sd) {
    if (n < 1) throw InvalidParameter("length must be >= 1");
    if (!(sd > 0.0) || !(model.innovation_sd > 0.0)) throw InvalidParameter("sd must be positive");
    if (!model.stationary()) throw InvalidParameter("AR coefficients are not stationary");

    const std::size_t order = model.coefficients.size();
    const std::size_t total = n + model.burn_in;
    Rng rng(seed);
    Samples full(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = model.innovation_sd * rng.normal();
        for (std::size_t i = 0; i < order && i < t; ++i) v += model.coefficients[i] * full[t - 1 - i];
        full[t] = v;
    }
    Samples x(full.begin() + static_cast<std::ptrdiff_t>(model.burn_in), full.end());
    if (n >= 2) rescale_to_sd(x, sd);
    return x;
}

Samples generate(const SignalSpec& spec) {
    switch (spec.kind) {
        case SignalKind::Wgn: return generate_wgn(spec.length, spec.target_sd, spec.seed);
        case SignalKind::Flicker: return generate_flicker(spec.length, spec.target_sd, spec.seed);
        case SignalKind::Ar: return generate_ar(spec.model, spec.length, spec.seed, spec.target_sd);
    }
    throw InvalidParameter("unknown signal kind");
}

Samples shuffle_surrogate(std::span<const double> x, std::uint64_t seed) {
    Samples y(x.begin(), x.end());
    Rng rng(seed);
    for (std::size_t i = y.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(y[i - 1], y[j]);
    }
    return y;
}

Samples mix_noise(std::span<const double> x, std::span<const double> noise, double ratio) {
    if (x.size() != noise.size()) throw InvalidParameter("signal and noise lengths differ");
    if (!(ratio >= 0.0)) throw InvalidParameter("noise ratio must be >= 0");
    Samples y(x.begin(), x.end());
    if (ratio == 0.0) return y;
    if (x.size() < 2) throw InvalidParameter("noise mixing needs at least two samples");
    auto sd = [](std::span<const double> v) {
        const double mu = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double ss = 0.0;
        for (double s : v) ss += (s - mu) * (s - mu);
        return std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    const double noise_sd = sd(noise);
    if (!(noise_sd > 0.0)) throw InvalidParameter("noise has zero standard deviation");
    const double gain = ratio * sd(x) / noise_sd;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += gain * noise[i];
    return y;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

void parse_base(const std::string& name, SignalKind& kind, int& ar_order) {
    ar_order = 0;
    if (name == "wgn") {
        kind = SignalKind::Wgn;
    } else if (name == "flicker") {
        kind = SignalKind::Flicker;
    } else if (name.size() == 3 && name.starts_with("ar") && name[2] >= '1' && name[2] <= '3') {
        kind = SignalKind::Ar;
        ar_order = name[2] - '0';
    } else {
        throw InvalidParameter("unknown signal kind '" + name + "' (expected wgn, flicker, ar1, ar2, ar3)");
    }
}

std::string kind_name(SignalKind kind, int ar_order) {
    switch (kind) {
        case SignalKind::Wgn: return "wgn";
        case SignalKind::Flicker: return "flicker";
        case SignalKind::Ar: return "ar" + std::to_string(ar_order);
    }
    return "?";
}

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Samples realize_kind(SignalKind kind, int ar_order, std::size_t n, std::uint64_t seed) {
    switch (kind) {
        case SignalKind::Wgn: return generate_wgn(n, 1.0, seed);
        case SignalKind::Flicker: return generate_flicker(n, 1.0, seed);
        case SignalKind::Ar: return generate_ar(ArModel::reference(ar_order), n, seed, 1.0);
    }
    throw InvalidParameter("unknown signal kind");
}

}  // namespace

ChannelRecipe ChannelRecipe::parse(const std::string& text) {
    const std::string t = trim(text);
    ChannelRecipe r;
    const auto plus = t.find('+');
    parse_base(trim(t.substr(0, plus)), r.kind, r.ar_order);
    if (plus == std::string::npos) return r;

    const std::string tail = trim(t.substr(plus + 1));
    const auto star = tail.find('*');
    if (star == std::string::npos) throw InvalidParameter("noise term needs '*<ratio>' in '" + t + "'");
    NoiseMix mix;
    int noise_order = 0;
    parse_base(trim(tail.substr(0, star)), mix.kind, noise_order);
    if (mix.kind == SignalKind::Ar) throw InvalidParameter("noise must be wgn or flicker in '" + t + "'");
    const std::string ratio = trim(tail.substr(star + 1));
    auto res = std::from_chars(ratio.data(), ratio.data() + ratio.size(), mix.ratio);
    if (res.ec != std::errc{} || res.ptr != ratio.data() + ratio.size() || !(mix.ratio >= 0.0)) {
        throw InvalidParameter("bad noise ratio '" + ratio + "'");
    }
    r.noise = mix;
    return r;
}

std::string ChannelRecipe::str() const {
    std::string s = kind_name(kind, ar_order);
    if (noise) s += "+" + kind_name(noise->kind, 0) + "*" + shortest(noise->ratio);
    return s;
}

Samples ChannelRecipe::realize(std::size_t n, std::uint64_t base_seed, std::uint64_t realization,
                               std::uint64_t channel) const {
    Samples x = realize_kind(kind, ar_order, n, derive_seed(base_seed, {realization, channel, 0}));
    if (!noise || noise->ratio == 0.0) return x;
    const Samples e = realize_kind(noise->kind, 0, n, derive_seed(base_seed, {realization, channel, 1}));
    return mix_noise(x, e, noise->ratio);
}

ModelBundle ModelBundle::parse(const std::string& text) {
    ModelBundle b;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        b.channels.push_back(ChannelRecipe::parse(text.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return b;
}

std::string ModelBundle::label() const {
    std::string s;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        if (c) s += ",";
        s += channels[c].str();
    }
    return s;
}

MultichannelSeries ModelBundle::realize(std::size_t n, std::uint64_t base_seed,
                                        std::uint64_t realization) const {
    if (channels.empty()) throw InvalidParameter("model bundle has no channels");
    std::vector<Samples> data;
    std::vector<std::string> labels;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        data.push_back(channels[c].realize(n, base_seed, realization, c));
        labels.push_back(channels[c].str());
    }
    return MultichannelSeries(std::move(data), std::move(labels));
}

}  // namespace msentropy
