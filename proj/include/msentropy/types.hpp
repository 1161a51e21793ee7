#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace msentropy {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a covariance-trace tolerance resolves to zero (constant input).
class DegenerateTolerance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Data
// ---------------------------------------------------------------------------

using Samples = std::vector<double>;

/// P aligned channels of equal length. Channel order is significant.
class MultichannelSeries {
public:
    MultichannelSeries() = default;
    explicit MultichannelSeries(std::vector<Samples> channels,
                                std::vector<std::string> labels = {},
                                std::optional<double> sample_rate_hz = std::nullopt);

    std::size_t channel_count() const noexcept { return channels_.size(); }
    std::size_t length() const noexcept { return channels_.empty() ? 0 : channels_.front().size(); }
    bool empty() const noexcept { return channels_.empty(); }

    std::span<const double> channel(std::size_t c) const { return channels_.at(c); }
    const std::vector<Samples>& channels() const noexcept { return channels_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<double> sample_rate_hz() const noexcept { return sample_rate_hz_; }

    /// Copy with the given channel order (indices may repeat).
    MultichannelSeries select(std::span<const std::size_t> order) const;

    friend bool operator==(const MultichannelSeries&, const MultichannelSeries&) = default;

private:
    std::vector<Samples> channels_;
    std::vector<std::string> labels_;
    std::optional<double> sample_rate_hz_;
};

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

struct ToleranceRule {
    enum class Mode { CovarianceTrace, Absolute };

    Mode mode = Mode::CovarianceTrace;
    double value = 0.15;  // quotient for CovarianceTrace, radius for Absolute

    static ToleranceRule trace(double quotient) { return {Mode::CovarianceTrace, quotient}; }
    static ToleranceRule absolute(double radius) { return {Mode::Absolute, radius}; }

    friend bool operator==(const ToleranceRule&, const ToleranceRule&) = default;
};

struct EntropyParams {
    int m = 2;                 // base embedding dimension
    int lag = 1;               // time lag L
    std::vector<int> scales{1};  // strictly increasing, each >= 1
    ToleranceRule tolerance{};

    // Both passes use N_t - m(c)*L templates (classic SampEn) instead of
    // re-deriving the template count at the m+1 pass.
    bool equal_template_count = false;
    // Recompute the covariance trace from each coarse-grained series.
    bool per_scale_tolerance = false;
    // z-score every channel before anything else. MMSE always normalizes.
    bool normalize = false;

    /// Throws InvalidParameter on m < 1, lag < 1, non-positive tolerance or bad scales.
    void validate() const;

    friend bool operator==(const EntropyParams&, const EntropyParams&) = default;
};

/// Inclusive integer range [first, last].
std::vector<int> scale_range(int first, int last);

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct CurvePoint {
    int scale = 1;
    std::optional<double> value;  // nullopt: no matches at m or m+1
    double phi_m = 0.0;
    double phi_m1 = 0.0;

    bool defined() const noexcept { return value.has_value(); }
    /// Phi(m+1) > Phi(m): only possible with asymmetric template counts.
    bool negative() const noexcept { return value && *value < 0.0; }

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct EntropyCurve {
    std::vector<CurvePoint> points;
    double radius = 0.0;  // absolute radius used at scale 1

    std::size_t size() const noexcept { return points.size(); }
    const CurvePoint& at_scale(int scale) const;
    bool has_negative() const noexcept;

    friend bool operator==(const EntropyCurve&, const EntropyCurve&) = default;
};

}  // namespace msentropy
