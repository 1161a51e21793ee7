#include "msentropy/types.hpp"

#include <algorithm>
#include <cmath>

namespace msentropy {

MultichannelSeries::MultichannelSeries(std::vector<Samples> channels,
                                       std::vector<std::string> labels,
                                       std::optional<double> sample_rate_hz)
    : channels_(std::move(channels)), labels_(std::move(labels)), sample_rate_hz_(sample_rate_hz) {
    if (channels_.empty()) {
        throw InvalidParameter("multichannel series needs at least one channel");
    }
    const std::size_t n = channels_.front().size();
    if (n == 0) {
        throw InvalidParameter("channels must contain at least one sample");
    }
    for (std::size_t c = 0; c < channels_.size(); ++c) {
        if (channels_[c].size() != n) {
            throw InvalidParameter("channel " + std::to_string(c) + " has length " +
                                   std::to_string(channels_[c].size()) + ", expected " +
                                   std::to_string(n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(channels_[c][i])) {
                throw InvalidParameter("non-finite sample at channel " + std::to_string(c) +
                                       ", index " + std::to_string(i));
            }
        }
    }
    if (!labels_.empty() && labels_.size() != channels_.size()) {
        throw InvalidParameter("label count does not match channel count");
    }
    if (sample_rate_hz_ && !(*sample_rate_hz_ > 0.0)) {
        throw InvalidParameter("sample rate must be positive");
    }
}

MultichannelSeries MultichannelSeries::select(std::span<const std::size_t> order) const {
    std::vector<Samples> chans;
    std::vector<std::string> labs;
    chans.reserve(order.size());
    for (std::size_t idx : order) {
        if (idx >= channels_.size()) {
            throw InvalidParameter("channel index " + std::to_string(idx) + " out of range");
        }
        chans.push_back(channels_[idx]);
        if (!labels_.empty()) labs.push_back(labels_[idx]);
    }
    return MultichannelSeries(std::move(chans), std::move(labs), sample_rate_hz_);
}

void EntropyParams::validate() const {
    if (m < 1) throw InvalidParameter("m must be >= 1");
    if (lag < 1) throw InvalidParameter("lag must be >= 1");
    if (!(tolerance.value > 0.0) || !std::isfinite(tolerance.value)) {
        throw InvalidParameter("tolerance must be a positive finite number");
    }
    if (scales.empty()) throw InvalidParameter("scale list is empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
        if (scales[i] < 1) throw InvalidParameter("scales must be >= 1");
        if (i > 0 && scales[i] <= scales[i - 1]) {
            throw InvalidParameter("scales must be strictly increasing");
        }
    }
}

std::vector<int> scale_range(int first, int last) {
    if (first < 1 || last < first) {
        throw InvalidParameter("invalid scale range " + std::to_string(first) + ".." +
                               std::to_string(last));
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(last - first + 1));
    for (int s = first; s <= last; ++s) out.push_back(s);
    return out;
}

const CurvePoint& EntropyCurve::at_scale(int scale) const {
    auto it = std::find_if(points.begin(), points.end(),
                           [scale](const CurvePoint& p) { return p.scale == scale; });
    if (it == points.end()) throw InvalidParameter("scale " + std::to_string(scale) + " not in curve");
    return *it;
}

bool EntropyCurve::has_negative() const noexcept {
    return std::any_of(points.begin(), points.end(), [](const CurvePoint& p) { return p.negative(); });
}

}  // namespace msentropy
