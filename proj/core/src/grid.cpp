#include "thsmooth/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace thsmooth {

ImageGrid::ImageGrid(int height, int width, int channels, double intensity_max)
    : ImageGrid(height, width, channels,
                std::vector<double>(static_cast<std::size_t>(std::max(height, 0)) *
                                    static_cast<std::size_t>(std::max(width, 0)) *
                                    static_cast<std::size_t>(std::max(channels, 0))),
                intensity_max) {}

ImageGrid::ImageGrid(int height, int width, int channels, std::vector<double> data,
                     double intensity_max)
    : height_(height),
      width_(width),
      channels_(channels),
      intensity_max_(intensity_max),
      data_(std::move(data)) {
    if (height < 1 || width < 1) {
        throw ContractError("ImageGrid: height and width must be >= 1");
    }
    if (channels != 1 && channels != 3) {
        throw ContractError("ImageGrid: channels must be 1 or 3");
    }
    if (!(intensity_max > 0.0)) {
        throw ContractError("ImageGrid: intensity_max must be > 0");
    }
    if (data_.size() != pixels() * static_cast<std::size_t>(channels)) {
        throw ContractError("ImageGrid: data length does not match height*width*channels");
    }
}

std::vector<double> ImageGrid::channel_plane(int c) const {
    if (c < 0 || c >= channels_) {
        throw ContractError("ImageGrid::channel_plane: channel out of range");
    }
    std::vector<double> plane(pixels());
    for (std::size_t i = 0; i < plane.size(); ++i) {
        plane[i] = data_[i * channels_ + c];
    }
    return plane;
}

void ImageGrid::set_channel_plane(int c, std::span<const double> plane) {
    if (c < 0 || c >= channels_ || plane.size() != pixels()) {
        throw ContractError("ImageGrid::set_channel_plane: shape mismatch");
    }
    for (std::size_t i = 0; i < plane.size(); ++i) {
        data_[i * channels_ + c] = plane[i];
    }
}

void ImageGrid::clamp() {
    for (double& v : data_) {
        v = std::clamp(v, 0.0, intensity_max_);
    }
}

std::vector<std::string> validate_params(const SmoothingParams& p) {
    std::vector<std::string> out;
    auto check = [&](bool ok, const char* what) {
        if (!ok) out.emplace_back(what);
    };
    check(std::isfinite(p.lambda) && p.lambda > 0.0, "lambda > 0");
    check(std::isfinite(p.alpha) && p.alpha >= 0.0, "alpha >= 0");
    check(std::isfinite(p.a_d) && p.a_d > 0.0, "a_d > 0");
    check(std::isfinite(p.a_s) && p.a_s > 0.0, "a_s > 0");
    check(std::isfinite(p.b_d) && p.a_d <= p.b_d, "a_d <= b_d");
    check(std::isfinite(p.b_s) && p.a_s <= p.b_s, "a_s <= b_s");
    check(p.r_d >= 0, "r_d >= 0");
    check(p.r_s >= 0, "r_s >= 0");
    check(p.n_iters >= 0, "n_iters >= 0");
    check(std::isfinite(p.delta) && p.delta > 0.0, "delta > 0");
    check(std::isfinite(p.epsilon) && p.epsilon > 0.0, "epsilon > 0");
    return out;
}

void require_valid(const SmoothingParams& p) {
    const auto violations = validate_params(p);
    if (violations.empty()) {
        return;
    }
    std::ostringstream msg;
    msg << "invalid smoothing parameters:";
    for (const auto& v : violations) {
        msg << " [" << v << "]";
    }
    throw ContractError(msg.str());
}

NeighborOffsets::NeighborOffsets(int radius, bool include_center)
    : radius_(radius), include_center_(include_center) {
    if (radius < 0) {
        throw ContractError("NeighborOffsets: radius must be >= 0");
    }
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dy == 0 && dx == 0 && !include_center) {
                continue;
            }
            offsets_.push_back({dy, dx});
        }
    }
}

std::vector<std::size_t> neighbors(std::size_t i, int radius, Extent extent,
                                   bool include_center) {
    if (i >= extent.pixels()) {
        throw ContractError("neighbors: pixel index out of bounds");
    }
    const NeighborOffsets window(radius, include_center);
    const int y = static_cast<int>(i / extent.width);
    const int x = static_cast<int>(i % extent.width);
    std::vector<std::size_t> out;
    out.reserve(window.size());
    for (const Offset& o : window) {
        const auto j = neighbor_index(y, x, o, extent);
        if (j >= 0) {
            out.push_back(static_cast<std::size_t>(j));
        }
    }
    return out;
}

}  // namespace thsmooth
