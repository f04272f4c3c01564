#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thsmooth {

/// Raised when a caller violates a documented precondition.
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Extent {
    int height = 0;
    int width = 0;

    [[nodiscard]] std::size_t pixels() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    friend bool operator==(const Extent&, const Extent&) = default;
};

/// H x W x C samples, row-major, channel-interleaved.
///
/// Intensities are normalized so that the declared range is [0, intensity_max]
/// (intensity_max is 1 for everything produced by io). Iterates of the
/// smoothing loop may leave that range; only egress clamps.
class ImageGrid {
public:
    ImageGrid() = default;
    ImageGrid(int height, int width, int channels, double intensity_max = 1.0);
    ImageGrid(int height, int width, int channels, std::vector<double> data,
              double intensity_max = 1.0);

    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int channels() const { return channels_; }
    [[nodiscard]] Extent extent() const { return {height_, width_}; }
    [[nodiscard]] std::size_t pixels() const { return extent().pixels(); }
    [[nodiscard]] double intensity_max() const { return intensity_max_; }

    /// Bit depth of the file this grid was decoded from (0 when synthesized).
    [[nodiscard]] int source_bit_depth() const { return source_bit_depth_; }
    void set_source_bit_depth(int bits) { source_bit_depth_ = bits; }

    [[nodiscard]] double& at(int y, int x, int c = 0) {
        return data_[index(y, x, c)];
    }
    [[nodiscard]] double at(int y, int x, int c = 0) const {
        return data_[index(y, x, c)];
    }

    [[nodiscard]] std::span<double> data() { return data_; }
    [[nodiscard]] std::span<const double> data() const { return data_; }

    /// Copies channel c out as a contiguous H*W plane.
    [[nodiscard]] std::vector<double> channel_plane(int c) const;
    void set_channel_plane(int c, std::span<const double> plane);

    /// Clamps every sample into [0, intensity_max].
    void clamp();

    friend bool operator==(const ImageGrid& a, const ImageGrid& b) {
        return a.height_ == b.height_ && a.width_ == b.width_ &&
               a.channels_ == b.channels_ && a.data_ == b.data_;
    }

private:
    [[nodiscard]] std::size_t index(int y, int x, int c) const {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    double intensity_max_ = 1.0;
    int source_bit_depth_ = 0;
    std::vector<double> data_;
};

/// Model and iteration parameters. Defaults describe an L1-like smoother
/// with no truncation, r_d = 0, r_s = 1 and a single solve.
struct SmoothingParams {
    double lambda = 1.0;
    double alpha = 0.0;
    double a_d = 1e-7;
    double b_d = 10.0;
    double a_s = 1e-7;
    double b_s = 10.0;
    int r_d = 0;
    int r_s = 1;
    int n_iters = 1;
    double delta = 1e-7;
    double epsilon = 1e-7;
};

/// Every violated invariant, one human readable line each. Empty means ok.
[[nodiscard]] std::vector<std::string> validate_params(const SmoothingParams& p);

/// Throws ContractError listing all violations.
void require_valid(const SmoothingParams& p);

struct Offset {
    int dy = 0;
    int dx = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

/// The (2r+1)^2 square window in row-major order, optionally without (0,0).
///
/// The order is point-symmetric: offset k and offset size()-1-k are negatives
/// of each other. Pair symmetrization in the solver relies on this.
class NeighborOffsets {
public:
    NeighborOffsets(int radius, bool include_center);

    [[nodiscard]] int radius() const { return radius_; }
    [[nodiscard]] bool includes_center() const { return include_center_; }
    [[nodiscard]] std::size_t size() const { return offsets_.size(); }
    [[nodiscard]] const Offset& operator[](std::size_t k) const { return offsets_[k]; }
    [[nodiscard]] std::span<const Offset> offsets() const { return offsets_; }
    [[nodiscard]] std::size_t mirror(std::size_t k) const { return offsets_.size() - 1 - k; }

    auto begin() const { return offsets_.begin(); }
    auto end() const { return offsets_.end(); }

private:
    int radius_;
    bool include_center_;
    std::vector<Offset> offsets_;
};

/// In-bounds pixel indices of the window around flat index i.
[[nodiscard]] std::vector<std::size_t> neighbors(std::size_t i, int radius, Extent extent,
                                                 bool include_center);

/// Flat index of the neighbor of (y, x) at offset o, or -1 when clipped.
[[nodiscard]] inline std::ptrdiff_t neighbor_index(int y, int x, const Offset& o,
                                                   const Extent& e) {
    const int ny = y + o.dy;
    const int nx = x + o.dx;
    if (ny < 0 || ny >= e.height || nx < 0 || nx >= e.width) {
        return -1;
    }
    return static_cast<std::ptrdiff_t>(ny) * e.width + nx;
}

}  // namespace thsmooth
