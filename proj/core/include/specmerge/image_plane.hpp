#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specmerge {

/// Real-valued R x C grid of intensities, row-major. Codec-produced planes
/// hold samples in [0, 1]; intermediate results (sums, inverse transforms)
/// may leave that range.
class ImagePlane {
public:
    ImagePlane() = default;

    /// Zero-filled plane. Throws std::invalid_argument on a zero dimension.
    ImagePlane(std::size_t rows, std::size_t cols);

    /// Throws std::invalid_argument when the sample count does not match
    /// rows * cols or any sample is not finite.
    ImagePlane(std::size_t rows, std::size_t cols, std::vector<double> samples);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }

    double operator()(std::size_t row, std::size_t col) const noexcept { return samples_[row * cols_ + col]; }
    double& operator()(std::size_t row, std::size_t col) noexcept { return samples_[row * cols_ + col]; }

    std::span<const double> samples() const noexcept { return samples_; }
    std::span<double> samples() noexcept { return samples_; }

    bool same_shape(const ImagePlane& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> samples_;
};

}  // namespace specmerge
