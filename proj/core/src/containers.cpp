#include <cmath>
#include <stdexcept>
#include <utility>

#include "specmerge/image_plane.hpp"
#include "specmerge/spectrum.hpp"

namespace specmerge {

namespace {

void require_dimensions(std::size_t rows, std::size_t cols, const char* what) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument(std::string(what) + " dimensions must be positive");
    }
}

}  // namespace

ImagePlane::ImagePlane(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    require_dimensions(rows, cols, "plane");
    samples_.assign(rows * cols, 0.0);
}

ImagePlane::ImagePlane(std::size_t rows, std::size_t cols, std::vector<double> samples)
    : rows_(rows), cols_(cols), samples_(std::move(samples)) {
    require_dimensions(rows, cols, "plane");
    if (samples_.size() != rows * cols) {
        throw std::invalid_argument("plane sample count does not match rows * cols");
    }
    for (double s : samples_) {
        if (!std::isfinite(s)) throw std::invalid_argument("plane samples must be finite");
    }
}

ComplexSpectrum::ComplexSpectrum(std::size_t rows, std::size_t cols, bool shifted)
    : rows_(rows), cols_(cols), shifted_(shifted) {
    require_dimensions(rows, cols, "spectrum");
    coefficients_.assign(rows * cols, Complex{});
}

ComplexSpectrum::ComplexSpectrum(std::size_t rows, std::size_t cols, std::vector<Complex> coefficients,
                                 bool shifted)
    : rows_(rows), cols_(cols), coefficients_(std::move(coefficients)), shifted_(shifted) {
    require_dimensions(rows, cols, "spectrum");
    if (coefficients_.size() != rows * cols) {
        throw std::invalid_argument("spectrum coefficient count does not match rows * cols");
    }
    for (const Complex& c : coefficients_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("spectrum coefficients must be finite");
        }
    }
}

std::size_t ComplexSpectrum::hermitian_partner(std::size_t index) const noexcept {
    const std::size_t u = index / cols_;
    const std::size_t v = index % cols_;
    return ((rows_ - u) % rows_) * cols_ + (cols_ - v) % cols_;
}

}  // namespace specmerge
