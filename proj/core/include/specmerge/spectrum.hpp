#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specmerge {

using Complex = std::complex<double>;

/// Dense R x C grid of Fourier coefficients, row-major. Row index u pairs
/// with R and column index v pairs with C. When `shifted()` is false the DC
/// term sits at (0, 0); when true it has been moved to (R/2, C/2) for display.
class ComplexSpectrum {
public:
    ComplexSpectrum() = default;

    /// Zero-filled spectrum. Throws std::invalid_argument on a zero dimension.
    ComplexSpectrum(std::size_t rows, std::size_t cols, bool shifted = false);

    /// Throws std::invalid_argument on a size mismatch or a non-finite value.
    ComplexSpectrum(std::size_t rows, std::size_t cols, std::vector<Complex> coefficients, bool shifted = false);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return coefficients_.size(); }
    bool shifted() const noexcept { return shifted_; }

    const Complex& operator()(std::size_t u, std::size_t v) const noexcept { return coefficients_[u * cols_ + v]; }
    Complex& operator()(std::size_t u, std::size_t v) noexcept { return coefficients_[u * cols_ + v]; }

    std::span<const Complex> coefficients() const noexcept { return coefficients_; }
    std::span<Complex> coefficients() noexcept { return coefficients_; }

    /// Flat index of the conjugate partner ((R - u) mod R, (C - v) mod C).
    std::size_t hermitian_partner(std::size_t index) const noexcept;

    friend bool operator==(const ComplexSpectrum&, const ComplexSpectrum&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> coefficients_;
    bool shifted_ = false;
};

}  // namespace specmerge
