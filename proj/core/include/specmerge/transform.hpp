#pragma once

#include <span>
#include <vector>

#include "specmerge/image_plane.hpp"
#include "specmerge/spectrum.hpp"

namespace specmerge {

/// Worker count for the row and column passes of the 2D transforms. The
/// result is bitwise identical for every value; 0 means "use hardware
/// concurrency".
struct Parallelism {
    unsigned threads = 1;
};

/// O(n^2) reference transform.
///   forward: X[k] = sum_m x[m] exp(-j 2 pi k m / n)
///   inverse: x[m] = (1/n) sum_k X[k] exp(+j 2 pi k m / n)
/// Throws std::invalid_argument on an empty or non-finite signal.
std::vector<Complex> dft1d_direct(std::span<const Complex> signal, bool inverse = false);

/// Same contract as dft1d_direct. Power-of-two lengths use an iterative
/// radix-2 transform; every other length is handed to dft1d_direct.
std::vector<Complex> fft1d(std::span<const Complex> signal, bool inverse = false);

/// I(u, v) = sum_x sum_y i(x, y) exp[-j 2 pi (u x / R + v y / C)], unscaled.
///
/// Computed row-column: every row is transformed, then every column. The
/// output is made exactly Hermitian (each conjugate pair is averaged), so
/// magnitude comparisons never separate a pair.
ComplexSpectrum forward2d(const ImagePlane& plane, Parallelism parallelism = {});

/// Complex inverse with 1/(R C) scaling. Throws std::invalid_argument on a
/// shifted spectrum.
std::vector<Complex> inverse2d_complex(const ComplexSpectrum& spectrum, Parallelism parallelism = {});

/// Real part of inverse2d_complex. Samples are not clamped.
ImagePlane inverse2d(const ComplexSpectrum& spectrum, Parallelism parallelism = {});

/// Largest |imag| of an inverse transform result.
double max_imaginary_residue(std::span<const Complex> samples) noexcept;

/// Quadrant swap moving DC to (floor(R/2), floor(C/2)); toggles the shifted
/// flag. Applying it to a shifted spectrum undoes the swap for any size.
ComplexSpectrum shift_center(const ComplexSpectrum& spectrum);

/// sum |i(x, y)|^2
double energy(const ImagePlane& plane) noexcept;

/// (1 / (R C)) sum |I(u, v)|^2, so that Parseval pairs compare directly.
double energy(const ComplexSpectrum& spectrum) noexcept;

}  // namespace specmerge
