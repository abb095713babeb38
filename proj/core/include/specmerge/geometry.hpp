#pragma once

#include <cstddef>

namespace specmerge {

/// Position (u, v) in an R x C spectrum. Throws std::invalid_argument unless
/// u < R and v < C.
class SpectralIndex {
public:
    SpectralIndex(std::size_t u, std::size_t v, std::size_t rows, std::size_t cols);

    std::size_t u() const noexcept { return u_; }
    std::size_t v() const noexcept { return v_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t u_;
    std::size_t v_;
    std::size_t rows_;
    std::size_t cols_;
};

/// Wavelengths (pixels), frequencies (cycles/pixel) and wavefront direction
/// (radians) of the sinusoid at a spectral index. A zero index gives an
/// infinite wavelength; theta_wf is meaningless when `theta_defined` is false.
struct WaveGeometry {
    double lambda_u = 0.0;
    double lambda_v = 0.0;
    double lambda_wf = 0.0;
    double omega_u = 0.0;
    double omega_v = 0.0;
    double omega_wf = 0.0;
    double theta_wf = 0.0;
    bool theta_defined = false;
};

/// Evaluates
///   lambda_u = C/u, lambda_v = R/v, lambda_wf = sqrt((C/u)^2 + (R/v)^2),
///   omega_u = u/C, omega_v = v/R, omega_wf = 1/lambda_wf,
///   theta_wf = atan(vC / (uR)).
/// Note the u<->C pairing here is the reverse of the transform's u<->R.
/// Never throws.
WaveGeometry wave_geometry(const SpectralIndex& index) noexcept;

}  // namespace specmerge
