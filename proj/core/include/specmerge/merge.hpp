#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specmerge/image_plane.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/sparse.hpp"
#include "specmerge/spectrum.hpp"
#include "specmerge/transform.hpp"

namespace specmerge {

enum class RenormPolicy {
    divide_by_max,  // scale by 1/max when the maximum exceeds 1
    clamp,          // clip to [0, 1]
};

std::optional<RenormPolicy> renorm_from_name(std::string_view name) noexcept;
std::string_view renorm_name(RenormPolicy policy) noexcept;

struct MergeConfig {
    /// Prominence coefficients, one per image. Empty means all 1.0.
    std::vector<double> coefficients;
    /// Threshold T = threshold_fraction * max |P|; 0 keeps everything.
    double threshold_fraction = 0.0;
    RenormPolicy renorm = RenormPolicy::divide_by_max;
    AlignmentPolicy alignment;

    /// Throws std::invalid_argument for a fraction outside [0, 1), a
    /// non-finite coefficient, or (when image_count is non-zero) a
    /// coefficient list whose length differs from image_count.
    void validate(std::size_t image_count = 0) const;
};

struct ReductionReport {
    std::uint64_t total_units = 0;
    std::uint64_t retained_units = 0;
    double reduction_ratio = 1.0;
    double threshold_value = 0.0;
    double threshold_fraction = 0.0;
    /// (1 / (R C)) * sum of |coef|^2 over removed coefficients.
    double removed_energy = 0.0;
    /// Thresholded vs unthresholded merge, both before renormalization.
    double psnr_vs_full_db = 0.0;
};

/// Spatial-domain merge: sum of aligned intensities, then renormalized.
ImagePlane merge_spatial(std::span<const ImagePlane> planes, const MergeConfig& config = {});

/// P = sum_k a_k * forward2d(i_k) over aligned planes.
ComplexSpectrum integrate_spectra(std::span<const ImagePlane> planes, const MergeConfig& config,
                                  Parallelism parallelism = {});

struct ThresholdResult {
    SparseSpectrum sparse;
    /// total/retained/ratio/threshold_value/removed_energy are filled in;
    /// threshold_fraction and psnr_vs_full_db are left to the caller.
    ReductionReport report;
};

/// Keeps exactly the coefficients with |coef| >= threshold.
/// Throws std::invalid_argument for a negative threshold or a shifted input.
ThresholdResult apply_threshold(const ComplexSpectrum& spectrum, double threshold);

struct RatioThreshold {
    double threshold = 0.0;
    std::uint64_t retained_units = 0;
    double achieved_ratio = 1.0;
};

/// Smallest coefficient magnitude T such that total / count(|coef| >= T)
/// reaches target_ratio. Equal magnitudes are never split. Throws
/// std::invalid_argument when target_ratio < 1.
RatioThreshold threshold_for_ratio(const ComplexSpectrum& spectrum, double target_ratio);

/// Largest |coef|.
double max_magnitude(const ComplexSpectrum& spectrum) noexcept;

struct SpectralMerge {
    ImagePlane merged;         // renormalized output
    ImagePlane raw;            // real inverse of the retained spectrum, before renorm
    ImagePlane full_raw;       // real inverse of the complete spectrum, before renorm
    ComplexSpectrum spectrum;  // complete merged spectrum, before thresholding
    SparseSpectrum sparse;
    ReductionReport report;
};

/// Frequency-domain merge: integrate, drop coefficients below
/// T = threshold_fraction * max |P|, invert, renormalize.
SpectralMerge merge_spectral(std::span<const ImagePlane> planes, const MergeConfig& config = {},
                             Parallelism parallelism = {});

/// Same pipeline with T chosen by threshold_for_ratio on the merged
/// spectrum; config.threshold_fraction is ignored and reported as T / max.
SpectralMerge merge_spectral_to_ratio(std::span<const ImagePlane> planes, const MergeConfig& config,
                                      double target_ratio, Parallelism parallelism = {});

/// Finishes a merge from an already integrated spectrum.
SpectralMerge finish_spectral_merge(ComplexSpectrum spectrum, double threshold, double threshold_fraction,
                                    RenormPolicy renorm, Parallelism parallelism = {});

void renormalize(ImagePlane& plane, RenormPolicy policy) noexcept;

double mse(const ImagePlane& reference, const ImagePlane& candidate);

/// 10 log10(1 / MSE) for unit dynamic range; +infinity for identical inputs.
/// Throws std::invalid_argument on a shape mismatch.
double psnr(const ImagePlane& reference, const ImagePlane& candidate);

}  // namespace specmerge
