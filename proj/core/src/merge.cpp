#include "specmerge/merge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace specmerge {

namespace {

// Inverse transforms of magnitude-thresholded Hermitian spectra are real up
// to round-off; anything larger means the spectrum was not Hermitian.
constexpr double kMaxImaginaryResidue = 1e-6;

std::vector<double> effective_coefficients(const MergeConfig& config, std::size_t image_count) {
    if (config.coefficients.empty()) return std::vector<double>(image_count, 1.0);
    return config.coefficients;
}

ImagePlane real_part(const std::vector<Complex>& grid, std::size_t rows, std::size_t cols) {
    std::vector<double> samples(grid.size());
    std::transform(grid.begin(), grid.end(), samples.begin(), [](const Complex& c) { return c.real(); });
    return ImagePlane(rows, cols, std::move(samples));
}

}  // namespace

std::optional<RenormPolicy> renorm_from_name(std::string_view name) noexcept {
    if (name == "divide_by_max") return RenormPolicy::divide_by_max;
    if (name == "clamp") return RenormPolicy::clamp;
    return std::nullopt;
}

std::string_view renorm_name(RenormPolicy policy) noexcept {
    return policy == RenormPolicy::clamp ? "clamp" : "divide_by_max";
}

void MergeConfig::validate(std::size_t image_count) const {
    if (!(threshold_fraction >= 0.0 && threshold_fraction < 1.0)) {
        throw std::invalid_argument("threshold_fraction must be in [0, 1)");
    }
    for (double a : coefficients) {
        if (!std::isfinite(a)) throw std::invalid_argument("prominence coefficients must be finite");
    }
    if (image_count != 0 && !coefficients.empty() && coefficients.size() != image_count) {
        throw std::invalid_argument("expected " + std::to_string(image_count) + " prominence coefficients, got " +
                                    std::to_string(coefficients.size()));
    }
    if (!(alignment.pad_value >= 0.0 && alignment.pad_value <= 1.0)) {
        throw std::invalid_argument("pad_value must be within [0, 1]");
    }
}

void renormalize(ImagePlane& plane, RenormPolicy policy) noexcept {
    auto samples = plane.samples();
    if (samples.empty()) return;
    if (policy == RenormPolicy::clamp) {
        for (double& s : samples) s = std::clamp(s, 0.0, 1.0);
        return;
    }
    const double peak = *std::max_element(samples.begin(), samples.end());
    if (peak > 1.0) {
        for (double& s : samples) s /= peak;
    }
}

ImagePlane merge_spatial(std::span<const ImagePlane> planes, const MergeConfig& config) {
    if (planes.empty()) throw std::invalid_argument("merge needs at least one image");
    config.validate();
    const std::vector<ImagePlane> aligned = align(planes, config.alignment);

    ImagePlane sum(aligned.front().rows(), aligned.front().cols());
    for (const ImagePlane& p : aligned) {
        std::transform(sum.samples().begin(), sum.samples().end(), p.samples().begin(), sum.samples().begin(),
                       std::plus<>());
    }
    renormalize(sum, config.renorm);
    return sum;
}

ComplexSpectrum integrate_spectra(std::span<const ImagePlane> planes, const MergeConfig& config,
                                  Parallelism parallelism) {
    if (planes.empty()) throw std::invalid_argument("merge needs at least one image");
    config.validate(planes.size());
    const std::vector<double> weights = effective_coefficients(config, planes.size());
    const std::vector<ImagePlane> aligned = align(planes, config.alignment);

    ComplexSpectrum total(aligned.front().rows(), aligned.front().cols());
    for (std::size_t k = 0; k < aligned.size(); ++k) {
        const ComplexSpectrum one = forward2d(aligned[k], parallelism);
        const double a = weights[k];
        auto acc = total.coefficients();
        auto add = one.coefficients();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a * add[i];
    }
    return total;
}

double max_magnitude(const ComplexSpectrum& spectrum) noexcept {
    double peak = 0.0;
    for (const Complex& c : spectrum.coefficients()) peak = std::max(peak, std::abs(c));
    return peak;
}

ThresholdResult apply_threshold(const ComplexSpectrum& spectrum, double threshold) {
    if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
    if (spectrum.shifted()) throw std::invalid_argument("threshold needs an unshifted spectrum");

    ThresholdResult result;
    result.sparse.rows = static_cast<std::uint32_t>(spectrum.rows());
    result.sparse.cols = static_cast<std::uint32_t>(spectrum.cols());
    result.sparse.total_units = spectrum.size();

    double removed = 0.0;
    for (std::size_t u = 0; u < spectrum.rows(); ++u) {
        for (std::size_t v = 0; v < spectrum.cols(); ++v) {
            const Complex c = spectrum(u, v);
            if (std::abs(c) >= threshold) {
                result.sparse.entries.push_back(
                    {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), c.real(), c.imag()});
            } else {
                removed += std::norm(c);
            }
        }
    }

    ReductionReport& report = result.report;
    report.total_units = spectrum.size();
    report.retained_units = result.sparse.entries.size();
    report.reduction_ratio = report.retained_units == 0
                                 ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(report.total_units) / static_cast<double>(report.retained_units);
    report.threshold_value = threshold;
    report.removed_energy = removed / static_cast<double>(spectrum.size());
    return result;
}

RatioThreshold threshold_for_ratio(const ComplexSpectrum& spectrum, double target_ratio) {
    if (!(target_ratio >= 1.0)) throw std::invalid_argument("target ratio must be at least 1");
    const std::size_t total = spectrum.size();
    if (target_ratio <= 1.0 || total == 0) return {0.0, total, 1.0};

    std::vector<double> magnitudes(total);
    std::transform(spectrum.coefficients().begin(), spectrum.coefficients().end(), magnitudes.begin(),
                   [](const Complex& c) { return std::abs(c); });
    std::sort(magnitudes.begin(), magnitudes.end(), std::greater<>());

    const auto ratio_for = [total](std::size_t kept) {
        return static_cast<double>(total) / static_cast<double>(kept);
    };

    // Walk tie groups from the top; the retained count only grows, so the
    // ratio only falls and the last group that still meets the target wins.
    RatioThreshold best{};
    bool found = false;
    for (std::size_t i = 0; i < total; ++i) {
        const bool group_end = i + 1 == total || magnitudes[i + 1] < magnitudes[i];
        if (!group_end) continue;
        const std::size_t kept = i + 1;
        if (ratio_for(kept) < target_ratio) break;
        best = {magnitudes[i], kept, ratio_for(kept)};
        found = true;
    }
    if (!found) {
        // Target is beyond reach: keep only the top tie group.
        const double top = magnitudes.front();
        const auto kept = static_cast<std::size_t>(
            std::find_if(magnitudes.begin(), magnitudes.end(), [top](double m) { return m < top; }) -
            magnitudes.begin());
        best = {top, kept, ratio_for(kept)};
    }
    return best;
}

SpectralMerge finish_spectral_merge(ComplexSpectrum spectrum, double threshold, double threshold_fraction,
                                    RenormPolicy renorm, Parallelism parallelism) {
    ThresholdResult thresholded = apply_threshold(spectrum, threshold);

    const std::vector<Complex> retained = inverse2d_complex(densify(thresholded.sparse), parallelism);
    const double residue = max_imaginary_residue(retained);
    if (residue >= kMaxImaginaryResidue) {
        throw std::runtime_error("inverse transform left an imaginary residue of " + std::to_string(residue) +
                                 "; the merged spectrum is not Hermitian");
    }

    SpectralMerge out;
    out.raw = real_part(retained, spectrum.rows(), spectrum.cols());
    out.full_raw = thresholded.report.retained_units == thresholded.report.total_units
                       ? out.raw
                       : inverse2d(spectrum, parallelism);
    out.merged = out.raw;
    renormalize(out.merged, renorm);

    out.report = thresholded.report;
    out.report.threshold_fraction = threshold_fraction;
    out.report.psnr_vs_full_db = psnr(out.full_raw, out.raw);
    out.sparse = std::move(thresholded.sparse);
    out.spectrum = std::move(spectrum);
    return out;
}

SpectralMerge merge_spectral(std::span<const ImagePlane> planes, const MergeConfig& config,
                             Parallelism parallelism) {
    ComplexSpectrum spectrum = integrate_spectra(planes, config, parallelism);
    const double threshold = config.threshold_fraction * max_magnitude(spectrum);
    return finish_spectral_merge(std::move(spectrum), threshold, config.threshold_fraction, config.renorm,
                                 parallelism);
}

SpectralMerge merge_spectral_to_ratio(std::span<const ImagePlane> planes, const MergeConfig& config,
                                      double target_ratio, Parallelism parallelism) {
    if (!(target_ratio >= 1.0)) throw std::invalid_argument("target ratio must be at least 1");
    ComplexSpectrum spectrum = integrate_spectra(planes, config, parallelism);
    const RatioThreshold chosen = threshold_for_ratio(spectrum, target_ratio);
    const double peak = max_magnitude(spectrum);
    const double fraction = peak > 0.0 ? chosen.threshold / peak : 0.0;
    return finish_spectral_merge(std::move(spectrum), chosen.threshold, fraction, config.renorm, parallelism);
}

double mse(const ImagePlane& reference, const ImagePlane& candidate) {
    if (!reference.same_shape(candidate)) {
        throw std::invalid_argument("image dimensions differ: " + std::to_string(reference.rows()) + "x" +
                                    std::to_string(reference.cols()) + " vs " + std::to_string(candidate.rows()) +
                                    "x" + std::to_string(candidate.cols()));
    }
    if (reference.empty()) throw std::invalid_argument("cannot compare empty images");
    double sum = 0.0;
    auto a = reference.samples();
    auto b = candidate.samples();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum / static_cast<double>(a.size());
}

double psnr(const ImagePlane& reference, const ImagePlane& candidate) {
    const double error = mse(reference, candidate);
    if (error == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / error);
}

}  // namespace specmerge
