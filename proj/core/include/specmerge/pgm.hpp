#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "specmerge/image_plane.hpp"
#include "specmerge/spectrum.hpp"

namespace specmerge {

/// Decodes binary (P5) or ASCII (P2) PGM, maxval up to 65535. Samples are
/// divided by maxval. Throws ParseError on a bad header or sample and
/// TruncatedError when pixel data is short.
ImagePlane read_pgm(std::span<const std::uint8_t> bytes);

/// Encodes as binary P5 with header "P5\n<C> <R>\n<maxval>\n". Samples are
/// clamped to [0, 1] and quantized round-half-up. maxval must be 255 or
/// 65535 (16-bit samples are big-endian).
std::vector<std::uint8_t> write_pgm(const ImagePlane& plane, unsigned maxval = 255);

/// round(sample * maxval) after clamping, halves rounded up.
unsigned quantize_sample(double sample, unsigned maxval) noexcept;

enum class AlignMode { center_pad, topleft_pad };

std::optional<AlignMode> align_mode_from_name(std::string_view name) noexcept;
std::string_view align_mode_name(AlignMode mode) noexcept;

struct AlignmentPolicy {
    AlignMode mode = AlignMode::center_pad;
    double pad_value = 0.0;
};

/// Embeds every plane in a canvas of (max rows) x (max cols) filled with
/// pad_value. center_pad places the plane at offset floor((dim - own) / 2).
/// Throws std::invalid_argument on an empty list or a pad_value outside
/// [0, 1].
std::vector<ImagePlane> align(std::span<const ImagePlane> planes, const AlignmentPolicy& policy = {});

struct HeatmapOptions {
    bool center = true;     // render with DC in the middle
    bool log_scale = true;  // log(1 + |I|) instead of |I|
};

/// Coefficient magnitudes rescaled linearly to [0, 1]. An all-zero spectrum
/// renders as an all-zero plane.
ImagePlane spectrum_heatmap(const ComplexSpectrum& spectrum, const HeatmapOptions& options = {});

}  // namespace specmerge
