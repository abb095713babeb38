#include "specmerge/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specmerge/errors.hpp"
#include "specmerge/transform.hpp"

namespace specmerge {

namespace {

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderCursor {
public:
    explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    // Skips whitespace and '#' comments, then reads one decimal token.
    unsigned long next_number(const char* field) {
        skip_separators();
        const std::size_t start = pos_;
        unsigned long value = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw ParseError(std::string("PGM ") + field + " is too large", start);
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) {
                throw TruncatedError(std::string("PGM ended before ") + field, pos_ + 1, bytes_.size());
            }
            throw ParseError(std::string("expected ") + field + " in PGM", pos_);
        }
        return value;
    }

    // The single whitespace byte that ends a binary header.
    void end_of_header() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError("expected whitespace after PGM maxval", pos_);
        }
        ++pos_;
    }

    std::size_t position() const noexcept { return pos_; }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::optional<AlignMode> align_mode_from_name(std::string_view name) noexcept {
    if (name == "center_pad") return AlignMode::center_pad;
    if (name == "topleft_pad") return AlignMode::topleft_pad;
    return std::nullopt;
}

std::string_view align_mode_name(AlignMode mode) noexcept {
    return mode == AlignMode::topleft_pad ? "topleft_pad" : "center_pad";
}

ImagePlane read_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2) throw TruncatedError("PGM magic", 2, bytes.size());
    if (bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw ParseError("not a PGM file (expected magic P2 or P5)", 0);
    }
    const bool binary = bytes[1] == '5';

    HeaderCursor cursor(bytes.subspan(2));
    const std::size_t header_base = 2;
    const unsigned long cols = cursor.next_number("width");
    const unsigned long rows = cursor.next_number("height");
    const std::size_t maxval_offset = header_base + cursor.position();
    const unsigned long maxval = cursor.next_number("maxval");
    if (cols == 0 || rows == 0) throw ParseError("PGM dimensions must be positive", header_base);
    if (maxval == 0 || maxval > 65535) throw ParseError("PGM maxval must be in 1..65535", maxval_offset);

    const std::size_t count = static_cast<std::size_t>(rows) * cols;
    std::vector<double> samples(count);
    const double scale = 1.0 / static_cast<double>(maxval);

    if (binary) {
        cursor.end_of_header();
        const std::size_t data_start = header_base + cursor.position();
        const std::size_t width = maxval > 255 ? 2 : 1;
        const std::size_t expected = data_start + count * width;
        if (bytes.size() < expected) throw TruncatedError("PGM pixel data", expected, bytes.size());
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = data_start + i * width;
            const unsigned raw = width == 2 ? (unsigned{bytes[at]} << 8) | bytes[at + 1] : bytes[at];
            if (raw > maxval) throw ParseError("PGM sample exceeds maxval", at);
            samples[i] = raw * scale;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t at = header_base + cursor.position();
            unsigned long raw = 0;
            try {
                raw = cursor.next_number("sample");
            } catch (const TruncatedError&) {
                throw TruncatedError("PGM ASCII samples: " + std::to_string(i) + " of " + std::to_string(count) +
                                         " present",
                                     count, i, "samples");
            }
            if (raw > maxval) throw ParseError("PGM sample exceeds maxval", at);
            samples[i] = raw * scale;
        }
    }
    return ImagePlane(rows, cols, std::move(samples));
}

unsigned quantize_sample(double sample, unsigned maxval) noexcept {
    if (!(sample > 0.0)) return 0;
    if (sample >= 1.0) return maxval;
    // The nudge keeps values that are a half-step up to floating-point
    // noise (1e-6 of a level) on the upper side, so transform round-off
    // never flips a byte relative to the exact spatial result.
    const double scaled = sample * static_cast<double>(maxval);
    const auto level = static_cast<unsigned>(std::floor(scaled + 0.5 + 1e-6));
    return std::min(level, maxval);
}

std::vector<std::uint8_t> write_pgm(const ImagePlane& plane, unsigned maxval) {
    if (maxval != 255 && maxval != 65535) throw std::invalid_argument("PGM maxval must be 255 or 65535");
    if (plane.empty()) throw std::invalid_argument("cannot encode an empty plane");
    const std::string header =
        "P5\n" + std::to_string(plane.cols()) + " " + std::to_string(plane.rows()) + "\n" + std::to_string(maxval) + "\n";
    const std::size_t width = maxval > 255 ? 2 : 1;
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + plane.size() * width);
    for (double s : plane.samples()) {
        const unsigned level = quantize_sample(s, maxval);
        if (width == 2) out.push_back(static_cast<std::uint8_t>(level >> 8));
        out.push_back(static_cast<std::uint8_t>(level & 0xFF));
    }
    return out;
}

std::vector<ImagePlane> align(std::span<const ImagePlane> planes, const AlignmentPolicy& policy) {
    if (planes.empty()) throw std::invalid_argument("align needs at least one plane");
    if (!(policy.pad_value >= 0.0 && policy.pad_value <= 1.0)) {
        throw std::invalid_argument("pad_value must be within [0, 1]");
    }
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const ImagePlane& p : planes) {
        if (p.empty()) throw std::invalid_argument("cannot align an empty plane");
        rows = std::max(rows, p.rows());
        cols = std::max(cols, p.cols());
    }

    std::vector<ImagePlane> out;
    out.reserve(planes.size());
    for (const ImagePlane& p : planes) {
        if (p.rows() == rows && p.cols() == cols) {
            out.push_back(p);
            continue;
        }
        ImagePlane canvas(rows, cols, std::vector<double>(rows * cols, policy.pad_value));
        const bool centered = policy.mode == AlignMode::center_pad;
        const std::size_t row_offset = centered ? (rows - p.rows()) / 2 : 0;
        const std::size_t col_offset = centered ? (cols - p.cols()) / 2 : 0;
        for (std::size_t r = 0; r < p.rows(); ++r) {
            for (std::size_t c = 0; c < p.cols(); ++c) canvas(r + row_offset, c + col_offset) = p(r, c);
        }
        out.push_back(std::move(canvas));
    }
    return out;
}

ImagePlane spectrum_heatmap(const ComplexSpectrum& spectrum, const HeatmapOptions& options) {
    const bool need_shift = options.center != spectrum.shifted();
    const ComplexSpectrum view = need_shift ? shift_center(spectrum) : spectrum;

    std::vector<double> values(view.size());
    std::transform(view.coefficients().begin(), view.coefficients().end(), values.begin(),
                   [&](const Complex& c) { return options.log_scale ? std::log1p(std::abs(c)) : std::abs(c); });

    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double low = *lo;
    const double high = *hi;
    const double range = high - low;
    for (double& v : values) {
        if (range > 0.0) {
            v = (v - low) / range;
        } else {
            v = high > 0.0 ? 1.0 : 0.0;
        }
    }
    return ImagePlane(view.rows(), view.cols(), std::move(values));
}

}  // namespace specmerge
