#pragma once

// Deterministic inputs shared by the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "specmerge/image_plane.hpp"
#include "specmerge/pgm.hpp"
#include "specmerge/spectrum.hpp"

namespace specmerge::testing {

inline std::vector<std::complex<double>> random_signal(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::complex<double>> out(n);
    for (auto& z : out) z = {dist(rng), dist(rng)};
    return out;
}

inline ImagePlane random_plane(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> samples(rows * cols);
    for (double& s : samples) s = dist(rng);
    return ImagePlane(rows, cols, std::move(samples));
}

// Random plane holding exact 8-bit levels, as a PGM decode would produce.
inline ImagePlane random_8bit_plane(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_int_distribution<int> dist(0, 255);
    std::vector<double> samples(rows * cols);
    for (double& s : samples) s = dist(rng) / 255.0;
    return ImagePlane(rows, cols, std::move(samples));
}

// Bright filled disk on black; a stand-in for the artificial object images.
inline ImagePlane disk_image(std::size_t size, double cx, double cy, double radius, double level) {
    ImagePlane p(size, size);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
            const double dx = static_cast<double>(c) - cx;
            const double dy = static_cast<double>(r) - cy;
            if (dx * dx + dy * dy <= radius * radius) p(r, c) = level;
        }
    }
    return p;
}

inline ImagePlane rectangle_image(std::size_t size, std::size_t top, std::size_t left, std::size_t height,
                                  std::size_t width, double level) {
    ImagePlane p(size, size);
    for (std::size_t r = top; r < top + height && r < size; ++r) {
        for (std::size_t c = left; c < left + width && c < size; ++c) p(r, c) = level;
    }
    return p;
}

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path);
}

inline std::string data_path(const std::string& name) { return std::string(SPECMERGE_TEST_DATA_DIR) + "/" + name; }

}  // namespace specmerge::testing
