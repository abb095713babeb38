#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specmerge/spectrum.hpp"

namespace specmerge {

struct SparseEntry {
    std::uint32_t u = 0;
    std::uint32_t v = 0;
    double re = 0.0;
    double im = 0.0;

    friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Coefficients kept after thresholding. Entries are unique and sorted by
/// (u, v); total_units is always rows * cols.
struct SparseSpectrum {
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint64_t total_units = 0;
    std::vector<SparseEntry> entries;

    /// Throws CorruptionError if any invariant above is violated.
    void validate() const;

    friend bool operator==(const SparseSpectrum&, const SparseSpectrum&) = default;
};

/// FMG1 container, all fields little-endian:
///   "FMG1" | u32 rows | u32 cols | u32 total_units | u32 count
///   then count x (u32 u | u32 v | f64 re | f64 im)
inline constexpr std::size_t kFmgHeaderSize = 20;
inline constexpr std::size_t kFmgEntrySize = 24;

std::vector<std::uint8_t> encode_fmg(const SparseSpectrum& sparse);

/// Throws FormatError on a bad magic, TruncatedError on a short stream and
/// CorruptionError on inconsistent content.
SparseSpectrum decode_fmg(std::span<const std::uint8_t> bytes);

/// Dense, unshifted spectrum holding the listed entries and zero elsewhere.
ComplexSpectrum densify(const SparseSpectrum& sparse);

}  // namespace specmerge
