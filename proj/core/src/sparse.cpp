#include "specmerge/sparse.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "specmerge/errors.hpp"

namespace specmerge {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(value >> shift));
}

void put_f64(std::vector<std::uint8_t>& out, double value) {
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int shift = 0; shift < 64; shift += 8) out.push_back(static_cast<std::uint8_t>(bits >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= std::uint32_t{bytes[at + i]} << (8 * i);
    return value;
}

double get_f64(std::span<const std::uint8_t> bytes, std::size_t at) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{bytes[at + i]} << (8 * i);
    return std::bit_cast<double>(bits);
}

bool entry_less(const SparseEntry& a, const SparseEntry& b) {
    return a.u < b.u || (a.u == b.u && a.v < b.v);
}

}  // namespace

void SparseSpectrum::validate() const {
    if (rows == 0 || cols == 0) throw CorruptionError("sparse spectrum dimensions must be positive");
    if (total_units != std::uint64_t{rows} * cols) {
        throw CorruptionError("total_units " + std::to_string(total_units) + " does not equal rows * cols");
    }
    if (entries.size() > total_units) throw CorruptionError("more entries than coefficients");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const SparseEntry& e = entries[i];
        if (e.u >= rows || e.v >= cols) {
            throw CorruptionError("entry " + std::to_string(i) + " index (" + std::to_string(e.u) + ", " +
                                  std::to_string(e.v) + ") out of range");
        }
        if (!std::isfinite(e.re) || !std::isfinite(e.im)) {
            throw CorruptionError("entry " + std::to_string(i) + " holds a non-finite coefficient");
        }
        if (i > 0 && !entry_less(entries[i - 1], e)) {
            throw CorruptionError("entry " + std::to_string(i) + " is duplicated or out of (u, v) order");
        }
    }
}

std::vector<std::uint8_t> encode_fmg(const SparseSpectrum& sparse) {
    std::vector<std::uint8_t> out;
    out.reserve(kFmgHeaderSize + kFmgEntrySize * sparse.entries.size());
    for (char c : {'F', 'M', 'G', '1'}) out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, sparse.rows);
    put_u32(out, sparse.cols);
    put_u32(out, static_cast<std::uint32_t>(sparse.total_units));
    put_u32(out, static_cast<std::uint32_t>(sparse.entries.size()));
    for (const SparseEntry& e : sparse.entries) {
        put_u32(out, e.u);
        put_u32(out, e.v);
        put_f64(out, e.re);
        put_f64(out, e.im);
    }
    return out;
}

SparseSpectrum decode_fmg(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 4 && std::memcmp(bytes.data(), "FMG1", 4) != 0) {
        throw FormatError("not an FMG1 stream (bad magic)");
    }
    if (bytes.size() < kFmgHeaderSize) throw TruncatedError("FMG1 header", kFmgHeaderSize, bytes.size());

    SparseSpectrum sparse;
    sparse.rows = get_u32(bytes, 4);
    sparse.cols = get_u32(bytes, 8);
    sparse.total_units = get_u32(bytes, 12);
    const std::uint64_t count = get_u32(bytes, 16);

    const std::uint64_t expected = kFmgHeaderSize + kFmgEntrySize * count;
    if (bytes.size() < expected) throw TruncatedError("FMG1 entries", expected, bytes.size());
    if (bytes.size() > expected) {
        throw CorruptionError("FMG1 stream has " + std::to_string(bytes.size() - expected) + " trailing bytes");
    }

    sparse.entries.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t at = kFmgHeaderSize + i * kFmgEntrySize;
        sparse.entries[i] = {get_u32(bytes, at), get_u32(bytes, at + 4), get_f64(bytes, at + 8),
                             get_f64(bytes, at + 16)};
    }
    sparse.validate();
    return sparse;
}

ComplexSpectrum densify(const SparseSpectrum& sparse) {
    sparse.validate();
    ComplexSpectrum dense(sparse.rows, sparse.cols);
    for (const SparseEntry& e : sparse.entries) dense(e.u, e.v) = Complex(e.re, e.im);
    return dense;
}

}  // namespace specmerge
