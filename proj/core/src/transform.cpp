#include "specmerge/transform.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace specmerge {

namespace {

// exp(sign * j 2 pi k / n) for k in [0, n). Angles are reduced to [0, 2 pi)
// by indexing, which keeps the direct sum accurate for large k * m.
std::vector<Complex> unit_roots(std::size_t n, bool inverse) {
    std::vector<Complex> roots(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        roots[k] = Complex(std::cos(angle), sign * std::sin(angle));
    }
    return roots;
}

void require_signal(std::span<const Complex> signal) {
    if (signal.empty()) throw std::invalid_argument("transform input must not be empty");
    for (const Complex& c : signal) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw std::invalid_argument("transform input must be finite");
        }
    }
}

// Reusable 1D transform of a fixed length and direction.
class Transform1d {
public:
    Transform1d(std::size_t n, bool inverse)
        : n_(n), inverse_(inverse), radix2_(std::has_single_bit(n)), roots_(unit_roots(n, inverse)) {
        if (radix2_) {
            const int bits = std::countr_zero(n);
            reversed_.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t r = 0;
                for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
                reversed_[i] = r;
            }
        }
    }

    // Transforms `data` in place; `scratch` must hold n values.
    void run(std::span<Complex> data, std::span<Complex> scratch) const {
        if (radix2_) {
            run_radix2(data);
        } else {
            run_direct(data, scratch);
        }
    }

private:
    void run_direct(std::span<Complex> data, std::span<Complex> scratch) const {
        for (std::size_t k = 0; k < n_; ++k) {
            Complex acc{};
            std::size_t phase = 0;
            for (std::size_t m = 0; m < n_; ++m) {
                acc += data[m] * roots_[phase];
                phase += k;
                if (phase >= n_) phase -= n_;
            }
            scratch[k] = acc;
        }
        const double scale = inverse_ ? 1.0 / static_cast<double>(n_) : 1.0;
        for (std::size_t k = 0; k < n_; ++k) data[k] = inverse_ ? scratch[k] * scale : scratch[k];
    }

    void run_radix2(std::span<Complex> data) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (i < reversed_[i]) std::swap(data[i], data[reversed_[i]]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len / 2;
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const Complex t = roots_[j * stride] * data[start + j + half];
                    const Complex a = data[start + j];
                    data[start + j] = a + t;
                    data[start + j + half] = a - t;
                }
            }
        }
        if (inverse_) {
            const double scale = 1.0 / static_cast<double>(n_);
            for (Complex& c : data) c *= scale;
        }
    }

    std::size_t n_;
    bool inverse_;
    bool radix2_;
    std::vector<Complex> roots_;
    std::vector<std::size_t> reversed_;
};

unsigned resolve_threads(Parallelism parallelism, std::size_t work_items) {
    unsigned threads = parallelism.threads;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work_items, 1)));
}

// Splits [0, count) into contiguous chunks. Each item is processed by
// exactly one worker with no shared accumulation, so results do not depend
// on the thread count.
template <typename Fn>
void for_each_chunk(std::size_t count, Parallelism parallelism, Fn&& fn) {
    const unsigned threads = resolve_threads(parallelism, count);
    if (threads <= 1) {
        fn(std::size_t{0}, count);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t begin = 0; begin < count; begin += chunk) {
        const std::size_t end = std::min(count, begin + chunk);
        workers.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
}

// Row pass followed by column pass over a row-major R x C grid.
void transform2d(std::vector<Complex>& grid, std::size_t rows, std::size_t cols, bool inverse,
                 Parallelism parallelism) {
    const Transform1d row_transform(cols, inverse);
    for_each_chunk(rows, parallelism, [&](std::size_t begin, std::size_t end) {
        std::vector<Complex> scratch(cols);
        for (std::size_t r = begin; r < end; ++r) {
            row_transform.run(std::span<Complex>(grid).subspan(r * cols, cols), scratch);
        }
    });

    const Transform1d col_transform(rows, inverse);
    for_each_chunk(cols, parallelism, [&](std::size_t begin, std::size_t end) {
        std::vector<Complex> column(rows);
        std::vector<Complex> scratch(rows);
        for (std::size_t c = begin; c < end; ++c) {
            for (std::size_t r = 0; r < rows; ++r) column[r] = grid[r * cols + c];
            col_transform.run(column, scratch);
            for (std::size_t r = 0; r < rows; ++r) grid[r * cols + c] = column[r];
        }
    });
}

}  // namespace

std::vector<Complex> dft1d_direct(std::span<const Complex> signal, bool inverse) {
    require_signal(signal);
    const std::size_t n = signal.size();
    const std::vector<Complex> roots = unit_roots(n, inverse);
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t m = 0; m < n; ++m) acc += signal[m] * roots[(k * m) % n];
        out[k] = inverse ? acc * (1.0 / static_cast<double>(n)) : acc;
    }
    return out;
}

std::vector<Complex> fft1d(std::span<const Complex> signal, bool inverse) {
    if (!std::has_single_bit(signal.size())) return dft1d_direct(signal, inverse);
    require_signal(signal);
    std::vector<Complex> out(signal.begin(), signal.end());
    std::vector<Complex> scratch(out.size());
    Transform1d(out.size(), inverse).run(out, scratch);
    return out;
}

ComplexSpectrum forward2d(const ImagePlane& plane, Parallelism parallelism) {
    if (plane.empty()) throw std::invalid_argument("cannot transform an empty plane");
    const std::size_t rows = plane.rows();
    const std::size_t cols = plane.cols();
    std::vector<Complex> grid(plane.samples().begin(), plane.samples().end());
    transform2d(grid, rows, cols, false, parallelism);

    ComplexSpectrum spectrum(rows, cols, std::move(grid));
    auto coefs = spectrum.coefficients();
    for (std::size_t i = 0; i < coefs.size(); ++i) {
        const std::size_t partner = spectrum.hermitian_partner(i);
        if (partner == i) {
            coefs[i] = Complex(coefs[i].real(), 0.0);
        } else if (i < partner) {
            const Complex mean = 0.5 * (coefs[i] + std::conj(coefs[partner]));
            coefs[i] = mean;
            coefs[partner] = std::conj(mean);
        }
    }
    return spectrum;
}

std::vector<Complex> inverse2d_complex(const ComplexSpectrum& spectrum, Parallelism parallelism) {
    if (spectrum.shifted()) {
        throw std::invalid_argument("inverse2d needs an unshifted spectrum; apply shift_center first");
    }
    if (spectrum.size() == 0) throw std::invalid_argument("cannot invert an empty spectrum");
    std::vector<Complex> grid(spectrum.coefficients().begin(), spectrum.coefficients().end());
    transform2d(grid, spectrum.rows(), spectrum.cols(), true, parallelism);
    return grid;
}

ImagePlane inverse2d(const ComplexSpectrum& spectrum, Parallelism parallelism) {
    const std::vector<Complex> grid = inverse2d_complex(spectrum, parallelism);
    std::vector<double> samples(grid.size());
    std::transform(grid.begin(), grid.end(), samples.begin(), [](const Complex& c) { return c.real(); });
    return ImagePlane(spectrum.rows(), spectrum.cols(), std::move(samples));
}

double max_imaginary_residue(std::span<const Complex> samples) noexcept {
    double worst = 0.0;
    for (const Complex& c : samples) worst = std::max(worst, std::abs(c.imag()));
    return worst;
}

ComplexSpectrum shift_center(const ComplexSpectrum& spectrum) {
    const std::size_t rows = spectrum.rows();
    const std::size_t cols = spectrum.cols();
    // Forward shift moves index i to i + floor(n/2); the reverse shift is
    // its exact inverse, also for odd sizes.
    const std::size_t row_offset = spectrum.shifted() ? rows - rows / 2 : rows / 2;
    const std::size_t col_offset = spectrum.shifted() ? cols - cols / 2 : cols / 2;
    ComplexSpectrum out(rows, cols, !spectrum.shifted());
    for (std::size_t u = 0; u < rows; ++u) {
        const std::size_t su = (u + row_offset) % rows;
        for (std::size_t v = 0; v < cols; ++v) {
            out(su, (v + col_offset) % cols) = spectrum(u, v);
        }
    }
    return out;
}

double energy(const ImagePlane& plane) noexcept {
    double total = 0.0;
    for (double s : plane.samples()) total += s * s;
    return total;
}

double energy(const ComplexSpectrum& spectrum) noexcept {
    if (spectrum.size() == 0) return 0.0;
    double total = 0.0;
    for (const Complex& c : spectrum.coefficients()) total += std::norm(c);
    return total / static_cast<double>(spectrum.size());
}

}  // namespace specmerge
