#include "specmerge/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace specmerge {

SpectralIndex::SpectralIndex(std::size_t u, std::size_t v, std::size_t rows, std::size_t cols)
    : u_(u), v_(v), rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("rows and cols must be positive");
    if (u >= rows) throw std::invalid_argument("u must be below rows (" + std::to_string(rows) + ")");
    if (v >= cols) throw std::invalid_argument("v must be below cols (" + std::to_string(cols) + ")");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_or_inf(double numerator, double denominator) {
    return denominator == 0.0 ? kInf : numerator / denominator;
}

}  // namespace

WaveGeometry wave_geometry(const SpectralIndex& index) noexcept {
    const auto u = static_cast<double>(index.u());
    const auto v = static_cast<double>(index.v());
    const auto rows = static_cast<double>(index.rows());
    const auto cols = static_cast<double>(index.cols());

    WaveGeometry g;
    g.lambda_u = ratio_or_inf(cols, u);
    g.lambda_v = ratio_or_inf(rows, v);
    g.lambda_wf = (std::isinf(g.lambda_u) || std::isinf(g.lambda_v))
                      ? kInf
                      : std::sqrt(g.lambda_u * g.lambda_u + g.lambda_v * g.lambda_v);
    g.omega_u = u / cols;
    g.omega_v = v / rows;
    g.omega_wf = std::isinf(g.lambda_wf) ? 0.0 : 1.0 / g.lambda_wf;
    g.theta_defined = index.u() != 0;
    g.theta_wf = g.theta_defined ? std::atan((v * cols) / (u * rows)) : 0.0;
    return g;
}

}  // namespace specmerge
