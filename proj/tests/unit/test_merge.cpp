#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "specmerge/merge.hpp"

using namespace specmerge;
using namespace specmerge::testing;

namespace {

double max_abs_diff(const ImagePlane& a, const ImagePlane& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.samples()[i] - b.samples()[i]));
    return worst;
}

ComplexSpectrum row_spectrum(std::vector<Complex> values) {
    const std::size_t n = values.size();
    return ComplexSpectrum(1, n, std::move(values));
}

}  // namespace

TEST_SUITE("merge_spatial") {
    TEST_CASE("zeros stay zero") {
        const std::vector<ImagePlane> in{ImagePlane(4, 4), ImagePlane(4, 4)};
        const ImagePlane out = merge_spatial(in);
        for (double s : out.samples()) CHECK(s == 0.0);
    }

    TEST_CASE("single image is the identity under both policies") {
        std::mt19937_64 rng(10);
        const std::vector<ImagePlane> in{random_plane(rng, 5, 6)};
        CHECK(merge_spatial(in) == in.front());
        CHECK(merge_spatial(in, {.renorm = RenormPolicy::clamp}) == in.front());
    }

    TEST_CASE("hand computed divide_by_max") {
        // sum [[2,1],[0,0]] scaled by 1/2
        const std::vector<ImagePlane> in{ImagePlane(2, 2, {1, 0, 0, 0}), ImagePlane(2, 2, {1, 1, 0, 0})};
        CHECK(merge_spatial(in) == ImagePlane(2, 2, {1, 0.5, 0, 0}));
        CHECK(merge_spatial(in, {.renorm = RenormPolicy::clamp}) == ImagePlane(2, 2, {1, 1, 0, 0}));
    }

    TEST_CASE("differently sized inputs are aligned first") {
        const std::vector<ImagePlane> in{ImagePlane(2, 2, {0.5, 0.5, 0.5, 0.5}), ImagePlane(4, 4)};
        const auto out = merge_spatial(in);
        CHECK(out.rows() == 4);
        CHECK(out(1, 1) == 0.5);
        CHECK(out(0, 0) == 0.0);
    }

    TEST_CASE("empty input") { CHECK_THROWS_AS(merge_spatial({}), std::invalid_argument); }
}

TEST_SUITE("merge_spectral") {
    TEST_CASE("single image, unit weight, no threshold reproduces the input") {
        std::mt19937_64 rng(20);
        const std::vector<ImagePlane> in{random_plane(rng, 8, 12)};
        const auto result = merge_spectral(in);
        CHECK(max_abs_diff(result.merged, in.front()) < 1e-10);
        CHECK(result.report.retained_units == 96);
        CHECK(result.report.reduction_ratio == 1.0);
        CHECK(std::isinf(result.report.psnr_vs_full_db));
    }

    TEST_CASE("unit weights and no threshold agree with the spatial merge") {
        std::mt19937_64 rng(21);
        for (auto renorm : {RenormPolicy::divide_by_max, RenormPolicy::clamp}) {
            const std::vector<ImagePlane> in{random_plane(rng, 16, 16), random_plane(rng, 16, 16)};
            const MergeConfig config{.renorm = renorm};
            CHECK(max_abs_diff(merge_spectral(in, config).merged, merge_spatial(in, config)) < 1e-9);
        }
    }

    TEST_CASE("prominence coefficient scales the raw result") {
        std::mt19937_64 rng(22);
        const std::vector<ImagePlane> in{random_plane(rng, 8, 8)};
        const double a = 1.75;
        const auto result = merge_spectral(in, {.coefficients = {a}});
        for (std::size_t i = 0; i < in.front().size(); ++i) {
            CHECK(std::abs(result.raw.samples()[i] - a * in.front().samples()[i]) < 1e-10);
        }
    }

    TEST_CASE("zero weight removes an image") {
        std::mt19937_64 rng(23);
        const std::vector<ImagePlane> in{random_plane(rng, 8, 8), random_plane(rng, 8, 8)};
        const auto result = merge_spectral(in, {.coefficients = {1.0, 0.0}});
        CHECK(max_abs_diff(result.merged, in[0]) < 1e-10);
    }

    TEST_CASE("coefficient count must match") {
        const std::vector<ImagePlane> in{ImagePlane(2, 2), ImagePlane(2, 2)};
        CHECK_THROWS_AS(merge_spectral(in, {.coefficients = {1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(merge_spectral(in, {.threshold_fraction = 1.0}), std::invalid_argument);
        CHECK_THROWS_AS(merge_spectral(in, {.threshold_fraction = -0.1}), std::invalid_argument);
    }

    TEST_CASE("report is consistent with the sparse output") {
        std::mt19937_64 rng(24);
        const std::vector<ImagePlane> in{random_plane(rng, 16, 16), random_plane(rng, 16, 16)};
        const auto result = merge_spectral(in, {.threshold_fraction = 0.05});
        const auto& r = result.report;
        CHECK(r.total_units == 256);
        CHECK(r.retained_units == result.sparse.entries.size());
        CHECK(r.retained_units >= 1);
        CHECK(r.reduction_ratio == doctest::Approx(256.0 / r.retained_units));
        CHECK(r.threshold_value == doctest::Approx(0.05 * max_magnitude(result.spectrum)));
        CHECK(r.threshold_fraction == 0.05);
        CHECK(r.removed_energy >= 0.0);
        CHECK(rel_diff(mse(result.full_raw, result.raw), r.removed_energy / 256.0) < 1e-9);
    }

    TEST_CASE("PSNR falls as the threshold fraction rises") {
        std::mt19937_64 rng(25);
        const std::vector<ImagePlane> in{random_plane(rng, 16, 16), random_plane(rng, 16, 16)};
        double previous = std::numeric_limits<double>::infinity();
        for (double x : {0.0, 0.02, 0.05, 0.1, 0.3}) {
            const double db = merge_spectral(in, {.threshold_fraction = x}).report.psnr_vs_full_db;
            CHECK(db <= previous);
            previous = db;
        }
    }
}

TEST_SUITE("apply_threshold") {
    TEST_CASE("zero threshold keeps everything") {
        std::mt19937_64 rng(30);
        const auto r = apply_threshold(forward2d(random_plane(rng, 4, 4)), 0.0);
        CHECK(r.report.retained_units == 16);
        CHECK(r.report.reduction_ratio == 1.0);
        CHECK(r.report.removed_energy == 0.0);
    }

    TEST_CASE("three coefficient instance") {
        // magnitudes 10, 5, 1 with T = 3: keep 10 and 5
        const auto r = apply_threshold(row_spectrum({10, Complex(3, 4), Complex(0, -1)}), 3.0);
        REQUIRE(r.sparse.entries.size() == 2);
        CHECK(r.sparse.entries[0].v == 0);
        CHECK(r.sparse.entries[1].v == 1);
        CHECK(r.report.reduction_ratio == 1.5);
        CHECK(r.report.removed_energy == doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("coefficients equal to T are retained") {
        const auto r = apply_threshold(row_spectrum({4, 2, 1}), 2.0);
        CHECK(r.report.retained_units == 2);
    }

    TEST_CASE("Hermitian pairs are kept or dropped together") {
        std::mt19937_64 rng(31);
        const auto s = forward2d(random_plane(rng, 8, 8));
        for (double T : {0.1, 0.5, 1.0, 2.0}) {
            const auto r = apply_threshold(s, T);
            std::vector<bool> kept(s.size(), false);
            for (const auto& e : r.sparse.entries) kept[e.u * s.cols() + e.v] = true;
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(kept[i] == kept[s.hermitian_partner(i)]);
        }
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(apply_threshold(ComplexSpectrum(2, 2), -1.0), std::invalid_argument);
        CHECK_THROWS_AS(apply_threshold(ComplexSpectrum(2, 2, true), 0.0), std::invalid_argument);
    }
}

TEST_SUITE("threshold_for_ratio") {
    TEST_CASE("ratio 1 needs no threshold") {
        const auto r = threshold_for_ratio(row_spectrum({4, 3, 2, 1}), 1.0);
        CHECK(r.threshold == 0.0);
        CHECK(r.achieved_ratio == 1.0);
    }

    TEST_CASE("four entry ladder") {
        const auto spectrum = row_spectrum({4, 3, 2, 1});
        const auto r = threshold_for_ratio(spectrum, 2.0);
        CHECK(r.retained_units == 2);
        CHECK(r.achieved_ratio == 2.0);
        CHECK(r.threshold > 2.0);
        CHECK(r.threshold <= 3.0);
        CHECK(apply_threshold(spectrum, r.threshold).report.retained_units == 2);
    }

    TEST_CASE("unreachable target keeps the top magnitude") {
        const auto r = threshold_for_ratio(row_spectrum({4, 3, 2, 1}), 10.0);
        CHECK(r.retained_units == 1);
        CHECK(r.threshold == 4.0);
        CHECK(r.achieved_ratio <= 4.0);
    }

    TEST_CASE("ties are never split") {
        // 3, 3, 3, 1: ratio 2 would need two entries but the top tie has three
        const auto r = threshold_for_ratio(row_spectrum({3, 3, 3, 1}), 2.0);
        CHECK(r.retained_units == 3);
        CHECK(r.threshold == 3.0);
    }

    TEST_CASE("agrees with enumeration on random spectra") {
        std::mt19937_64 rng(40);
        const auto s = forward2d(random_plane(rng, 16, 16));
        for (double target : {1.5, 3.0, 8.0, 22.0, 50.0}) {
            const auto r = threshold_for_ratio(s, target);
            const auto applied = apply_threshold(s, r.threshold).report;
            CHECK(applied.retained_units == r.retained_units);
            CHECK(applied.reduction_ratio >= target);
            // Every strictly smaller candidate magnitude misses the target.
            double next_lower = 0.0;
            for (const Complex& c : s.coefficients()) {
                const double m = std::abs(c);
                if (m < r.threshold) next_lower = std::max(next_lower, m);
            }
            CHECK(apply_threshold(s, next_lower).report.reduction_ratio < target);
        }
    }

    TEST_CASE("target below 1") { CHECK_THROWS_AS(threshold_for_ratio(ComplexSpectrum(2, 2), 0.5), std::invalid_argument); }
}

TEST_SUITE("psnr") {
    TEST_CASE("identical inputs give infinity") {
        const ImagePlane p(3, 3, std::vector<double>(9, 0.4));
        CHECK(std::isinf(psnr(p, p)));
    }

    TEST_CASE("closed form: MSE 0.01 is 20 dB") {
        CHECK(psnr(ImagePlane(4, 4), ImagePlane(4, 4, std::vector<double>(16, 0.1))) == doctest::Approx(20.0));
    }

    TEST_CASE("shape mismatch") { CHECK_THROWS_AS(psnr(ImagePlane(2, 2), ImagePlane(2, 3)), std::invalid_argument); }
}
