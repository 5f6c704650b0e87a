#include "doctest.h"
#include "support.hpp"

#include "gridmark/error.hpp"
#include "gridmark/metrics.hpp"
#include "gridmark/random.hpp"

#include <cmath>
#include <limits>

using namespace gridmark;
using testing::random_matrix;

namespace {

// The textbook formula, one loop per sum.
double oracle_corr2(const Matrix& a, const Matrix& b)
{
    const int rows = static_cast<int>(a.rows()), cols = static_cast<int>(a.cols());
    double ma = 0.0, mb = 0.0;
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) {
            ma += a(m, n);
            mb += b(m, n);
        }
    ma /= rows * cols;
    mb /= rows * cols;
    double num = 0.0, sa = 0.0, sb = 0.0;
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n) {
            num += (a(m, n) - ma) * (b(m, n) - mb);
            sa += (a(m, n) - ma) * (a(m, n) - ma);
            sb += (b(m, n) - mb) * (b(m, n) - mb);
        }
    return num / std::sqrt(sa * sb);
}

GridModel plus(const GridModel& m, const GridModel& delta, double f)
{
    GridModel out = m;
    for (int k = 0; k < 3; ++k)
        out.coords[k] += f * delta.coords[k];
    return out;
}

} // namespace

TEST_CASE("corr2 matches the straight-line formula")
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Matrix a = random_matrix(8, 8, seed, -5, 5);
        const Matrix b = random_matrix(8, 8, seed + 1000, -5, 5);
        worst = std::max(worst, std::abs(corr2(a, b) - oracle_corr2(a, b)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("corr2 identities")
{
    const Matrix a = random_matrix(16, 16, 3);
    const Matrix b = random_matrix(16, 16, 4);
    CHECK(corr2(a, a) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(corr2(a, -a) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(corr2(a, (3.5 * a).array() - 12.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(corr2(a, (-0.25 * a).array() + 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(corr2(a, b) == corr2(b, a));

    Rng rng(17);
    for (int k = 0; k < 500; ++k) {
        const Matrix x = random_matrix(5, 7, rng.next(), -1, 1);
        const Matrix y = random_matrix(5, 7, rng.next(), -1, 1);
        const double r = corr2(x, y);
        CHECK(std::abs(r) <= 1.0);
    }
}

TEST_CASE("corr2 errors")
{
    auto code = [](const Matrix& a, const Matrix& b) {
        try {
            corr2(a, b);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::BadParameter;
    };
    CHECK(code(Matrix::Zero(3, 3), random_matrix(3, 3, 1)) == ErrorCode::DegenerateInput);
    CHECK(code(random_matrix(3, 3, 1), Matrix::Constant(3, 3, 2.0)) == ErrorCode::DegenerateInput);
    CHECK(code(random_matrix(3, 3, 1), random_matrix(3, 4, 1)) == ErrorCode::DimensionMismatch);

    WatermarkBitmap zeros(8);
    CHECK_THROWS_AS(corr2(zeros, generate_watermark(8, 1)), Error);
    CHECK_THROWS_AS(corr2(generate_watermark(4, 1), generate_watermark(8, 1)), Error);
}

TEST_CASE("corr2 on bitmaps")
{
    const WatermarkBitmap a = generate_watermark(32, 5);
    CHECK(corr2(a, a) == doctest::Approx(1.0));
    WatermarkBitmap inv = a;
    for (auto& b : inv.bits)
        b = 1 - b;
    CHECK(corr2(a, inv) == doctest::Approx(-1.0));
    CHECK(corr2(a, generate_watermark(32, 6)) == doctest::Approx(oracle_corr2(bitmap_matrix(a), bitmap_matrix(generate_watermark(32, 6)))).epsilon(1e-12));
}

TEST_CASE("psnr")
{
    const GridModel m = generate_model(ModelKind::Harmonic, 64, 1);
    CHECK(std::isinf(psnr(m, m)));
    CHECK(psnr(m, m) > 0.0);

    // Peak is the largest coordinate range: x1 = i spans 0..63.
    const double peak = 63.0;
    GridModel shifted = m;
    for (Matrix& c : shifted.coords)
        c.array() += peak;
    CHECK(psnr(m, shifted) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    const GridModel delta = testing::random_model(64, 9, 0.01);
    const double full = psnr(m, plus(m, delta, 1.0));
    const double half = psnr(m, plus(m, delta, 0.5));
    CHECK(half - full == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));
    CHECK(half - full == doctest::Approx(6.0206).epsilon(1e-5));

    double last = std::numeric_limits<double>::infinity();
    for (double f : {0.01, 0.1, 0.5, 1.0, 4.0}) {
        const double db = psnr(m, plus(m, delta, f));
        CHECK(db < last);
        last = db;
    }

    GridModel flat(8);
    CHECK_THROWS_AS(psnr(flat, flat), Error);
    CHECK_THROWS_AS(psnr(m, generate_model(ModelKind::Plane, 32, 1)), Error);
}

TEST_CASE("ber")
{
    const WatermarkBitmap a = generate_watermark(32, 1);
    CHECK(ber(a, a) == 0.0);
    WatermarkBitmap inv = a;
    for (auto& b : inv.bits)
        b = 1 - b;
    CHECK(ber(a, inv) == 1.0);
    WatermarkBitmap one = a;
    one.at(7, 9) ^= 1;
    CHECK(ber(a, one) == 1.0 / 1024.0);
    CHECK_THROWS_AS(ber(a, generate_watermark(16, 1)), Error);
}
