#include "gridmark/metrics.hpp"

#include "gridmark/error.hpp"

#include <cmath>
#include <limits>

namespace gridmark {

double corr2(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::DimensionMismatch, "corr2 needs equal-size inputs");
    if (a.size() == 0)
        throw Error(ErrorCode::DegenerateInput, "corr2 of empty inputs");
    const Matrix da = a.array() - a.mean();
    const Matrix db = b.array() - b.mean();
    const double saa = da.squaredNorm();
    const double sbb = db.squaredNorm();
    if (saa == 0.0 || sbb == 0.0)
        throw Error(ErrorCode::DegenerateInput, "corr2 of a constant input");
    return da.cwiseProduct(db).sum() / std::sqrt(saa * sbb);
}

Matrix bitmap_matrix(const WatermarkBitmap& wm)
{
    Matrix m(wm.w, wm.w);
    for (int r = 0; r < wm.w; ++r)
        for (int c = 0; c < wm.w; ++c)
            m(r, c) = wm.at(r, c);
    return m;
}

double corr2(const WatermarkBitmap& a, const WatermarkBitmap& b)
{
    if (a.w != b.w)
        throw Error(ErrorCode::DimensionMismatch, "corr2 needs equal-size watermarks");
    return corr2(bitmap_matrix(a), bitmap_matrix(b));
}

double psnr(const GridModel& original, const GridModel& modified)
{
    if (original.n != modified.n)
        throw Error(ErrorCode::DimensionMismatch, "psnr needs models of equal size");
    double peak = 0.0;
    double sq = 0.0;
    std::size_t count = 0;
    for (int d = 0; d < 3; ++d) {
        const Matrix& a = original.coords[d];
        const Matrix& b = modified.coords[d];
        if (a.rows() != b.rows() || a.cols() != b.cols())
            throw Error(ErrorCode::DimensionMismatch, "psnr needs models of equal size");
        peak = std::max(peak, a.maxCoeff() - a.minCoeff());
        sq += (a - b).squaredNorm();
        count += static_cast<std::size_t>(a.size());
    }
    if (peak == 0.0)
        throw Error(ErrorCode::DegenerateModel, "original model has zero coordinate range");
    if (sq == 0.0)
        return std::numeric_limits<double>::infinity();
    const double mse = sq / static_cast<double>(count);
    return 10.0 * std::log10(peak * peak / mse);
}

double ber(const WatermarkBitmap& a, const WatermarkBitmap& b)
{
    if (a.w != b.w || a.bits.size() != b.bits.size())
        throw Error(ErrorCode::DimensionMismatch, "ber needs equal-size watermarks");
    std::size_t diff = 0;
    for (std::size_t k = 0; k < a.bits.size(); ++k)
        diff += a.bits[k] != b.bits[k] ? 1 : 0;
    return static_cast<double>(diff) / static_cast<double>(a.bits.size());
}

} // namespace gridmark
