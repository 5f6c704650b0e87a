#pragma once

#include "gridmark/matrix.hpp"
#include "gridmark/model_io.hpp"

namespace gridmark {

// Mean-centred normalised cross-correlation of two equal-size matrices.
// Throws DimensionMismatch, or DegenerateInput when either input is constant.
double corr2(const Matrix& a, const Matrix& b);
double corr2(const WatermarkBitmap& a, const WatermarkBitmap& b);

// 10 log10(peak^2 / mse) over all three matrices, peak = largest coordinate
// range of the original. +inf for identical models.
double psnr(const GridModel& original, const GridModel& modified);

double ber(const WatermarkBitmap& a, const WatermarkBitmap& b);

Matrix bitmap_matrix(const WatermarkBitmap& wm);

} // namespace gridmark
