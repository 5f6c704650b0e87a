#pragma once

#include "gridmark/model_io.hpp"

namespace gridmark {

// Number of cat-map iterations; the scrambling key.
struct ArnoldKey {
    int iterations = 0;
};

// Scatter (P, Q) -> (P + Q, P + 2Q) mod N, with P the row index, applied
// key.iterations times.
WatermarkBitmap scramble(const WatermarkBitmap& wm, ArnoldKey key);

// Inverse map (P, Q) = (2P' - Q', -P' + Q') mod N, applied key.iterations times.
WatermarkBitmap unscramble(const WatermarkBitmap& wm, ArnoldKey key);

// Smallest t >= 1 such that the map iterated t times is the identity on n x n.
int period(int n);

} // namespace gridmark
