#include "gridmark/arnold.hpp"

#include "gridmark/error.hpp"

#include <cstdint>

namespace gridmark {

namespace {

void check(const WatermarkBitmap& wm, ArnoldKey key)
{
    if (wm.w <= 0 || wm.bits.size() != static_cast<std::size_t>(wm.w) * wm.w)
        throw Error(ErrorCode::NotSquare, "Arnold transform needs a square bitmap");
    if (key.iterations < 0)
        throw Error(ErrorCode::BadParameter, "Arnold key must be non-negative");
}

// Applies the integer matrix [[a, b], [c, d]] as a scatter permutation.
WatermarkBitmap iterate(const WatermarkBitmap& wm, int times, int a, int b, int c, int d)
{
    const int n = wm.w;
    // Precompute destination indices once; each pass is a gather through them.
    std::vector<std::uint32_t> dest(wm.bits.size());
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            const int p2 = ((a * p + b * q) % n + n) % n;
            const int q2 = ((c * p + d * q) % n + n) % n;
            dest[static_cast<std::size_t>(p) * n + q] = static_cast<std::uint32_t>(p2 * n + q2);
        }
    }
    WatermarkBitmap cur = wm;
    WatermarkBitmap next(n);
    for (int t = 0; t < times; ++t) {
        for (std::size_t i = 0; i < cur.bits.size(); ++i)
            next.bits[dest[i]] = cur.bits[i];
        std::swap(cur, next);
    }
    return cur;
}

} // namespace

WatermarkBitmap scramble(const WatermarkBitmap& wm, ArnoldKey key)
{
    check(wm, key);
    return iterate(wm, key.iterations, 1, 1, 1, 2);
}

WatermarkBitmap unscramble(const WatermarkBitmap& wm, ArnoldKey key)
{
    check(wm, key);
    return iterate(wm, key.iterations, 2, -1, -1, 1);
}

int period(int n)
{
    if (n < 1)
        throw Error(ErrorCode::BadParameter, "period needs n >= 1");
    // Iterate the matrix power mod n until it returns to the identity.
    std::int64_t a = 1 % n, b = 1 % n, c = 1 % n, d = 2 % n;
    int t = 1;
    while (!(a == 1 % n && b == 0 && c == 0 && d == 1 % n)) {
        const std::int64_t na = (a + c) % n;
        const std::int64_t nb = (b + d) % n;
        const std::int64_t nc = (a + 2 * c) % n;
        const std::int64_t nd = (b + 2 * d) % n;
        a = na, b = nb, c = nc, d = nd;
        ++t;
    }
    return t;
}

} // namespace gridmark
