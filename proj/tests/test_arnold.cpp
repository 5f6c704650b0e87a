#include "doctest.h"

#include "gridmark/arnold.hpp"
#include "gridmark/error.hpp"

using namespace gridmark;

namespace {

WatermarkBitmap single(int n, int r, int c)
{
    WatermarkBitmap wm(n);
    wm.at(r, c) = 1;
    return wm;
}

// Position of the only set bit.
std::pair<int, int> where(const WatermarkBitmap& wm)
{
    for (int r = 0; r < wm.w; ++r)
        for (int c = 0; c < wm.w; ++c)
            if (wm.at(r, c))
                return {r, c};
    return {-1, -1};
}

// Smallest t with the 2x2 map [[1,1],[1,2]]^t = I mod n.
int brute_period(int n)
{
    if (n == 1)
        return 1;
    long a = 1, b = 1, c = 1, d = 2;
    for (int t = 1;; ++t) {
        if (a % n == 1 % n && b % n == 0 && c % n == 0 && d % n == 1 % n)
            return t;
        const long na = (a * 1 + b * 1) % n, nb = (a * 1 + b * 2) % n;
        const long nc = (c * 1 + d * 1) % n, nd = (c * 1 + d * 2) % n;
        a = na;
        b = nb;
        c = nc;
        d = nd;
    }
}

} // namespace

TEST_CASE("N=2 single-step map")
{
    const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> cases = {
        {{0, 0}, {0, 0}}, {{0, 1}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}};
    for (const auto& [from, to] : cases) {
        CAPTURE(from.first);
        CAPTURE(from.second);
        CHECK(where(scramble(single(2, from.first, from.second), ArnoldKey{1})) == to);
    }
    CHECK(where(unscramble(single(2, 1, 0), ArnoldKey{1})) == std::pair{0, 1});
}

TEST_CASE("scatter semantics on a larger grid")
{
    const int n = 7;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            CHECK(where(scramble(single(n, p, q), ArnoldKey{1})) == std::pair{(p + q) % n, (p + 2 * q) % n});
}

TEST_CASE("key 0 and N=1 are identities")
{
    const WatermarkBitmap wm = generate_watermark(16, 4);
    CHECK(scramble(wm, ArnoldKey{0}) == wm);
    CHECK(unscramble(wm, ArnoldKey{0}) == wm);
    WatermarkBitmap px(1);
    px.bits[0] = 1;
    for (int k = 0; k < 5; ++k) {
        CHECK(scramble(px, ArnoldKey{k}) == px);
        CHECK(unscramble(px, ArnoldKey{k}) == px);
    }
}

TEST_CASE("period")
{
    CHECK(period(1) == 1);
    CHECK(period(2) == 3);
    for (int n = 1; n <= 64; ++n) {
        CAPTURE(n);
        CHECK(period(n) == brute_period(n));
    }
    for (int n : {1, 2, 4, 8, 16, 32}) {
        const WatermarkBitmap wm = generate_watermark(n, 77);
        CHECK(scramble(wm, ArnoldKey{period(n)}) == wm);
    }
}

TEST_CASE("unscramble inverts scramble")
{
    for (int n : {1, 2, 4, 8, 16, 32}) {
        const WatermarkBitmap wm = generate_watermark(n, static_cast<std::uint64_t>(n) + 100);
        for (int k = 0; k <= 2 * period(n); ++k) {
            CAPTURE(n);
            CAPTURE(k);
            const WatermarkBitmap s = scramble(wm, ArnoldKey{k});
            CHECK(s.popcount() == wm.popcount());
            CHECK(unscramble(s, ArnoldKey{k}) == wm);
        }
    }
    const WatermarkBitmap wm = generate_watermark(32, 5);
    CHECK(unscramble(scramble(wm, ArnoldKey{5}), ArnoldKey{5}) == wm);
}

TEST_CASE("key k equals k single steps")
{
    const WatermarkBitmap wm = generate_watermark(32, 6);
    WatermarkBitmap stepped = wm;
    for (int k = 1; k <= 12; ++k) {
        stepped = scramble(stepped, ArnoldKey{1});
        CHECK(scramble(wm, ArnoldKey{k}) == stepped);
    }
}

TEST_CASE("scrambling actually moves bits")
{
    const WatermarkBitmap wm = generate_watermark(32);
    CHECK(scramble(wm, ArnoldKey{5}) != wm);
}

TEST_CASE("errors")
{
    WatermarkBitmap bad;
    bad.w = 3;
    bad.bits.assign(5, 0);
    try {
        scramble(bad, ArnoldKey{1});
        FAIL("expected NotSquare");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSquare);
    }
    try {
        unscramble(generate_watermark(4, 1), ArnoldKey{-1});
        FAIL("expected BadParameter");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadParameter);
    }
}
