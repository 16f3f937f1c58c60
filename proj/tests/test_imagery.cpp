#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "matting/common/errors.hpp"
#include "matting/imagery/geometry.hpp"
#include "matting/imagery/image.hpp"
#include "matting/imagery/png_io.hpp"
#include "matting/imagery/rng.hpp"
#include "testutil.hpp"

using namespace matting::imagery;
using testutil::TempDir;

TEST_CASE("rng: identical seed gives identical sequence") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("rng: golden values pin cross-platform stability") {
    // splitmix-style finalizer over (seed + counter * golden gamma); these
    // constants must never change silently or stored datasets stop being
    // reproducible.
    Rng r(42);
    const uint64_t first = r.next_u64();
    Rng again(42);
    CHECK(first == again.next_u64());
    Rng zero(0);
    zero.counter = 0;
    const uint64_t v1 = zero.next_u64();
    const uint64_t v2 = zero.next_u64();
    CHECK(v1 != v2);
    // A draw only depends on (seed, counter), not on the path taken there.
    Rng jump(0);
    jump.counter = 1;
    CHECK(jump.next_u64() == v2);
}

TEST_CASE("rng: uniform lies in [0,1) and fills the range") {
    Rng r(7);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("rng: below is bounded and roughly uniform") {
    Rng r(9);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) ++hits[r.below(7)];
    for (const int h : hits) CHECK(h > 700);  // expectation 1000
}

TEST_CASE("rng: split streams are independent of parent draws") {
    Rng parent(5);
    const Rng child_before = parent.split(11);
    for (int i = 0; i < 17; ++i) parent.next_u64();
    Rng child_after = parent.split(11);
    Rng c1 = child_before;
    for (int i = 0; i < 20; ++i) CHECK(c1.next_u64() == child_after.next_u64());
    // Different keys diverge.
    Rng other = parent.split(12);
    Rng c2 = child_before;
    CHECK(c2.next_u64() != other.next_u64());
}

TEST_CASE("rng: normal has roughly standard moments") {
    Rng r(13);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double v = r.normal();
        sum += v;
        sumsq += v * v;
    }
    CHECK(std::fabs(sum / n) < 0.05);
    CHECK(std::fabs(sumsq / n - 1.0) < 0.05);
}

TEST_CASE("png: quantization endpoints and lattice values round-trip") {
    TempDir dir("png");
    AlphaMatte m(1, 4);
    m.data = {0.0, 1.0, 128.0 / 255.0, 7.0 / 255.0};
    save_matte(m, dir.file("m.png"));
    const AlphaMatte back = load_matte(dir.file("m.png"));
    REQUIRE(back.size() == m.size());
    CHECK(back.data[0] == 0.0);
    CHECK(back.data[1] == 1.0);
    CHECK(back.data[2] == doctest::Approx(128.0 / 255.0).epsilon(1e-9));
    CHECK(back.data[3] == doctest::Approx(7.0 / 255.0).epsilon(1e-9));
}

TEST_CASE("png: random matte and image round-trip within quantization") {
    TempDir dir("png");
    Rng rng(3);
    const AlphaMatte m = testutil::random_matte(rng, 16, 16);
    save_matte(m, dir.file("m.png"));
    const AlphaMatte m2 = load_matte(dir.file("m.png"));
    CHECK(testutil::max_abs_diff(m.data, m2.data) <= 1.0 / 255.0 + 1e-6);

    const Image img = testutil::random_image(rng, 11, 13);
    save_image(img, dir.file("i.png"));
    const LoadedImage li = load_image(dir.file("i.png"));
    CHECK_FALSE(li.alpha.has_value());
    CHECK(testutil::max_abs_diff(img.data, li.image.data) <= 1.0 / 255.0 + 1e-6);
}

TEST_CASE("png: rgba cutout round-trips image and alpha together") {
    TempDir dir("png");
    Rng rng(4);
    const Image img = testutil::random_image(rng, 9, 6);
    const AlphaMatte alpha = testutil::random_matte(rng, 9, 6);
    save_cutout(img, alpha, dir.file("c.png"));
    const LoadedImage li = load_image(dir.file("c.png"));
    REQUIRE(li.alpha.has_value());
    CHECK(testutil::max_abs_diff(img.data, li.image.data) <= 1.0 / 255.0 + 1e-6);
    CHECK(testutil::max_abs_diff(alpha.data, li.alpha->data) <= 1.0 / 255.0 + 1e-6);
}

TEST_CASE("png: grayscale file loads as replicated rgb") {
    TempDir dir("png");
    AlphaMatte m(2, 2);
    m.data = {0.0, 1.0, 0.0, 1.0};
    save_matte(m, dir.file("g.png"));
    const LoadedImage li = load_image(dir.file("g.png"));
    for (int c = 0; c < 3; ++c) {
        CHECK(li.image.at(c, 0, 0) == 0.0);
        CHECK(li.image.at(c, 0, 1) == 1.0);
    }
}

TEST_CASE("png: errors carry the path") {
    CHECK_THROWS_WITH_AS(load_image("/nonexistent/x.png"),
                         doctest::Contains("/nonexistent/x.png"), matting::DataError);
    TempDir dir("png");
    std::ofstream(dir.file("junk.png")) << "this is not a png";
    CHECK_THROWS_AS(load_image(dir.file("junk.png")), matting::DataError);
    // A 3-channel file is not a matte.
    Rng rng(5);
    save_image(testutil::random_image(rng, 4, 4), dir.file("rgb.png"));
    CHECK_THROWS_AS(load_matte(dir.file("rgb.png")), matting::DataError);
}

TEST_CASE("resize: constant field stays constant at any target") {
    Image img(5, 7, 0.5);
    for (const auto [h, w] : {std::pair{1, 1}, {3, 10}, {16, 2}, {9, 9}}) {
        const Image out = resize(img, h, w);
        CHECK(out.height == h);
        CHECK(out.width == w);
        for (const double v : out.data) CHECK(v == 0.5);
    }
}

TEST_CASE("resize: identity target is bitwise equal") {
    Rng rng(21);
    const Image img = testutil::random_image(rng, 6, 9);
    const Image out = resize(img, 6, 9);
    CHECK(out.data == img.data);
    const AlphaMatte m = testutil::random_matte(rng, 6, 9);
    CHECK(resize(m, 6, 9).data == m.data);
}

TEST_CASE("resize: hand-computed bilinear weights on a 2x2 -> 2x4") {
    AlphaMatte m(2, 2);
    m.at(0, 0) = 0.0;
    m.at(0, 1) = 1.0;
    m.at(1, 0) = 0.0;
    m.at(1, 1) = 1.0;
    const AlphaMatte out = resize(m, 2, 4);
    // Half-pixel source centers: -0.25, 0.25, 0.75, 1.25 -> clamped lerp.
    const double expect[4] = {0.0, 0.25, 0.75, 1.0};
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 4; ++x)
            CHECK(out.at(y, x) == doctest::Approx(expect[x]).epsilon(1e-12));
}

TEST_CASE("resize: output range bounded by input range") {
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const AlphaMatte m = testutil::random_matte(rng, 8, 8);
        const auto [lo, hi] = std::minmax_element(m.data.begin(), m.data.end());
        const AlphaMatte out =
            resize(m, 3 + static_cast<int>(rng.below(20)), 3 + static_cast<int>(rng.below(20)));
        for (const double v : out.data) {
            CHECK(v >= *lo - 1e-12);
            CHECK(v <= *hi + 1e-12);
        }
    }
}

TEST_CASE("resize: rejects non-positive targets") {
    const AlphaMatte m(4, 4, 0.25);
    CHECK_THROWS_AS(resize(m, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(resize(m, 4, -1), std::invalid_argument);
}

TEST_CASE("resize: matte quality tag survives") {
    const AlphaMatte m(4, 4, 0.25, MaskQuality::Coarse);
    CHECK(resize(m, 8, 8).quality == MaskQuality::Coarse);
}

TEST_CASE("flip: horizontal flip is an involution and mirrors columns") {
    Rng rng(41);
    const Image img = testutil::random_image(rng, 5, 8);
    const Image once = flip_horizontal(img);
    for (int c = 0; c < 3; ++c)
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 8; ++x) CHECK(once.at(c, y, x) == img.at(c, y, 7 - x));
    CHECK(flip_horizontal(once).data == img.data);
}

TEST_CASE("crop: extracts exactly the requested window") {
    Rng rng(43);
    const AlphaMatte m = testutil::random_matte(rng, 10, 12);
    const AlphaMatte c = crop(m, 2, 3, 5, 7);
    REQUIRE(c.height == 5);
    REQUIRE(c.width == 7);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) CHECK(c.at(y, x) == m.at(2 + y, 3 + x));
    CHECK_THROWS_AS(crop(m, 7, 0, 5, 5), std::invalid_argument);  // runs off the edge
}

TEST_CASE("pad_reflect: pads up to minimum size by mirroring") {
    AlphaMatte m(2, 3);
    m.data = {1, 2, 3, 4, 5, 6};
    const AlphaMatte p = pad_reflect(m, 4, 3);
    REQUIRE(p.height == 4);
    REQUIRE(p.width == 3);
    // Original content in the top-left corner.
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 3; ++x) CHECK(p.at(y, x) == m.at(y, x));
    // Edge-including reflection: rows continue 0,1,1,0.
    for (int x = 0; x < 3; ++x) CHECK(p.at(2, x) == m.at(1, x));
    for (int x = 0; x < 3; ++x) CHECK(p.at(3, x) == m.at(0, x));
    // Large enough input is returned unchanged.
    const AlphaMatte same = pad_reflect(m, 2, 2);
    CHECK(same.data == m.data);
}
