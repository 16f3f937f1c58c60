#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "matting/losses/losses.hpp"
#include "matting/nets/tensor.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace matting;
using namespace matting::losses;
using imagery::AlphaMatte;
using imagery::Image;
using imagery::Mask;
using imagery::Rng;
using nets::Tensor;

namespace {

const LossWeights kW;  // default weights

Tensor pred2(const Mask& fg, const Mask& bg) {
    Tensor t(2, fg.height, fg.width);
    std::copy(fg.data.begin(), fg.data.end(), t.data.begin());
    std::copy(bg.data.begin(), bg.data.end(), t.data.begin() + t.plane_size());
    return t;
}

Tensor pred4(const Image& rgb, const AlphaMatte& alpha) {
    Tensor t(4, rgb.height, rgb.width);
    std::copy(rgb.data.begin(), rgb.data.end(), t.data.begin());
    std::copy(alpha.data.begin(), alpha.data.end(), t.data.begin() + 3 * t.plane_size());
    return t;
}

}  // namespace

TEST_CASE("mpn_loss: hand values") {
    // Perfect prediction.
    Rng rng(1);
    const Mask fg = testutil::random_matte(rng, 4, 4);
    Mask bg(4, 4);
    for (size_t i = 0; i < fg.size(); ++i) bg.data[i] = 1.0 - fg.data[i];
    CHECK(mpn_loss(pred2(fg, bg), fg, bg, kW) == 0.0);

    // Everything maximally wrong: 0.5*1 + 0.5*1 = 1.
    CHECK(mpn_loss(pred2(Mask(4, 4, 1.0), Mask(4, 4, 0.0)), Mask(4, 4, 0.0),
                   Mask(4, 4, 1.0), kW) == doctest::Approx(1.0).epsilon(1e-12));

    // Two-pixel case: fg pred [0.8,0.2] gt [1,0], bg pred [0.2,0.8] gt [0,1].
    Mask pf(1, 2), pb(1, 2), gf(1, 2), gb(1, 2);
    pf.data = {0.8, 0.2};
    pb.data = {0.2, 0.8};
    gf.data = {1.0, 0.0};
    gb.data = {0.0, 1.0};
    CHECK(mpn_loss(pred2(pf, pb), gf, gb, kW) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("mpn_loss: lambda splits the two terms") {
    // fg term errs by 0.4, bg term by 0: loss = lambda_l * 0.4.
    LossWeights w;
    w.lambda_l = 0.75;
    const double loss = mpn_loss(pred2(Mask(2, 2, 0.6), Mask(2, 2, 1.0)),
                                 Mask(2, 2, 0.2), Mask(2, 2, 1.0), w);
    CHECK(loss == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("qun losses: hand values and symmetry") {
    CHECK(qun_identity_loss(Mask(3, 3, 0.5), Mask(3, 3, 0.0), Mask(3, 3, 0.5),
                            Mask(3, 3, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    // Q matches both masks -> zero.
    Rng rng(2);
    const Mask m1 = testutil::random_matte(rng, 4, 4);
    const Mask m2 = testutil::random_matte(rng, 4, 4);
    CHECK(qun_identity_loss(m1, m1, m2, m2) == 0.0);
    // Symmetric in the two branches.
    const Mask q1 = testutil::random_matte(rng, 4, 4);
    const Mask q2 = testutil::random_matte(rng, 4, 4);
    CHECK(qun_identity_loss(q1, m1, q2, m2) ==
          doctest::Approx(qun_identity_loss(q2, m2, q1, m1)).epsilon(1e-12));

    CHECK(qun_consistency_loss(Mask(3, 3, 1.0), Mask(3, 3, 0.0)) == 1.0);
    CHECK(qun_consistency_loss(q1, q1) == 0.0);
}

TEST_CASE("qun_loss: weighted mixing of identity and consistency") {
    // Identity zero, outputs d apart -> lambda_2 * d = 0.5 d.
    const double d = 0.3;
    CHECK(qun_loss(Mask(2, 2, 0.2), Mask(2, 2, 0.2), Mask(2, 2, 0.2 + d),
                   Mask(2, 2, 0.2 + d), kW) == doctest::Approx(0.5 * d).epsilon(1e-12));

    // Q(x) = Q(x') = (x + x')/2 with mean gap d: identity contributes
    // 2 * d/2 = d, consistency 0 -> 0.25 * d.
    Rng rng(3);
    Mask x(4, 4), x2(4, 4), mid(4, 4);
    for (size_t i = 0; i < x.size(); ++i) {
        x.data[i] = 0.2 + 0.3 * rng.uniform();
        x2.data[i] = x.data[i] + 0.25;  // uniform gap
        mid.data[i] = 0.5 * (x.data[i] + x2.data[i]);
    }
    CHECK(qun_loss(mid, x, mid, x2, kW) == doctest::Approx(0.25 * 0.25).epsilon(1e-9));

    CHECK(qun_loss(x, x, x, x, kW) == 0.0);
}

TEST_CASE("mrn_loss: hand values") {
    Rng rng(4);
    const Image rgb = testutil::random_image(rng, 4, 4);
    const AlphaMatte alpha = testutil::random_matte(rng, 4, 4);
    CHECK(mrn_loss(pred4(rgb, alpha), rgb, alpha, kW) == 0.0);

    // RGB perfect, alpha off by 0.1 -> (1 - lambda_h) * 0.1 = 0.05.
    AlphaMatte off(4, 4);
    for (size_t i = 0; i < alpha.size(); ++i) off.data[i] = alpha.data[i] + 0.1;
    CHECK(mrn_loss(pred4(rgb, off), rgb, alpha, kW) ==
          doctest::Approx(0.05).epsilon(1e-9));

    // Alpha perfect, RGB off by 0.2 -> lambda_h * 0.2 = 0.1.
    Image rgb_off(4, 4);
    for (size_t i = 0; i < rgb.data.size(); ++i) rgb_off.data[i] = rgb.data[i] + 0.2;
    CHECK(mrn_loss(pred4(rgb_off, alpha), rgb, alpha, kW) ==
          doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("all losses: agree with naive per-element oracles on random inputs") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int h = 3 + static_cast<int>(rng.below(6));
        const int w = 3 + static_cast<int>(rng.below(6));
        const Mask fg = testutil::random_matte(rng, h, w);
        const Mask bg = testutil::random_matte(rng, h, w);
        const Mask gfg = testutil::random_matte(rng, h, w);
        const Mask gbg = testutil::random_matte(rng, h, w);
        const Tensor p2 = pred2(fg, bg);
        CHECK(mpn_loss(p2, gfg, gbg, kW) ==
              doctest::Approx(oracles::mpn_loss(p2, gfg, gbg, kW)).epsilon(1e-9));

        const Mask qx = testutil::random_matte(rng, h, w);
        const Mask qx2 = testutil::random_matte(rng, h, w);
        CHECK(qun_identity_loss(qx, gfg, qx2, gbg) ==
              doctest::Approx(oracles::qun_identity_loss(qx, gfg, qx2, gbg))
                  .epsilon(1e-9));
        CHECK(qun_consistency_loss(qx, qx2) ==
              doctest::Approx(oracles::qun_consistency_loss(qx, qx2)).epsilon(1e-9));
        CHECK(qun_loss(qx, gfg, qx2, gbg, kW) ==
              doctest::Approx(oracles::qun_loss(qx, gfg, qx2, gbg, kW)).epsilon(1e-9));

        const Image rgb = testutil::random_image(rng, h, w);
        const Image grgb = testutil::random_image(rng, h, w);
        const AlphaMatte pa = testutil::random_matte(rng, h, w);
        const AlphaMatte ga = testutil::random_matte(rng, h, w);
        const Tensor p4 = pred4(grgb, pa);
        CHECK(mrn_loss(p4, rgb, ga, kW) ==
              doctest::Approx(oracles::mrn_loss(p4, rgb, ga, kW)).epsilon(1e-9));
    }
}

TEST_CASE("all losses: non-negative and bounded by 1 on unit-range inputs") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const Mask a = testutil::random_matte(rng, 5, 5);
        const Mask b = testutil::random_matte(rng, 5, 5);
        const Mask c = testutil::random_matte(rng, 5, 5);
        const Mask d = testutil::random_matte(rng, 5, 5);
        for (const double v :
             {mpn_loss(pred2(a, b), c, d, kW), qun_loss(a, b, c, d, kW),
              mrn_loss(pred4(testutil::random_image(rng, 5, 5), a),
                       testutil::random_image(rng, 5, 5), b, kW)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("losses: shape mismatches are rejected") {
    Rng rng(7);
    const Mask m44 = testutil::random_matte(rng, 4, 4);
    const Mask m45 = testutil::random_matte(rng, 4, 5);
    CHECK_THROWS_AS(mpn_loss(pred2(m44, m44), m45, m44, kW), std::invalid_argument);
    CHECK_THROWS_AS(qun_loss(m44, m44, m45, m45, kW), std::invalid_argument);
    const Image img45 = testutil::random_image(rng, 4, 5);
    CHECK_THROWS_AS(
        mrn_loss(pred4(testutil::random_image(rng, 4, 4), m44), img45, m44, kW),
        std::invalid_argument);
}

TEST_CASE("loss gradients: finite differences on the predictions") {
    // Central differences directly on the loss inputs, smoothed |.| so the
    // kink never lands inside the probe interval.
    const double eps = 1e-2, h = 1e-4;
    Rng rng(8);

    const Mask gfg = testutil::random_matte(rng, 4, 4);
    const Mask gbg = testutil::random_matte(rng, 4, 4);
    Tensor p2 = pred2(testutil::random_matte(rng, 4, 4), testutil::random_matte(rng, 4, 4));
    Tensor d2(2, 4, 4);
    losses::mpn_loss_grad(p2, gfg, gbg, kW, d2, eps);
    for (const size_t j : {size_t{0}, size_t{7}, size_t{16}, size_t{31}}) {
        const double keep = p2.data[j];
        p2.data[j] = keep + h;
        const double up = losses::mpn_loss(p2, gfg, gbg, kW, eps);
        p2.data[j] = keep - h;
        const double dn = losses::mpn_loss(p2, gfg, gbg, kW, eps);
        p2.data[j] = keep;
        CHECK(d2.data[j] == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-6));
    }

    Mask qx = testutil::random_matte(rng, 4, 4);
    Mask qx2 = testutil::random_matte(rng, 4, 4);
    const Mask xm = testutil::random_matte(rng, 4, 4);
    const Mask xm2 = testutil::random_matte(rng, 4, 4);
    Mask dqx(4, 4), dqx2(4, 4);
    losses::qun_loss_grad(qx, xm, qx2, xm2, kW, dqx, dqx2, eps);
    for (const size_t j : {size_t{0}, size_t{5}, size_t{15}}) {
        const double keep = qx.data[j];
        qx.data[j] = keep + h;
        const double up = losses::qun_loss(qx, xm, qx2, xm2, kW, eps);
        qx.data[j] = keep - h;
        const double dn = losses::qun_loss(qx, xm, qx2, xm2, kW, eps);
        qx.data[j] = keep;
        CHECK(dqx.data[j] == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-6));

        const double keep2 = qx2.data[j];
        qx2.data[j] = keep2 + h;
        const double up2 = losses::qun_loss(qx, xm, qx2, xm2, kW, eps);
        qx2.data[j] = keep2 - h;
        const double dn2 = losses::qun_loss(qx, xm, qx2, xm2, kW, eps);
        qx2.data[j] = keep2;
        CHECK(dqx2.data[j] == doctest::Approx((up2 - dn2) / (2 * h)).epsilon(1e-6));
    }

    const Image grgb = testutil::random_image(rng, 4, 4);
    const AlphaMatte ga = testutil::random_matte(rng, 4, 4);
    Tensor p4 = pred4(testutil::random_image(rng, 4, 4), testutil::random_matte(rng, 4, 4));
    Tensor d4(4, 4, 4);
    losses::mrn_loss_grad(p4, grgb, ga, kW, d4, eps);
    for (const size_t j : {size_t{3}, size_t{20}, size_t{50}, size_t{60}}) {
        const double keep = p4.data[j];
        p4.data[j] = keep + h;
        const double up = losses::mrn_loss(p4, grgb, ga, kW, eps);
        p4.data[j] = keep - h;
        const double dn = losses::mrn_loss(p4, grgb, ga, kW, eps);
        p4.data[j] = keep;
        CHECK(d4.data[j] == doctest::Approx((up - dn) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("loss gradients: the returned value equals the loss") {
    Rng rng(9);
    const Mask gfg = testutil::random_matte(rng, 4, 4);
    const Mask gbg = testutil::random_matte(rng, 4, 4);
    const Tensor p2 =
        pred2(testutil::random_matte(rng, 4, 4), testutil::random_matte(rng, 4, 4));
    Tensor d2(2, 4, 4);
    CHECK(losses::mpn_loss_grad(p2, gfg, gbg, kW, d2) ==
          doctest::Approx(losses::mpn_loss(p2, gfg, gbg, kW)).epsilon(1e-12));
}
