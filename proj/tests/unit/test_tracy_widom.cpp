#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>

#include "asep/tracy_widom.hpp"

using namespace asep;

// det(I - K_s) on L^2(0, inf), K_s(x, y) = Ai(s + (x + y)/2) / 2, Gauss-Legendre with
// domain and node count growing with |s| (converged to ~1e-12 absolute)
struct FrozenCdf {
    double s, F;
};
const FrozenCdf kFredholm[] = {
    {-10, 3.16849660984714e-22}, {-8, 1.8068247481180182e-12}, {-6, 2.7073193268251807e-06},
    {-4, 0.007567678598815106},  {-3, 0.06960011886737776},    {-2, 0.27432019790918727},
    {-1, 0.5837898955197593},    {0, 0.8319080662029575},      {1, 0.9514212369115452},
    {2, 0.9895975710848262},     {3, 0.9982934803498806},      {4, 0.999779655512569},
    {6, 0.9999980591859264},
};
constexpr double kFredholmMean = -1.2065335772905996;
constexpr double kFredholmVariance = 1.6077809829179779;

TEST(TracyWidom, AiryAgainstBoost) {
    for (double x = -15; x <= 15; x += 0.37) {
        const double want = boost::math::airy_ai(x);
        EXPECT_NEAR(airy_ai(x), want, 1e-12 + 1e-10 * std::abs(want)) << x;
    }
    EXPECT_NEAR(airy_ai(0), 0.355028053887817239, 1e-15);
    EXPECT_NEAR(airy_ai(10), 1.1047532552898687e-10, 1e-20);
    EXPECT_THROW(airy_ai(15.5), Error);
}

TEST(TracyWidom, AirySatisfiesItsOde) {
    const double h = 1e-3;
    for (double x : {-7.3, -2.0, 0.5, 3.0, 5.9}) {
        const double d2 = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
        EXPECT_NEAR(d2, x * airy_ai(x), 1e-5) << x;
    }
}

TEST(TracyWidom, HastingsMcLeod) {
    const auto& hm = GoeDistribution::instance().hm();
    EXPECT_LT(hm.max_residual, 1e-8);
    EXPECT_NEAR(hm.value(0.0), 0.36706155154807, 1e-9);
    EXPECT_NEAR(hm.value(6.0), airy_ai(6.0), 1e-12);
    EXPECT_NEAR(hm.value(-10.0) / hm_left_asymptote(-10.0), 1.0, 0.02);
    EXPECT_THROW(hastings_mcleod(-20.0, 8.0), Error);
}

TEST(TracyWidom, CdfMatchesFredholmDeterminant) {
    for (const auto& [s, F] : kFredholm) EXPECT_NEAR(f_goe(s), F, 1e-9) << s;
}

TEST(TracyWidom, CdfIsMonotone) {
    double prev = 0;
    for (double s = -10; s <= 6; s += 0.01) {
        const double F = f_goe(s);
        EXPECT_GE(F, prev) << s;
        prev = F;
    }
    EXPECT_THROW(f_goe(6.5), Error);
    EXPECT_THROW(f_goe(-10.5), Error);
}

TEST(TracyWidom, Moments) {
    const auto m = goe_moments();
    EXPECT_NEAR(m.mean, kFredholmMean, 1e-5);
    EXPECT_NEAR(m.variance, kFredholmVariance, 1e-5);
    EXPECT_NEAR(m.mass, 1.0, 1e-7);
}

TEST(TracyWidom, Quantile) {
    for (double p : {0.01, 0.25, 0.5, 0.9, 0.99}) EXPECT_NEAR(f_goe(f_goe_inverse(p)), p, 1e-10) << p;
    const double q999 = f_goe_inverse(0.999);
    EXPECT_GT(q999, 2.0);
    EXPECT_LT(q999, 6.0);
    EXPECT_THROW(f_goe_inverse(0.0), Error);
    EXPECT_THROW(f_goe_inverse(1.0), Error);
}
