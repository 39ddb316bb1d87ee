#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "delab/special.hpp"

using namespace delab;

TEST(Special, LogGammaMatchesBoost) {
    for (double x : {0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 123.25, 1e4})
        EXPECT_NEAR(special::log_gamma(x), boost::math::lgamma(x), 1e-12 * std::max(1.0, std::fabs(boost::math::lgamma(x))));
}

TEST(Special, IncompleteBetaMatchesBoostOnGrid) {
    const double as[] = {0.5, 1.0, 1.5, 2.0, 2.5, 5.0};
    for (double a : as) {
        for (double b : {0.5, 1.0, 3.0}) {
            for (int i = 0; i <= 200; ++i) {
                const double x = i / 200.0;
                EXPECT_NEAR(special::incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-13)
                    << "a=" << a << " b=" << b << " x=" << x;
            }
        }
    }
}

TEST(Special, IncompleteBetaSymmetry) {
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.999})
        EXPECT_NEAR(special::incomplete_beta(2.5, 0.5, x) + special::incomplete_beta(0.5, 2.5, 1.0 - x), 1.0, 1e-14);
}

TEST(Special, IncompleteBetaRejectsBadArguments) {
    EXPECT_THROW(special::incomplete_beta(0.0, 1.0, 0.5), DomainError);
    EXPECT_THROW(special::incomplete_beta(1.0, -1.0, 0.5), DomainError);
    EXPECT_THROW(special::incomplete_beta(1.0, 1.0, 1.5), DomainError);
    EXPECT_THROW(special::incomplete_beta(1.0, 1.0, std::nan("")), DomainError);
}

TEST(Special, NormalQuantileMatchesBoost) {
    const boost::math::normal_distribution<double> nd;
    for (double p : {1e-12, 1e-6, 0.001, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.995, 0.999999})
        EXPECT_NEAR(special::normal_quantile(p), boost::math::quantile(nd, p), 1e-9) << "p=" << p;
    EXPECT_NEAR(special::normal_quantile(0.995), 2.5758293035489004, 1e-12);
    EXPECT_THROW(special::normal_quantile(0.0), DomainError);
    EXPECT_THROW(special::normal_quantile(1.0), DomainError);
}
