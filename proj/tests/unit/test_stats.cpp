#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "serpgauge/stats.hpp"

using namespace serpgauge;

namespace {

// Independent inverse normal CDF: bisection on erfc, accurate far beyond the
// tolerance used below. Slow and dumb on purpose.
double quantile_by_bisection(double p) {
    double lo = -12.0, hi = 12.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        const double cdf = std::erfc(-mid / std::sqrt(2.0)) / 2;
        (cdf < p ? lo : hi) = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace

TEST_CASE("normal quantile matches reference values") {
    CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-12));
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0));
}

TEST_CASE("normal quantile agrees with a bisection inverse") {
    for (const double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.975, 0.995, 0.9999}) {
        CHECK(stats::normal_quantile(p) == doctest::Approx(quantile_by_bisection(p)).epsilon(1e-9));
    }
}

TEST_CASE("normal quantile is symmetric and increasing") {
    double previous = stats::normal_quantile(1e-6);
    for (int i = 1; i <= 400; ++i) {
        const double p = static_cast<double>(i) / 401.0;
        const double q = stats::normal_quantile(p);
        CHECK(q == doctest::Approx(-stats::normal_quantile(1.0 - p)).epsilon(1e-10));
        CHECK(q > previous);
        previous = q;
    }
}

TEST_CASE("quantile rejects probabilities outside the open interval") {
    CHECK_THROWS_AS(stats::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::normal_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::normal_quantile(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(stats::two_sided_z(0.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::two_sided_z(1.0), std::invalid_argument);
}

TEST_CASE("two sided z folds the tail in half") {
    CHECK(stats::two_sided_z(0.95) == doctest::Approx(stats::normal_quantile(0.975)));
    CHECK(stats::two_sided_z(0.99) == doctest::Approx(stats::normal_quantile(0.995)));
    CHECK(stats::two_sided_z(0.8) == doctest::Approx(stats::normal_quantile(0.9)));
}
