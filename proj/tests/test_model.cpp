/*
 * Copyright (C) 2026 The Tappy Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tappy/error.hpp"
#include "tappy/model.hpp"

using namespace tappy;
using model::ModelCoefficients;
using model::PhysicalSize;

namespace {

double rate(double w, double h, const ModelCoefficients& c = {}) {
  return model::success_rate({w, h}, c).success_rate;
}

}  // namespace

TEST_CASE("default coefficients are the fitted values") {
  const ModelCoefficients c;
  CHECK(c.a_x == 0.0149);
  CHECK(c.b_x == 0.9414);
  CHECK(c.a_y == 0.0091);
  CHECK(c.b_y == 1.0949);
}

TEST_CASE("coefficient validation") {
  CHECK_NOTHROW(model::validate({0.0, 1.0, 0.0, 1.0}));
  CHECK_THROWS_AS(model::validate({-0.1, 1.0, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(model::validate({0.1, 0.0, 0.1, 1.0}), DomainError);
  CHECK_THROWS_AS(model::validate({0.1, 1.0, 0.1, NAN}), DomainError);
  CHECK_THROWS_AS(model::sigma_x(1.0, {0.1, -1.0, 0.1, 1.0}), DomainError);
}

TEST_CASE("erf known values") {
  CHECK(model::erf(0.0) == 0.0);
  CHECK(std::abs(model::erf(1.0) - 0.842700792949715) <= 1e-12);
  CHECK(model::erf(-1.0) == -model::erf(1.0));
  // 40-term Maclaurin oracle
  CHECK(std::abs(model::erf(1.0) - static_cast<double>(testing::erf_maclaurin(1.0L))) <= 1e-12);
}

TEST_CASE("erf saturates beyond six and rejects non-finite input") {
  CHECK(model::erf(6.5) == 1.0);
  CHECK(model::erf(-40.0) == -1.0);
  CHECK_THROWS_AS(model::erf(NAN), DomainError);
  CHECK_THROWS_AS(model::erf(INFINITY), DomainError);
  CHECK_THROWS_AS(model::erf(-INFINITY), DomainError);
}

TEST_CASE("erf matches the positive-term series on [-6, 6]") {
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = -6.0 + 12.0 * i / 999.0;
    worst = std::max(worst, std::abs(model::erf(x) -
                                     static_cast<double>(testing::erf_positive_series(x))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("erf agrees with std::erf across both evaluation branches") {
  for (double x = 0.0; x <= 6.0; x += 0.001) {
    REQUIRE(std::abs(model::erf(x) - std::erf(x)) <= 1e-14);
  }
}

TEST_CASE("erf is odd, strictly increasing, and bounded") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = dist(rng);
    REQUIRE(model::erf(-x) == -model::erf(x));
    REQUIRE(std::abs(model::erf(x)) <= 1.0);
  }
  // Strictness is only observable while 1 - erf(x) is representable.
  double prev = model::erf(-5.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = -5.0 + 10.0 * i / 1000.0;
    const double v = model::erf(x);
    REQUIRE(v > prev);
    REQUIRE(std::abs(v) < 1.0);
    prev = v;
  }
}

TEST_CASE("sigma formulas") {
  CHECK(model::sigma_x(0.0) == doctest::Approx(std::sqrt(0.9414)).epsilon(1e-15));
  CHECK(model::sigma_y(0.0) == doctest::Approx(std::sqrt(1.0949)).epsilon(1e-15));
  CHECK(model::sigma_x(9.0) == doctest::Approx(std::sqrt(0.0149 * 81 + 0.9414)));
  CHECK(model::sigma_x(9.0) == doctest::Approx(1.4657).epsilon(1e-4));
  CHECK(model::sigma_y(9.0) == doctest::Approx(std::sqrt(0.0091 * 81 + 1.0949)));
  CHECK(model::sigma_y(9.0) == doctest::Approx(1.3535).epsilon(1e-4));
  CHECK(model::sigma_x(9.0, {0.0, 1.0, 0.0091, 1.0949}) == 1.0);
  CHECK(model::sigma_y(9.0, {0.0149, 0.9414, 0.0, 1.0}) == 1.0);
}

TEST_CASE("sigma rejects negative or non-finite sizes") {
  CHECK_THROWS_AS(model::sigma_x(-0.1), DomainError);
  CHECK_THROWS_AS(model::sigma_y(-1.0), DomainError);
  CHECK_THROWS_AS(model::sigma_x(NAN), DomainError);
  CHECK_THROWS_AS(model::sigma_y(INFINITY), DomainError);
}

TEST_CASE("sigma floor holds with equality only at zero") {
  const ModelCoefficients c;
  CHECK(model::sigma_x(0.0) == std::sqrt(c.b_x));
  CHECK(model::sigma_y(0.0) == std::sqrt(c.b_y));
  for (double s = 0.01; s < 200.0; s *= 1.3) {
    REQUIRE(model::sigma_x(s) > std::sqrt(c.b_x));
    REQUIRE(model::sigma_y(s) > std::sqrt(c.b_y));
    REQUIRE(model::sigma_x(s * 1.01) > model::sigma_x(s));
  }
}

TEST_CASE("success rate examples") {
  CHECK(rate(0.0, 9.0) == 0.0);
  CHECK(rate(0.0, 0.0) == 0.0);
  CHECK(rate(9.0, 0.0) == 0.0);

  const double r99 = rate(9.0, 9.0);
  CHECK(r99 == doctest::Approx(0.996977454564899).epsilon(1e-12));
  CHECK(std::abs(r99 - static_cast<double>(testing::success_rate_series(9, 9))) <= 1e-12);

  const double r100 = rate(100.0, 100.0);
  CHECK(r100 < 1.0);
  CHECK(r100 == doctest::Approx(0.99996).epsilon(1e-5));
}

TEST_CASE("success rate returns the sigmas it used") {
  const auto p = model::success_rate({9.0, 5.0});
  CHECK(p.sigma_x_mm == model::sigma_x(9.0));
  CHECK(p.sigma_y_mm == model::sigma_y(5.0));
}

TEST_CASE("success rate rejects invalid sizes") {
  CHECK_THROWS_AS(model::success_rate({-1.0, 9.0}), DomainError);
  CHECK_THROWS_AS(model::success_rate({9.0, NAN}), DomainError);
}

TEST_CASE("ceiling") {
  const double ceiling = model::rate_ceiling();
  CHECK(ceiling == doctest::Approx(0.999957834626108).epsilon(1e-13));
  CHECK(std::abs(ceiling - static_cast<double>(testing::ceiling_series())) <= 1e-12);
  CHECK(model::rate_ceiling({0.0, 1.0, 0.0, 1.0}) == 1.0);
  for (double s : {10.0, 50.0, 100.0, 500.0, 1000.0}) {
    REQUIRE(rate(s, s) < ceiling);
  }
}

TEST_CASE("monotone in width and height on random pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> size(0.05, 60.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = size(rng), b = size(rng), other = size(rng);
    if (a == b) continue;
    const double lo = std::min(a, b), hi = std::max(a, b);
    REQUIRE(rate(lo, other) < rate(hi, other));
    REQUIRE(rate(other, lo) < rate(other, hi));
  }
}

TEST_CASE("min square size for rate") {
  const double s95 = model::min_square_size_for_rate(0.95);
  CHECK(s95 == doctest::Approx(5.2).epsilon(0.01));
  CHECK(std::abs(s95 - static_cast<double>(testing::min_square_bisection(0.95L))) <= 1e-6);
  CHECK(rate(s95, s95) >= 0.95);
  CHECK(rate(s95 - 1e-6, s95 - 1e-6) < 0.95);

  for (double p : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const double s = model::min_square_size_for_rate(p);
    const double r = rate(s, s);
    REQUIRE(r >= p);
    REQUIRE(r <= p + 1e-5);
  }
}

TEST_CASE("min square size with identity coefficients has a closed form") {
  // erf(S / (2 sqrt 2))^2 = 0.5  =>  S = 2 sqrt(2) erfinv(sqrt(0.5)) = 2.10359172033045
  const ModelCoefficients identity{0.0, 1.0, 0.0, 1.0};
  const double s = model::min_square_size_for_rate(0.5, identity);
  CHECK(s == doctest::Approx(2.10359172033045).epsilon(1e-8));
  const double half = static_cast<double>(testing::erf_positive_series(s / (2.0 * std::sqrt(2.0))));
  CHECK(half * half == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("min square size rejects unattainable targets") {
  const double ceiling = model::rate_ceiling();
  CHECK_THROWS_AS(model::min_square_size_for_rate(ceiling + 0.001), UnattainableRateError);
  CHECK_THROWS_AS(model::min_square_size_for_rate(ceiling), UnattainableRateError);
  CHECK_THROWS_AS(model::min_square_size_for_rate(0.0), UnattainableRateError);
  CHECK_THROWS_AS(model::min_square_size_for_rate(-0.5), UnattainableRateError);
  CHECK_THROWS_AS(model::min_square_size_for_rate(NAN), UnattainableRateError);
  try {
    model::min_square_size_for_rate(0.99999);
    FAIL("expected UnattainableRateError");
  } catch (const UnattainableRateError& e) {
    CHECK(e.ceiling() == doctest::Approx(ceiling));
    CHECK(std::string(e.what()).find("unattainable") != std::string::npos);
  }
}

TEST_CASE("min width for a fixed height") {
  const double w = model::min_width_for_rate(0.9, 9.0);
  CHECK(w == doctest::Approx(3.49500732912300).epsilon(1e-8));
  CHECK(rate(w - 1e-4, 9.0) < 0.9);
  CHECK(rate(w, 9.0) >= 0.9);

  const double tiny = model::min_width_for_rate(1e-6, 9.0);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-4);
}

TEST_CASE("min width is capped by the height factor") {
  // y factor at H = 9 is erf(2.3511...) = 0.999114797539727
  const double y_factor = 0.999114797539727;
  const double cap = y_factor * model::x_factor_ceiling();
  CHECK_THROWS_AS(model::min_width_for_rate(cap + 1e-7, 9.0), UnattainableRateError);
  CHECK_NOTHROW(model::min_width_for_rate(cap - 1e-4, 9.0));
  CHECK_THROWS_AS(model::min_width_for_rate(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(model::min_width_for_rate(0.5, -3.0), DomainError);
  CHECK_THROWS_AS(model::min_width_for_rate(0.5, NAN), DomainError);
}
