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

#include "tappy/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "tappy/error.hpp"

namespace tappy::model {
namespace {

constexpr double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;
constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

// Below this the alternating Maclaurin series loses at most a few ulps to
// cancellation. Between the two limits the all-positive series
// e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!! has no cancellation at all; above
// the second one the erfc continued fraction needs fewer than 30 steps.
constexpr double kSeriesLimit = 2.0;
constexpr double kContinuedFractionLimit = 3.5;
constexpr int kMaxTerms = 80;

// Reciprocals 1/n and 2/(2n+1), so the series loops never divide.
struct Reciprocals {
  double inv_n[kMaxTerms + 1];
  double two_over_odd[kMaxTerms + 1];
  constexpr Reciprocals() : inv_n(), two_over_odd() {
    for (int n = 1; n <= kMaxTerms; ++n) {
      inv_n[n] = 1.0 / n;
      two_over_odd[n] = 2.0 / (2 * n + 1);
    }
  }
};
constexpr Reciprocals kRecip;

double erf_maclaurin(double x) {
  const double x2 = x * x;
  double power = x;  // (-1)^n x^(2n+1) / n!
  double sum = x;
  for (int n = 1; n <= kMaxTerms; ++n) {
    power *= -x2 * kRecip.inv_n[n];
    const double contrib = power * (0.5 * kRecip.two_over_odd[n]);
    sum += contrib;
    if (std::abs(contrib) <= 1e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

double erf_positive_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n <= kMaxTerms; ++n) {
    term *= x2 * kRecip.two_over_odd[n];
    sum += term;
    if (term <= 1e-17 * sum) break;
  }
  return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2) / sqrt(pi) / (x + (1/2) / (x + 1 / (x + (3/2) / ...)))
// evaluated with the modified Lentz method. Requires x > 0.
double erfc_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = f;
  double d = 0.0;
  for (int n = 1; n < 1000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (d == 0.0) d = kTiny;
    c = x + a / c;
    if (c == 0.0) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

void require_size(double mm, const char* what) {
  if (!std::isfinite(mm) || mm < 0.0) {
    throw DomainError(
        fmt::format("{} must be finite and non-negative, got {}", what, mm));
  }
}

void require_rate(double target) {
  if (!std::isfinite(target)) {
    throw UnattainableRateError("target rate must be finite", 0.0);
  }
}

// Smallest size in [0, kMaxSearchSizeMm] where rate(size) >= target.
template <typename RateFn>
double bisect_min_size(RateFn&& rate, double target) {
  double lo = 0.0;
  double hi = kMaxSearchSizeMm;
  while (hi - lo > kSizeToleranceMm) {
    const double mid = 0.5 * (lo + hi);
    if (rate(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

void validate(const ModelCoefficients& c) {
  const auto slope_ok = [](double a) { return std::isfinite(a) && a >= 0.0; };
  const auto intercept_ok = [](double b) { return std::isfinite(b) && b > 0.0; };
  if (!slope_ok(c.a_x) || !slope_ok(c.a_y) || !intercept_ok(c.b_x) ||
      !intercept_ok(c.b_y)) {
    throw DomainError(fmt::format(
        "invalid model coefficients (a_x={}, b_x={}, a_y={}, b_y={}): slopes "
        "must be >= 0 and intercepts > 0",
        c.a_x, c.b_x, c.a_y, c.b_y));
  }
}

double erf(double x) {
  if (!std::isfinite(x)) {
    throw DomainError(fmt::format("erf argument must be finite, got {}", x));
  }
  const double ax = std::abs(x);
  double value;
  if (ax > kErfSaturation) {
    value = 1.0;
  } else if (ax < kSeriesLimit) {
    value = erf_maclaurin(ax);
  } else if (ax < kContinuedFractionLimit) {
    value = erf_positive_series(ax);
  } else {
    value = 1.0 - erfc_continued_fraction(ax);
  }
  return std::signbit(x) ? -value : value;
}

double sigma_x(double width_mm, const ModelCoefficients& coeffs) {
  require_size(width_mm, "width");
  validate(coeffs);
  return std::sqrt(coeffs.a_x * width_mm * width_mm + coeffs.b_x);
}

double sigma_y(double height_mm, const ModelCoefficients& coeffs) {
  require_size(height_mm, "height");
  validate(coeffs);
  return std::sqrt(coeffs.a_y * height_mm * height_mm + coeffs.b_y);
}

Prediction success_rate(const PhysicalSize& size,
                        const ModelCoefficients& coeffs) {
  Prediction p;
  p.sigma_x_mm = sigma_x(size.width_mm, coeffs);
  p.sigma_y_mm = sigma_y(size.height_mm, coeffs);
  p.success_rate = erf(size.width_mm / (kTwoSqrt2 * p.sigma_x_mm)) *
                   erf(size.height_mm / (kTwoSqrt2 * p.sigma_y_mm));
  return p;
}

double x_factor_ceiling(const ModelCoefficients& coeffs) {
  validate(coeffs);
  if (coeffs.a_x == 0.0) return 1.0;
  return erf(std::min(1.0 / (kTwoSqrt2 * std::sqrt(coeffs.a_x)), kErfSaturation + 1.0));
}

double y_factor_ceiling(const ModelCoefficients& coeffs) {
  validate(coeffs);
  if (coeffs.a_y == 0.0) return 1.0;
  return erf(std::min(1.0 / (kTwoSqrt2 * std::sqrt(coeffs.a_y)), kErfSaturation + 1.0));
}

double rate_ceiling(const ModelCoefficients& coeffs) {
  return x_factor_ceiling(coeffs) * y_factor_ceiling(coeffs);
}

double min_square_size_for_rate(double target_rate,
                                const ModelCoefficients& coeffs) {
  require_rate(target_rate);
  const double ceiling = rate_ceiling(coeffs);
  const auto rate = [&](double side) {
    return success_rate({side, side}, coeffs).success_rate;
  };
  if (target_rate <= 0.0 || target_rate >= ceiling ||
      rate(kMaxSearchSizeMm) < target_rate) {
    throw UnattainableRateError(
        fmt::format("success rate {} is unattainable: model ceiling is {:.8f}",
                    target_rate, ceiling),
        ceiling);
  }
  return bisect_min_size(rate, target_rate);
}

double min_width_for_rate(double target_rate, double height_mm,
                          const ModelCoefficients& coeffs) {
  if (!std::isfinite(height_mm) || height_mm <= 0.0) {
    throw DomainError(
        fmt::format("height must be finite and positive, got {}", height_mm));
  }
  require_rate(target_rate);
  const double sy = sigma_y(height_mm, coeffs);
  const double ceiling =
      x_factor_ceiling(coeffs) * erf(height_mm / (kTwoSqrt2 * sy));
  const auto rate = [&](double width) {
    return success_rate({width, height_mm}, coeffs).success_rate;
  };
  if (target_rate <= 0.0 || target_rate >= ceiling ||
      rate(kMaxSearchSizeMm) < target_rate) {
    throw UnattainableRateError(
        fmt::format("success rate {} is unattainable at height {} mm: ceiling "
                    "is {:.8f}",
                    target_rate, height_mm, ceiling),
        ceiling);
  }
  return bisect_min_size(rate, target_rate);
}

}  // namespace tappy::model
