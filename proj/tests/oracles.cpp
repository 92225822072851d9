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

#include "oracles.hpp"

#include <cmath>
#include <random>

namespace tappy::testing {
namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

long double sigma(long double a, long double b, long double size) {
  return std::sqrt(a * size * size + b);
}

}  // namespace

long double erf_maclaurin(long double x, int terms) {
  long double sum = 0.0L;
  long double power = x;      // x^(2n+1)
  long double factorial = 1;  // n!
  for (int n = 0; n < terms; ++n) {
    if (n > 0) {
      power *= x * x;
      factorial *= n;
    }
    const long double term = power / (factorial * (2 * n + 1));
    sum += (n % 2 == 0) ? term : -term;
  }
  return 2.0L / std::sqrt(kPi) * sum;
}

long double erf_positive_series(long double x) {
  if (x < 0) return -erf_positive_series(-x);
  const long double x2 = x * x;
  long double term = x;  // 2^n x^(2n+1) / (2n+1)!!
  long double sum = x;
  for (int n = 1; n < 5000; ++n) {
    term *= 2.0L * x2 / (2 * n + 1);
    sum += term;
    if (term < 1e-24L * sum) break;
  }
  return 2.0L / std::sqrt(kPi) * std::exp(-x2) * sum;
}

long double success_rate_series(long double w, long double h, const Coefficients& c) {
  const long double k = 2.0L * std::sqrt(2.0L);
  return erf_maclaurin(w / (k * sigma(c.a_x, c.b_x, w))) *
         erf_maclaurin(h / (k * sigma(c.a_y, c.b_y, h)));
}

long double success_rate_positive_series(long double w, long double h,
                                         const Coefficients& c) {
  const long double k = 2.0L * std::sqrt(2.0L);
  return erf_positive_series(w / (k * sigma(c.a_x, c.b_x, w))) *
         erf_positive_series(h / (k * sigma(c.a_y, c.b_y, h)));
}

long double ceiling_series(const Coefficients& c) {
  const long double k = 2.0L * std::sqrt(2.0L);
  return erf_positive_series(1.0L / (k * std::sqrt(c.a_x))) *
         erf_positive_series(1.0L / (k * std::sqrt(c.a_y)));
}

std::vector<double> monte_carlo_rates(std::span<const double> widths,
                                      std::span<const double> heights,
                                      std::uint64_t samples, std::uint64_t seed,
                                      const Coefficients& c) {
  // |sigma_x z| < W/2  <=>  |z| < W / (2 sigma_x)
  std::vector<double> x_limits, y_limits;
  for (double w : widths) x_limits.push_back(w / (2.0 * static_cast<double>(sigma(c.a_x, c.b_x, w))));
  for (double h : heights) y_limits.push_back(h / (2.0 * static_cast<double>(sigma(c.a_y, c.b_y, h))));
  const std::size_t nx = x_limits.size();
  const std::size_t ny = y_limits.size();

  constexpr std::uint64_t kChunk = 1u << 20;
  const auto chunks = static_cast<std::int64_t>((samples + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> hits(nx * ny, 0);

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(nx * ny, 0);
    std::vector<char> inside_x(nx), inside_y(ny);
#pragma omp for schedule(static)
    for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
      std::seed_seq seq{seed, static_cast<std::uint64_t>(chunk)};
      std::mt19937_64 rng(seq);
      std::normal_distribution<double> normal;
      const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * kChunk;
      const std::uint64_t end = std::min(samples, begin + kChunk);
      for (std::uint64_t s = begin; s < end; ++s) {
        const double zx = std::abs(normal(rng));
        const double zy = std::abs(normal(rng));
        for (std::size_t i = 0; i < nx; ++i) inside_x[i] = zx < x_limits[i];
        for (std::size_t j = 0; j < ny; ++j) inside_y[j] = zy < y_limits[j];
        for (std::size_t i = 0; i < nx; ++i) {
          if (!inside_x[i]) continue;
          for (std::size_t j = 0; j < ny; ++j) local[i * ny + j] += inside_y[j];
        }
      }
    }
#pragma omp critical
    for (std::size_t k = 0; k < hits.size(); ++k) hits[k] += local[k];
  }

  std::vector<double> rates(hits.size());
  for (std::size_t k = 0; k < hits.size(); ++k) {
    rates[k] = static_cast<double>(hits[k]) / static_cast<double>(samples);
  }
  return rates;
}

long double min_square_bisection(long double p, const Coefficients& c) {
  long double lo = 0.0L, hi = 1000.0L;
  while (hi - lo > 1e-12L) {
    const long double mid = 0.5L * (lo + hi);
    if (success_rate_positive_series(mid, mid, c) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace tappy::testing
