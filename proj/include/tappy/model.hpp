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

#pragma once

// Tap success-rate model for rectangular touch targets.
//
// Tap endpoints are modelled as independent Gaussians on each axis whose
// variance grows linearly with the squared target size:
//
//   sigma_x^2 = a_x * W^2 + b_x        sigma_y^2 = a_y * H^2 + b_y
//
// and the probability of landing inside a W x H mm rectangle centred on the
// aim point is
//
//   erf(W / (2 sqrt(2) sigma_x)) * erf(H / (2 sqrt(2) sigma_y)).
//
// Everything here is a pure function of its arguments.

namespace tappy::model {

struct ModelCoefficients {
  double a_x = 0.0149;  // dimensionless
  double b_x = 0.9414;  // mm^2
  double a_y = 0.0091;  // dimensionless
  double b_y = 1.0949;  // mm^2

  friend bool operator==(const ModelCoefficients&,
                         const ModelCoefficients&) = default;
};

// Throws DomainError unless every slope is finite and >= 0 and every
// intercept is finite and > 0.
void validate(const ModelCoefficients& coeffs);

// Target size in millimetres.
struct PhysicalSize {
  double width_mm = 0.0;
  double height_mm = 0.0;

  friend bool operator==(const PhysicalSize&, const PhysicalSize&) = default;
};

struct Prediction {
  double sigma_x_mm = 0.0;
  double sigma_y_mm = 0.0;
  double success_rate = 0.0;
};

// Arguments beyond this magnitude return exactly +-1.
inline constexpr double kErfSaturation = 6.0;

/// Gauss error function.
///
/// Absolute error is below 1e-12 on [-6, 6]. Odd symmetry is exact since the
/// value is always computed from |x|. Throws DomainError for NaN or infinity.
double erf(double x);

/// Endpoint spread along x for a target of the given width (mm).
double sigma_x(double width_mm, const ModelCoefficients& coeffs = {});

/// Endpoint spread along y for a target of the given height (mm).
double sigma_y(double height_mm, const ModelCoefficients& coeffs = {});

/// Predicted probability that a tap aimed at the centre of a rectangle lands
/// inside it. A zero width or height yields a rate of exactly 0.
Prediction success_rate(const PhysicalSize& size,
                        const ModelCoefficients& coeffs = {});

/// Limit of the x factor as the width grows without bound. Equals 1 when
/// a_x is 0.
double x_factor_ceiling(const ModelCoefficients& coeffs = {});
double y_factor_ceiling(const ModelCoefficients& coeffs = {});

/// Supremum of success_rate over all sizes. Strictly below 1 whenever both
/// slopes are positive, because the spread keeps growing with size.
double rate_ceiling(const ModelCoefficients& coeffs = {});

// Bisection bracket and tolerance shared by the inverse-sizing queries.
inline constexpr double kMaxSearchSizeMm = 1000.0;
inline constexpr double kSizeToleranceMm = 1e-9;

/// Smallest side S (mm) of a square target with success_rate(S, S) >= target.
///
/// The result is the upper end of the final bisection bracket, so the rate
/// guarantee always holds for the returned size. Throws UnattainableRateError
/// when the target is not in (0, ceiling) or is not reachable within
/// kMaxSearchSizeMm.
double min_square_size_for_rate(double target_rate,
                                const ModelCoefficients& coeffs = {});

/// Smallest width W (mm) with success_rate(W, height_mm) >= target for a fixed
/// height. The height factor alone caps what any width can reach.
double min_width_for_rate(double target_rate, double height_mm,
                          const ModelCoefficients& coeffs = {});

}  // namespace tappy::model
