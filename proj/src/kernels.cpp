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

#include "tappy/kernels.hpp"

#include <cmath>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <fmt/format.h>

#include "tappy/error.hpp"

namespace tappy::kernels {
namespace {

void check_inputs(std::span<const model::PhysicalSize> sizes,
                  const model::ModelCoefficients& coeffs,
                  std::span<model::Prediction> out) {
  if (sizes.size() != out.size()) {
    throw DomainError(fmt::format("output span has {} slots for {} sizes",
                                  out.size(), sizes.size()));
  }
  model::validate(coeffs);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const auto& s = sizes[i];
    if (!std::isfinite(s.width_mm) || !std::isfinite(s.height_mm) ||
        s.width_mm < 0.0 || s.height_mm < 0.0) {
      throw DomainError(fmt::format("size #{} ({} x {} mm) is invalid", i,
                                    s.width_mm, s.height_mm));
    }
  }
}

}  // namespace

void score_batch_serial(std::span<const model::PhysicalSize> sizes,
                        const model::ModelCoefficients& coeffs,
                        std::span<model::Prediction> out) {
  check_inputs(sizes, coeffs, out);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out[i] = model::success_rate(sizes[i], coeffs);
  }
}

void score_batch(std::span<const model::PhysicalSize> sizes,
                 const model::ModelCoefficients& coeffs,
                 std::span<model::Prediction> out) {
  check_inputs(sizes, coeffs, out);
  // Inputs are validated above, so nothing inside the region can throw.
  const auto n = static_cast<std::ptrdiff_t>(sizes.size());
#pragma omp parallel for schedule(static) if (n > 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = model::success_rate(sizes[i], coeffs);
  }
}

std::vector<model::Prediction> score_batch(
    std::span<const model::PhysicalSize> sizes,
    const model::ModelCoefficients& coeffs) {
  std::vector<model::Prediction> out(sizes.size());
  score_batch(sizes, coeffs, out);
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tappy::kernels
