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

#include <span>
#include <vector>

#include "tappy/model.hpp"

// Batch scoring kernels. score_batch_serial is the reference the OpenMP
// kernel is checked against; both write out[i] from sizes[i] only, so the
// result is independent of thread count and scheduling.

namespace tappy::kernels {

// Throws DomainError (before any output is written) when a size or the
// coefficients are invalid, or when the spans differ in length.
void score_batch_serial(std::span<const model::PhysicalSize> sizes,
                        const model::ModelCoefficients& coeffs,
                        std::span<model::Prediction> out);

void score_batch(std::span<const model::PhysicalSize> sizes,
                 const model::ModelCoefficients& coeffs,
                 std::span<model::Prediction> out);

std::vector<model::Prediction> score_batch(
    std::span<const model::PhysicalSize> sizes,
    const model::ModelCoefficients& coeffs = {});

// Threads the parallel kernel will use (1 without OpenMP).
int max_threads();

}  // namespace tappy::kernels
