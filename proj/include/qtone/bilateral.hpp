/*
 * Copyright 2026 The qtone Authors
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

#ifndef QTONE_BILATERAL_HPP
#define QTONE_BILATERAL_HPP

#include <span>
#include <vector>

#include "qtone/image.hpp"

namespace qtone {

/// Edge-preserving base/detail split of a brightness map in the log10
/// domain. The map is normalized by its maximum before the log, so
/// base + detail always reconstructs log10(max(Q, floor)/Q_max) exactly.
struct BrightnessDecomposition {
    int width = 0;
    int height = 0;
    double q_max = 0;
    double sigma_s = 0;
    double sigma_r = 0;
    std::vector<double> log_q;   // log10(Q / q_max), floored at 1e-6 * q_max
    std::vector<double> base;    // bilateral-filtered log_q
    std::vector<double> detail;  // log_q - base
};

struct BilateralParams {
    double sigma_s = 0;     // spatial std-dev, pixels; <= 0 selects the default
    double sigma_r = 0.35;  // range std-dev, log10 units
    int workers = 1;
};

/// Default spatial sigma: fraction of the larger image dimension.
double default_sigma_s(int width, int height, double fraction = 0.02);

/// Exact bilateral filter (direct sum over a square window truncated at
/// radius ceil(3 sigma_s); per-pixel kernel renormalization at boundaries).
BrightnessDecomposition decompose(std::span<const double> q, int width, int height,
                                  const BilateralParams& params);

/// Bilateral-grid approximation (space and range sampled at sigma, Gaussian
/// blur in grid space, trilinear slicing). The reconstruction identity is
/// preserved because detail is always log_q - base.
BrightnessDecomposition decompose_fast(std::span<const double> q, int width, int height,
                                       const BilateralParams& params);

}  // namespace qtone

#endif  // QTONE_BILATERAL_HPP
