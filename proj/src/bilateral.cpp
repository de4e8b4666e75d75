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

#include "qtone/bilateral.hpp"

#include <algorithm>
#include <cmath>

#include "qtone/parallel.hpp"

namespace qtone {

namespace {

constexpr double kFloorFraction = 1e-6;  // zero-luminance floor relative to Q_max

struct LogMap {
    double q_max;
    std::vector<double> values;
};

LogMap to_log_domain(std::span<const double> q, int width, int height) {
    if (width < 1 || height < 1) throw Error("decompose: zero-area image");
    std::size_t n = static_cast<std::size_t>(width) * height;
    if (q.size() != n) throw Error("decompose: map size does not match dimensions");

    double q_max = 0.0;
    for (double v : q) {
        if (std::isnan(v)) throw Error("decompose: map contains NaN");
        q_max = std::max(q_max, v);
    }
    if (!(q_max > 0.0) || !std::isfinite(q_max))
        throw Error("decompose: maximum brightness must be positive and finite");

    double floor = kFloorFraction * q_max;
    LogMap out;
    out.q_max = q_max;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.values[i] = std::log10(std::max(q[i], floor) / q_max);
    return out;
}

BilateralParams resolve(const BilateralParams& params, int width, int height) {
    BilateralParams p = params;
    if (p.sigma_s <= 0.0) p.sigma_s = default_sigma_s(width, height);
    if (!(p.sigma_r > 0.0)) throw Error("decompose: sigma_r must be positive");
    if (!(p.sigma_s > 0.0)) throw Error("decompose: sigma_s must be positive");
    return p;
}

}  // namespace

double default_sigma_s(int width, int height, double fraction) {
    return fraction * std::max(width, height);
}

BrightnessDecomposition decompose(std::span<const double> q, int width, int height,
                                  const BilateralParams& params) {
    BilateralParams p = resolve(params, width, height);
    LogMap lm = to_log_domain(q, width, height);

    BrightnessDecomposition out;
    out.width = width;
    out.height = height;
    out.q_max = lm.q_max;
    out.sigma_s = p.sigma_s;
    out.sigma_r = p.sigma_r;
    out.log_q = std::move(lm.values);
    out.base.resize(out.log_q.size());
    out.detail.resize(out.log_q.size());

    int radius = static_cast<int>(std::ceil(3.0 * p.sigma_s));
    double inv2ss = 1.0 / (2.0 * p.sigma_s * p.sigma_s);
    double inv2sr = 1.0 / (2.0 * p.sigma_r * p.sigma_r);

    // Spatial weights depend only on the offset; precompute one row of them.
    std::vector<double> spatial(static_cast<std::size_t>(radius) + 1);
    for (int d = 0; d <= radius; ++d) spatial[d] = std::exp(-static_cast<double>(d) * d * inv2ss);

    const std::vector<double>& v = out.log_q;
    parallel_rows(height, p.workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            for (int x = 0; x < width; ++x) {
                std::size_t s = static_cast<std::size_t>(y) * width + x;
                double center = v[s];
                double num = 0.0, den = 0.0;
                int y0 = std::max(0, y - radius), y1 = std::min(height - 1, y + radius);
                int x0 = std::max(0, x - radius), x1 = std::min(width - 1, x + radius);
                for (int py = y0; py <= y1; ++py) {
                    double wy = spatial[std::abs(py - y)];
                    const double* row = v.data() + static_cast<std::size_t>(py) * width;
                    for (int px = x0; px <= x1; ++px) {
                        double value = row[px];
                        double dv = value - center;
                        double w = wy * spatial[std::abs(px - x)] *
                                   std::exp(-dv * dv * inv2sr);
                        num += w * value;
                        den += w;
                    }
                }
                out.base[s] = num / den;  // den >= 1: the center always contributes
                out.detail[s] = center - out.base[s];
            }
        }
    });
    return out;
}

namespace {

/// Separable Gaussian blur along one axis of the grid. The blur variance is
/// 2/3 cell^2 so that together with the trilinear splat and slice (1/6 each)
/// the effective kernel matches the one-cell sigma of the exact filter.
/// Zero padding; the normalization cancels when num/den is sliced.
void blur_axis(std::vector<double>& grid, int nx, int ny, int nz, int axis) {
    static const double k[5] = {std::exp(-3.0), std::exp(-0.75), 1.0, std::exp(-0.75),
                                std::exp(-3.0)};
    std::vector<double> tmp(grid.size());
    auto at = [&](int x, int y, int z) -> std::size_t {
        return (static_cast<std::size_t>(z) * ny + y) * nx + x;
    };
    int dims[3] = {nx, ny, nz};
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                double acc = 0.0, wacc = 0.0;
                int c[3] = {x, y, z};
                for (int d = -2; d <= 2; ++d) {
                    int cc = c[axis] + d;
                    if (cc < 0 || cc >= dims[axis]) continue;
                    int p[3] = {x, y, z};
                    p[axis] = cc;
                    acc += k[d + 2] * grid[at(p[0], p[1], p[2])];
                    wacc += k[d + 2];
                }
                tmp[at(x, y, z)] = acc / wacc;
            }
    grid.swap(tmp);
}

}  // namespace

BrightnessDecomposition decompose_fast(std::span<const double> q, int width, int height,
                                       const BilateralParams& params) {
    BilateralParams p = resolve(params, width, height);
    LogMap lm = to_log_domain(q, width, height);

    BrightnessDecomposition out;
    out.width = width;
    out.height = height;
    out.q_max = lm.q_max;
    out.sigma_s = p.sigma_s;
    out.sigma_r = p.sigma_r;
    out.log_q = std::move(lm.values);
    out.base.resize(out.log_q.size());
    out.detail.resize(out.log_q.size());

    const std::vector<double>& v = out.log_q;
    double vmin = *std::min_element(v.begin(), v.end());
    double vmax = *std::max_element(v.begin(), v.end());

    // Paris-Durand sampling: one grid cell per sigma in each dimension,
    // padded so the blur and the trilinear slice never leave the grid.
    constexpr int kPad = 2;
    double ss = p.sigma_s, sr = p.sigma_r;
    int nx = static_cast<int>((width - 1) / ss) + 1 + 2 * kPad;
    int ny = static_cast<int>((height - 1) / ss) + 1 + 2 * kPad;
    int nz = static_cast<int>((vmax - vmin) / sr) + 1 + 2 * kPad;

    std::vector<double> num(static_cast<std::size_t>(nx) * ny * nz, 0.0);
    std::vector<double> den(num.size(), 0.0);
    auto at = [&](int x, int y, int z) -> std::size_t {
        return (static_cast<std::size_t>(z) * ny + y) * nx + x;
    };

    // Trilinear splat (and later slice) at the same continuous coordinates.
    // Accumulation is a scatter; keep it single-threaded in pixel order so
    // results do not depend on the worker count.
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            std::size_t s = static_cast<std::size_t>(y) * width + x;
            double fx = x / ss + kPad;
            double fy = y / ss + kPad;
            double fz = (v[s] - vmin) / sr + kPad;
            int ix = static_cast<int>(fx), iy = static_cast<int>(fy),
                iz = static_cast<int>(fz);
            double tx = fx - ix, ty = fy - iy, tz = fz - iz;
            for (int dz = 0; dz < 2; ++dz)
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty) *
                                   (dz ? tz : 1.0 - tz);
                        std::size_t g = at(ix + dx, iy + dy, iz + dz);
                        num[g] += w * v[s];
                        den[g] += w;
                    }
        }

    for (int axis = 0; axis < 3; ++axis) {
        blur_axis(num, nx, ny, nz, axis);
        blur_axis(den, nx, ny, nz, axis);
    }

    parallel_rows(height, p.workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            for (int x = 0; x < width; ++x) {
                std::size_t s = static_cast<std::size_t>(y) * width + x;
                double fx = x / ss + kPad;
                double fy = y / ss + kPad;
                double fz = (v[s] - vmin) / sr + kPad;
                int ix = static_cast<int>(fx), iy = static_cast<int>(fy),
                    iz = static_cast<int>(fz);
                ix = std::min(ix, nx - 2);
                iy = std::min(iy, ny - 2);
                iz = std::min(iz, nz - 2);
                double tx = fx - ix, ty = fy - iy, tz = fz - iz;
                double n_acc = 0.0, d_acc = 0.0;
                for (int dz = 0; dz < 2; ++dz)
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            double w = (dx ? tx : 1.0 - tx) * (dy ? ty : 1.0 - ty) *
                                       (dz ? tz : 1.0 - tz);
                            std::size_t g = at(ix + dx, iy + dy, iz + dz);
                            n_acc += w * num[g];
                            d_acc += w * den[g];
                        }
                out.base[s] = d_acc > 1e-12 ? n_acc / d_acc : v[s];
                out.detail[s] = v[s] - out.base[s];
            }
        }
    });
    return out;
}

}  // namespace qtone
