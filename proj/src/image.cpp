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

#include "qtone/image.hpp"

#include <cmath>

#include "qtone/parallel.hpp"

namespace qtone {

Mat3 Mat3::identity() {
    Mat3 r;
    r.m = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    return r;
}

double Mat3::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 Mat3::inverse() const {
    double d = det();
    if (std::abs(d) <= 1e-12) throw Error("Mat3::inverse: matrix is singular");
    double inv = 1.0 / d;
    Mat3 r;
    r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * inv;
    r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
    r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
    r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * inv;
    r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
    r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
    r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * inv;
    r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
    r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
    return r;
}

Triple Mat3::apply(const Triple& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

Mat3 Mat3::operator*(const Mat3& rhs) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[i][j] = m[i][0] * rhs.m[0][j] + m[i][1] * rhs.m[1][j] + m[i][2] * rhs.m[2][j];
    return r;
}

Triple Mat3::row_sums() const {
    return {m[0][0] + m[0][1] + m[0][2], m[1][0] + m[1][1] + m[1][2],
            m[2][0] + m[2][1] + m[2][2]};
}

HdrImage HdrImage::make(int w, int h, ColorSpace space) {
    if (w < 1 || h < 1) throw Error("HdrImage: dimensions must be at least 1x1");
    HdrImage img;
    img.width = w;
    img.height = h;
    img.space = space;
    img.data.assign(static_cast<std::size_t>(w) * h * 3, 0.0);
    return img;
}

void HdrImage::validate() const {
    if (width < 1 || height < 1) throw Error("HdrImage: dimensions must be at least 1x1");
    if (data.size() != static_cast<std::size_t>(width) * height * 3)
        throw Error("HdrImage: buffer length does not match dimensions");
    for (double v : data) {
        if (!std::isfinite(v) || v < 0.0)
            throw Error("HdrImage: samples must be finite and non-negative");
    }
}

SdrImage SdrImage::make(int w, int h) {
    if (w < 1 || h < 1) throw Error("SdrImage: dimensions must be at least 1x1");
    SdrImage img;
    img.width = w;
    img.height = h;
    img.data.assign(static_cast<std::size_t>(w) * h * 3, 0);
    return img;
}

Mat3 srgb_to_xyz_matrix() {
    // See IEC 61966-2-1:1999, sRGB reference primaries and D65 white.
    Mat3 r;
    r.m = {{{0.4124, 0.3576, 0.1805},
            {0.2126, 0.7152, 0.0722},
            {0.0193, 0.1192, 0.9505}}};
    return r;
}

Triple d65_white() {
    Triple s = srgb_to_xyz_matrix().row_sums();
    return {s[0] * 100.0, s[1] * 100.0, s[2] * 100.0};
}

HdrImage rgb_to_xyz(const HdrImage& img, const Mat3& m, std::size_t* clamp_count, int workers) {
    if (img.space != ColorSpace::LinearRGB)
        throw Error("rgb_to_xyz: input must be tagged LinearRGB");
    HdrImage out = HdrImage::make(img.width, img.height, ColorSpace::XYZ);
    std::vector<std::size_t> clamped(static_cast<std::size_t>(img.height), 0);
    parallel_rows(img.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            std::size_t n = 0;
            for (int x = 0; x < img.width; ++x) {
                const double* p = img.pixel(x, y);
                Triple v = m.apply({p[0], p[1], p[2]});
                double* q = out.pixel(x, y);
                for (int c = 0; c < 3; ++c) {
                    if (v[c] < 0.0) {
                        v[c] = 0.0;
                        ++n;
                    }
                    q[c] = v[c];
                }
            }
            clamped[y] = n;
        }
    });
    if (clamp_count) {
        for (std::size_t n : clamped) *clamp_count += n;
    }
    return out;
}

}  // namespace qtone
