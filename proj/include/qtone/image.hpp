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

#ifndef QTONE_IMAGE_HPP
#define QTONE_IMAGE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtone {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Triple = std::array<double, 3>;

/// 3x3 color matrix, row-major.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity();

    double det() const;
    /// Inverse via adjugate; throws Error when |det| <= 1e-12.
    Mat3 inverse() const;
    Triple apply(const Triple& v) const;
    Mat3 operator*(const Mat3& rhs) const;

    /// Row sums, i.e. the image of (1,1,1).
    Triple row_sums() const;
};

enum class ColorSpace { LinearRGB, XYZ };

/// Floating-point tristimulus raster, row-major, 3 samples per pixel.
/// Samples are linear radiance: finite and >= 0.
struct HdrImage {
    int width = 0;
    int height = 0;
    ColorSpace space = ColorSpace::LinearRGB;
    std::vector<double> data;

    static HdrImage make(int w, int h, ColorSpace space);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    double* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const double* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }

    /// Checks dimensions, buffer length and sample finiteness/non-negativity.
    void validate() const;
};

/// 8-bit device RGB raster, row-major.
struct SdrImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    static SdrImage make(int w, int h);
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* pixel(int x, int y) { return data.data() + 3 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

/// Linear sRGB -> XYZ matrix, IEC 61966-2-1 (D65). The middle row sums to 1
/// so (1,1,1) maps to relative luminance 1.
Mat3 srgb_to_xyz_matrix();

/// Media white of the sRGB matrix scaled to Y = 100 (D65).
Triple d65_white();

/// Per-pixel matrix product. Negative products are clamped to zero (radiance
/// cannot be negative); the number of clamped samples is added to
/// *clamp_count when given.
HdrImage rgb_to_xyz(const HdrImage& img, const Mat3& m = srgb_to_xyz_matrix(),
                    std::size_t* clamp_count = nullptr, int workers = 1);

}  // namespace qtone

#endif  // QTONE_IMAGE_HPP
