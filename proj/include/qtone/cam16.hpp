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

#ifndef QTONE_CAM16_HPP
#define QTONE_CAM16_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "qtone/image.hpp"

namespace qtone {

// CIECAM16 machinery. Formulas and constants follow Li et al.,
// "Comprehensive color solutions: CAM16, CAT16, and CAM16-UCS",
// Color Res. Appl. 42(6), 2017, and CIE 248:2022.

/// CAT16 chromatic adaptation matrix (XYZ -> cone-like RGB).
Mat3 cat16_matrix();
Mat3 cat16_matrix_inverse();

enum class Surround { Average, Dim, Dark };

struct SurroundParams {
    double F;    // degree-of-adaptation factor
    double c;    // surround impact on lightness exponent
    double N_c;  // chromatic induction factor
};
SurroundParams surround_params(Surround s);

/// Viewing environment: reference white (normalized to Y = 100 when
/// conditions are derived), adapting luminance L_a in cd/m², relative
/// background luminance Y_b in (0, 100], and surround class.
struct ViewingConditions {
    Triple white = d65_white();
    double adapting_luminance = 60.0;
    double background_luminance = 20.0;
    Surround surround = Surround::Average;
};

/// Everything derivable from ViewingConditions alone. Immutable after
/// construction; safe to share across workers.
struct DerivedConditions {
    Triple white{};        // normalized so Y == 100
    double D = 0;          // degree of adaptation, clamped to [0, 1]
    Triple gain{};         // per-channel adaptation gains D_R, D_G, D_B
    double F_L = 0;        // luminance adaptation factor
    double n = 0, z = 0;   // induction quantities
    double N_bb = 0, N_cb = 0;
    double c = 0, N_c = 0, F = 0;
    Triple rgb_w{};        // CAT16 response of the white
    Triple rgb_aw{};       // post-adaptation responses of the white
    double A_w = 0;        // achromatic response of the white
};

DerivedConditions derive_conditions(const ViewingConditions& vc);

/// Post-adaptation compressive nonlinearity, sign-mirrored for negative
/// cone responses. Input is F_L * R_c / 100. Output lies in
/// [-399.9, 400.1] and is finite for every finite input.
double adapted_response(double x);
/// Inverse of adapted_response; |r - 0.1| is clamped just below 400.
double adapted_response_inverse(double r);

/// Per-pixel post-adaptation cone responses (3 per pixel, row-major).
struct AdaptedResponses {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    const double* pixel(std::size_t i) const { return data.data() + 3 * i; }
    double* pixel(std::size_t i) { return data.data() + 3 * i; }
};

/// CAT16 transform + adaptation gains + compressive nonlinearity.
/// xyz must be in the same relative scale as the conditions' white.
AdaptedResponses adapt_responses(const HdrImage& xyz, const DerivedConditions& dc,
                                 int workers = 1);

/// Brightness per pixel plus the responses it was computed from (reused by
/// the hue and colorfulness stages). negative_a counts pixels whose
/// achromatic response fell below zero and was treated as J = 0.
struct BrightnessMaps {
    std::vector<double> q;
    AdaptedResponses responses;
    std::size_t negative_a = 0;
};

BrightnessMaps brightness_forward(const HdrImage& xyz, const DerivedConditions& dc,
                                  int workers = 1);

/// Hue angle in degrees, wrapped to [0, 360). Pixels whose opponent signals
/// are zero (or negligible against the response magnitude) get h = 0.
std::vector<double> hue_forward(const AdaptedResponses& ar, int workers = 1);

/// Lightness from absolute brightness under the given conditions; the
/// algebraic inverse of the brightness formula.
std::vector<double> lightness_from_brightness(std::span<const double> q,
                                              const DerivedConditions& dc, int workers = 1);
double lightness_from_brightness_scalar(double q, const DerivedConditions& dc);
double brightness_from_lightness_scalar(double j, const DerivedConditions& dc);

/// Colorfulness built from the source image's adapted responses and hue but
/// re-based on the given (display) conditions and lightness. strict_scale
/// multiplies chroma by F_L instead of F_L^0.25 (kept for comparison
/// renders; the inverse model always assumes the F_L^0.25 scaling).
struct ColorfulnessMaps {
    std::vector<double> m;
    std::size_t t_fallback = 0;  // pixels where the chroma denominator was <= 0
};

ColorfulnessMaps colorfulness_forward(const AdaptedResponses& ar,
                                      std::span<const double> hue_deg,
                                      std::span<const double> lightness,
                                      const DerivedConditions& dc, bool strict_scale = false,
                                      int workers = 1);

/// Per-pixel appearance handed to the inverse model.
struct AppearanceImage {
    int width = 0;
    int height = 0;
    std::vector<double> lightness;    // J
    std::vector<double> colorfulness; // M
    std::vector<double> hue_deg;      // h in [0, 360)
};

/// Standard CAM16 inverse: appearance -> XYZ in the conditions' relative
/// scale (white maps to Y = 100). J == 0 maps to black.
HdrImage inverse_model(const AppearanceImage& app, const DerivedConditions& dc,
                       int workers = 1);

/// Single-sample forward model (own-lightness colorfulness, one condition
/// set) for conformance checks and small experiments.
struct Cam16Sample {
    double J = 0, Q = 0, C = 0, M = 0, h = 0;
};
Cam16Sample cam16_forward(const Triple& xyz, const DerivedConditions& dc);
Triple cam16_inverse(double j, double m, double h_deg, const DerivedConditions& dc);

}  // namespace qtone

#endif  // QTONE_CAM16_HPP
