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

#ifndef QTONE_TONEMAP_HPP
#define QTONE_TONEMAP_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtone/bilateral.hpp"
#include "qtone/cam16.hpp"
#include "qtone/image.hpp"

namespace qtone {

enum class KeyConvention {
    Reinhard,   // exposure-invariant numerator 2 log2 G - log2 Ymin - log2 Ymax
    AsPrinted,  // numerator 2 log2 G - C_L (not exposure-invariant)
};

/// Tone-curve parameters. gamma empty means "estimate from the image key".
struct ToneParams {
    std::optional<double> gamma;
    double base_scale = 1.0;       // scaling factor A of the base compression
    double beta = 1.1;             // detail exponent
    double key_slope = 0.6781;     // gamma = key_slope * k + key_intercept
    double key_intercept = 0.3128;
    double delta = 1e-6;           // log-mean stabilizer
    double glare_fraction = 0.01;  // clipped luminance fraction, [0, 0.1]
    KeyConvention key_convention = KeyConvention::Reinhard;
    bool percentile_extrema = true;  // Y_min/Y_max from the 1st/99th percentiles

    void validate() const;
};

/// Key statistics of a luminance map.
struct KeyStats {
    double gmean = 0;       // geometric mean G_L
    double log2_gmean = 0;  // log2(G_L), carried to keep the key arithmetic exact
    double y_min = 0;
    double y_max = 0;
    double contrast = 0;    // C_L = log2 y_max - log2 y_min
    double key = 0;         // k
};

/// delta >= 0 is accepted at this level (the pipeline default stays positive);
/// the floored minimum must still be positive.
KeyStats image_key(std::span<const double> y, double delta,
                   KeyConvention convention = KeyConvention::Reinhard,
                   bool percentile_extrema = true);

/// Linear key-to-gamma regression, clamped to (0, 2].
double estimate_gamma(double key, double slope = 0.6781, double intercept = 0.3128);

/// Gamma compression of the linearized base layer: I_c = A * I_b^gamma.
std::vector<double> compress_base(std::span<const double> base_linear, double gamma,
                                  double scale_a = 1.0, int workers = 1);

/// Signed log-domain detail remap: D_max * (|D|/D_max)^beta * sign(D).
std::vector<double> enhance_detail(std::span<const double> detail_log, double beta,
                                   int workers = 1);

/// Q_c = Q_max * I_c * 10^D_E.
std::vector<double> recombine(std::span<const double> compressed_base,
                              std::span<const double> detail_log, double q_max,
                              int workers = 1);

/// Clips the top `fraction` of luminance (chromaticity preserved) and
/// rescales so max Y == 100 exactly.
HdrImage simulate_glare(const HdrImage& xyz, double fraction, std::size_t* clipped = nullptr,
                        int workers = 1);

struct GogChannel {
    double gain = 1.0;
    double offset = 0.0;
    double gamma = 2.2;
};

/// Output device description: primaries, peak luminance and transfer curves.
struct DisplayModel {
    enum class Mode { Srgb, Gog };
    Mode mode = Mode::Srgb;
    Mat3 rgb_to_xyz = srgb_to_xyz_matrix();  // device RGB -> XYZ (relative, white Y = 1)
    double peak_luminance = 560.0;           // cd/m²
    GogChannel gog[3];

    void validate() const;
};

/// sRGB opto-electronic transfer function (IEC 61966-2-1).
double srgb_encode(double linear);
double srgb_decode(double encoded);

/// XYZ (display-relative, white Y == 100) to quantized 8-bit device RGB.
/// Out-of-range channels are clamped and counted per pixel.
SdrImage encode_display(const HdrImage& xyz, const DisplayModel& dm,
                        std::size_t* out_of_gamut = nullptr, int workers = 1);

/// Everything the pipeline needs beyond the input image.
struct PipelineConfig {
    ToneParams tone;

    /// HDR-side viewing conditions. When unset: D65 white anchored at the
    /// image's 99th-percentile luminance, Y_b = 20, average surround.
    std::optional<ViewingConditions> hdr_conditions;
    double hdr_background_luminance = 20.0;  // Y_bH for the derived default

    /// Display-side conditions and device.
    ViewingConditions display_conditions;
    DisplayModel display;

    /// cd/m² per input radiance unit (inputs are treated as relative).
    double luminance_scale = 1.0;

    double sigma_s_fraction = 0.02;
    std::optional<double> sigma_s_pixels;
    double sigma_r = 0.35;
    bool fast_bilateral = false;
    bool strict_colorfulness_scale = false;

    int workers = 1;

    PipelineConfig();
};

struct StageTiming {
    std::string stage;
    double milliseconds = 0;
};

struct RunReport {
    int width = 0, height = 0;
    KeyStats key;
    double gamma = 0;
    bool gamma_auto = true;
    double beta = 0;
    double sigma_s = 0, sigma_r = 0;
    double hdr_white_luminance = 0;  // L_wH anchored at the luminance percentile
    double hdr_adapting_luminance = 0;
    std::size_t clamped_negative_xyz = 0;
    std::size_t negative_achromatic = 0;
    std::size_t achromatic_fallback = 0;
    std::size_t glare_clipped = 0;
    std::size_t out_of_gamut = 0;
    std::vector<StageTiming> timings;
    double total_ms = 0;
};

struct PipelineResult {
    SdrImage sdr;
    RunReport report;
};

/// Runs the full pipeline: color conversion, viewing-condition derivation,
/// brightness, base/detail decomposition, key-driven compression, detail
/// enhancement, appearance reconstruction, inverse model, glare and display
/// encoding. Any stage failure is rethrown with the stage name attached.
PipelineResult tonemap_pipeline(const HdrImage& input, const PipelineConfig& cfg);

/// Flat `key = value` serialization of a report (stable field order).
std::string report_to_text(const RunReport& report);
std::string report_csv_header();
std::string report_csv_row(const std::string& input_name, const RunReport& report);

}  // namespace qtone

#endif  // QTONE_TONEMAP_HPP
