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

#include "qtone/cam16.hpp"

#include <cmath>

#include "qtone/parallel.hpp"

namespace qtone {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg = 180.0 / kPi;

// Opponent signals below this fraction of the response magnitude are treated
// as achromatic so that neutral pixels get a stable hue of 0.
constexpr double kAchromaticEps = 1e-13;

double wrap_degrees(double h) {
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    return h;
}

double eccentricity(double h_rad) { return 0.25 * (std::cos(h_rad + 2.0) + 3.8); }

struct Opponent {
    double a, b;
};

Opponent opponent_signals(const double* resp) {
    return {resp[0] - 12.0 * resp[1] / 11.0 + resp[2] / 11.0,
            (resp[0] + resp[1] - 2.0 * resp[2]) / 9.0};
}

double chroma_from_t(double t, double j, const DerivedConditions& dc) {
    return std::pow(t, 0.9) * std::sqrt(j / 100.0) *
           std::pow(1.64 - std::pow(0.29, dc.n), 0.73);
}

}  // namespace

Mat3 cat16_matrix() {
    Mat3 r;
    r.m = {{{0.401288, 0.650173, -0.051461},
            {-0.250268, 1.204414, 0.045854},
            {-0.002079, 0.048952, 0.953127}}};
    return r;
}

Mat3 cat16_matrix_inverse() {
    static const Mat3 inv = cat16_matrix().inverse();
    return inv;
}

SurroundParams surround_params(Surround s) {
    switch (s) {
        case Surround::Average: return {1.0, 0.69, 1.0};
        case Surround::Dim: return {0.9, 0.59, 0.9};
        case Surround::Dark: return {0.8, 0.525, 0.8};
    }
    throw Error("surround_params: unknown surround");
}

DerivedConditions derive_conditions(const ViewingConditions& vc) {
    if (!(vc.adapting_luminance > 0.0) || !std::isfinite(vc.adapting_luminance))
        throw Error("derive_conditions: adapting luminance must be positive");
    if (!(vc.white[1] > 0.0)) throw Error("derive_conditions: white must have positive Y");

    DerivedConditions dc;
    SurroundParams sp = surround_params(vc.surround);
    dc.F = sp.F;
    dc.c = sp.c;
    dc.N_c = sp.N_c;

    double norm = 100.0 / vc.white[1];
    dc.white = {vc.white[0] * norm, vc.white[1] * norm, vc.white[2] * norm};

    double la = vc.adapting_luminance;
    dc.D = dc.F * (1.0 - (1.0 / 3.6) * std::exp((-la - 42.0) / 92.0));
    dc.D = std::clamp(dc.D, 0.0, 1.0);

    dc.rgb_w = cat16_matrix().apply(dc.white);
    for (int i = 0; i < 3; ++i) {
        if (!(dc.rgb_w[i] > 0.0))
            throw Error("derive_conditions: white is outside the adaptable gamut");
        dc.gain[i] = dc.D * 100.0 / dc.rgb_w[i] + 1.0 - dc.D;
    }

    double k = 1.0 / (5.0 * la + 1.0);
    double k4 = k * k * k * k;
    dc.F_L = 0.2 * k4 * (5.0 * la) +
             0.1 * (1.0 - k4) * (1.0 - k4) * std::cbrt(5.0 * la);

    dc.n = vc.background_luminance / 100.0;  // white Y is 100 after normalization
    if (!(dc.n > 0.0) || dc.n > 1.0)
        throw Error("derive_conditions: background luminance must be in (0, 100]");
    dc.z = 1.48 + std::sqrt(dc.n);
    dc.N_bb = 0.725 * std::pow(1.0 / dc.n, 0.2);
    dc.N_cb = dc.N_bb;

    for (int i = 0; i < 3; ++i)
        dc.rgb_aw[i] = adapted_response(dc.F_L * (dc.gain[i] * dc.rgb_w[i]) / 100.0);
    dc.A_w = (2.0 * dc.rgb_aw[0] + dc.rgb_aw[1] + 0.05 * dc.rgb_aw[2] - 0.305) * dc.N_bb;
    return dc;
}

double adapted_response(double x) {
    double t = std::pow(std::abs(x), 0.42);
    double r = 400.0 * t / (t + 27.13);
    return (x < 0.0 ? -r : r) + 0.1;
}

double adapted_response_inverse(double r) {
    double u = r - 0.1;
    double au = std::abs(u);
    // The forward response saturates at 400; clamp so the inverse stays finite.
    au = std::min(au, 400.0 - 1e-10);
    double x = std::pow(27.13 * au / (400.0 - au), 1.0 / 0.42);
    return u < 0.0 ? -x : x;
}

AdaptedResponses adapt_responses(const HdrImage& xyz, const DerivedConditions& dc, int workers) {
    if (xyz.space != ColorSpace::XYZ) throw Error("adapt_responses: input must be XYZ");
    AdaptedResponses out;
    out.width = xyz.width;
    out.height = xyz.height;
    out.data.resize(xyz.data.size());
    const Mat3 cat = cat16_matrix();
    parallel_rows(xyz.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            for (int x = 0; x < xyz.width; ++x) {
                const double* p = xyz.pixel(x, y);
                Triple rgb = cat.apply({p[0], p[1], p[2]});
                double* q = out.data.data() +
                            3 * (static_cast<std::size_t>(y) * xyz.width + x);
                for (int c = 0; c < 3; ++c)
                    q[c] = adapted_response(dc.F_L * (dc.gain[c] * rgb[c]) / 100.0);
            }
        }
    });
    return out;
}

BrightnessMaps brightness_forward(const HdrImage& xyz, const DerivedConditions& dc, int workers) {
    BrightnessMaps out;
    out.responses = adapt_responses(xyz, dc, workers);
    std::size_t n = out.responses.pixel_count();
    out.q.resize(n);
    std::vector<std::size_t> neg(static_cast<std::size_t>(xyz.height), 0);
    double q_scale = (4.0 / dc.c) * (dc.A_w + 4.0) * std::pow(dc.F_L, 0.25);
    double cz = dc.c * dc.z;
    parallel_rows(xyz.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            std::size_t negs = 0;
            for (int x = 0; x < xyz.width; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * xyz.width + x;
                const double* r = out.responses.pixel(i);
                double a = (2.0 * r[0] + r[1] + 0.05 * r[2] - 0.305) * dc.N_bb;
                double j;
                if (a < 0.0) {
                    j = 0.0;
                    ++negs;
                } else {
                    j = 100.0 * std::pow(a / dc.A_w, cz);
                }
                out.q[i] = q_scale * std::sqrt(j / 100.0);
            }
            neg[y] = negs;
        }
    });
    for (std::size_t v : neg) out.negative_a += v;
    return out;
}

std::vector<double> hue_forward(const AdaptedResponses& ar, int workers) {
    std::size_t n = ar.pixel_count();
    std::vector<double> h(n);
    parallel_rows(ar.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            for (int x = 0; x < ar.width; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * ar.width + x;
                const double* r = ar.pixel(i);
                Opponent o = opponent_signals(r);
                double mag = std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]);
                if (std::abs(o.a) <= kAchromaticEps * mag &&
                    std::abs(o.b) <= kAchromaticEps * mag) {
                    h[i] = 0.0;
                } else {
                    h[i] = wrap_degrees(std::atan2(o.b, o.a) * kDeg);
                }
            }
        }
    });
    return h;
}

double lightness_from_brightness_scalar(double q, const DerivedConditions& dc) {
    double r = dc.c * q / ((dc.A_w + 4.0) * std::pow(dc.F_L, 0.25));
    return 6.25 * r * r;
}

double brightness_from_lightness_scalar(double j, const DerivedConditions& dc) {
    return (4.0 / dc.c) * std::sqrt(j / 100.0) * (dc.A_w + 4.0) * std::pow(dc.F_L, 0.25);
}

std::vector<double> lightness_from_brightness(std::span<const double> q,
                                              const DerivedConditions& dc, int workers) {
    std::vector<double> j(q.size());
    if (q.empty()) return j;
    double denom = (dc.A_w + 4.0) * std::pow(dc.F_L, 0.25);
    int rows = static_cast<int>(std::min<std::size_t>(q.size(), 256));
    // Flat map; chunk by index ranges rather than image rows.
    parallel_rows(rows, workers, [&](int r0, int r1) {
        std::size_t lo = q.size() * static_cast<std::size_t>(r0) / rows;
        std::size_t hi = q.size() * static_cast<std::size_t>(r1) / rows;
        for (std::size_t i = lo; i < hi; ++i) {
            double r = dc.c * q[i] / denom;
            j[i] = 6.25 * r * r;
        }
    });
    return j;
}

ColorfulnessMaps colorfulness_forward(const AdaptedResponses& ar, std::span<const double> hue_deg,
                                      std::span<const double> lightness,
                                      const DerivedConditions& dc, bool strict_scale,
                                      int workers) {
    std::size_t n = ar.pixel_count();
    if (hue_deg.size() != n || lightness.size() != n)
        throw Error("colorfulness_forward: map sizes disagree");
    ColorfulnessMaps out;
    out.m.resize(n);
    std::vector<std::size_t> fallback(static_cast<std::size_t>(ar.height), 0);
    double m_scale = strict_scale ? dc.F_L : std::pow(dc.F_L, 0.25);
    double t_gain = (50000.0 / 13.0) * dc.N_c * dc.N_cb;
    parallel_rows(ar.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            std::size_t falls = 0;
            for (int x = 0; x < ar.width; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * ar.width + x;
                const double* r = ar.pixel(i);
                Opponent o = opponent_signals(r);
                double denom = r[0] + r[1] + 1.05 * r[2];
                double t;
                if (denom <= 0.0) {
                    t = 0.0;  // achromatic fallback for degenerate responses
                    ++falls;
                } else {
                    double et = eccentricity(hue_deg[i] / kDeg);
                    t = t_gain * et * std::hypot(o.a, o.b) / denom;
                }
                out.m[i] = chroma_from_t(t, lightness[i], dc) * m_scale;
            }
            fallback[y] = falls;
        }
    });
    for (std::size_t v : fallback) out.t_fallback += v;
    return out;
}

namespace {

/// Standard CAM16 inverse for one pixel under fixed conditions.
Triple inverse_pixel(double j, double m, double h_deg, const DerivedConditions& dc,
                     const Mat3& cat_inv) {
    if (!(j > 0.0)) return {0.0, 0.0, 0.0};

    double chroma = m / std::pow(dc.F_L, 0.25);
    double t = 0.0;
    if (chroma > 0.0) {
        double base = chroma / (std::sqrt(j / 100.0) *
                                std::pow(1.64 - std::pow(0.29, dc.n), 0.73));
        t = std::pow(base, 1.0 / 0.9);
    }

    double a_resp = dc.A_w * std::pow(j / 100.0, 1.0 / (dc.c * dc.z));
    double p2 = a_resp / dc.N_bb + 0.305;

    double a = 0.0, b = 0.0;
    if (t > 0.0) {
        double h_rad = h_deg / kDeg;
        double et = eccentricity(h_rad);
        double p1 = (50000.0 / 13.0) * dc.N_c * dc.N_cb * et / t;
        constexpr double p3 = 21.0 / 20.0;
        double sin_h = std::sin(h_rad);
        double cos_h = std::cos(h_rad);
        if (std::abs(sin_h) >= std::abs(cos_h)) {
            double p4 = p1 / sin_h;
            b = p2 * (2.0 + p3) * (460.0 / 1403.0) /
                (p4 + (2.0 + p3) * (220.0 / 1403.0) * (cos_h / sin_h) - 27.0 / 1403.0 +
                 p3 * (6300.0 / 1403.0));
            a = b * (cos_h / sin_h);
        } else {
            double p5 = p1 / cos_h;
            a = p2 * (2.0 + p3) * (460.0 / 1403.0) /
                (p5 + (2.0 + p3) * (220.0 / 1403.0) -
                 (27.0 / 1403.0 - p3 * (6300.0 / 1403.0)) * (sin_h / cos_h));
            b = a * (sin_h / cos_h);
        }
    }

    double ra = (460.0 * p2 + 451.0 * a + 288.0 * b) / 1403.0;
    double ga = (460.0 * p2 - 891.0 * a - 261.0 * b) / 1403.0;
    double ba = (460.0 * p2 - 220.0 * a - 6300.0 * b) / 1403.0;

    Triple rgb;
    rgb[0] = adapted_response_inverse(ra) * 100.0 / dc.F_L / dc.gain[0];
    rgb[1] = adapted_response_inverse(ga) * 100.0 / dc.F_L / dc.gain[1];
    rgb[2] = adapted_response_inverse(ba) * 100.0 / dc.F_L / dc.gain[2];
    return cat_inv.apply(rgb);
}

}  // namespace

HdrImage inverse_model(const AppearanceImage& app, const DerivedConditions& dc, int workers) {
    std::size_t n = static_cast<std::size_t>(app.width) * app.height;
    if (app.lightness.size() != n || app.colorfulness.size() != n || app.hue_deg.size() != n)
        throw Error("inverse_model: map sizes disagree");
    HdrImage out = HdrImage::make(app.width, app.height, ColorSpace::XYZ);
    const Mat3 cat_inv = cat16_matrix_inverse();
    parallel_rows(app.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            for (int x = 0; x < app.width; ++x) {
                std::size_t i = static_cast<std::size_t>(y) * app.width + x;
                Triple xyz = inverse_pixel(app.lightness[i], app.colorfulness[i],
                                           app.hue_deg[i], dc, cat_inv);
                double* p = out.pixel(x, y);
                p[0] = xyz[0];
                p[1] = xyz[1];
                p[2] = xyz[2];
            }
        }
    });
    return out;
}

Cam16Sample cam16_forward(const Triple& xyz, const DerivedConditions& dc) {
    HdrImage img = HdrImage::make(1, 1, ColorSpace::XYZ);
    img.data = {xyz[0], xyz[1], xyz[2]};
    BrightnessMaps bm = brightness_forward(img, dc);
    std::vector<double> h = hue_forward(bm.responses);
    std::vector<double> j = {lightness_from_brightness_scalar(bm.q[0], dc)};
    ColorfulnessMaps cm = colorfulness_forward(bm.responses, h, j, dc);
    Cam16Sample s;
    s.J = j[0];
    s.Q = bm.q[0];
    s.M = cm.m[0];
    s.C = cm.m[0] / std::pow(dc.F_L, 0.25);
    s.h = h[0];
    return s;
}

Triple cam16_inverse(double j, double m, double h_deg, const DerivedConditions& dc) {
    return inverse_pixel(j, m, h_deg, dc, cat16_matrix_inverse());
}

}  // namespace qtone
