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

#include "qtone/tonemap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qtone/parallel.hpp"

namespace qtone {

namespace {

/// Nearest-rank order statistic: smallest value whose rank covers fraction p.
double quantile_nearest_rank(std::vector<double>& scratch, double p) {
    if (scratch.empty()) throw Error("quantile of an empty map");
    double rank = std::ceil(p * static_cast<double>(scratch.size()));
    std::size_t idx = rank <= 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
    idx = std::min(idx, scratch.size() - 1);
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(idx),
                     scratch.end());
    return scratch[idx];
}

/// Compensated (Kahan) sum in index order; deterministic and accurate for
/// megapixel maps.
double kahan_sum(std::span<const double> values) {
    double sum = 0.0, carry = 0.0;
    for (double v : values) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::vector<double> luminance_channel(const HdrImage& xyz) {
    std::vector<double> y(xyz.pixel_count());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = xyz.data[3 * i + 1];
    return y;
}

}  // namespace

void ToneParams::validate() const {
    if (gamma && (!(*gamma > 0.0) || *gamma > 2.0))
        throw Error("tone: gamma must lie in (0, 2]");
    if (!(beta >= 0.5) || beta > 2.0) throw Error("tone: beta must lie in [0.5, 2]");
    if (!(base_scale > 0.0)) throw Error("tone: base scale A must be positive");
    if (!(delta > 0.0)) throw Error("tone: delta must be positive");
    if (!(glare_fraction >= 0.0) || glare_fraction > 0.1)
        throw Error("tone: glare fraction must lie in [0, 0.1]");
}

KeyStats image_key(std::span<const double> y, double delta, KeyConvention convention,
                   bool percentile_extrema) {
    if (y.empty()) throw Error("image_key: empty luminance map");
    if (delta < 0.0) throw Error("image_key: delta must be non-negative");

    std::vector<double> logs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        double v = y[i];
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error("image_key: luminance must be finite and non-negative");
        logs[i] = std::log2(delta + v);
    }
    KeyStats ks;
    ks.log2_gmean = kahan_sum(logs) / static_cast<double>(y.size());
    ks.gmean = std::exp2(ks.log2_gmean);

    if (percentile_extrema) {
        std::vector<double> scratch(y.begin(), y.end());
        ks.y_min = quantile_nearest_rank(scratch, 0.01);
        ks.y_max = quantile_nearest_rank(scratch, 0.99);
    } else {
        auto [lo, hi] = std::minmax_element(y.begin(), y.end());
        ks.y_min = *lo;
        ks.y_max = *hi;
    }
    ks.y_min = std::max(ks.y_min, delta);
    ks.y_max = std::max(ks.y_max, delta);
    if (!(ks.y_min > 0.0))
        throw Error("image_key: luminance floor is zero (black pixels need delta > 0)");

    double l2min = std::log2(ks.y_min);
    double l2max = std::log2(ks.y_max);
    ks.contrast = l2max - l2min;
    if (ks.contrast <= 0.0) {
        ks.key = 0.18;  // constant image: neutral key
        return ks;
    }
    double numerator = convention == KeyConvention::Reinhard
                           ? 2.0 * ks.log2_gmean - l2min - l2max
                           : 2.0 * ks.log2_gmean - ks.contrast;
    ks.key = 0.18 * std::pow(4.0, numerator / ks.contrast);
    return ks;
}

double estimate_gamma(double key, double slope, double intercept) {
    double g = slope * key + intercept;
    return std::clamp(g, 1e-6, 2.0);
}

std::vector<double> compress_base(std::span<const double> base_linear, double gamma,
                                  double scale_a, int workers) {
    std::vector<double> out(base_linear.size());
    int rows = static_cast<int>(std::min<std::size_t>(base_linear.size(), 256));
    if (rows == 0) return out;
    parallel_rows(rows, workers, [&](int r0, int r1) {
        std::size_t lo = base_linear.size() * static_cast<std::size_t>(r0) / rows;
        std::size_t hi = base_linear.size() * static_cast<std::size_t>(r1) / rows;
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = scale_a * std::pow(base_linear[i], gamma);
    });
    return out;
}

std::vector<double> enhance_detail(std::span<const double> detail_log, double beta,
                                   int workers) {
    std::vector<double> out(detail_log.size());
    if (detail_log.empty()) return out;
    double d_max = 0.0;
    for (double d : detail_log) d_max = std::max(d_max, std::abs(d));
    if (d_max == 0.0) return out;  // flat detail layer

    int rows = static_cast<int>(std::min<std::size_t>(detail_log.size(), 256));
    parallel_rows(rows, workers, [&](int r0, int r1) {
        std::size_t lo = detail_log.size() * static_cast<std::size_t>(r0) / rows;
        std::size_t hi = detail_log.size() * static_cast<std::size_t>(r1) / rows;
        for (std::size_t i = lo; i < hi; ++i) {
            double d = detail_log[i];
            double v = d_max * std::pow(std::abs(d) / d_max, beta);
            out[i] = d < 0.0 ? -v : v;
        }
    });
    return out;
}

std::vector<double> recombine(std::span<const double> compressed_base,
                              std::span<const double> detail_log, double q_max, int workers) {
    if (compressed_base.size() != detail_log.size())
        throw Error("recombine: base and detail sizes disagree");
    if (!(q_max > 0.0)) throw Error("recombine: q_max must be positive");
    std::vector<double> out(compressed_base.size());
    if (out.empty()) return out;
    int rows = static_cast<int>(std::min<std::size_t>(out.size(), 256));
    parallel_rows(rows, workers, [&](int r0, int r1) {
        std::size_t lo = out.size() * static_cast<std::size_t>(r0) / rows;
        std::size_t hi = out.size() * static_cast<std::size_t>(r1) / rows;
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = q_max * compressed_base[i] * std::pow(10.0, detail_log[i]);
    });
    return out;
}

HdrImage simulate_glare(const HdrImage& xyz, double fraction, std::size_t* clipped,
                        int workers) {
    if (xyz.space != ColorSpace::XYZ) throw Error("simulate_glare: input must be XYZ");
    if (!(fraction >= 0.0) || fraction > 0.1)
        throw Error("simulate_glare: fraction must lie in [0, 0.1]");

    std::vector<double> scratch = luminance_channel(xyz);
    double q = quantile_nearest_rank(scratch, 1.0 - fraction);

    HdrImage out = xyz;
    if (!(q > 0.0)) return out;  // black image: nothing to normalize against

    double scale = 100.0 / q;
    std::vector<std::size_t> clips(static_cast<std::size_t>(xyz.height), 0);
    parallel_rows(xyz.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            std::size_t n = 0;
            for (int x = 0; x < xyz.width; ++x) {
                double* p = out.pixel(x, y);
                if (p[1] >= q) {
                    if (p[1] > q) ++n;
                    double f = 100.0 / p[1];
                    p[0] *= f;
                    p[2] *= f;
                    p[1] = 100.0;
                } else {
                    p[0] *= scale;
                    p[2] *= scale;
                    p[1] = std::min(p[1] * scale, 100.0);
                }
            }
            clips[y] = n;
        }
    });
    if (clipped) {
        for (std::size_t n : clips) *clipped += n;
    }
    return out;
}

void DisplayModel::validate() const {
    if (!(peak_luminance > 0.0)) throw Error("display: peak luminance must be positive");
    for (const GogChannel& g : gog) {
        if (!(g.gain > 0.0)) throw Error("display: GOG gain must be positive");
        if (!(g.gamma > 0.0)) throw Error("display: GOG gamma must be positive");
    }
    (void)rgb_to_xyz.inverse();  // throws when the primaries are singular
}

double srgb_encode(double linear) {
    if (linear <= 0.0031308) return 12.92 * linear;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double encoded) {
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

SdrImage encode_display(const HdrImage& xyz, const DisplayModel& dm, std::size_t* out_of_gamut,
                        int workers) {
    if (xyz.space != ColorSpace::XYZ) throw Error("encode_display: input must be XYZ");
    dm.validate();
    const Mat3 xyz_to_rgb = dm.rgb_to_xyz.inverse();

    SdrImage out = SdrImage::make(xyz.width, xyz.height);
    std::vector<std::size_t> oog(static_cast<std::size_t>(xyz.height), 0);
    constexpr double kGamutSlack = 1e-12;  // rounding noise is not a gamut violation
    parallel_rows(xyz.height, workers, [&](int r0, int r1) {
        for (int y = r0; y < r1; ++y) {
            std::size_t n = 0;
            for (int x = 0; x < xyz.width; ++x) {
                const double* p = xyz.pixel(x, y);
                Triple rgb = xyz_to_rgb.apply({p[0] / 100.0, p[1] / 100.0, p[2] / 100.0});
                std::uint8_t* q = out.pixel(x, y);
                for (int c = 0; c < 3; ++c) {
                    double v = rgb[c];
                    if (v < -kGamutSlack || v > 1.0 + kGamutSlack) ++n;
                    v = std::clamp(v, 0.0, 1.0);
                    double d;
                    if (dm.mode == DisplayModel::Mode::Srgb) {
                        d = srgb_encode(v);
                    } else {
                        const GogChannel& g = dm.gog[c];
                        d = (std::pow(v, 1.0 / g.gamma) - g.offset) / g.gain;
                    }
                    d = std::clamp(d, 0.0, 1.0);
                    q[c] = static_cast<std::uint8_t>(std::floor(d * 255.0 + 0.5));
                }
            }
            oog[y] = n;
        }
    });
    if (out_of_gamut) {
        for (std::size_t n : oog) *out_of_gamut += n;
    }
    return out;
}

PipelineConfig::PipelineConfig() {
    display_conditions.white = d65_white();
    display_conditions.background_luminance = 20.0;
    display_conditions.adapting_luminance =
        display.peak_luminance * display_conditions.background_luminance / 100.0;
    display_conditions.surround = Surround::Average;
}

namespace {

class StageClock {
public:
    explicit StageClock(RunReport& report) : report_(report) {}

    template <typename Fn>
    auto run(const char* name, Fn&& fn) -> decltype(fn()) {
        auto start = std::chrono::steady_clock::now();
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                fn();
                record(name, start);
            } else {
                auto result = fn();
                record(name, start);
                return result;
            }
        } catch (const Error& e) {
            throw Error(std::string("stage ") + name + ": " + e.what());
        }
    }

private:
    void record(const char* name,
                std::chrono::steady_clock::time_point start) {
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
        report_.timings.push_back({name, ms});
        report_.total_ms += ms;
    }

    RunReport& report_;
};

}  // namespace

PipelineResult tonemap_pipeline(const HdrImage& input, const PipelineConfig& cfg) {
    cfg.tone.validate();
    cfg.display.validate();
    if (!(cfg.luminance_scale > 0.0))
        throw Error("pipeline: luminance scale must be positive");
    input.validate();

    PipelineResult result;
    RunReport& report = result.report;
    report.width = input.width;
    report.height = input.height;
    report.beta = cfg.tone.beta;
    StageClock clock(report);
    int workers = std::max(1, cfg.workers);

    // Color conversion (sRGB matrix unless the input is already XYZ).
    HdrImage xyz = clock.run("convert-xyz", [&] {
        if (input.space == ColorSpace::XYZ) return input;
        return rgb_to_xyz(input, srgb_to_xyz_matrix(), &report.clamped_negative_xyz, workers);
    });

    // Viewing conditions: the HDR white is anchored at the 99th-percentile
    // luminance; the image is rescaled so that anchor sits at Y = 100.
    struct Conditions {
        DerivedConditions hdr, display;
        double anchor;
    };
    Conditions cond = clock.run("conditions", [&] {
        std::vector<double> scratch = luminance_channel(xyz);
        double anchor = quantile_nearest_rank(scratch, 0.99);
        if (!(anchor > 0.0)) anchor = *std::max_element(scratch.begin(), scratch.end());
        if (!(anchor > 0.0))
            throw Error("image carries no luminance (all pixels are black)");

        ViewingConditions hdr_vc;
        if (cfg.hdr_conditions) {
            hdr_vc = *cfg.hdr_conditions;
        } else {
            hdr_vc.white = d65_white();
            hdr_vc.background_luminance = cfg.hdr_background_luminance;
            hdr_vc.adapting_luminance = cfg.luminance_scale * anchor *
                                        cfg.hdr_background_luminance / 100.0;
            hdr_vc.surround = Surround::Average;
        }
        report.hdr_white_luminance = cfg.luminance_scale * anchor;
        report.hdr_adapting_luminance = hdr_vc.adapting_luminance;
        return Conditions{derive_conditions(hdr_vc), derive_conditions(cfg.display_conditions),
                          anchor};
    });

    HdrImage xyz_rel = clock.run("rescale", [&] {
        HdrImage rel = xyz;
        double s = 100.0 / cond.anchor;
        parallel_rows(rel.height, workers, [&](int r0, int r1) {
            std::size_t lo = static_cast<std::size_t>(r0) * rel.width * 3;
            std::size_t hi = static_cast<std::size_t>(r1) * rel.width * 3;
            for (std::size_t i = lo; i < hi; ++i) rel.data[i] *= s;
        });
        return rel;
    });

    BrightnessMaps bright = clock.run("brightness", [&] {
        auto bm = brightness_forward(xyz_rel, cond.hdr, workers);
        report.negative_achromatic = bm.negative_a;
        return bm;
    });

    BrightnessDecomposition decomp = clock.run("decompose", [&] {
        BilateralParams bp;
        bp.sigma_s = cfg.sigma_s_pixels
                         ? *cfg.sigma_s_pixels
                         : default_sigma_s(input.width, input.height, cfg.sigma_s_fraction);
        bp.sigma_r = cfg.sigma_r;
        bp.workers = workers;
        report.sigma_s = bp.sigma_s;
        report.sigma_r = bp.sigma_r;
        return cfg.fast_bilateral ? decompose_fast(bright.q, input.width, input.height, bp)
                                  : decompose(bright.q, input.width, input.height, bp);
    });

    double gamma = clock.run("key", [&] {
        std::vector<double> y = luminance_channel(xyz);
        if (cfg.luminance_scale != 1.0)
            for (double& v : y) v *= cfg.luminance_scale;
        report.key = image_key(y, cfg.tone.delta, cfg.tone.key_convention,
                               cfg.tone.percentile_extrema);
        report.gamma_auto = !cfg.tone.gamma.has_value();
        double g = cfg.tone.gamma ? *cfg.tone.gamma
                                  : estimate_gamma(report.key.key, cfg.tone.key_slope,
                                                   cfg.tone.key_intercept);
        report.gamma = g;
        return g;
    });

    std::vector<double> compressed = clock.run("compress", [&] {
        std::vector<double> base_linear(decomp.base.size());
        for (std::size_t i = 0; i < base_linear.size(); ++i)
            base_linear[i] = std::pow(10.0, decomp.base[i]);
        return compress_base(base_linear, gamma, cfg.tone.base_scale, workers);
    });

    std::vector<double> detail = clock.run(
        "detail", [&] { return enhance_detail(decomp.detail, cfg.tone.beta, workers); });

    std::vector<double> q_c = clock.run(
        "recombine", [&] { return recombine(compressed, detail, decomp.q_max, workers); });

    std::vector<double> hue =
        clock.run("hue", [&] { return hue_forward(bright.responses, workers); });

    std::vector<double> j_c = clock.run(
        "lightness", [&] { return lightness_from_brightness(q_c, cond.display, workers); });

    std::vector<double> m_c = clock.run("colorfulness", [&] {
        auto cm = colorfulness_forward(bright.responses, hue, j_c, cond.display,
                                       cfg.strict_colorfulness_scale, workers);
        report.achromatic_fallback = cm.t_fallback;
        return std::move(cm.m);
    });

    HdrImage xyz_display = clock.run("inverse", [&] {
        AppearanceImage app;
        app.width = input.width;
        app.height = input.height;
        app.lightness = std::move(j_c);
        app.colorfulness = std::move(m_c);
        app.hue_deg = std::move(hue);
        return inverse_model(app, cond.display, workers);
    });

    HdrImage xyz_glare = clock.run("glare", [&] {
        return simulate_glare(xyz_display, cfg.tone.glare_fraction, &report.glare_clipped,
                              workers);
    });

    result.sdr = clock.run("encode", [&] {
        return encode_display(xyz_glare, cfg.display, &report.out_of_gamut, workers);
    });
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string report_to_text(const RunReport& r) {
    std::ostringstream out;
    out << "width=" << r.width << '\n';
    out << "height=" << r.height << '\n';
    out << "key=" << fmt(r.key.key) << '\n';
    out << "gamma=" << fmt(r.gamma) << '\n';
    out << "gamma_source=" << (r.gamma_auto ? "auto" : "override") << '\n';
    out << "beta=" << fmt(r.beta) << '\n';
    out << "g_l=" << fmt(r.key.gmean) << '\n';
    out << "c_l=" << fmt(r.key.contrast) << '\n';
    out << "y_min=" << fmt(r.key.y_min) << '\n';
    out << "y_max=" << fmt(r.key.y_max) << '\n';
    out << "sigma_s=" << fmt(r.sigma_s) << '\n';
    out << "sigma_r=" << fmt(r.sigma_r) << '\n';
    out << "hdr_white_luminance=" << fmt(r.hdr_white_luminance) << '\n';
    out << "hdr_adapting_luminance=" << fmt(r.hdr_adapting_luminance) << '\n';
    out << "clamped_negative_xyz=" << r.clamped_negative_xyz << '\n';
    out << "negative_achromatic=" << r.negative_achromatic << '\n';
    out << "achromatic_fallback=" << r.achromatic_fallback << '\n';
    out << "glare_clipped=" << r.glare_clipped << '\n';
    out << "out_of_gamut=" << r.out_of_gamut << '\n';
    for (const StageTiming& t : r.timings)
        out << "time_" << t.stage << "_ms=" << fmt(t.milliseconds) << '\n';
    out << "time_total_ms=" << fmt(r.total_ms) << '\n';
    return out.str();
}

std::string report_csv_header() {
    return "input,width,height,key,gamma,gamma_source,beta,g_l,c_l,y_min,y_max,"
           "clamped_negative_xyz,negative_achromatic,achromatic_fallback,glare_clipped,"
           "out_of_gamut,total_ms";
}

std::string report_csv_row(const std::string& input_name, const RunReport& r) {
    std::ostringstream out;
    out << input_name << ',' << r.width << ',' << r.height << ',' << fmt(r.key.key) << ','
        << fmt(r.gamma) << ',' << (r.gamma_auto ? "auto" : "override") << ',' << fmt(r.beta)
        << ',' << fmt(r.key.gmean) << ',' << fmt(r.key.contrast) << ',' << fmt(r.key.y_min)
        << ',' << fmt(r.key.y_max) << ',' << r.clamped_negative_xyz << ','
        << r.negative_achromatic << ',' << r.achromatic_fallback << ',' << r.glare_clipped
        << ',' << r.out_of_gamut << ',' << fmt(r.total_ms);
    return out.str();
}

}  // namespace qtone
