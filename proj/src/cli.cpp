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

#include "qtone/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qtone/hdr_io.hpp"
#include "qtone/parallel.hpp"

namespace qtone::cli {

namespace fs = std::filesystem;

namespace {

double parse_double(const std::string& v, const std::string& what) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw UsageError("invalid number for " + what + ": " + v);
    }
}

bool parse_bool(const std::string& v, const std::string& what) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("invalid boolean for " + what + ": " + v);
}

Surround parse_surround(const std::string& v) {
    if (v == "average") return Surround::Average;
    if (v == "dim") return Surround::Dim;
    if (v == "dark") return Surround::Dark;
    throw UsageError("invalid surround (average|dim|dark): " + v);
}

KeyConvention parse_key_convention(const std::string& v) {
    if (v == "reinhard") return KeyConvention::Reinhard;
    if (v == "as-printed" || v == "as_printed") return KeyConvention::AsPrinted;
    throw UsageError("invalid key convention (reinhard|as-printed): " + v);
}

std::vector<double> parse_double_list(const std::string& v, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_double(item, what));
    }
    if (out.empty()) throw UsageError("empty value list for " + what);
    return out;
}

/// Rebuilds display adaptation from the device peak: L_a = L_w * Y_b / 100.
void refresh_display_adaptation(PipelineConfig& p) {
    p.display_conditions.adapting_luminance =
        p.display.peak_luminance * p.display_conditions.background_luminance / 100.0;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

bool recognized_hdr_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".hdr" || ext == ".pic" || ext == ".rgbe" || ext == ".pfm";
}

}  // namespace

void apply_config_file(const std::string& path, Config& cfg) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file: " + path);

    // Partial HDR-condition overrides are collected first so that setting
    // only the background keeps the automatic white anchoring.
    std::optional<double> hdr_la;
    std::optional<Triple> hdr_white;
    std::optional<Surround> hdr_surround;

    std::string line, section;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        std::string s = line;
        auto hash = s.find('#');
        if (hash != std::string::npos) s.erase(hash);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        std::size_t b = 0;
        while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
        s.erase(0, b);
        if (s.empty()) continue;
        if (s.front() == '[' && s.back() == ']') {
            section = s.substr(1, s.size() - 2);
            if (section != "tone" && section != "hdr" && section != "display")
                throw UsageError(path + ":" + std::to_string(lineno) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected `key = value`");
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
            key.pop_back();
        std::size_t vb = 0;
        while (vb < value.size() && std::isspace(static_cast<unsigned char>(value[vb]))) ++vb;
        value.erase(0, vb);
        if (key.empty() || value.empty())
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected `key = value`");

        PipelineConfig& p = cfg.pipeline;
        if (section == "tone") {
            if (key == "gamma")
                p.tone.gamma = parse_double(value, key);
            else if (key == "beta")
                p.tone.beta = parse_double(value, key);
            else if (key == "base_scale")
                p.tone.base_scale = parse_double(value, key);
            else if (key == "delta")
                p.tone.delta = parse_double(value, key);
            else if (key == "glare_fraction")
                p.tone.glare_fraction = parse_double(value, key);
            else if (key == "key_convention")
                p.tone.key_convention = parse_key_convention(value);
            else if (key == "percentile_extrema")
                p.tone.percentile_extrema = parse_bool(value, key);
            else if (key == "sigma_s_fraction")
                p.sigma_s_fraction = parse_double(value, key);
            else if (key == "sigma_s_pixels")
                p.sigma_s_pixels = parse_double(value, key);
            else if (key == "sigma_r")
                p.sigma_r = parse_double(value, key);
            else if (key == "fast_bilateral")
                p.fast_bilateral = parse_bool(value, key);
            else if (key == "strict_colorfulness_scale")
                p.strict_colorfulness_scale = parse_bool(value, key);
            else
                throw UsageError(path + ": unknown [tone] key: " + key);
        } else if (section == "hdr") {
            if (key == "background_luminance")
                p.hdr_background_luminance = parse_double(value, key);
            else if (key == "adapting_luminance")
                hdr_la = parse_double(value, key);
            else if (key == "surround")
                hdr_surround = parse_surround(value);
            else if (key == "white") {
                auto v = parse_double_list(value, key);
                if (v.size() != 3) throw UsageError(path + ": hdr white needs 3 numbers");
                hdr_white = Triple{v[0], v[1], v[2]};
            } else if (key == "luminance_scale")
                p.luminance_scale = parse_double(value, key);
            else
                throw UsageError(path + ": unknown [hdr] key: " + key);
        } else if (section == "display") {
            if (key == "peak_luminance") {
                p.display.peak_luminance = parse_double(value, key);
                refresh_display_adaptation(p);
            } else if (key == "background_luminance") {
                p.display_conditions.background_luminance = parse_double(value, key);
                refresh_display_adaptation(p);
            } else if (key == "surround")
                p.display_conditions.surround = parse_surround(value);
            else if (key == "mode") {
                if (value == "srgb")
                    p.display.mode = DisplayModel::Mode::Srgb;
                else if (value == "gog")
                    p.display.mode = DisplayModel::Mode::Gog;
                else
                    throw UsageError(path + ": invalid display mode (srgb|gog): " + value);
            } else if (key == "gog_gain" || key == "gog_offset" || key == "gog_gamma") {
                auto v = parse_double_list(value, key);
                if (v.size() != 1 && v.size() != 3)
                    throw UsageError(path + ": " + key + " needs 1 or 3 numbers");
                for (int c = 0; c < 3; ++c) {
                    double x = v[v.size() == 1 ? 0 : c];
                    if (key == "gog_gain")
                        p.display.gog[c].gain = x;
                    else if (key == "gog_offset")
                        p.display.gog[c].offset = x;
                    else
                        p.display.gog[c].gamma = x;
                }
            } else
                throw UsageError(path + ": unknown [display] key: " + key);
        } else {
            throw UsageError(path + ":" + std::to_string(lineno) +
                             ": key outside of a [section]");
        }
    }

    if (hdr_la || hdr_white || hdr_surround) {
        ViewingConditions vc;
        vc.white = hdr_white.value_or(d65_white());
        vc.background_luminance = cfg.pipeline.hdr_background_luminance;
        vc.surround = hdr_surround.value_or(Surround::Average);
        if (!hdr_la)
            throw UsageError(path +
                             ": overriding [hdr] white/surround requires adapting_luminance");
        vc.adapting_luminance = *hdr_la;
        cfg.pipeline.hdr_conditions = vc;
    }
}

Config parse_args(const std::vector<std::string>& args) {
    CLI::App app{"CIECAM16 brightness-domain HDR tone mapper"};
    app.name("tonemap");

    std::vector<std::string> inputs;
    std::string output;
    std::string config_path;
    std::optional<double> gamma, beta, display_peak, sigma_s_frac, sigma_r, glare,
        luminance_scale;
    std::string key_convention, display_mode, preset;
    std::vector<std::string> sweep_args;
    bool fast_bilateral = false, stats = false, csv = false, raw_extrema = false;
    int threads = 0;

    app.add_option("inputs", inputs, "HDR input files or directories (.hdr/.pic/.rgbe/.pfm)");
    app.add_option("-o,--output", output, "output PNG file (single input) or directory");
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--gamma", gamma, "brightness compression exponent (default: from key)");
    app.add_option("--beta", beta, "detail enhancement exponent (default 1.1)");
    app.add_option("--key-convention", key_convention, "reinhard|as-printed");
    app.add_option("--display-peak", display_peak, "display peak luminance, cd/m²");
    app.add_option("--display-mode", display_mode, "srgb|gog");
    app.add_option("--preset", preset, "named preset: paper-experiment");
    app.add_option("--sigma-s-frac", sigma_s_frac,
                   "bilateral spatial sigma as a fraction of max(w,h) (default 0.02)");
    app.add_option("--sigma-r", sigma_r, "bilateral range sigma, log10 units (default 0.35)");
    app.add_flag("--fast-bilateral", fast_bilateral, "use the bilateral-grid approximation");
    app.add_option("--glare", glare, "clipped luminance fraction (default 0.01)");
    app.add_option("--sweep", sweep_args,
                   "render a parameter sweep: --sweep {gamma|beta} v1,v2,...")
        ->expected(2);
    app.add_flag("--stats", stats, "write a key=value report next to each output");
    app.add_flag("--csv", csv, "print one CSV row per processed image");
    app.add_flag("--raw-extrema", raw_extrema,
                 "use raw min/max instead of 1st/99th percentiles for the key");
    app.add_option("--threads", threads, "worker threads (default: hardware)");
    app.add_option("--luminance-scale", luminance_scale,
                   "cd/m² per input radiance unit (default 1)");

    Config cfg;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        cfg.show_help = true;
        cfg.help_text = app.help();
        return cfg;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    // Defaults, then config file, then flags.
    if (config_path.empty()) {
        if (const char* env = std::getenv("TONEMAP_CONFIG")) config_path = env;
    }
    if (!config_path.empty()) apply_config_file(config_path, cfg);

    PipelineConfig& p = cfg.pipeline;
    if (preset == "paper-experiment") {
        // Experimental display: 560 cd/m² peak, 0.2 cd/m² background, average
        // surround, sRGB primaries.
        p.display.peak_luminance = 560.0;
        p.display_conditions.background_luminance = 100.0 * 0.2 / 560.0;
        p.display_conditions.surround = Surround::Average;
        refresh_display_adaptation(p);
    } else if (!preset.empty()) {
        throw UsageError("unknown preset: " + preset);
    }

    if (gamma) p.tone.gamma = *gamma;
    if (beta) p.tone.beta = *beta;
    if (!key_convention.empty()) p.tone.key_convention = parse_key_convention(key_convention);
    if (display_peak) {
        p.display.peak_luminance = *display_peak;
        refresh_display_adaptation(p);
    }
    if (!display_mode.empty()) {
        if (display_mode == "srgb")
            p.display.mode = DisplayModel::Mode::Srgb;
        else if (display_mode == "gog")
            p.display.mode = DisplayModel::Mode::Gog;
        else
            throw UsageError("invalid --display-mode (srgb|gog): " + display_mode);
    }
    if (sigma_s_frac) p.sigma_s_fraction = *sigma_s_frac;
    if (sigma_r) p.sigma_r = *sigma_r;
    if (fast_bilateral) p.fast_bilateral = true;
    if (glare) p.tone.glare_fraction = *glare;
    if (raw_extrema) p.tone.percentile_extrema = false;
    if (luminance_scale) p.luminance_scale = *luminance_scale;
    p.workers = threads > 0 ? threads : default_workers();

    if (!sweep_args.empty()) {
        SweepSpec sweep;
        sweep.param = sweep_args[0];
        if (sweep.param != "gamma" && sweep.param != "beta")
            throw UsageError("--sweep parameter must be gamma or beta");
        sweep.values = parse_double_list(sweep_args[1], "--sweep values");
        if (sweep.param == "gamma" && gamma)
            throw UsageError("--gamma conflicts with --sweep gamma");
        if (sweep.param == "beta" && beta)
            throw UsageError("--beta conflicts with --sweep beta");
        cfg.sweep = sweep;
    }

    cfg.emit_report = stats;
    cfg.csv = csv;
    cfg.inputs = inputs;
    if (!output.empty()) cfg.output = output;
    if (cfg.inputs.empty()) throw UsageError("no input files given");

    // Validate every override now, before any pipeline runs. Bad values are
    // invocation mistakes, so they surface as usage errors.
    try {
        ToneParams probe = p.tone;
        if (cfg.sweep) {
            for (double v : cfg.sweep->values) {
                if (cfg.sweep->param == "gamma")
                    probe.gamma = v;
                else
                    probe.beta = v;
                probe.validate();
            }
            probe = p.tone;
        }
        probe.validate();
        p.display.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (!(p.sigma_r > 0.0)) throw UsageError("--sigma-r must be positive");
    if (!(p.sigma_s_fraction > 0.0)) throw UsageError("--sigma-s-frac must be positive");
    if (!(p.luminance_scale > 0.0)) throw UsageError("--luminance-scale must be positive");
    return cfg;
}

std::string emit_stats(const RunReport& report, StatsFormat format,
                       const std::string& input_name) {
    if (format == StatsFormat::KeyValue) return report_to_text(report);
    return report_csv_header() + "\n" + report_csv_row(input_name, report) + "\n";
}

namespace {

struct Job {
    fs::path input;
    std::optional<double> sweep_value;
};

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& in : inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && recognized_hdr_extension(entry.path()))
                    found.push_back(entry.path());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

fs::path output_path(const Config& cfg, const fs::path& input, bool single_file,
                     std::optional<double> sweep_value) {
    std::string stem = input.stem().string();
    if (sweep_value) stem += "_" + cfg.sweep->param + format_value(*sweep_value);

    fs::path out(cfg.output);
    bool treat_as_file = single_file && !cfg.sweep && !fs::is_directory(out) &&
                         out.extension() == ".png";
    if (treat_as_file) return out;
    return out / (stem + ".png");
}

}  // namespace

int run_batch(const Config& cfg) {
    std::vector<fs::path> files = expand_inputs(cfg.inputs);
    if (files.empty()) throw UsageError("no recognized HDR inputs found");

    bool single_file = files.size() == 1;
    fs::path out_dir(cfg.output);
    bool need_dir = !single_file || cfg.sweep.has_value() ||
                    out_dir.extension() != ".png" || fs::is_directory(out_dir);
    if (need_dir && !out_dir.empty() && !fs::exists(out_dir))
        fs::create_directories(out_dir);

    std::vector<double> sweep_values = cfg.sweep ? cfg.sweep->values : std::vector<double>{};
    bool csv_header_printed = false;
    int failures = 0;

    for (const fs::path& file : files) {
        try {
            HdrImage img = read_hdr_auto(file.string());
            auto run_one = [&](std::optional<double> value) {
                PipelineConfig pc = cfg.pipeline;
                if (value) {
                    if (cfg.sweep->param == "gamma")
                        pc.tone.gamma = *value;
                    else
                        pc.tone.beta = *value;
                }
                PipelineResult res = tonemap_pipeline(img, pc);
                fs::path out = output_path(cfg, file, single_file, value);
                write_sdr_png(res.sdr, out.string());
                if (cfg.emit_report) {
                    std::string text = report_to_text(res.report);
                    fs::path report_path = out;
                    report_path.replace_extension(".txt");
                    write_file_bytes_atomic(
                        {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()},
                        report_path.string());
                }
                if (cfg.csv) {
                    if (!csv_header_printed) {
                        std::printf("%s\n", report_csv_header().c_str());
                        csv_header_printed = true;
                    }
                    std::string name = file.filename().string();
                    if (value) name += ":" + cfg.sweep->param + format_value(*value);
                    std::printf("%s\n", report_csv_row(name, res.report).c_str());
                }
            };
            if (cfg.sweep) {
                for (double v : sweep_values) run_one(v);
            } else {
                run_one(std::nullopt);
            }
        } catch (const Error& e) {
            std::fprintf(stderr, "error: %s: %s\n", file.string().c_str(), e.what());
            ++failures;
        }
    }
    return failures > 0 ? 1 : 0;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        Config cfg = parse_args(args);
        if (cfg.show_help) {
            std::printf("%s", cfg.help_text.c_str());
            return 0;
        }
        return run_batch(cfg);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace qtone::cli
