// Scratch probe: measures how the pipeline's mean output luminance responds
// to gamma and how output high-frequency variance responds to beta.
// Not part of the build; compile by hand when re-deriving test expectations.
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "qtone/hdr_io.hpp"
#include "qtone/tonemap.hpp"

using namespace qtone;

namespace {

HdrImage natural_hdr(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> logq(static_cast<std::size_t>(w) * h, 0.0);
    auto add_blobs = [&](int count, double lo, double hi, double amp_max) {
        for (int b = 0; b < count; ++b) {
            double cx = unit(rng) * w, cy = unit(rng) * h;
            double s = (lo + (hi - lo) * unit(rng)) * std::max(w, h);
            double amp = amp_max * (2.0 * unit(rng) - 1.0);
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    double d = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * s * s);
                    logq[(std::size_t)y * w + x] += amp * std::exp(-d);
                }
        }
    };
    add_blobs(6, 0.1, 0.3, 1.6);
    add_blobs(12, 0.04, 0.1, 0.5);
    add_blobs(24, 0.02, 0.05, 0.2);
    HdrImage img = HdrImage::make(w, h, ColorSpace::LinearRGB);
    std::uniform_real_distribution<double> tint(0.6, 1.0);
    for (std::size_t i = 0; i < logq.size(); ++i) {
        double lum = 80.0 * std::pow(10.0, logq[i]);
        img.data[3 * i + 0] = lum * tint(rng);
        img.data[3 * i + 1] = lum;
        img.data[3 * i + 2] = lum * tint(rng);
    }
    return img;
}

double mean_output_luminance(const SdrImage& sdr) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sdr.pixel_count(); ++i) {
        double r = srgb_decode(sdr.data[3 * i] / 255.0);
        double g = srgb_decode(sdr.data[3 * i + 1] / 255.0);
        double b = srgb_decode(sdr.data[3 * i + 2] / 255.0);
        sum += 0.2126 * r + 0.7152 * g + 0.0722 * b;
    }
    return sum / static_cast<double>(sdr.pixel_count());
}

double highpass_variance(const SdrImage& sdr) {
    int w = sdr.width, h = sdr.height;
    std::vector<double> loglum((std::size_t)w * h);
    for (std::size_t i = 0; i < loglum.size(); ++i) {
        double r = srgb_decode(sdr.data[3 * i] / 255.0);
        double g = srgb_decode(sdr.data[3 * i + 1] / 255.0);
        double b = srgb_decode(sdr.data[3 * i + 2] / 255.0);
        loglum[i] = std::log10(std::max(0.2126 * r + 0.7152 * g + 0.0722 * b, 1e-6));
    }
    // 5x5 box high-pass.
    double var = 0.0;
    std::size_t n = 0;
    for (int y = 2; y < h - 2; ++y)
        for (int x = 2; x < w - 2; ++x) {
            double local = 0.0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx)
                    local += loglum[(std::size_t)(y + dy) * w + (x + dx)];
            double hp = loglum[(std::size_t)y * w + x] - local / 25.0;
            var += hp * hp;
            ++n;
        }
    return var / static_cast<double>(n);
}

}  // namespace

int main() {
    HdrImage img = natural_hdr(96, 64, 20240808);

    std::printf("gamma sweep (beta=1.1, glare=0.01):\n");
    for (double g : {0.1, 0.4, 0.6, 0.8}) {
        PipelineConfig cfg;
        cfg.tone.gamma = g;
        cfg.workers = 2;
        PipelineResult res = tonemap_pipeline(img, cfg);
        std::printf("  gamma=%.1f  mean_Y=%.6f\n", g, mean_output_luminance(res.sdr));
    }

    std::printf("beta sweep (gamma=0.5 fixed, glare=0.01):\n");
    for (double b : {0.8, 1.0, 1.2}) {
        PipelineConfig cfg;
        cfg.tone.gamma = 0.5;
        cfg.tone.beta = b;
        cfg.workers = 2;
        PipelineResult res = tonemap_pipeline(img, cfg);
        std::printf("  beta=%.1f  hp_var=%.8f\n", b, highpass_variance(res.sdr));
    }

    std::printf("auto-gamma run:\n");
    PipelineConfig cfg;
    cfg.workers = 2;
    PipelineResult res = tonemap_pipeline(img, cfg);
    std::printf("  key=%.4f gamma=%.4f\n", res.report.key.key, res.report.gamma);
    return 0;
}
