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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "qtone/cam16.hpp"
#include "qtone/image.hpp"

using namespace qtone;

namespace {

struct WorkedExample {
    Triple xyz, white;
    double la, yb;
    double J, Q, C, M, h;
};

WorkedExample load_worked_example() {
    std::ifstream f(std::string(QTONE_FIXTURE_DIR) + "/cam16_worked_example.txt");
    REQUIRE(f.good());
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        if (key == "surround") continue;
        kv[key] = std::stod(line.substr(eq + 1));
    }
    WorkedExample w;
    w.xyz = {kv.at("x"), kv.at("y"), kv.at("z")};
    w.white = {kv.at("white_x"), kv.at("white_y"), kv.at("white_z")};
    w.la = kv.at("adapting_luminance");
    w.yb = kv.at("background_luminance");
    w.J = kv.at("J");
    w.Q = kv.at("Q");
    w.C = kv.at("C");
    w.M = kv.at("M");
    w.h = kv.at("h");
    return w;
}

DerivedConditions worked_conditions(const WorkedExample& w) {
    ViewingConditions vc;
    vc.white = w.white;
    vc.adapting_luminance = w.la;
    vc.background_luminance = w.yb;
    vc.surround = Surround::Average;
    return derive_conditions(vc);
}

HdrImage one_pixel(const Triple& xyz) {
    HdrImage img = HdrImage::make(1, 1, ColorSpace::XYZ);
    img.data = {xyz[0], xyz[1], xyz[2]};
    return img;
}

AdaptedResponses responses_of(double r, double g, double b) {
    AdaptedResponses ar;
    ar.width = 1;
    ar.height = 1;
    ar.data = {r, g, b};
    return ar;
}

/// Random XYZ inside the sRGB gamut with Y roughly in [0.01, 100].
Triple random_in_gamut(std::mt19937& rng) {
    std::uniform_real_distribution<double> chan(1e-4, 1.0);
    std::uniform_real_distribution<double> level(0.0001, 1.0);
    Triple rgb{chan(rng), chan(rng), chan(rng)};
    double s = 100.0 * level(rng);
    Triple xyz = srgb_to_xyz_matrix().apply(rgb);
    return {xyz[0] * s, xyz[1] * s, xyz[2] * s};
}

}  // namespace

TEST_CASE("derive_conditions: adaptation factors at the worked-example level") {
    ViewingConditions vc;
    vc.adapting_luminance = 318.31;
    vc.background_luminance = 20.0;
    DerivedConditions dc = derive_conditions(vc);

    CHECK(dc.F_L == doctest::Approx(1.168).epsilon(0.005 / 1.168));
    CHECK(dc.D == doctest::Approx(0.9945).epsilon(0.0005 / 0.9945));
    CHECK(dc.n == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(dc.z == doctest::Approx(1.9272135955).epsilon(1e-9));
    CHECK(dc.N_bb == doctest::Approx(1.0003040046).epsilon(1e-9));
    CHECK(dc.N_cb == dc.N_bb);
}

TEST_CASE("surround parameter sets match standard CIECAM16") {
    SurroundParams avg = surround_params(Surround::Average);
    CHECK(avg.F == 1.0);
    CHECK(avg.c == 0.69);
    CHECK(avg.N_c == 1.0);
    SurroundParams dim = surround_params(Surround::Dim);
    CHECK(dim.F == 0.9);
    CHECK(dim.c == 0.59);
    CHECK(dim.N_c == 0.9);
    SurroundParams dark = surround_params(Surround::Dark);
    CHECK(dark.F == 0.8);
    CHECK(dark.c == 0.525);
    CHECK(dark.N_c == 0.8);
}

TEST_CASE("derive_conditions: degree of adaptation clamps at 1") {
    ViewingConditions vc;
    vc.adapting_luminance = 1e6;
    DerivedConditions dc = derive_conditions(vc);
    CHECK(dc.D == 1.0);
}

TEST_CASE("derive_conditions: rejects out-of-range backgrounds") {
    ViewingConditions vc;
    vc.background_luminance = 0.0;
    CHECK_THROWS_AS(derive_conditions(vc), Error);
    vc.background_luminance = 150.0;  // n > 1
    CHECK_THROWS_AS(derive_conditions(vc), Error);
    vc.background_luminance = 20.0;
    vc.adapting_luminance = 0.0;
    CHECK_THROWS_AS(derive_conditions(vc), Error);
}

TEST_CASE("adapted_response: offset, symmetry and bounds") {
    CHECK(adapted_response(0.0) == 0.1);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(1e-8, 1e8);
    for (int i = 0; i < 500; ++i) {
        double x = dist(rng);
        double pos = adapted_response(x) - 0.1;
        double neg = adapted_response(-x) - 0.1;
        CHECK(neg == -pos);  // odd symmetry of the nonlinearity
        CHECK(adapted_response(x) <= 400.1);
        CHECK(adapted_response(-x) >= -399.9);
        CHECK(std::isfinite(adapted_response(x)));

        double back = adapted_response_inverse(adapted_response(x));
        CHECK(back == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(std::isfinite(adapted_response(1e300)));
    CHECK(adapted_response(1e300) <= 400.1);  // FP attains the closed bound
}

TEST_CASE("adapt_responses: white reproduces the white responses, black hits the offset") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    AdaptedResponses at_white = adapt_responses(one_pixel(dc.white), dc);
    for (int c = 0; c < 3; ++c)
        CHECK(at_white.data[c] == doctest::Approx(dc.rgb_aw[c]).epsilon(1e-12));

    AdaptedResponses at_black = adapt_responses(one_pixel({0, 0, 0}), dc);
    for (int c = 0; c < 3; ++c) CHECK(at_black.data[c] == 0.1);
}

TEST_CASE("brightness_forward: white pixel has J = 100") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    BrightnessMaps bm = brightness_forward(one_pixel(dc.white), dc);
    double q_white = (4.0 / dc.c) * (dc.A_w + 4.0) * std::pow(dc.F_L, 0.25);
    CHECK(bm.q[0] == doctest::Approx(q_white).epsilon(1e-12));
    CHECK(lightness_from_brightness_scalar(bm.q[0], dc) ==
          doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("brightness_forward: black follows from the response offsets") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);
    BrightnessMaps bm = brightness_forward(one_pixel({0, 0, 0}), dc);

    // Same arithmetic as the contract: A computed from the 0.1 offsets.
    double a = (2.0 * 0.1 + 0.1 + 0.05 * 0.1 - 0.305) * dc.N_bb;
    double j = a <= 0.0 ? 0.0 : 100.0 * std::pow(a / dc.A_w, dc.c * dc.z);
    double expected = (4.0 / dc.c) * std::sqrt(j / 100.0) * (dc.A_w + 4.0) *
                      std::pow(dc.F_L, 0.25);
    CHECK(bm.q[0] == doctest::Approx(expected).epsilon(1e-9));
    CHECK(bm.q[0] < 1e-6);
}

TEST_CASE("brightness_forward: strongly chromatic pixel with negative A maps to Q = 0") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);
    BrightnessMaps bm = brightness_forward(one_pixel({0.0, 0.0, 500.0}), dc);
    CHECK(bm.negative_a == 1);
    CHECK(bm.q[0] == 0.0);
}

TEST_CASE("hue_forward: axis cases and the achromatic convention") {
    // b == 0 exactly, a > 0.
    std::vector<double> h = hue_forward(responses_of(1.5, 0.5, 1.0));
    CHECK(h[0] == 0.0);

    // a == 0 exactly (12 - 12*11/11 + 0/11), b == 23/9 > 0.
    h = hue_forward(responses_of(12.0, 11.0, 0.0));
    CHECK(h[0] == doctest::Approx(90.0).epsilon(1e-12));

    // Exactly equal responses: opponent signals vanish to rounding noise.
    h = hue_forward(responses_of(7.3, 7.3, 7.3));
    CHECK(h[0] == 0.0);

    // a < 0, b == 0 wraps to 180, not -180.
    h = hue_forward(responses_of(0.5, 1.5, 1.0));
    CHECK(h[0] == doctest::Approx(180.0).epsilon(1e-12));
}

TEST_CASE("lightness/brightness pair is an algebraic identity") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    CHECK(lightness_from_brightness_scalar(0.0, dc) == 0.0);
    for (double j : {1e-3, 0.5, 10.0, 50.0, 99.0, 100.0, 140.0}) {
        double q = brightness_from_lightness_scalar(j, dc);
        CHECK(lightness_from_brightness_scalar(q, dc) == doctest::Approx(j).epsilon(1e-9));
    }
    double q_white = brightness_from_lightness_scalar(100.0, dc);
    CHECK(lightness_from_brightness_scalar(q_white, dc) ==
          doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("colorfulness_forward: achromatic pixels and J = 0 give M = 0") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    std::vector<double> hue = {0.0};
    ColorfulnessMaps cm =
        colorfulness_forward(responses_of(5.0, 5.0, 5.0), hue, std::vector<double>{50.0}, dc);
    CHECK(cm.m[0] <= 1e-10);  // t^0.9 of rounding noise

    cm = colorfulness_forward(responses_of(8.0, 7.0, 5.0), hue, std::vector<double>{0.0}, dc);
    CHECK(cm.m[0] == 0.0);  // sqrt(J/100) factor

    // Degenerate responses drive the chroma denominator non-positive.
    cm = colorfulness_forward(responses_of(-10.0, -10.0, -10.0), hue,
                              std::vector<double>{50.0}, dc);
    CHECK(cm.t_fallback == 1);
    CHECK(cm.m[0] == 0.0);
}

TEST_CASE("colorfulness_forward: strict scale multiplies chroma by F_L instead of F_L^0.25") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    AdaptedResponses ar = adapt_responses(one_pixel(w.xyz), dc);
    std::vector<double> hue = hue_forward(ar);
    std::vector<double> j = {41.73};
    ColorfulnessMaps standard = colorfulness_forward(ar, hue, j, dc, false);
    ColorfulnessMaps strict = colorfulness_forward(ar, hue, j, dc, true);
    CHECK(strict.m[0] / standard.m[0] ==
          doctest::Approx(std::pow(dc.F_L, 0.75)).epsilon(1e-12));
}

TEST_CASE("cam16 forward: worked-example conformance") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);
    Cam16Sample s = cam16_forward(w.xyz, dc);

    // The fixture carries 8 printed digits; 2e-7 relative covers its own
    // rounding with margin while still pinning the implementation tightly.
    CHECK(s.J == doctest::Approx(w.J).epsilon(2e-7));
    CHECK(s.Q == doctest::Approx(w.Q).epsilon(2e-7));
    CHECK(s.C == doctest::Approx(w.C).epsilon(2e-7));
    CHECK(s.M == doctest::Approx(w.M).epsilon(2e-7));
    CHECK(s.h == doctest::Approx(w.h).epsilon(2e-7));
}

TEST_CASE("inverse_model: degenerate appearance points") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    Triple black = cam16_inverse(0.0, 0.0, 123.0, dc);
    CHECK(black[0] == 0.0);
    CHECK(black[1] == 0.0);
    CHECK(black[2] == 0.0);

    // With D == 1 the adapted neutral axis coincides with the white point,
    // so (J=100, M=0) must invert to the white exactly.
    ViewingConditions bright;
    bright.white = w.white;
    bright.adapting_luminance = 1e5;
    bright.background_luminance = 20.0;
    DerivedConditions dc1 = derive_conditions(bright);
    REQUIRE(dc1.D == 1.0);
    Triple white = cam16_inverse(100.0, 0.0, 42.0, dc1);
    for (int c = 0; c < 3; ++c)
        CHECK(white[c] == doctest::Approx(dc1.white[c]).epsilon(1e-6));
}

TEST_CASE("inverse_model: white round trip through the forward model") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);
    Cam16Sample s = cam16_forward(dc.white, dc);
    Triple back = cam16_inverse(s.J, s.M, s.h, dc);
    for (int c = 0; c < 3; ++c)
        CHECK(back[c] == doctest::Approx(dc.white[c]).epsilon(1e-6));
}

TEST_CASE("inverse_model: round trip over random in-gamut samples") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    std::mt19937 rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        Triple xyz = random_in_gamut(rng);
        Cam16Sample s = cam16_forward(xyz, dc);
        Triple back = cam16_inverse(s.J, s.M, s.h, dc);
        for (int c = 0; c < 3; ++c) {
            double rel = std::abs(back[c] - xyz[c]) / std::max(std::abs(xyz[c]), 1e-9);
            worst = std::max(worst, rel);
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("inverse_model: image-level maps match the scalar path") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    AppearanceImage app;
    app.width = 2;
    app.height = 1;
    app.lightness = {41.7, 0.0};
    app.colorfulness = {0.104, 0.0};
    app.hue_deg = {217.0, 0.0};
    HdrImage xyz = inverse_model(app, dc);
    Triple scalar = cam16_inverse(41.7, 0.104, 217.0, dc);
    for (int c = 0; c < 3; ++c) CHECK(xyz.pixel(0, 0)[c] == scalar[c]);
    CHECK(xyz.pixel(1, 0)[1] == 0.0);
}

TEST_CASE("property: neutral scaling preserves hue") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    Triple base = srgb_to_xyz_matrix().apply({0.8, 0.3, 0.2});
    for (int c = 0; c < 3; ++c) base[c] *= 40.0;
    double h0 = cam16_forward(base, dc).h;

    double h_same = cam16_forward(base, dc).h;
    CHECK(h_same == h0);  // s = 1 exactly

    for (double s : {0.5, 0.77, 1.3, 2.0}) {
        Triple scaled{base[0] * s, base[1] * s, base[2] * s};
        double hs = cam16_forward(scaled, dc).h;
        double diff = std::abs(hs - h0);
        diff = std::min(diff, 360.0 - diff);
        CHECK(diff <= 0.1);
    }
}

TEST_CASE("property: brightness is strictly increasing in Y for neutral pixels") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);

    double prev = -1.0;
    for (double y : {0.01, 0.1, 1.0, 5.0, 20.0, 50.0, 80.0, 100.0, 150.0}) {
        Triple xyz{dc.white[0] * y / 100.0, y, dc.white[2] * y / 100.0};
        double q = cam16_forward(xyz, dc).Q;
        CHECK(q > prev);
        prev = q;
    }
}

TEST_CASE("property: forward model emits no NaN over wild inputs") {
    WorkedExample w = load_worked_example();
    DerivedConditions dc = worked_conditions(w);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> mag(-8.0, 8.0);
    for (int i = 0; i < 500; ++i) {
        Triple xyz{std::pow(10.0, mag(rng)), std::pow(10.0, mag(rng)),
                   std::pow(10.0, mag(rng))};
        Cam16Sample s = cam16_forward(xyz, dc);
        CHECK(std::isfinite(s.J));
        CHECK(std::isfinite(s.Q));
        CHECK(std::isfinite(s.M));
        CHECK(std::isfinite(s.h));
        CHECK(s.Q >= 0.0);
        CHECK(s.h >= 0.0);
        CHECK(s.h < 360.0);
    }
}
