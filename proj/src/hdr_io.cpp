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

#include "qtone/hdr_io.hpp"

#include <zlib.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace qtone {

namespace {

/// Sequential byte-stream view with bounds-checked reads.
class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    bool eof() const { return pos_ >= bytes_.size(); }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    std::uint8_t u8(const char* what) {
        if (eof()) throw Error(std::string("unexpected end of stream while reading ") + what);
        return bytes_[pos_++];
    }

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        if (remaining() < n)
            throw Error(std::string("unexpected end of stream while reading ") + what);
        auto s = bytes_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    /// Reads a '\n'-terminated line (terminator consumed, not returned).
    std::string line(const char* what) {
        std::string out;
        while (true) {
            if (eof()) throw Error(std::string("unexpected end of stream while reading ") + what);
            char c = static_cast<char>(bytes_[pos_++]);
            if (c == '\n') break;
            if (c != '\r') out.push_back(c);
            if (out.size() > 4096) throw Error("header line too long");
        }
        return out;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

bool starts_with(const std::string& s, const char* prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// RGBE pixel codec
// ---------------------------------------------------------------------------

Triple rgbe_decode(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e) {
    if (e == 0) return {0.0, 0.0, 0.0};
    double f = std::ldexp(1.0, static_cast<int>(e) - 136);
    return {(r + 0.5) * f, (g + 0.5) * f, (b + 0.5) * f};
}

std::array<std::uint8_t, 4> rgbe_encode(double r, double g, double b) {
    double v = std::max({r, g, b});
    if (!(v >= 1e-38)) return {0, 0, 0, 0};  // flush denormal-small and zero to black
    int e = 0;
    std::frexp(v, &e);
    if (e + 128 > 255) throw Error("rgbe_encode: radiance exceeds RGBE exponent range");
    if (e + 128 < 1) return {0, 0, 0, 0};
    double scale = std::ldexp(1.0, 8 - e);
    auto quant = [&](double c) {
        double m = std::floor(c * scale);
        return static_cast<std::uint8_t>(std::clamp(m, 0.0, 255.0));
    };
    return {quant(r), quant(g), quant(b), static_cast<std::uint8_t>(e + 128)};
}

// ---------------------------------------------------------------------------
// Radiance picture reader
// ---------------------------------------------------------------------------

namespace {

struct RadianceHeader {
    int width = 0, height = 0;
    double exposure = 1.0;
};

RadianceHeader read_radiance_header(ByteReader& in) {
    std::string magic = in.line("Radiance magic");
    if (!starts_with(magic, "#?RADIANCE") && !starts_with(magic, "#?RGBE"))
        throw Error("not a Radiance picture (missing #?RADIANCE / #?RGBE magic)");

    RadianceHeader hdr;
    while (true) {
        std::string l = in.line("Radiance header");
        if (l.empty()) break;  // blank line ends the header
        if (l[0] == '#') continue;
        if (starts_with(l, "FORMAT=")) {
            std::string fmt = l.substr(7);
            if (fmt != "32-bit_rle_rgbe")
                throw Error("unsupported Radiance FORMAT: " + fmt);
        } else if (starts_with(l, "EXPOSURE=")) {
            double v = std::strtod(l.c_str() + 9, nullptr);
            if (!(v > 0.0) || !std::isfinite(v))
                throw Error("invalid EXPOSURE value in Radiance header");
            hdr.exposure *= v;  // multiple EXPOSURE lines accumulate
        }
        // GAMMA, PIXASPECT, PRIMARIES, VIEW etc. are not needed for decoding.
    }

    std::string res = in.line("Radiance resolution");
    int h = 0, w = 0;
    if (std::sscanf(res.c_str(), "-Y %d +X %d", &h, &w) != 2)
        throw Error("unsupported Radiance pixel ordering (expected `-Y h +X w`): " + res);
    if (w < 1 || h < 1) throw Error("invalid Radiance resolution: " + res);
    hdr.width = w;
    hdr.height = h;
    return hdr;
}

void read_rle_plane(ByteReader& in, std::uint8_t* dst, int width) {
    int pos = 0;
    while (pos < width) {
        int count = in.u8("RLE count");
        if (count > 128) {
            int run = count - 128;
            if (pos + run > width) throw Error("RLE run overruns scanline width");
            std::uint8_t v = in.u8("RLE run value");
            std::memset(dst + pos, v, static_cast<std::size_t>(run));
            pos += run;
        } else {
            if (count == 0) throw Error("zero-length RLE literal span");
            if (pos + count > width) throw Error("RLE literal span overruns scanline width");
            auto lit = in.take(static_cast<std::size_t>(count), "RLE literals");
            std::memcpy(dst + pos, lit.data(), lit.size());
            pos += count;
        }
    }
}

}  // namespace

HdrImage read_radiance_hdr(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    RadianceHeader hdr = read_radiance_header(in);
    HdrImage img = HdrImage::make(hdr.width, hdr.height, ColorSpace::LinearRGB);
    double inv_exposure = 1.0 / hdr.exposure;

    std::vector<std::uint8_t> quad(static_cast<std::size_t>(hdr.width) * 4);
    for (int y = 0; y < hdr.height; ++y) {
        if (hdr.width >= 8 && hdr.width <= 32767 && in.remaining() >= 4) {
            auto probe = in.take(4, "scanline");
            if (probe[0] == 2 && probe[1] == 2 && (probe[2] & 0x80) == 0) {
                int sw = (probe[2] << 8) | probe[3];
                if (sw != hdr.width) throw Error("RLE scanline width mismatch");
                for (int c = 0; c < 4; ++c)
                    read_rle_plane(in, quad.data() + static_cast<std::size_t>(c) * hdr.width,
                                   hdr.width);
            } else {
                // Flat scanline; the probed bytes are pixel 0.
                quad[0] = probe[0];
                quad[static_cast<std::size_t>(hdr.width)] = probe[1];
                quad[static_cast<std::size_t>(hdr.width) * 2] = probe[2];
                quad[static_cast<std::size_t>(hdr.width) * 3] = probe[3];
                for (int x = 1; x < hdr.width; ++x) {
                    auto px = in.take(4, "flat scanline");
                    for (int c = 0; c < 4; ++c)
                        quad[static_cast<std::size_t>(c) * hdr.width + x] = px[c];
                }
            }
        } else {
            for (int x = 0; x < hdr.width; ++x) {
                auto px = in.take(4, "flat scanline");
                for (int c = 0; c < 4; ++c)
                    quad[static_cast<std::size_t>(c) * hdr.width + x] = px[c];
            }
        }
        for (int x = 0; x < hdr.width; ++x) {
            Triple v = rgbe_decode(quad[x], quad[static_cast<std::size_t>(hdr.width) + x],
                                   quad[static_cast<std::size_t>(hdr.width) * 2 + x],
                                   quad[static_cast<std::size_t>(hdr.width) * 3 + x]);
            double* p = img.pixel(x, y);
            p[0] = v[0] * inv_exposure;
            p[1] = v[1] * inv_exposure;
            p[2] = v[2] * inv_exposure;
        }
    }
    return img;
}

// ---------------------------------------------------------------------------
// Radiance picture writer
// ---------------------------------------------------------------------------

namespace {

void append(std::vector<std::uint8_t>& out, const std::string& s) {
    out.insert(out.end(), s.begin(), s.end());
}

/// Run-length encodes one component plane the way the reference writer does:
/// runs of at least 4 identical bytes become run packets, the rest literals.
void write_rle_plane(std::vector<std::uint8_t>& out, const std::uint8_t* src, int width) {
    constexpr int kMinRun = 4;
    int cur = 0;
    while (cur < width) {
        int run_start = cur;
        int run_len = 0;
        while (run_start < width) {
            run_len = 1;
            while (run_len < 127 && run_start + run_len < width &&
                   src[run_start] == src[run_start + run_len])
                ++run_len;
            if (run_len >= kMinRun) break;
            run_start += run_len;
        }
        if (run_start >= width) run_start = width;

        // Literals up to the run (chunks of at most 128).
        int lit = run_start - cur;
        while (lit > 0) {
            int n = std::min(lit, 128);
            out.push_back(static_cast<std::uint8_t>(n));
            out.insert(out.end(), src + cur, src + cur + n);
            cur += n;
            lit -= n;
        }
        if (run_start < width && run_len >= kMinRun) {
            out.push_back(static_cast<std::uint8_t>(128 + run_len));
            out.push_back(src[run_start]);
            cur = run_start + run_len;
        }
    }
}

}  // namespace

std::vector<std::uint8_t> write_radiance_hdr(const HdrImage& img) {
    if (img.space != ColorSpace::LinearRGB)
        throw Error("write_radiance_hdr: image must be linear RGB");
    img.validate();

    std::vector<std::uint8_t> out;
    append(out, "#?RADIANCE\n");
    append(out, "FORMAT=32-bit_rle_rgbe\n\n");
    append(out, "-Y " + std::to_string(img.height) + " +X " + std::to_string(img.width) + "\n");

    bool rle = img.width >= 8 && img.width <= 32767;
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(img.width) * 4);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double* p = img.pixel(x, y);
            auto q = rgbe_encode(p[0], p[1], p[2]);
            if (rle) {
                for (int c = 0; c < 4; ++c)
                    plane[static_cast<std::size_t>(c) * img.width + x] = q[c];
            } else {
                out.insert(out.end(), q.begin(), q.end());
            }
        }
        if (rle) {
            out.push_back(2);
            out.push_back(2);
            out.push_back(static_cast<std::uint8_t>(img.width >> 8));
            out.push_back(static_cast<std::uint8_t>(img.width & 0xff));
            for (int c = 0; c < 4; ++c)
                write_rle_plane(out, plane.data() + static_cast<std::size_t>(c) * img.width,
                                img.width);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PFM
// ---------------------------------------------------------------------------

namespace {

/// PFM header tokens are separated by single whitespace characters; the byte
/// right after the scale token is the last one before the raster.
std::string pfm_token(ByteReader& in) {
    std::string tok;
    while (true) {
        char c = static_cast<char>(in.u8("PFM header"));
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (tok.empty()) continue;
            return tok;
        }
        tok.push_back(c);
        if (tok.size() > 64) throw Error("PFM header token too long");
    }
}

float load_f32(const std::uint8_t* p, bool big_endian) {
    std::uint32_t u;
    if (big_endian)
        u = (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
            (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
    else
        u = (std::uint32_t(p[3]) << 24) | (std::uint32_t(p[2]) << 16) |
            (std::uint32_t(p[1]) << 8) | std::uint32_t(p[0]);
    return std::bit_cast<float>(u);
}

void store_f32(std::uint8_t* p, float v, bool big_endian) {
    std::uint32_t u = std::bit_cast<std::uint32_t>(v);
    if (big_endian) {
        p[0] = static_cast<std::uint8_t>(u >> 24);
        p[1] = static_cast<std::uint8_t>(u >> 16);
        p[2] = static_cast<std::uint8_t>(u >> 8);
        p[3] = static_cast<std::uint8_t>(u);
    } else {
        p[3] = static_cast<std::uint8_t>(u >> 24);
        p[2] = static_cast<std::uint8_t>(u >> 16);
        p[1] = static_cast<std::uint8_t>(u >> 8);
        p[0] = static_cast<std::uint8_t>(u);
    }
}

}  // namespace

HdrImage read_pfm(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    std::string magic = pfm_token(in);
    if (magic == "Pf") throw Error("grayscale PFM (`Pf`) is not supported; expected color `PF`");
    if (magic != "PF") throw Error("not a PFM stream (missing `PF` magic)");

    int w = 0, h = 0;
    double scale = 0.0;
    try {
        w = std::stoi(pfm_token(in));
        h = std::stoi(pfm_token(in));
        scale = std::stod(pfm_token(in));
    } catch (const std::exception&) {
        throw Error("malformed PFM header");
    }
    if (w < 1 || h < 1) throw Error("invalid PFM dimensions");
    if (scale == 0.0 || !std::isfinite(scale)) throw Error("invalid PFM scale");
    bool big_endian = scale > 0.0;
    double mult = std::abs(scale);

    auto raster = in.take(static_cast<std::size_t>(w) * h * 12, "PFM raster");
    HdrImage img = HdrImage::make(w, h, ColorSpace::LinearRGB);
    for (int y = 0; y < h; ++y) {
        int src_row = h - 1 - y;  // PFM stores rows bottom-to-top
        const std::uint8_t* row = raster.data() + static_cast<std::size_t>(src_row) * w * 12;
        for (int x = 0; x < w; ++x) {
            double* p = img.pixel(x, y);
            for (int c = 0; c < 3; ++c) {
                double v = static_cast<double>(load_f32(row + x * 12 + c * 4, big_endian)) * mult;
                if (std::isnan(v)) throw Error("PFM raster contains NaN samples");
                if (v < 0.0) throw Error("PFM raster contains negative radiance");
                p[c] = v;
            }
        }
    }
    return img;
}

std::vector<std::uint8_t> write_pfm(const HdrImage& img, bool big_endian, double scale) {
    if (img.space != ColorSpace::LinearRGB) throw Error("write_pfm: image must be linear RGB");
    img.validate();
    if (!(scale > 0.0)) throw Error("write_pfm: scale must be positive");

    char header[96];
    std::snprintf(header, sizeof(header), "PF\n%d %d\n%.6g\n", img.width, img.height,
                  big_endian ? scale : -scale);
    std::vector<std::uint8_t> out;
    append(out, header);
    out.resize(out.size() + static_cast<std::size_t>(img.width) * img.height * 12);
    std::uint8_t* raster = out.data() + (out.size() -
                                         static_cast<std::size_t>(img.width) * img.height * 12);
    for (int y = 0; y < img.height; ++y) {
        int dst_row = img.height - 1 - y;
        std::uint8_t* row = raster + static_cast<std::size_t>(dst_row) * img.width * 12;
        for (int x = 0; x < img.width; ++x) {
            const double* p = img.pixel(x, y);
            for (int c = 0; c < 3; ++c)
                store_f32(row + x * 12 + c * 4, static_cast<float>(p[c] / scale), big_endian);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// PNG (container hand-rolled, compression via zlib)
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32be(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               std::span<const std::uint8_t> payload) {
    put_u32be(out, static_cast<std::uint32_t>(payload.size()));
    std::size_t start = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), payload.begin(), payload.end());
    std::uint32_t crc = static_cast<std::uint32_t>(
        ::crc32(0, out.data() + start, static_cast<uInt>(out.size() - start)));
    put_u32be(out, crc);
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

}  // namespace

std::vector<std::uint8_t> write_png_rgb8(const SdrImage& img) {
    if (img.width < 1 || img.height < 1) throw Error("write_png_rgb8: empty image");
    if (img.data.size() != static_cast<std::size_t>(img.width) * img.height * 3)
        throw Error("write_png_rgb8: buffer length does not match dimensions");

    std::size_t stride = static_cast<std::size_t>(img.width) * 3;
    std::vector<std::uint8_t> raw((stride + 1) * img.height);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        row[0] = 0;  // filter: None
        std::memcpy(row + 1, img.data.data() + static_cast<std::size_t>(y) * stride, stride);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    if (::compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw Error("write_png_rgb8: deflate failed");
    comp.resize(comp_len);

    std::vector<std::uint8_t> out(std::begin(kPngSignature), std::end(kPngSignature));
    std::vector<std::uint8_t> ihdr;
    put_u32be(ihdr, static_cast<std::uint32_t>(img.width));
    put_u32be(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter method
    ihdr.push_back(0);  // no interlace
    put_chunk(out, "IHDR", ihdr);
    std::uint8_t srgb_intent[1] = {0};  // perceptual
    put_chunk(out, "sRGB", srgb_intent);
    put_chunk(out, "IDAT", comp);
    put_chunk(out, "IEND", {});
    return out;
}

SdrImage read_png_rgb8(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
        throw Error("not a PNG stream");

    int w = 0, h = 0, channels = 0;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;
    bool saw_ihdr = false, saw_iend = false;
    while (pos + 8 <= bytes.size() && !saw_iend) {
        std::uint32_t len = get_u32be(bytes.data() + pos);
        if (pos + 12 + len > bytes.size()) throw Error("truncated PNG chunk");
        const std::uint8_t* type = bytes.data() + pos + 4;
        const std::uint8_t* payload = bytes.data() + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw Error("bad IHDR length");
            w = static_cast<int>(get_u32be(payload));
            h = static_cast<int>(get_u32be(payload + 4));
            int depth = payload[8], color = payload[9], interlace = payload[12];
            if (depth != 8) throw Error("unsupported PNG bit depth (only 8 supported)");
            if (color == 2)
                channels = 3;
            else if (color == 6)
                channels = 4;
            else
                throw Error("unsupported PNG color type (only RGB/RGBA supported)");
            if (interlace != 0) throw Error("interlaced PNG not supported");
            saw_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_iend = true;
        }
        pos += 12 + len;
    }
    if (!saw_ihdr || !saw_iend || w < 1 || h < 1) throw Error("malformed PNG stream");

    std::size_t stride = static_cast<std::size_t>(w) * channels;
    std::vector<std::uint8_t> raw((stride + 1) * h);
    uLongf raw_len = static_cast<uLongf>(raw.size());
    int zrc = ::uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size()));
    if (zrc != Z_OK || raw_len != raw.size()) throw Error("PNG inflate failed");

    // Undo per-row filters in place, then drop the filter bytes.
    std::vector<std::uint8_t> prev(stride, 0);
    SdrImage img = SdrImage::make(w, h);
    int bpp = channels;
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = raw.data() + static_cast<std::size_t>(y) * (stride + 1);
        int filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:
                for (std::size_t i = bpp; i < stride; ++i) cur[i] += cur[i - bpp];
                break;
            case 2:
                for (std::size_t i = 0; i < stride; ++i) cur[i] += prev[i];
                break;
            case 3:
                for (std::size_t i = 0; i < stride; ++i) {
                    int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    cur[i] += static_cast<std::uint8_t>((left + prev[i]) / 2);
                }
                break;
            case 4:
                for (std::size_t i = 0; i < stride; ++i) {
                    int left = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
                    int upleft = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
                    cur[i] += static_cast<std::uint8_t>(paeth(left, prev[i], upleft));
                }
                break;
            default:
                throw Error("unknown PNG filter type");
        }
        std::memcpy(prev.data(), cur, stride);
        std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * w * 3;
        if (channels == 3) {
            std::memcpy(dst, cur, stride);
        } else {
            for (int x = 0; x < w; ++x)
                std::memcpy(dst + x * 3, cur + static_cast<std::size_t>(x) * 4, 3);
        }
    }
    return img;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    if (f.bad()) throw Error("read failed: " + path);
    return bytes;
}

void write_file_bytes_atomic(std::span<const std::uint8_t> bytes, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot create file: " + tmp.string());
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        if (!f) throw Error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("rename failed for " + path + ": " + ec.message());
    }
}

HdrImage read_radiance_hdr_file(const std::string& path) {
    try {
        auto bytes = read_file_bytes(path);
        return read_radiance_hdr(bytes);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_radiance_hdr_file(const HdrImage& img, const std::string& path) {
    auto bytes = write_radiance_hdr(img);
    write_file_bytes_atomic(bytes, path);
}

HdrImage read_pfm_file(const std::string& path) {
    try {
        auto bytes = read_file_bytes(path);
        return read_pfm(bytes);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void write_pfm_file(const HdrImage& img, const std::string& path) {
    auto bytes = write_pfm(img);
    write_file_bytes_atomic(bytes, path);
}

void write_sdr_png(const SdrImage& img, const std::string& path) {
    try {
        auto bytes = write_png_rgb8(img);
        write_file_bytes_atomic(bytes, path);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

SdrImage read_png_rgb8_file(const std::string& path) {
    try {
        auto bytes = read_file_bytes(path);
        return read_png_rgb8(bytes);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

HdrImage read_hdr_auto(const std::string& path) {
    std::string ext;
    auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        ext = path.substr(dot + 1);
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (ext == "hdr" || ext == "pic" || ext == "rgbe") return read_radiance_hdr_file(path);
    if (ext == "pfm") return read_pfm_file(path);
    throw Error(path + ": unrecognized HDR container (expected .hdr/.pic/.rgbe or .pfm)");
}

}  // namespace qtone
