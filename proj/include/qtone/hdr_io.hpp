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

#ifndef QTONE_HDR_IO_HPP
#define QTONE_HDR_IO_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtone/image.hpp"

namespace qtone {

// ---------------------------------------------------------------------------
// Radiance RGBE (.hdr)
// ---------------------------------------------------------------------------

/// Decodes one shared-exponent quadruple. e == 0 means black; otherwise each
/// channel is (mantissa + 0.5) * 2^(e - 136).
Triple rgbe_decode(std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t e);

/// Encodes a linear triple with the largest-component exponent rule from the
/// Radiance file format specification.
std::array<std::uint8_t, 4> rgbe_encode(double r, double g, double b);

/// Reads a Radiance picture (`#?RADIANCE` / `#?RGBE`), flat or new-style
/// RLE scanlines, `-Y h +X w` orientation only. EXPOSURE header values
/// divide the decoded radiance.
HdrImage read_radiance_hdr(std::span<const std::uint8_t> bytes);
HdrImage read_radiance_hdr_file(const std::string& path);

/// Writes new-style RLE scanlines for widths in [8, 32767], flat otherwise
/// (mirroring the reference writer).
std::vector<std::uint8_t> write_radiance_hdr(const HdrImage& img);
void write_radiance_hdr_file(const HdrImage& img, const std::string& path);

// ---------------------------------------------------------------------------
// PFM (portable float map)
// ---------------------------------------------------------------------------

/// Reads a color `PF` map (grayscale `Pf` is rejected). The sign of the scale
/// line selects endianness; |scale| multiplies every sample. Rows are
/// returned top-to-bottom.
HdrImage read_pfm(std::span<const std::uint8_t> bytes);
HdrImage read_pfm_file(const std::string& path);

std::vector<std::uint8_t> write_pfm(const HdrImage& img, bool big_endian = false,
                                    double scale = 1.0);
void write_pfm_file(const HdrImage& img, const std::string& path);

// ---------------------------------------------------------------------------
// PNG (8-bit RGB output)
// ---------------------------------------------------------------------------

/// Encodes an 8-bit RGB PNG (sRGB chunk tagged, not interlaced).
std::vector<std::uint8_t> write_png_rgb8(const SdrImage& img);

/// Writes atomically (temp file + rename) so concurrent batch workers never
/// expose partial files.
void write_sdr_png(const SdrImage& img, const std::string& path);

/// Decodes non-interlaced 8-bit RGB/RGBA PNGs (alpha is dropped).
SdrImage read_png_rgb8(std::span<const std::uint8_t> bytes);
SdrImage read_png_rgb8_file(const std::string& path);

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes_atomic(std::span<const std::uint8_t> bytes, const std::string& path);

/// Dispatches on file extension: .hdr/.pic -> Radiance, .pfm -> PFM.
HdrImage read_hdr_auto(const std::string& path);

}  // namespace qtone

#endif  // QTONE_HDR_IO_HPP
