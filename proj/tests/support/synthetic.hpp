#pragma once

// Synthetic rasters and streams shared by the unit and acceptance suites.

#include <cstdint>
#include <string>
#include <vector>

#include "lecmeta/frames.hpp"

namespace synthetic {

using lecmeta::frames::FrameBuffer;

// Gray frame filled with one value.
FrameBuffer constant_frame(int w, int h, std::uint8_t value,
                           long frame_index = 0, double timestamp_s = 0.0);

// Gray frame from explicit samples (row-major).
FrameBuffer gray_frame(int w, int h, const std::vector<std::uint8_t>& samples);

// 1x1 RGB frame.
FrameBuffer rgb_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// Deterministic uniform-noise gray frame.
FrameBuffer noise_frame(int w, int h, std::uint32_t seed);

// A slide-like raster: light background, a dark header band and a
// slide-specific bar/block pattern with hard edges. Distinct ids produce
// visually distinct slides (large mean pixel difference, far-apart average
// hashes).
FrameBuffer render_slide(int slide_id, int w = 320, int h = 240);

// 5x7 bitmap-font text (upper-cased), scaled; dark ink on the existing
// background. Used where a real OCR engine has to read the frame.
void draw_text(FrameBuffer& f, int x, int y, int scale, const std::string& text);

// Convenience: white slide with centered text lines.
FrameBuffer render_text_slide(const std::vector<std::string>& lines,
                              int w = 640, int h = 360, int scale = 3);

// A stream of `count` frames at the given fps, all copies of `frame` with
// increasing indices/timestamps.
std::vector<FrameBuffer> repeat_frame(const FrameBuffer& frame, int count,
                                      double fps = 1.0, long first_index = 0);

// Concatenates slide runs into one stream (re-indexing frames 0..n-1).
std::vector<FrameBuffer> slide_stream(const std::vector<FrameBuffer>& slides,
                                      int frames_per_slide, double fps = 1.0);

}  // namespace synthetic
