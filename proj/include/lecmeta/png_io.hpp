#pragma once

#include <string>

#include "lecmeta/frames.hpp"

namespace lecmeta::png_io {

// 8-bit grayscale or RGB PNG, matching the frame's channel count.
void write_png(const std::string& path, const frames::FrameBuffer& f);

// Decodes to an 8-bit gray or RGB frame (palette/alpha inputs are expanded
// and stripped). frame_index/timestamp are left at zero.
frames::FrameBuffer read_png(const std::string& path);

}  // namespace lecmeta::png_io
