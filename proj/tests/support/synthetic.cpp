#include "support/synthetic.hpp"

#include <cctype>
#include <random>

namespace synthetic {

using lecmeta::frames::make_frame;

FrameBuffer constant_frame(int w, int h, std::uint8_t value, long frame_index,
                           double timestamp_s) {
  FrameBuffer f = make_frame(w, h, 1, frame_index, timestamp_s);
  std::fill(f.data.begin(), f.data.end(), value);
  return f;
}

FrameBuffer gray_frame(int w, int h, const std::vector<std::uint8_t>& samples) {
  FrameBuffer f = make_frame(w, h, 1);
  f.data = samples;
  return f;
}

FrameBuffer rgb_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  FrameBuffer f = make_frame(1, 1, 3);
  f.data = {r, g, b};
  return f;
}

FrameBuffer noise_frame(int w, int h, std::uint32_t seed) {
  FrameBuffer f = make_frame(w, h, 1);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(0, 255);
  for (auto& v : f.data) v = static_cast<std::uint8_t>(dist(rng));
  return f;
}

FrameBuffer render_slide(int slide_id, int w, int h) {
  FrameBuffer f = constant_frame(w, h, 220);
  std::mt19937 rng(0x51D0u + static_cast<std::uint32_t>(slide_id) * 2654435761u);

  // Header band and footer strip take their values straight from the slide
  // id with coprime steps, so consecutive ids always differ by a large
  // mean pixel deviation (band: >=53 over 1/6 of the frame, strip: >=91
  // over ~1/8) no matter what the rng does.
  const int band_h = h / 6;
  std::uint8_t band = static_cast<std::uint8_t>(30 + (slide_id * 53) % 150);
  for (int y = 0; y < band_h; ++y)
    for (int x = 0; x < w; ++x) f.at(x, y) = band;
  std::uint8_t strip = static_cast<std::uint8_t>((slide_id * 91) % 256);
  for (int y = h - h / 10; y < h; ++y)
    for (int x = 0; x < w; ++x) f.at(x, y) = strip;

  // Sixteen vertical bars, black or background by slide-specific bits.
  std::uint32_t bits = rng();
  const int bar_w = w / 16;
  for (int b = 0; b < 16; ++b) {
    if (!((bits >> b) & 1u)) continue;
    for (int y = band_h + 8; y < h / 2; ++y)
      for (int x = b * bar_w; x < (b + 1) * bar_w - 2 && x < w; ++x)
        f.at(x, y) = 10;
  }

  // Blocky "text" rows in the lower half: hard edges, slide-specific.
  std::uniform_int_distribution<int> block(0, 3);
  for (int row = 0; row < 4; ++row) {
    int y0 = h / 2 + 10 + row * (h / 14);
    int y1 = y0 + h / 20;
    for (int x = 12; x + 6 < w - 12; x += 8) {
      if (block(rng) == 0) continue;
      for (int y = y0; y < y1 && y < h - h / 10; ++y)
        for (int dx = 0; dx < 6; ++dx) f.at(x + dx, y) = 15;
    }
  }
  return f;
}

namespace {

// 5x7 glyphs, one byte per row, low 5 bits used.
const std::uint8_t* glyph_rows(char c) {
  static const std::uint8_t font[][7] = {
      /*A*/ {0x0E, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
      /*B*/ {0x1E, 0x11, 0x11, 0x1E, 0x11, 0x11, 0x1E},
      /*C*/ {0x0E, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0E},
      /*D*/ {0x1E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x1E},
      /*E*/ {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x1F},
      /*F*/ {0x1F, 0x10, 0x10, 0x1E, 0x10, 0x10, 0x10},
      /*G*/ {0x0E, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0F},
      /*H*/ {0x11, 0x11, 0x11, 0x1F, 0x11, 0x11, 0x11},
      /*I*/ {0x0E, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0E},
      /*J*/ {0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0C},
      /*K*/ {0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11},
      /*L*/ {0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1F},
      /*M*/ {0x11, 0x1B, 0x15, 0x15, 0x11, 0x11, 0x11},
      /*N*/ {0x11, 0x19, 0x15, 0x13, 0x11, 0x11, 0x11},
      /*O*/ {0x0E, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},
      /*P*/ {0x1E, 0x11, 0x11, 0x1E, 0x10, 0x10, 0x10},
      /*Q*/ {0x0E, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0D},
      /*R*/ {0x1E, 0x11, 0x11, 0x1E, 0x14, 0x12, 0x11},
      /*S*/ {0x0F, 0x10, 0x10, 0x0E, 0x01, 0x01, 0x1E},
      /*T*/ {0x1F, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04},
      /*U*/ {0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0E},
      /*V*/ {0x11, 0x11, 0x11, 0x11, 0x11, 0x0A, 0x04},
      /*W*/ {0x11, 0x11, 0x11, 0x15, 0x15, 0x1B, 0x11},
      /*X*/ {0x11, 0x0A, 0x04, 0x04, 0x04, 0x0A, 0x11},
      /*Y*/ {0x11, 0x11, 0x0A, 0x04, 0x04, 0x04, 0x04},
      /*Z*/ {0x1F, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1F},
  };
  static const std::uint8_t digits[][7] = {
      /*0*/ {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},
      /*1*/ {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},
      /*2*/ {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},
      /*3*/ {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},
      /*4*/ {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},
      /*5*/ {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},
      /*6*/ {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},
      /*7*/ {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},
      /*8*/ {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},
      /*9*/ {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},
  };
  static const std::uint8_t period[7] = {0, 0, 0, 0, 0, 0x0C, 0x0C};
  static const std::uint8_t hyphen[7] = {0, 0, 0, 0x1F, 0, 0, 0};

  if (c >= 'A' && c <= 'Z') return font[c - 'A'];
  if (c >= '0' && c <= '9') return digits[c - '0'];
  if (c == '.') return period;
  if (c == '-') return hyphen;
  return nullptr;  // treated as blank
}

}  // namespace

void draw_text(FrameBuffer& f, int x, int y, int scale, const std::string& text) {
  int cx = x;
  for (char raw : text) {
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
    const std::uint8_t* rows = glyph_rows(c);
    if (rows) {
      for (int gy = 0; gy < 7; ++gy)
        for (int gx = 0; gx < 5; ++gx) {
          if (!((rows[gy] >> (4 - gx)) & 1)) continue;
          for (int sy = 0; sy < scale; ++sy)
            for (int sx = 0; sx < scale; ++sx) {
              int px = cx + gx * scale + sx;
              int py = y + gy * scale + sy;
              if (px >= 0 && px < f.width && py >= 0 && py < f.height)
                for (int ch = 0; ch < f.channels; ++ch) f.at(px, py, ch) = 10;
            }
        }
    }
    cx += 6 * scale;  // 5px glyph + 1px gap
  }
}

FrameBuffer render_text_slide(const std::vector<std::string>& lines, int w,
                              int h, int scale) {
  FrameBuffer f = constant_frame(w, h, 245);
  int y = 20;
  for (const auto& line : lines) {
    draw_text(f, 20, y, scale, line);
    y += 10 * scale;
  }
  return f;
}

std::vector<FrameBuffer> repeat_frame(const FrameBuffer& frame, int count,
                                      double fps, long first_index) {
  std::vector<FrameBuffer> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    FrameBuffer f = frame;
    f.frame_index = first_index + i;
    f.timestamp_s = static_cast<double>(first_index + i) / fps;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FrameBuffer> slide_stream(const std::vector<FrameBuffer>& slides,
                                      int frames_per_slide, double fps) {
  std::vector<FrameBuffer> out;
  long index = 0;
  for (const auto& slide : slides) {
    for (int i = 0; i < frames_per_slide; ++i) {
      FrameBuffer f = slide;
      f.frame_index = index;
      f.timestamp_s = static_cast<double>(index) / fps;
      out.push_back(std::move(f));
      ++index;
    }
  }
  return out;
}

}  // namespace synthetic
