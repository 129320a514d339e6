#include "lecmeta/frames.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include "lecmeta/errors.hpp"

namespace lecmeta::frames {

namespace {

std::uint8_t clamp_u8(double v) {
  if (v <= 0.0) return 0;
  if (v >= 255.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v));
}

int clamp_coord(int v, int hi) { return v < 0 ? 0 : (v >= hi ? hi - 1 : v); }

void require_dims_match(const FrameBuffer& a, const FrameBuffer& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels)
    throw error("frame dimension mismatch: " + std::to_string(a.width) + "x" +
                std::to_string(a.height) + "c" + std::to_string(a.channels) +
                " vs " + std::to_string(b.width) + "x" +
                std::to_string(b.height) + "c" + std::to_string(b.channels));
}

}  // namespace

FrameBuffer make_frame(int width, int height, int channels, long frame_index,
                       double timestamp_s) {
  if (width <= 0 || height <= 0)
    throw error("frame dimensions must be positive");
  if (channels != 1 && channels != 3)
    throw error("unsupported channel count: " + std::to_string(channels));
  FrameBuffer f;
  f.width = width;
  f.height = height;
  f.channels = channels;
  f.frame_index = frame_index;
  f.timestamp_s = timestamp_s;
  f.data.assign(static_cast<size_t>(width) * height * channels, 0);
  return f;
}

FrameBuffer to_grayscale(const FrameBuffer& f) {
  if (f.channels == 1) return f;
  if (f.channels != 3)
    throw error("unsupported channel count: " + std::to_string(f.channels));
  FrameBuffer out = make_frame(f.width, f.height, 1, f.frame_index, f.timestamp_s);
  const std::uint8_t* src = f.data.data();
  std::uint8_t* dst = out.data.data();
  size_t n = static_cast<size_t>(f.width) * f.height;
  for (size_t i = 0; i < n; ++i) {
    double g = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>(std::floor(g + 0.5));  // half-up
  }
  return out;
}

FrameBuffer resize_nearest(const FrameBuffer& f, int w, int h) {
  if (w <= 0 || h <= 0) throw error("resize target dimensions must be positive");
  if (w == f.width && h == f.height) return f;
  FrameBuffer out = make_frame(w, h, f.channels, f.frame_index, f.timestamp_s);
  for (int y = 0; y < h; ++y) {
    int sy = static_cast<int>(static_cast<long>(y) * f.height / h);
    for (int x = 0; x < w; ++x) {
      int sx = static_cast<int>(static_cast<long>(x) * f.width / w);
      for (int c = 0; c < f.channels; ++c) out.at(x, y, c) = f.at(sx, sy, c);
    }
  }
  return out;
}

double mean_abs_diff(const FrameBuffer& a, const FrameBuffer& b) {
  require_dims_match(a, b);
  if (a.data.empty()) return 0.0;
  unsigned long long sum = 0;
  for (size_t i = 0; i < a.data.size(); ++i)
    sum += static_cast<unsigned>(std::abs(int(a.data[i]) - int(b.data[i])));
  return static_cast<double>(sum) / static_cast<double>(a.data.size());
}

double brightness(const FrameBuffer& f) {
  const FrameBuffer gray = to_grayscale(f);
  if (gray.data.empty()) return 0.0;
  unsigned long long sum = 0;
  for (std::uint8_t v : gray.data) sum += v;
  return static_cast<double>(sum) / static_cast<double>(gray.data.size());
}

double blur_index(const FrameBuffer& f) {
  const FrameBuffer g = to_grayscale(f);
  const int w = g.width, h = g.height;
  const size_t n = static_cast<size_t>(w) * h;
  double sum = 0.0, sum_sq = 0.0;
  for (int y = 0; y < h; ++y) {
    int yu = clamp_coord(y - 1, h), yd = clamp_coord(y + 1, h);
    for (int x = 0; x < w; ++x) {
      int xl = clamp_coord(x - 1, w), xr = clamp_coord(x + 1, w);
      int lap = 4 * g.at(x, y) - g.at(xl, y) - g.at(xr, y) - g.at(x, yu) -
                g.at(x, yd);
      sum += lap;
      sum_sq += static_cast<double>(lap) * lap;
    }
  }
  double mean = sum / static_cast<double>(n);
  return sum_sq / static_cast<double>(n) - mean * mean;
}

FrameBuffer binarize(const FrameBuffer& f) {
  const FrameBuffer g = to_grayscale(f);
  std::array<long long, 256> hist{};
  for (std::uint8_t v : g.data) ++hist[v];

  int lo = 0, hi = 255;
  while (lo < 256 && hist[lo] == 0) ++lo;
  while (hi >= 0 && hist[hi] == 0) --hi;

  FrameBuffer out = g;
  if (lo >= hi) {  // single-valued histogram
    std::fill(out.data.begin(), out.data.end(), 255);
    return out;
  }

  // Otsu: scan all cut points, keep the first threshold maximizing the
  // between-class variance.
  const double total = static_cast<double>(g.data.size());
  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

  double best_sigma = -1.0;
  int best_t = lo;
  double w0 = 0.0, sum0 = 0.0;
  for (int t = 0; t < 255; ++t) {
    w0 += hist[t];
    if (w0 == 0) continue;
    double w1 = total - w0;
    if (w1 == 0) break;
    sum0 += static_cast<double>(t) * hist[t];
    double mu0 = sum0 / w0;
    double mu1 = (sum_all - sum0) / w1;
    double sigma = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (sigma > best_sigma) {
      best_sigma = sigma;
      best_t = t;
    }
  }
  for (auto& v : out.data) v = v > best_t ? 255 : 0;
  return out;
}

FrameBuffer gaussian_blur(const FrameBuffer& f, double sigma) {
  if (!(sigma > 0.0)) throw error("gaussian_blur requires sigma > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    ksum += kernel[i + radius];
  }
  for (double& k : kernel) k /= ksum;

  const int w = f.width, h = f.height, ch = f.channels;
  // Horizontal pass into a double buffer, vertical pass back to 8-bit.
  std::vector<double> tmp(f.data.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += kernel[i + radius] * f.at(clamp_coord(x + i, w), y, c);
        tmp[(static_cast<size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  FrameBuffer out = make_frame(w, h, ch, f.frame_index, f.timestamp_s);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          int yy = clamp_coord(y + i, h);
          acc += kernel[i + radius] * tmp[(static_cast<size_t>(yy) * w + x) * ch + c];
        }
        out.at(x, y, c) = clamp_u8(acc);
      }
    }
  }
  return out;
}

FrameBuffer edge_map(const FrameBuffer& f) {
  const FrameBuffer g = to_grayscale(f);
  const int w = g.width, h = g.height;
  FrameBuffer out = make_frame(w, h, 1, f.frame_index, f.timestamp_s);
  for (int y = 0; y < h; ++y) {
    int yu = clamp_coord(y - 1, h), yd = clamp_coord(y + 1, h);
    for (int x = 0; x < w; ++x) {
      int xl = clamp_coord(x - 1, w), xr = clamp_coord(x + 1, w);
      int p00 = g.at(xl, yu), p10 = g.at(x, yu), p20 = g.at(xr, yu);
      int p01 = g.at(xl, y), p21 = g.at(xr, y);
      int p02 = g.at(xl, yd), p12 = g.at(x, yd), p22 = g.at(xr, yd);
      int gx = (p20 + 2 * p21 + p22) - (p00 + 2 * p01 + p02);
      int gy = (p02 + 2 * p12 + p22) - (p00 + 2 * p10 + p20);
      out.at(x, y) = clamp_u8(std::sqrt(double(gx) * gx + double(gy) * gy));
    }
  }
  return out;
}

}  // namespace lecmeta::frames
