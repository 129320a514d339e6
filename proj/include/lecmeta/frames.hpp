#pragma once

#include <cstdint>
#include <vector>

namespace lecmeta::frames {

// A decoded raster. Samples are 8-bit, row-major, interleaved when RGB.
// data.size() == width * height * channels always holds for buffers built
// through make_frame or returned by the operations below.
struct FrameBuffer {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 = gray, 3 = RGB
  std::vector<std::uint8_t> data;
  long frame_index = 0;
  double timestamp_s = 0.0;

  std::uint8_t at(int x, int y, int c = 0) const {
    return data[static_cast<size_t>(y) * width * channels +
                static_cast<size_t>(x) * channels + c];
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return data[static_cast<size_t>(y) * width * channels +
                static_cast<size_t>(x) * channels + c];
  }
  size_t sample_count() const { return data.size(); }
};

// Zero-filled frame; throws on non-positive dimensions or channels not in
// {1,3}.
FrameBuffer make_frame(int width, int height, int channels,
                       long frame_index = 0, double timestamp_s = 0.0);

// ITU-R 601 weights (0.299/0.587/0.114), rounded half-up. Gray input comes
// back as an identical copy.
FrameBuffer to_grayscale(const FrameBuffer& f);

// Nearest-neighbor resample to w x h, channels preserved.
FrameBuffer resize_nearest(const FrameBuffer& f, int w, int h);

// Mean absolute per-sample deviation, in [0,255]. Frames must agree in
// width, height and channels.
double mean_abs_diff(const FrameBuffer& a, const FrameBuffer& b);

// Mean gray level in [0,255]; RGB input is converted first.
double brightness(const FrameBuffer& f);

// Sharpness proxy: population variance of the 3x3 Laplacian response
// (center 4, edge neighbors -1, corners 0) over the grayscale image, with
// replicate padding. Higher means sharper.
double blur_index(const FrameBuffer& f);

// Otsu-thresholded 1-channel image, samples in {0,255}. A single-valued
// histogram binarizes to all 255.
FrameBuffer binarize(const FrameBuffer& f);

// Separable Gaussian with kernel radius ceil(3*sigma) and replicate
// padding; dimensions and channels preserved.
FrameBuffer gaussian_blur(const FrameBuffer& f, double sigma);

// 3x3 Sobel gradient magnitude of the grayscale image, clamped to [0,255].
FrameBuffer edge_map(const FrameBuffer& f);

}  // namespace lecmeta::frames
