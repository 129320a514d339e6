#include "lecmeta/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "lecmeta/errors.hpp"

namespace lecmeta::png_io {

namespace {

struct FileCloser {
  void operator()(FILE* f) const {
    if (f) fclose(f);
  }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

}  // namespace

void write_png(const std::string& path, const frames::FrameBuffer& f) {
  if (f.channels != 1 && f.channels != 3)
    throw io_error("write_png: unsupported channel count");
  FilePtr fp(fopen(path.c_str(), "wb"));
  if (!fp) throw io_error("cannot open for writing: " + path);

  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw io_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw io_error("libpng failed writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, f.width, f.height, 8,
               f.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(f.height);
  for (int y = 0; y < f.height; ++y)
    rows[y] = const_cast<png_bytep>(f.data.data() +
                                    static_cast<size_t>(y) * f.width * f.channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

frames::FrameBuffer read_png(const std::string& path) {
  FilePtr fp(fopen(path.c_str(), "rb"));
  if (!fp) throw io_error("cannot open: " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw io_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw io_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("libpng failed reading " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_packing(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = static_cast<int>(png_get_channels(png, info));
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("read_png: unsupported channel count after expansion");
  }

  frames::FrameBuffer f = frames::make_frame(width, height, channels);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = f.data.data() + static_cast<size_t>(y) * width * channels;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return f;
}

}  // namespace lecmeta::png_io
