#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <png.h>

#include "synthcolon/errors.hpp"
#include "synthcolon/image.hpp"

namespace synthcolon::png {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) {
      std::fclose(f);
    }
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] inline void on_error(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) {
    *text = msg;
  }
  png_longjmp(png, 1);
}

inline void on_warning(png_structp, png_const_charp) {}

// Writes rows of `bytes_per_row` bytes; 16-bit samples are passed big-endian.
inline void write_rows(const std::filesystem::path& path, std::size_t width, std::size_t height, int color_type,
                       int bit_depth, const std::vector<const std::uint8_t*>& rows) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw WriteError(path, "cannot open for writing");
  }
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  if (!png) {
    throw WriteError(path, "png_create_write_struct failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw WriteError(path, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw WriteError(path, message);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto* row : rows) {
    png_write_row(png, row);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) {
    throw WriteError(path, "flush failed");
  }
}

struct Decoded {
  std::size_t width{0};
  std::size_t height{0};
  int channels{0};
  int bit_depth{0};
  std::vector<std::uint8_t> bytes;  // rows packed, 16-bit big-endian
};

// Decodes any PNG. With `to_gray8` the result is 8-bit single channel
// (colour is converted, alpha dropped, 16-bit stripped).
inline Decoded decode(const std::filesystem::path& path, bool to_gray8) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw ReadError(path, "cannot open file");
  }
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, file.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw ReadError(path, "not a PNG file");
  }
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  if (!png) {
    throw ReadError(path, "png_create_read_struct failed");
  }
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw ReadError(path, "png_create_info_struct failed");
  }
  // Declared before setjmp so a longjmp never skips their destructors.
  Decoded out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ReadError(path, "corrupt PNG: " + message);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(png);
  }
  if (to_gray8) {
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (color_type & PNG_COLOR_MASK_COLOR) {
      png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    }
  }
  png_read_update_info(png, info);

  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.channels = png_get_channels(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.bytes.resize(stride * out.height);
  rows.resize(out.height);
  for (std::size_t y = 0; y < out.height; ++y) {
    rows[y] = out.bytes.data() + y * stride;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace detail

inline void write_rgb(const std::filesystem::path& path, const ColorImage& image) {
  std::vector<const std::uint8_t*> rows(image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    rows[y] = image.row(y).data()->data();
  }
  detail::write_rows(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, rows);
}

inline void write_gray8(const std::filesystem::path& path, const GrayImage& image) {
  std::vector<const std::uint8_t*> rows(image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    rows[y] = image.row(y).data();
  }
  detail::write_rows(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 8, rows);
}

inline void write_gray16(const std::filesystem::path& path, const Gray16Image& image) {
  std::vector<std::uint8_t> be(image.size() * 2);
  for (std::size_t i = 0; i < image.size(); ++i) {
    const std::uint16_t v = image.pixels()[i];
    be[2 * i] = static_cast<std::uint8_t>(v >> 8);
    be[2 * i + 1] = static_cast<std::uint8_t>(v & 0xFF);
  }
  std::vector<const std::uint8_t*> rows(image.height());
  for (std::size_t y = 0; y < image.height(); ++y) {
    rows[y] = be.data() + y * image.width() * 2;
  }
  detail::write_rows(path, image.width(), image.height(), PNG_COLOR_TYPE_GRAY, 16, rows);
}

inline ColorImage read_rgb(const std::filesystem::path& path) {
  auto d = detail::decode(path, false);
  if (d.bit_depth != 8 || d.channels != 3) {
    throw ReadError(path, "expected 8-bit RGB PNG, got " + std::to_string(d.channels) + " channel(s) at " +
                              std::to_string(d.bit_depth) + " bits");
  }
  ColorImage img(d.width, d.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels()[i] = {d.bytes[3 * i], d.bytes[3 * i + 1], d.bytes[3 * i + 2]};
  }
  return img;
}

/// Any PNG, converted to 8-bit grayscale.
inline GrayImage read_gray8(const std::filesystem::path& path) {
  auto d = detail::decode(path, true);
  GrayImage img(d.width, d.height);
  std::copy(d.bytes.begin(), d.bytes.end(), img.pixels().begin());
  return img;
}

inline Gray16Image read_gray16(const std::filesystem::path& path) {
  auto d = detail::decode(path, false);
  if (d.bit_depth != 16 || d.channels != 1) {
    throw ReadError(path, "expected 16-bit grayscale PNG");
  }
  Gray16Image img(d.width, d.height);
  for (std::size_t i = 0; i < img.size(); ++i) {
    img.pixels()[i] = static_cast<std::uint16_t>((d.bytes[2 * i] << 8) | d.bytes[2 * i + 1]);
  }
  return img;
}

}  // namespace synthcolon::png
