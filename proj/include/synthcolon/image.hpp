#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace synthcolon {

/// Row-major image buffer.
template <typename Pixel>
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, Pixel fill = Pixel{})
      : width_(width), height_(height), pixels_(width * height, fill) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  Pixel& operator()(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  const Pixel& operator()(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  std::span<Pixel> row(std::size_t y) { return {pixels_.data() + y * width_, width_}; }
  std::span<const Pixel> row(std::size_t y) const { return {pixels_.data() + y * width_, width_}; }

  std::span<Pixel> pixels() noexcept { return pixels_; }
  std::span<const Pixel> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_{0};
  std::size_t height_{0};
  std::vector<Pixel> pixels_;
};

using Rgb8 = std::array<std::uint8_t, 3>;
using ColorImage = Image<Rgb8>;
using GrayImage = Image<std::uint8_t>;
using Gray16Image = Image<std::uint16_t>;
/// Binary mask; 1 marks polyp pixels.
using MaskImage = Image<std::uint8_t>;
using DepthImage = Image<float>;

}  // namespace synthcolon
