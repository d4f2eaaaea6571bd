#ifndef HSICUBE_FRAME_HPP
#define HSICUBE_FRAME_HPP

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsicube/error.hpp"

namespace hsicube {

/// Row-major 2-D grid. Rows are `height`, columns are `width`.
template <typename T>
class Frame {
 public:
  using value_type = T;

  Frame() = default;
  Frame(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), values_(width * height, fill) {}
  Frame(std::size_t width, std::size_t height, std::vector<T> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != width_ * height_) {
      throw Error(ErrorKind::shape, "frame buffer holds " + std::to_string(values_.size()) +
                                        " samples, expected " + std::to_string(width_ * height_));
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  std::span<T> row(std::size_t r) { return {values_.data() + r * width_, width_}; }
  std::span<const T> row(std::size_t r) const { return {values_.data() + r * width_, width_}; }

  bool same_shape(std::size_t width, std::size_t height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Frame<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> values_;
};

using RealFrame = Frame<float>;

}  // namespace hsicube

#endif  // HSICUBE_FRAME_HPP
