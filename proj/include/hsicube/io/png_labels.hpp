#ifndef HSICUBE_IO_PNG_LABELS_HPP
#define HSICUBE_IO_PNG_LABELS_HPP

#include <png.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "hsicube/error.hpp"
#include "hsicube/metrics.hpp"

// Label maps travel as 8-bit single-channel PNG; the pixel value is the class id.

namespace hsicube::io {

inline LabelMap read_label_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorKind::io, path.string() + ": " + image.message);
  }
  if (PNG_IMAGE_SAMPLE_CHANNELS(image.format) != 1 || PNG_IMAGE_SAMPLE_COMPONENT_SIZE(image.format) != 1) {
    png_image_free(&image);
    throw Error(ErrorKind::io, path.string() + ": label maps must be 8-bit single-channel");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> labels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, labels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorKind::io, path.string() + ": " + msg);
  }
  return {image.width, image.height, std::move(labels)};
}

inline void write_label_png(const std::filesystem::path& path, const LabelMap& map) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(map.width());
  image.height = static_cast<png_uint_32>(map.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, map.labels().data(), 0, nullptr)) {
    throw Error(ErrorKind::io, path.string() + ": " + image.message);
  }
}

}  // namespace hsicube::io

#endif  // HSICUBE_IO_PNG_LABELS_HPP
