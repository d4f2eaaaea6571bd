#ifndef HSICUBE_ATTENTION_HPP
#define HSICUBE_ATTENTION_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/error.hpp"

// Efficient Channel Attention: global average pooling, a short 1-D
// convolution across the channel axis and a sigmoid gate. There is no
// channel reduction, so the gate has exactly one entry per channel.

namespace hsicube::eca {

/// Nearest odd integer to log2(C)/gamma + b/gamma (ties go down), at least 1.
inline std::size_t kernel_size(std::size_t channels, double gamma = 2.0, double b = 1.0) {
  if (channels < 1) throw Error(ErrorKind::domain, "channel count must be >= 1");
  const double t = std::log2(static_cast<double>(channels)) / gamma + b / gamma;
  if (t <= 1.0) return 1;
  const double lower = 2.0 * std::floor((t - 1.0) / 2.0) + 1.0;
  const double upper = lower + 2.0;
  const double k = (t - lower <= upper - t) ? lower : upper;
  return static_cast<std::size_t>(k);
}

/// C x H x W activations, channel-major.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width, float fill = 0.0f)
      : channels_(channels), height_(height), width_(width), values_(channels * height * width, fill) {
    if (channels == 0 || height == 0 || width == 0) {
      throw Error(ErrorKind::shape, "feature map dimensions must be positive");
    }
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }

  float& operator()(std::size_t c, std::size_t h, std::size_t w) {
    return values_[(c * height_ + h) * width_ + w];
  }
  float operator()(std::size_t c, std::size_t h, std::size_t w) const {
    return values_[(c * height_ + h) * width_ + w];
  }
  std::vector<float>& values() noexcept { return values_; }
  const std::vector<float>& values() const noexcept { return values_; }

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<float> values_;
};

class EcaBlock {
 public:
  EcaBlock(std::size_t channels, std::vector<double> kernel)
      : channels_(channels), kernel_(std::move(kernel)) {
    const std::size_t k = kernel_.size();
    if (k == 0 || k % 2 == 0) throw Error(ErrorKind::domain, "ECA kernel size must be odd and >= 1");
    if (k > channels_) throw Error(ErrorKind::domain, "ECA kernel longer than the channel count");
  }

  /// Block with the adaptive kernel size and N(0, 1/k) weights from `seed`.
  static EcaBlock seeded(std::size_t channels, std::uint64_t seed, double gamma = 2.0, double b = 1.0) {
    const std::size_t k = eca::kernel_size(channels, gamma, b);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(k)));
    std::vector<double> kernel(k);
    for (double& w : kernel) w = dist(rng);
    return {channels, std::move(kernel)};
  }

  std::size_t channels() const noexcept { return channels_; }
  std::size_t kernel_size() const noexcept { return kernel_.size(); }
  const std::vector<double>& kernel() const noexcept { return kernel_; }

 private:
  std::size_t channels_;
  std::vector<double> kernel_;
};

inline std::vector<double> global_avg_pool(const FeatureMap& x) {
  const std::size_t plane = x.height() * x.width();
  std::vector<double> g(x.channels(), 0.0);
  const float* v = x.values().data();
  for (std::size_t c = 0; c < x.channels(); ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) sum += v[c * plane + i];
    g[c] = sum / static_cast<double>(plane);
  }
  return g;
}

/// sigmoid(conv1d(pooled, kernel)) with (k-1)/2 zeros on each side.
inline std::vector<double> attention_weights(const EcaBlock& block, const std::vector<double>& pooled) {
  const auto& kernel = block.kernel();
  const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(pooled.size());
  std::vector<double> a(pooled.size());
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    double y = 0.0;
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      const std::ptrdiff_t src = c + j;
      if (src >= 0 && src < n) y += kernel[static_cast<std::size_t>(j + half)] * pooled[static_cast<std::size_t>(src)];
    }
    a[static_cast<std::size_t>(c)] = 1.0 / (1.0 + std::exp(-y));
  }
  return a;
}

inline FeatureMap forward(const EcaBlock& block, const FeatureMap& x) {
  if (block.channels() != x.channels()) {
    throw Error(ErrorKind::shape, "ECA block expects " + std::to_string(block.channels()) +
                                      " channels, got " + std::to_string(x.channels()));
  }
  const auto a = attention_weights(block, global_avg_pool(x));
  FeatureMap out = x;
  const std::size_t plane = x.height() * x.width();
  float* v = out.values().data();
  for (std::size_t c = 0; c < x.channels(); ++c) {
    const auto gate = static_cast<float>(a[c]);
    for (std::size_t i = 0; i < plane; ++i) v[c * plane + i] *= gate;
  }
  return out;
}

enum class Insertion { pre_conv1, pre_conv2 };

inline const char* to_string(Insertion p) { return p == Insertion::pre_conv1 ? "pre_conv1" : "pre_conv2"; }

struct InsertionPoint {
  Insertion position;
  std::size_t kernel_size;
};

struct StageDescriptor {
  std::string name;
  std::size_t channels;
  std::vector<InsertionPoint> blocks;  // always pre_conv1, pre_conv2
};

/// Where the attention blocks sit in the U-Net: two per encoder/decoder stage,
/// one ahead of each convolution.
struct AttentionManifest {
  std::vector<StageDescriptor> stages;

  std::size_t block_count() const {
    std::size_t n = 0;
    for (const auto& s : stages) n += s.blocks.size();
    return n;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "attention-unet\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& s = stages[i];
      const bool last_stage = i + 1 == stages.size();
      os << (last_stage ? "`-- " : "|-- ") << s.name << " (channels=" << s.channels << ")\n";
      for (std::size_t j = 0; j < s.blocks.size(); ++j) {
        os << (last_stage ? "    " : "|   ") << (j + 1 == s.blocks.size() ? "`-- " : "|-- ") << "eca "
           << to_string(s.blocks[j].position) << " k=" << s.blocks[j].kernel_size << '\n';
      }
    }
    return os.str();
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "stage,position,channels,kernel_size\n";
    for (const auto& s : stages) {
      for (const auto& b : s.blocks) {
        os << s.name << ',' << to_string(b.position) << ',' << s.channels << ',' << b.kernel_size << '\n';
      }
    }
    return os.str();
  }
};

inline AttentionManifest build_attention_manifest(const std::vector<std::size_t>& stage_channels,
                                                  double gamma = 2.0, double b = 1.0) {
  if (stage_channels.empty()) throw Error(ErrorKind::domain, "manifest needs at least one stage");
  AttentionManifest m;
  for (std::size_t i = 0; i < stage_channels.size(); ++i) {
    const std::size_t c = stage_channels[i];
    const std::size_t k = kernel_size(c, gamma, b);
    m.stages.push_back({"stage" + std::to_string(i), c, {{Insertion::pre_conv1, k}, {Insertion::pre_conv2, k}}});
  }
  return m;
}

}  // namespace hsicube::eca

#endif  // HSICUBE_ATTENTION_HPP
