#ifndef HSICUBE_METRICS_HPP
#define HSICUBE_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hsicube/error.hpp"
#include "hsicube/frame.hpp"

namespace hsicube {

inline constexpr std::uint8_t kUnlabeled = 0;
inline constexpr std::uint8_t kMaxClassId = 10;

/// Per-pixel class ids; 0 marks pixels the annotator left unlabeled.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(std::size_t width, std::size_t height, std::vector<std::uint8_t> labels)
      : grid_(width, height, std::move(labels)) {
    for (std::uint8_t v : grid_.values()) {
      if (v > kMaxClassId) {
        throw Error(ErrorKind::domain, "label " + std::to_string(v) + " exceeds class id 10");
      }
    }
  }

  std::size_t width() const noexcept { return grid_.width(); }
  std::size_t height() const noexcept { return grid_.height(); }
  std::uint8_t operator()(std::size_t row, std::size_t col) const { return grid_(row, col); }
  std::span<const std::uint8_t> labels() const noexcept { return grid_.values(); }

 private:
  Frame<std::uint8_t> grid_;
};

/// counts(g, p): pixels with ground truth class g predicted as class p, for
/// class ids 1..n_classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes = 0) : n_(n_classes), counts_(n_classes * n_classes, 0) {}

  std::size_t n_classes() const noexcept { return n_; }
  std::uint64_t& counts(std::size_t gt, std::size_t pred) { return counts_[(gt - 1) * n_ + (pred - 1)]; }
  std::uint64_t counts(std::size_t gt, std::size_t pred) const { return counts_[(gt - 1) * n_ + (pred - 1)]; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto v : counts_) t += v;
    return t;
  }
  std::uint64_t trace() const {
    std::uint64_t t = 0;
    for (std::size_t c = 1; c <= n_; ++c) t += counts(c, c);
    return t;
  }
  std::uint64_t row_sum(std::size_t gt) const {
    std::uint64_t t = 0;
    for (std::size_t p = 1; p <= n_; ++p) t += counts(gt, p);
    return t;
  }
  std::uint64_t col_sum(std::size_t pred) const {
    std::uint64_t t = 0;
    for (std::size_t g = 1; g <= n_; ++g) t += counts(g, pred);
    return t;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
    if (other.n_ != n_) throw Error(ErrorKind::shape, "confusion matrices differ in class count");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> counts_;
};

/// Accumulates over pixels whose ground truth is labeled. A labeled pixel
/// must carry a prediction in 1..n_classes.
inline ConfusionMatrix confusion(const LabelMap& gt, const LabelMap& pred, std::size_t n_classes) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorKind::shape, "ground truth and prediction differ in size");
  }
  if (n_classes < 1 || n_classes > kMaxClassId) throw Error(ErrorKind::domain, "n_classes must be in 1..10");
  ConfusionMatrix m(n_classes);
  const auto g = gt.labels();
  const auto p = pred.labels();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == kUnlabeled) continue;
    if (g[i] > n_classes) {
      throw Error(ErrorKind::domain, "ground-truth class " + std::to_string(g[i]) + " exceeds n_classes");
    }
    if (p[i] == kUnlabeled || p[i] > n_classes) {
      throw Error(ErrorKind::domain, "prediction " + std::to_string(p[i]) + " at labeled pixel " +
                                         std::to_string(i) + " is not a class in 1..n_classes");
    }
    ++m.counts(g[i], p[i]);
  }
  return m;
}

/// IoU per class (index 0 is class 1). Classes absent from both ground truth
/// and prediction have no value.
inline std::vector<std::optional<double>> iou_per_class(const ConfusionMatrix& m) {
  std::vector<std::optional<double>> iou(m.n_classes());
  for (std::size_t c = 1; c <= m.n_classes(); ++c) {
    const std::uint64_t tp = m.counts(c, c);
    const std::uint64_t uni = m.row_sum(c) + m.col_sum(c) - tp;
    if (uni > 0) iou[c - 1] = static_cast<double>(tp) / static_cast<double>(uni);
  }
  return iou;
}

struct MetricsReport {
  std::vector<std::optional<double>> iou;
  double global = 0.0;
  double weighted = 0.0;
  std::vector<double> support;
};

/// global: labeled-pixel accuracy. weighted: ground-truth-support-weighted
/// mean IoU over present classes.
inline MetricsReport aggregate(const ConfusionMatrix& m) {
  const std::uint64_t total = m.total();
  if (total == 0) throw Error(ErrorKind::evaluation, "no labeled pixels to evaluate");
  MetricsReport r;
  r.iou = iou_per_class(m);
  r.support.resize(m.n_classes());
  r.global = static_cast<double>(m.trace()) / static_cast<double>(total);
  double num = 0.0, den = 0.0;
  for (std::size_t c = 1; c <= m.n_classes(); ++c) {
    const auto s = static_cast<double>(m.row_sum(c));
    r.support[c - 1] = s;
    if (r.iou[c - 1]) {
      num += s * *r.iou[c - 1];
      den += s;
    }
  }
  r.weighted = den > 0.0 ? num / den : 0.0;
  return r;
}

/// Fold average: each field's unweighted mean, with per-class IoU averaged
/// over the folds where the class is present.
inline MetricsReport kfold_mean(const std::vector<MetricsReport>& folds) {
  if (folds.empty()) throw Error(ErrorKind::domain, "k-fold mean of zero reports");
  const std::size_t n = folds.front().iou.size();
  MetricsReport mean;
  mean.iou.resize(n);
  mean.support.assign(n, 0.0);
  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> present(n, 0);
  for (const auto& f : folds) {
    if (f.iou.size() != n || f.support.size() != n) {
      throw Error(ErrorKind::domain, "fold reports have inconsistent class sets");
    }
    mean.global += f.global;
    mean.weighted += f.weighted;
    for (std::size_t c = 0; c < n; ++c) {
      mean.support[c] += f.support[c];
      if (f.iou[c]) {
        sum[c] += *f.iou[c];
        ++present[c];
      }
    }
  }
  const auto k = static_cast<double>(folds.size());
  mean.global /= k;
  mean.weighted /= k;
  for (std::size_t c = 0; c < n; ++c) {
    mean.support[c] /= k;
    if (present[c] > 0) mean.iou[c] = sum[c] / static_cast<double>(present[c]);
  }
  return mean;
}

/// Default column names: the 5- and 6-class experiment groupings, the ten
/// dataset classes, or class_<id>.
inline std::vector<std::string> default_class_names(std::size_t n_classes) {
  if (n_classes == 5) return {"road", "road_marks", "vegetation", "sky", "others"};
  if (n_classes == 6) return {"road", "road_marks", "vegetation", "extra", "sky", "others"};
  if (n_classes == 10) {
    return {"road",     "road_marks", "vegetation", "painted_metal",   "sky",
            "concrete", "pedestrian", "water",      "unpainted_metal", "glass"};
  }
  std::vector<std::string> names;
  for (std::size_t c = 1; c <= n_classes; ++c) names.push_back("class_" + std::to_string(c));
  return names;
}

inline std::string metrics_csv_header(const std::vector<std::string>& class_names) {
  std::string h;
  for (const auto& n : class_names) h += n + ',';
  return h + "global,weighted";
}

/// One CSV row, values in percent with two decimals; absent classes are NA.
inline std::string metrics_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  char buf[32];
  for (const auto& v : r.iou) {
    if (v) {
      std::snprintf(buf, sizeof buf, "%.2f", 100.0 * *v);
      os << buf << ',';
    } else {
      os << "NA,";
    }
  }
  std::snprintf(buf, sizeof buf, "%.2f,%.2f", 100.0 * r.global, 100.0 * r.weighted);
  os << buf;
  return os.str();
}

/// Remaps fine class ids through `mapping` (index = fine id, value = group id;
/// 0 stays unlabeled).
inline LabelMap apply_grouping(const LabelMap& map, const std::vector<std::uint8_t>& mapping) {
  std::vector<std::uint8_t> out(map.labels().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint8_t v = map.labels()[i];
    if (v >= mapping.size()) throw Error(ErrorKind::configuration, "class " + std::to_string(v) + " has no group");
    out[i] = mapping[v];
  }
  return {map.width(), map.height(), std::move(out)};
}

}  // namespace hsicube

#endif  // HSICUBE_METRICS_HPP
