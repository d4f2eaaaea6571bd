#ifndef HSICUBE_ERROR_HPP
#define HSICUBE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hsicube {

enum class ErrorKind {
  domain,
  shape,
  alignment,
  bounds,
  calibration,
  configuration,
  estimation,
  statistics,
  evaluation,
  schema,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain error";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::alignment: return "alignment error";
    case ErrorKind::bounds: return "bounds error";
    case ErrorKind::calibration: return "calibration error";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::estimation: return "estimation error";
    case ErrorKind::statistics: return "statistics error";
    case ErrorKind::evaluation: return "evaluation error";
    case ErrorKind::schema: return "schema error";
    case ErrorKind::io: return "I/O error";
  }
  return "error";
}

/// Every failure raised by the library. `stage()` is non-empty when the error
/// surfaced inside process_frame and names the pipeline stage that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string stage = {})
      : std::runtime_error(compose(kind, message, stage)),
        kind_(kind),
        detail_(message),
        stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const { return Error(kind_, detail_, std::move(stage)); }

 private:
  static std::string compose(ErrorKind kind, const std::string& message, const std::string& stage) {
    std::string out;
    if (!stage.empty()) out += "[" + stage + "] ";
    out += std::string(to_string(kind)) + ": " + message;
    return out;
  }

  ErrorKind kind_;
  std::string detail_;
  std::string stage_;
};

}  // namespace hsicube

#endif  // HSICUBE_ERROR_HPP
