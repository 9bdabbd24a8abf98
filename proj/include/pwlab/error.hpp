#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pwlab/grid.hpp"

namespace pwlab {

enum class ErrorKind {
  InvalidArgument,
  NodeProximity,
  OutOfSpan,
  NonFinite,
  PacketTruncated,
  SupportWrap,
  DegenerateDensity,
  DegenerateEnsemble,
  ConfigInvalid,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Library error. Trajectory failures carry the time and configuration point
/// at which they happened.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  Error(ErrorKind kind, const std::string& message, double time,
        const Point& where, int dim);

  ErrorKind kind() const { return kind_; }
  const std::optional<double>& time() const { return time_; }
  const std::optional<Point>& location() const { return location_; }
  int dim() const { return dim_; }

 private:
  ErrorKind kind_;
  std::optional<double> time_;
  std::optional<Point> location_;
  int dim_ = 0;
};

}  // namespace pwlab
