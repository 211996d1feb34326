#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace riskq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Diagnostic attached to a value that was classified as divergent (or that
// needed edge truncation to be computed at all).
struct DivergenceNote {
  int truncation_level = 0;   // deepest 4^-k truncation level probed
  double growth_estimate = 0; // last partial value or increment ratio seen
  std::string what;
};

// A finite nonnegative real or +infinity.  The codomain of the integral
// transforms in this library: finite values carry no divergence note.
class ExtendedValue {
 public:
  ExtendedValue() : value_(0) {}
  /*implicit*/ ExtendedValue(double v) : value_(v) {}
  static ExtendedValue infinite(DivergenceNote note, double sign = 1.0) {
    ExtendedValue e(sign < 0 ? -kInf : kInf);
    e.note_ = std::move(note);
    return e;
  }

  bool isFinite() const { return std::isfinite(value_); }
  bool isInf() const { return std::isinf(value_); }
  // Finite value; +inf as a double when divergent.
  double value() const { return value_; }
  const std::optional<DivergenceNote>& note() const { return note_; }

 private:
  double value_;
  std::optional<DivergenceNote> note_;
};

}  // namespace riskq
