#pragma once

#include <cmath>
#include <optional>

namespace cotrans {

/// First-order low-pass y' = w (x - y), discretised exactly for a held input.
/// The first sample initialises the output.
template <typename Value, typename Scalar = double>
class LowPass {
 public:
  explicit LowPass(Scalar cutoff) : cutoff_(cutoff) {}

  const Value& update(const Value& x, Scalar dt) {
    if (!y_) {
      y_ = x;
    } else {
      const Scalar a = Scalar(1) - std::exp(-cutoff_ * dt);
      y_ = Value(*y_ + a * (x - *y_));
    }
    return *y_;
  }

  bool initialized() const { return y_.has_value(); }
  const Value& value() const { return *y_; }
  Scalar cutoff() const { return cutoff_; }

 private:
  Scalar cutoff_;
  std::optional<Value> y_;
};

/// Backward difference of a low-passed signal. Returns zero rate on the
/// first sample.
template <typename Value, typename Scalar = double>
class FilteredDifferentiator {
 public:
  explicit FilteredDifferentiator(Scalar cutoff, Value zero) : filter_(cutoff), rate_(zero) {}

  const Value& update(const Value& x, Scalar dt) {
    if (!filter_.initialized()) {
      filter_.update(x, dt);
      return rate_;
    }
    const Value previous = filter_.value();
    rate_ = Value((filter_.update(x, dt) - previous) / dt);
    return rate_;
  }

  const Value& rate() const { return rate_; }

 private:
  LowPass<Value, Scalar> filter_;
  Value rate_;
};

}  // namespace cotrans
