#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semirecon/time_grid.hpp"

namespace semirecon {

// Per-mode time series a_k(t_j), optionally with derivatives a'_k(t_j).
// Mode positions are 0-based and follow EigenBasis ordering.
class CoefficientSeries {
 public:
  CoefficientSeries(std::size_t modes, TimeGrid time)
      : modes_(modes), time_(time), values_(modes * time.size(), 0.0) {}

  std::size_t modes() const { return modes_; }
  const TimeGrid& time() const { return time_; }

  double& value(std::size_t k, int j) { return values_[offset(k) + static_cast<std::size_t>(j)]; }
  double value(std::size_t k, int j) const {
    return values_[offset(k) + static_cast<std::size_t>(j)];
  }
  std::span<const double> series(std::size_t k) const { return {values_.data() + offset(k), time_.size()}; }
  std::span<double> series(std::size_t k) { return {values_.data() + offset(k), time_.size()}; }

  bool has_derivatives() const { return !derivatives_.empty(); }
  double derivative(std::size_t k, int j) const {
    return derivatives_[offset(k) + static_cast<std::size_t>(j)];
  }
  std::span<const double> derivative_series(std::size_t k) const {
    return {derivatives_.data() + offset(k), time_.size()};
  }
  void set_derivatives(std::vector<double> d) { derivatives_ = std::move(d); }

 private:
  std::size_t offset(std::size_t k) const { return k * time_.size(); }

  std::size_t modes_;
  TimeGrid time_;
  std::vector<double> values_;
  std::vector<double> derivatives_;
};

}  // namespace semirecon
