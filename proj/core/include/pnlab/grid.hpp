// Uniform periodic grids and sampled fields, the substrate of all solvers.
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pnlab/common.hpp"

namespace pnlab {

// One period cell [0, Lambda) sampled at n equispaced nodes x_j = j*h,
// h = Lambda/n. n must be a power of two >= 8 (FFT paths assume it).
class PeriodicGrid {
 public:
  PeriodicGrid(double period, int n) : period_(period), n_(n) {
    if (!(period > 0.0)) throw std::invalid_argument("PeriodicGrid: period must be > 0");
    if (n < 8 || !is_power_of_two(n)) {
      throw std::invalid_argument("PeriodicGrid: node count must be a power of two >= 8, got " + std::to_string(n));
    }
  }

  double period() const { return period_; }
  int size() const { return n_; }
  double spacing() const { return period_ / n_; }
  double node(int j) const { return j * spacing(); }

  bool operator==(const PeriodicGrid& other) const {
    return period_ == other.period_ && n_ == other.n_;
  }

 private:
  double period_;
  int n_;
};

// Real samples on a PeriodicGrid. Value type; all solver operations treat
// fields as immutable snapshots.
class ScalarField {
 public:
  ScalarField(const PeriodicGrid& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size()) {
      throw std::invalid_argument("ScalarField: sample count does not match grid");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("ScalarField: non-finite sample");
    }
  }

  static ScalarField zeros(const PeriodicGrid& grid) {
    return ScalarField(grid, std::vector<double>(grid.size(), 0.0));
  }

  template <typename Fn>
  static ScalarField sample(const PeriodicGrid& grid, Fn&& fn) {
    std::vector<double> v(grid.size());
    for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.node(j));
    return ScalarField(grid, std::move(v));
  }

  const PeriodicGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  double operator[](int j) const { return values_[j]; }
  double& operator[](int j) { return values_[j]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double mean() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / values_.size();
  }
  double sup() const {
    double m = values_[0];
    for (double v : values_) m = v > m ? v : m;
    return m;
  }
  double inf() const {
    double m = values_[0];
    for (double v : values_) m = v < m ? v : m;
    return m;
  }
  double sup_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::abs(v) > m ? std::abs(v) : m;
    return m;
  }

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

inline double sup_abs_diff(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("sup_abs_diff: grids differ");
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) {
    const double d = std::abs(a[j] - b[j]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace pnlab
