#include "pnlab/potential.hpp"

#include <cmath>

namespace pnlab {
namespace {

// Wrap to [0, 1). floor() is exact, so wrapped(v + k) == wrapped(v) bitwise
// for integer k.
inline double wrap_unit(double v) { return v - std::floor(v); }

}  // namespace

PeriodicPotential::PeriodicPotential(std::vector<double> cosine_coefficients) : b_(std::move(cosine_coefficients)) {
  if (b_.empty()) throw std::invalid_argument("PeriodicPotential: empty coefficient list");
  for (double c : b_) {
    if (!std::isfinite(c)) throw std::invalid_argument("PeriodicPotential: non-finite coefficient");
  }
  double a = 0.0;
  double d3_bound = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    const double om = 2.0 * kPi * m;
    a += b_[m - 1] * om * om;
    d3_bound += std::abs(b_[m - 1]) * om * om * om;
  }
  alpha_ = a;

  // Dense sampling with certified Lipschitz padding from the analytic bound
  // on the next derivative.
  const int samples = 4096;
  const double h = 1.0 / samples;
  double max_d1 = 0.0, max_d2 = 0.0, min_W_interior = 1e300;
  double d2_bound = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    const double om = 2.0 * kPi * m;
    d2_bound += std::abs(b_[m - 1]) * om * om;
  }
  for (int i = 0; i < samples; ++i) {
    const double v = i * h;
    max_d1 = std::max(max_d1, std::abs(dW(v)));
    max_d2 = std::max(max_d2, std::abs(d2W(v)));
    if (v > 0.02 && v < 0.98) min_W_interior = std::min(min_W_interior, W(v));
  }
  sup_dW_ = max_d1 + 0.5 * h * d2_bound;
  sup_d2W_ = max_d2 + 0.5 * h * d3_bound;
  w_class_ = alpha_ > 0.0 && min_W_interior > 0.0;
}

double PeriodicPotential::W(double v) const {
  const double w = wrap_unit(v);
  double s = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    s += b_[m - 1] * (1.0 - std::cos(2.0 * kPi * m * w));
  }
  return s;
}

double PeriodicPotential::dW(double v) const {
  const double w = wrap_unit(v);
  double s = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    const double om = 2.0 * kPi * m;
    s += b_[m - 1] * om * std::sin(om * w);
  }
  return s;
}

double PeriodicPotential::d2W(double v) const {
  const double w = wrap_unit(v);
  double s = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    const double om = 2.0 * kPi * m;
    s += b_[m - 1] * om * om * std::cos(om * w);
  }
  return s;
}

double PeriodicPotential::d3W(double v) const {
  const double w = wrap_unit(v);
  double s = 0.0;
  for (std::size_t m = 1; m <= b_.size(); ++m) {
    const double om = 2.0 * kPi * m;
    s -= b_[m - 1] * om * om * om * std::sin(om * w);
  }
  return s;
}

std::uint64_t PeriodicPotential::hash() const {
  std::string repr = "W";
  for (double c : b_) repr += ":" + double_to_hex(c);
  return fnv1a64(repr);
}

EvalTriple eval_potential(const PeriodicPotential& pot, double v) {
  return EvalTriple{pot.W(v), pot.dW(v), pot.d2W(v)};
}

Forcing::Forcing(std::vector<Mode> modes) : modes_(std::move(modes)) {
  for (const Mode& m : modes_) {
    if (!std::isfinite(m.a) || !std::isfinite(m.theta)) {
      throw std::invalid_argument("Forcing: non-finite mode");
    }
    sup_ += std::abs(m.a);
    lip_ += std::abs(m.a) * 2.0 * kPi * std::hypot(static_cast<double>(m.j), static_cast<double>(m.k));
  }
}

double Forcing::eval(double tau, double y) const {
  if (modes_.empty()) return 0.0;
  // Wrapping tau and y first makes the double periodicity bit-exact.
  const double t = tau - std::floor(tau);
  const double x = y - std::floor(y);
  double s = 0.0;
  for (const Mode& m : modes_) {
    s += m.a * std::cos(2.0 * kPi * (m.j * t + m.k * x) + m.theta);
  }
  return s;
}

bool Forcing::even_in_y() const {
  for (int i = 0; i < 257; ++i) {
    const double tau = 0.0137 + i * 0.003711;
    const double y = -1.31 + i * 0.01093;
    if (std::abs(eval(tau, -y) - eval(tau, y)) > 1e-12 * (1.0 + sup_)) return false;
  }
  return true;
}

bool Forcing::odd_in_y() const {
  for (int i = 0; i < 257; ++i) {
    const double tau = 0.0137 + i * 0.003711;
    const double y = -1.31 + i * 0.01093;
    if (std::abs(eval(tau, -y) + eval(tau, y)) > 1e-12 * (1.0 + sup_)) return false;
  }
  return true;
}

std::uint64_t Forcing::hash() const {
  std::string repr = "sigma";
  for (const Mode& m : modes_) {
    repr += ":" + std::to_string(m.j) + "," + std::to_string(m.k) + "," + double_to_hex(m.a) + "," +
            double_to_hex(m.theta);
  }
  return fnv1a64(repr);
}

double eval_forcing(const Forcing& f, double tau, double y) { return f.eval(tau, y); }

}  // namespace pnlab
