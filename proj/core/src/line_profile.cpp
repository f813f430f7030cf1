#include "pnlab/line_profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft_util.hpp"

namespace pnlab {
namespace {

// int_a^inf dz / (z^2 (c + z)), a > 0, c + a > 0. Series branch for small
// |c|/a to dodge the cancellation in 1/(ca) - ln(1 + c/a)/c^2.
double tail_kernel_integral(double c, double a) {
  const double t = c / a;
  if (std::abs(t) < 0.5) {
    // J = sum_{k>=2} (-1)^k c^(k-2) / (k a^k)
    double sum = 0.0;
    double power = 1.0;  // c^(k-2)
    for (int k = 2; k <= 24; ++k) {
      const double term = power / (k * std::pow(a, k));
      sum += (k % 2 == 0) ? term : -term;
      power *= c;
    }
    return sum;
  }
  return 1.0 / (c * a) - std::log1p(t) / (c * c);
}

// int_{b0}^inf (tail(x + z) - u_x)/z^2 dz for the right side, and the
// mirrored left side int_{b0}^inf (tail(x - z) - u_x)/z^2 dz.
double analytic_tail_side(const TailModel& tail, double x, double u_x, double b0, bool right) {
  double base = 0.0;   // constant part of the tail on that side
  double K = 0.0;      // coefficient of 1/(argument)
  switch (tail.kind) {
    case TailModel::Kind::Step:
      base = right ? tail.right : tail.left;
      K = tail.coeff;
      break;
    case TailModel::Kind::Algebraic:
      K = tail.coeff;
      break;
    case TailModel::Kind::Zero:
      break;
  }
  double value = (base - u_x) / b0;
  if (K != 0.0) {
    // right: K int dz/(z^2 (x+z)) ; left: K int dz/(z^2 (x-z)) = -K J(-x, b0)
    value += right ? K * tail_kernel_integral(x, b0) : -K * tail_kernel_integral(-x, b0);
  }
  return value;
}

int snapped_split(double r, double h) {
  const int m_r = static_cast<int>(std::floor(r / h + 1e-12));
  if (m_r < 2) {
    throw std::invalid_argument("line operator: split radius r < 2h, inner integral unresolvable");
  }
  return m_r;
}

}  // namespace

LineProfile::LineProfile(double R, std::vector<double> samples, TailModel tail, double tail_envelope)
    : R_(R), samples_(std::move(samples)), tail_(tail) {
  if (!(R > 0.0)) throw std::invalid_argument("LineProfile: R must be > 0");
  if (samples_.size() < 16) throw std::invalid_argument("LineProfile: too few samples");
  for (double v : samples_) {
    if (!std::isfinite(v)) throw std::invalid_argument("LineProfile: non-finite sample");
  }
  // The declared tail must match the stored asymptotics at the edges.
  const double edge_gap = std::max(std::abs(samples_.front() - tail_.value(-R_)),
                                   std::abs(samples_.back() - tail_.value(R_)));
  if (edge_gap > tail_envelope) {
    throw std::invalid_argument("LineProfile: tail model does not match profile asymptotics (gap " +
                                std::to_string(edge_gap) + ")");
  }
}

double LineProfile::value(double x) const {
  if (x < -R_ || x > R_) return tail_.value(x);
  const double h = spacing();
  const double s = (x + R_) / h;
  const int n = nodes();
  int i1 = static_cast<int>(std::floor(s));
  if (i1 >= n - 1) i1 = n - 2;
  const double t = s - i1;
  // Catmull-Rom; clamp the stencil at the edges.
  const int i0 = std::max(i1 - 1, 0);
  const int i2 = i1 + 1;
  const int i3 = std::min(i1 + 2, n - 1);
  const double p0 = samples_[i0], p1 = samples_[i1], p2 = samples_[i2], p3 = samples_[i3];
  const double a = 2.0 * p1;
  const double b = p2 - p0;
  const double c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
  const double d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
  return 0.5 * (a + b * t + c * t * t + d * t * t * t);
}

std::vector<double> line_apply_nodes(const LineProfile& profile, const LevyKernel1D& kernel) {
  const int N = profile.nodes();
  const double h = profile.spacing();
  const double R = profile.radius();
  const double g0 = kernel.g0;
  const int m_r = snapped_split(kernel.r, h);
  const std::vector<double>& u = profile.samples();
  const TailModel& tail = profile.tail();

  // Toeplitz kernel T_d, d = node offset (symmetric), full trapezoid weights;
  // per-node corrections restore the endpoint halving at the domain edge.
  std::vector<double> T(N, 0.0);
  for (int m = 1; m < N; ++m) {
    const double z = m * h;
    double w;
    if (m < m_r) {
      w = (m == 1) ? 1.5 * h : h;
    } else if (m == m_r) {
      w = 0.5 * h + 0.5 * h;  // inner closing + outer opening
    } else {
      w = h;
    }
    T[m] = w / (z * z);
  }

  // C_i = sum_j T_{|i-j|} u_j by circular embedding.
  const int M = [&] {
    int m = 1;
    while (m < 2 * N) m <<= 1;
    return m;
  }();
  std::vector<double> a(M, 0.0), b(M, 0.0);
  for (int j = 0; j < N; ++j) a[j] = u[j];
  for (int d = 1; d < N; ++d) {
    b[d] = T[d];
    b[M - d] = T[d];
  }
  std::vector<std::complex<double>> fa, fb;
  fft::forward_r2c(a, fa);
  fft::forward_r2c(b, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> conv;
  fft::inverse_c2r(fa, M, conv);

  // Row sums S_i = sum_{j in domain} T_{|i-j|} via prefix sums.
  std::vector<double> prefix(N, 0.0);  // prefix[m] = sum_{d=1}^{m} T_d
  for (int m = 1; m < N; ++m) prefix[m] = prefix[m - 1] + T[m];

  std::vector<double> out(N);
  for (int i = 0; i < N; ++i) {
    const double x = profile.node(i);
    const double S_i = prefix[i] + prefix[N - 1 - i];
    double acc = conv[i] - u[i] * S_i;

    for (int side = 0; side < 2; ++side) {
      const bool right = side == 0;
      const int M_edge = right ? (N - 1 - i) : i;
      if (M_edge >= m_r) {
        // Halve the trapezoid endpoint at the edge node.
        const double z = M_edge * h;
        const double u_edge = right ? u[N - 1] : u[0];
        acc -= 0.5 * h * (u_edge - u[i]) / (z * z);
      } else {
        // Inner offsets crossing the edge use tail values.
        for (int m = M_edge + 1; m <= m_r; ++m) {
          const double z = m * h;
          const double w = (m == 1) ? 1.5 * h : (m == m_r ? 0.5 * h : h);
          const double xv = right ? x + z : x - z;
          acc += w * (tail.value(xv) - u[i]) / (z * z);
        }
      }
      const double b0 = std::max(M_edge, m_r) * h;
      acc += analytic_tail_side(tail, x, u[i], b0, right);
    }
    out[i] = g0 * acc;
  }
  return out;
}

std::vector<double> apply_line(const LineProfile& profile, const LevyKernel1D& kernel,
                               const std::vector<double>& xs) {
  const double h = profile.spacing();
  const double R = profile.radius();
  const double g0 = kernel.g0;
  const int m_r = snapped_split(kernel.r, h);
  const TailModel& tail = profile.tail();

  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x < -R + kernel.r || x > R - kernel.r) {
      throw std::invalid_argument("apply_line: evaluation point " + std::to_string(x) +
                                  " closer than r to the truncation boundary");
    }
    const double u_x = profile.value(x);
    double acc = 0.0;
    // Inner [0, r]: symmetric second differences.
    for (int m = 1; m <= m_r; ++m) {
      const double z = m * h;
      const double w = (m == 1) ? 1.5 * h : (m == m_r ? 0.5 * h : h);
      acc += w * (profile.value(x + z) + profile.value(x - z) - 2.0 * u_x) / (z * z);
    }
    // Outer per side: trapezoid on the stored domain, partial cell to the
    // exact edge, analytic beyond.
    for (int side = 0; side < 2; ++side) {
      const bool right = side == 0;
      const double a_edge = right ? R - x : x + R;
      const int M_edge = static_cast<int>(std::floor(a_edge / h + 1e-12));
      auto integrand = [&](double z) {
        const double xv = right ? x + z : x - z;
        return (profile.value(xv) - u_x) / (z * z);
      };
      if (M_edge >= m_r) {
        if (M_edge > m_r) {
          for (int m = m_r; m <= M_edge; ++m) {
            const double w = (m == m_r || m == M_edge) ? 0.5 * h : h;
            acc += w * integrand(m * h);
          }
        }
        const double sliver = a_edge - M_edge * h;
        if (sliver > 1e-12 * h) {
          acc += 0.5 * sliver * (integrand(M_edge * h) + integrand(a_edge));
        }
        acc += analytic_tail_side(tail, x, u_x, a_edge, right);
      } else {
        acc += analytic_tail_side(tail, x, u_x, m_r * h, right);
      }
    }
    out.push_back(g0 * acc);
  }
  return out;
}

std::vector<double> line_operator_matrix(double R, int nodes, const LevyKernel1D& kernel) {
  const int N = nodes;
  const double h = 2.0 * R / (N - 1);
  const double g0 = kernel.g0;
  const int m_r = snapped_split(kernel.r, h);

  std::vector<double> A(static_cast<std::size_t>(N) * N, 0.0);
  auto at = [&](int i, int j) -> double& { return A[static_cast<std::size_t>(i) * N + j]; };

  for (int i = 0; i < N; ++i) {
    const double x = -R + i * h;
    // Inner second differences; zero tail beyond the domain.
    for (int m = 1; m <= m_r; ++m) {
      const double z = m * h;
      const double w = (m == 1) ? 1.5 * h : (m == m_r ? 0.5 * h : h);
      const double coef = g0 * w / (z * z);
      if (i + m < N) at(i, i + m) += coef;
      if (i - m >= 0) at(i, i - m) += coef;
      at(i, i) -= 2.0 * coef;
    }
    for (int side = 0; side < 2; ++side) {
      const bool right = side == 0;
      const int M_edge = right ? (N - 1 - i) : i;
      if (M_edge > m_r) {
        for (int m = m_r; m <= M_edge; ++m) {
          const double z = m * h;
          const double w = (m == m_r || m == M_edge) ? 0.5 * h : h;
          const double coef = g0 * w / (z * z);
          at(i, right ? i + m : i - m) += coef;
          at(i, i) -= coef;
        }
      }
      const double b0 = std::max(M_edge, m_r) * h;
      at(i, i) += g0 * analytic_tail_side(TailModel::zero(), x, 1.0, b0, right);
    }
  }
  return A;
}

}  // namespace pnlab
