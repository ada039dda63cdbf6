#pragma once

// Reference computations used only by tests. Each is deliberately naive and independent of the
// library code it checks.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline double golden_section(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-12) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Dp1d {
  double value = 0.0;
  std::vector<double> path;
};

// Exact DP on the grid lo, lo + h, ..., hi with switching |x - x'| and movement from x0 counted.
// Uses the 1-D distance transform: min_j |x_i - x_j| + W_j in two sweeps.
inline Dp1d dp_1d(const std::vector<std::function<double(double)>>& fs, double x0, double lo,
                  double hi, double h, double budget_weight = 1.0) {
  const int n = static_cast<int>(std::llround((hi - lo) / h)) + 1;
  const int steps = static_cast<int>(fs.size());
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = lo + h * i;
  std::vector<std::vector<double>> value(steps, std::vector<double>(n));
  std::vector<std::vector<int>> arg(steps, std::vector<int>(n));
  std::vector<double> next(n, 0.0);
  for (int t = steps - 1; t >= 0; --t) {
    // m_i = min_j w|x_i - x_j| + next_j
    std::vector<double> m(next);
    std::vector<int> a(n);
    for (int i = 0; i < n; ++i) a[i] = i;
    for (int i = 1; i < n; ++i) {
      const double c = m[i - 1] + budget_weight * h;
      if (c < m[i]) {
        m[i] = c;
        a[i] = a[i - 1];
      }
    }
    for (int i = n - 2; i >= 0; --i) {
      const double c = m[i + 1] + budget_weight * h;
      if (c < m[i]) {
        m[i] = c;
        a[i] = a[i + 1];
      }
    }
    for (int i = 0; i < n; ++i) {
      value[t][i] = fs[t](grid[i]) + (t + 1 < steps ? m[i] : 0.0);
      arg[t][i] = a[i];
    }
    next = value[t];
  }
  Dp1d out;
  out.value = std::numeric_limits<double>::infinity();
  int best = 0;
  for (int i = 0; i < n; ++i) {
    const double c = budget_weight * std::abs(grid[i] - x0) + value[0][i];
    if (c < out.value) {
      out.value = c;
      best = i;
    }
  }
  for (int t = 0; t < steps; ++t) {
    out.path.push_back(grid[best]);
    if (t + 1 < steps) best = arg[t][best];
  }
  return out;
}

inline Vec finite_difference_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                                      double h = 1e-6) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x;
    Vec b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

inline Vec gaussian(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
  return v;
}

inline Mat random_spd(std::mt19937_64& rng, Eigen::Index d, double floor = 0.5) {
  Mat a(d, d);
  std::normal_distribution<double> n;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = n(rng);
  }
  return a * a.transpose() / static_cast<double>(d) + floor * Mat::Identity(d, d);
}

// Point of the probability simplex with every coordinate >= delta.
inline Vec simplex_point(std::mt19937_64& rng, Eigen::Index d, double delta) {
  std::exponential_distribution<double> e(1.0);
  Vec w(d);
  for (Eigen::Index i = 0; i < d; ++i) w(i) = e(rng);
  w /= w.sum();
  return Vec::Constant(d, delta) + (1.0 - d * delta) * w;
}

}  // namespace oracle
