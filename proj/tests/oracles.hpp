// Test-side oracles, kept independent of the library code paths they
// check: a dumb full-scan step-up rule, tail probabilities by adaptive
// quadrature of the t density, and direct set arithmetic.
#ifndef BAGMC_TESTS_ORACLES_HPP
#define BAGMC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace oracles {

// Step-up rule by explicit scan of every k, ties broken stably by
// original index. Thresholds use the same (k*q)/n evaluation order as the
// library so both sides mean the same contract.
inline std::vector<int> bh_bruteforce(const std::vector<double>& p, double q) {
  const int n = static_cast<int>(p.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (p[a] != p[b]) return p[a] < p[b];
    return a < b;
  });
  int k_star = 0;
  for (int k = 1; k <= n; ++k)
    if (p[order[k - 1]] <= double(k) * q / double(n)) k_star = k;
  std::vector<int> out(order.begin(), order.begin() + k_star);
  std::sort(out.begin(), out.end());
  return out;
}

inline double student_t_density(double u, double df) {
  const double log_c = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                       0.5 * std::log(df * 3.14159265358979323846);
  return std::exp(log_c - (df + 1) / 2 * std::log1p(u * u / df));
}

namespace detail {

template <typename F>
double adaptive_simpson(F f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = (a + b) / 2;
  const double lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

template <typename F>
double integrate(F f, double a, double b, double tol) {
  const double m = (a + b) / 2;
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace detail

// Two-sided t-tail by quadrature: 1 - 2 * integral of the density over
// [0, |t|], absolute tolerance ~1e-13.
inline double t_pvalue_quadrature(double t, double df) {
  const double at = std::abs(t);
  if (at == 0) return 1.0;
  auto f = [df](double u) { return student_t_density(u, df); };
  const double body = detail::integrate(f, 0.0, at, 1e-14);
  return std::max(0.0, 1.0 - 2.0 * body);
}

inline int direct_union_size(const std::vector<std::vector<int>>& lists) {
  std::set<int> u;
  for (const auto& l : lists) u.insert(l.begin(), l.end());
  return static_cast<int>(u.size());
}

inline std::vector<int> set_intersection(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<int> set_difference(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace oracles

#endif  // BAGMC_TESTS_ORACLES_HPP
