#ifndef BAGMC_STUDENT_T_HPP
#define BAGMC_STUDENT_T_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bagmc {

namespace detail {

/// log Gamma for positive arguments, Lanczos approximation (g = 7, 9 terms).
/// Thread-safe, unlike std::lgamma which writes the global signgam.
template <typename Real>
Real lgamma_pos(Real z) {
  if (!(z > 0)) throw std::invalid_argument("lgamma_pos: argument must be positive");
  static const double coef[9] = {
      0.99999999999980993,      676.5203681218851,      -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,    12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6,  1.5056327351493116e-7};
  Real shift = 0;
  while (z < Real(0.5)) {
    shift -= std::log(z);
    z += 1;
  }
  const Real zm1 = z - 1;
  Real x = Real(coef[0]);
  for (int i = 1; i < 9; ++i) x += Real(coef[i]) / (zm1 + Real(i));
  const Real t = zm1 + Real(7.5);
  const Real half_log_2pi = Real(0.91893853320467274178032973640562);
  return shift + half_log_2pi + (zm1 + Real(0.5)) * std::log(t) - t + std::log(x);
}

/// Continued fraction for the incomplete beta function (modified Lentz).
/// Converges for x < (a+1)/(a+b+2); the caller handles the symmetric case.
/// Tolerance is 1e-12 for double, widened as needed for narrower scalars.
template <typename Real>
Real beta_cf(Real a, Real b, Real x) {
  const Real eps = std::max(Real(1e-12), std::numeric_limits<Real>::epsilon() * Real(8));
  const Real tiny = std::numeric_limits<Real>::min() / std::numeric_limits<Real>::epsilon();
  const int max_iter = 1000;

  const Real qab = a + b;
  const Real qap = a + 1;
  const Real qam = a - 1;
  Real c = 1;
  Real d = 1 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1 / d;
  Real h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const Real fm = Real(m);
    const Real m2 = 2 * fm;
    Real aa = fm * (b - fm) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + fm) * (qab + fm) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const Real del = d * c;
    h *= del;
    if (std::abs(del - 1) <= eps) return h;
  }
  throw std::runtime_error("beta_cf: continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// expansion with convergence tolerance 1e-12.
template <typename Real>
Real ibeta_reg(Real a, Real b, Real x) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("ibeta_reg: a and b must be positive");
  if (!(x >= 0 && x <= 1)) throw std::invalid_argument("ibeta_reg: x must lie in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const Real ln_front = detail::lgamma_pos(a + b) - detail::lgamma_pos(a) - detail::lgamma_pos(b) +
                        a * std::log(x) + b * std::log1p(-x);
  const Real front = std::exp(ln_front);
  if (x < (a + 1) / (a + b + 2)) return front * detail::beta_cf(a, b, x) / a;
  return 1 - front * detail::beta_cf(b, a, 1 - x) / b;
}

/// Two-sided tail probability 2*P(T_df > |t|) of Student's t, via
/// P(|T| > t) = I_x(df/2, 1/2) with x = df/(df + t^2).
template <typename Real>
Real p_value_two_sided(Real t, Real df) {
  if (!(df > 0)) throw std::invalid_argument("p_value_two_sided: df must be positive");
  if (std::isnan(t)) throw std::invalid_argument("p_value_two_sided: t is NaN");
  if (t == 0) return 1;
  if (std::isinf(t)) return 0;
  const Real x = df / (df + t * t);
  const Real p = ibeta_reg(df / 2, Real(0.5), x);
  return std::min(Real(1), std::max(Real(0), p));
}

}  // namespace bagmc

#endif  // BAGMC_STUDENT_T_HPP
