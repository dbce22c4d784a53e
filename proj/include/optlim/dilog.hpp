#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace optlim {

namespace detail {

// Li2(z) = sum_{n>=0} B_n u^{n+1} / (n+1)!, u = -log(1-z). Only even
// Bernoulli numbers (and B_1) contribute; coefficients are B_{2k}/(2k+1)!.
inline std::complex<double> dilog_bernoulli(std::complex<double> u) {
  constexpr double kCoeff[] = {
      1.0 / 36.0,
      -1.0 / 3600.0,
      1.0 / 211680.0,
      -1.0 / 10886400.0,
      1.0 / 526901760.0,
      -4.0647616451442255e-11,
      8.9216910204564526e-13,
      -1.9939295860721076e-14,
      4.5189800296199182e-16,
      -1.0356517612181247e-17,
  };
  const std::complex<double> u2 = u * u;
  std::complex<double> poly = kCoeff[std::size(kCoeff) - 1];
  for (int k = static_cast<int>(std::size(kCoeff)) - 2; k >= 0; --k) poly = poly * u2 + kCoeff[k];
  return u - 0.25 * u2 + u * u2 * poly;
}

}  // namespace detail

// Principal branch of the dilogarithm, cut along [1, inf). On the cut the
// value is the limit from below (Im z -> 0-), whatever the sign of a zero
// imaginary part.
inline std::complex<double> dilog(std::complex<double> z) {
  using std::numbers::pi;
  constexpr double kZeta2 = pi * pi / 6.0;
  const double x = z.real();
  const double y = z.imag();

  if (y == 0.0 && x == 1.0) return kZeta2;
  if (y == 0.0 && x == 0.0) return 0.0;
  if (y == 0.0 && x > 1.0) {
    // Li2(x) = pi^2/3 - log(x)^2/2 - Li2(1/x) - i pi log(x)
    const double lx = std::log(x);
    const double inv = dilog({1.0 / x, 0.0}).real();
    return {pi * pi / 3.0 - 0.5 * lx * lx - inv, -pi * lx};
  }

  const double nz = std::norm(z);
  if (x <= 0.5) {
    if (nz <= 1.0) return detail::dilog_bernoulli(-std::log(1.0 - z));
    // |z| > 1: Li2(z) = -Li2(1/z) - pi^2/6 - log(-z)^2/2
    const std::complex<double> lz = std::log(-z);
    return -detail::dilog_bernoulli(-std::log(1.0 - 1.0 / z)) - kZeta2 - 0.5 * lz * lz;
  }
  if (nz <= 2.0 * x) {
    // |1 - z| <= 1: Li2(z) = -Li2(1-z) + pi^2/6 - log(z) log(1-z)
    const std::complex<double> lz = std::log(z);
    return -detail::dilog_bernoulli(-lz) + kZeta2 - lz * std::log(1.0 - z);
  }
  const std::complex<double> lz = std::log(-z);
  return -detail::dilog_bernoulli(-std::log(1.0 - 1.0 / z)) - kZeta2 - 0.5 * lz * lz;
}

}  // namespace optlim
