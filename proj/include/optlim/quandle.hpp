#pragma once

// Conjugation quandle of parabolic elements of PSL(2,C).
//
// A parabolic element is stored as a column vector (alpha, beta) in C^2\{0};
// it corresponds to the matrix [[1+ab, -a^2], [b^2, 1-ab]]. Representatives
// are kept exactly as given: no sign or scale normalization is applied.

#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace optlim {

using Complex = std::complex<double>;

class ParabolicElement {
 public:
  ParabolicElement(Complex alpha, Complex beta) : alpha_(alpha), beta_(beta) {
    if (alpha == Complex{} && beta == Complex{})
      throw std::invalid_argument("parabolic element must be a nonzero vector");
  }

  Complex alpha() const noexcept { return alpha_; }
  Complex beta() const noexcept { return beta_; }

  double norm() const noexcept { return std::sqrt(std::norm(alpha_) + std::norm(beta_)); }

  ParabolicElement operator-() const { return {-alpha_, -beta_}; }
  ParabolicElement operator*(Complex lambda) const { return {alpha_ * lambda, beta_ * lambda}; }

  friend bool operator==(const ParabolicElement&, const ParabolicElement&) = default;

 private:
  Complex alpha_;
  Complex beta_;
};

inline std::ostream& operator<<(std::ostream& os, const ParabolicElement& a) {
  return os << '(' << a.alpha() << ", " << a.beta() << ')';
}

// Euclidean distance between two representatives in C^2.
inline double distance(const ParabolicElement& a, const ParabolicElement& b) {
  return std::sqrt(std::norm(a.alpha() - b.alpha()) + std::norm(a.beta() - b.beta()));
}

// a * b: the matrix of b applied to a.
inline ParabolicElement star(const ParabolicElement& a, const ParabolicElement& b) {
  const Complex g = b.alpha();
  const Complex d = b.beta();
  const Complex gd = g * d;
  return {(1.0 + gd) * a.alpha() - g * g * a.beta(), d * d * a.alpha() + (1.0 - gd) * a.beta()};
}

// a *^-1 b: the inverse matrix of b applied to a.
inline ParabolicElement star_inv(const ParabolicElement& a, const ParabolicElement& b) {
  const Complex g = b.alpha();
  const Complex d = b.beta();
  const Complex gd = g * d;
  return {(1.0 - gd) * a.alpha() + g * g * a.beta(), -d * d * a.alpha() + (1.0 + gd) * a.beta()};
}

inline Complex det2(const ParabolicElement& a, const ParabolicElement& b) {
  return a.alpha() * b.beta() - b.alpha() * a.beta();
}

// Point of CP^1 = C u {infinity}.
class HopfValue {
 public:
  HopfValue(Complex z) : value_(z) {}  // NOLINT: implicit from a finite point
  static HopfValue infinity() { return HopfValue(); }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  // Precondition: !is_infinite().
  Complex value() const { return value_.value(); }

 private:
  HopfValue() = default;
  std::optional<Complex> value_;
};

inline constexpr double kHopfTolerance = 1e-10;

// Finite values compare within `tol`; infinity only matches infinity.
inline bool approx_equal(const HopfValue& x, const HopfValue& y, double tol = kHopfTolerance) {
  if (x.is_infinite() || y.is_infinite()) return x.is_infinite() && y.is_infinite();
  return std::abs(x.value() - y.value()) <= tol;
}

inline std::ostream& operator<<(std::ostream& os, const HopfValue& h) {
  if (h.is_infinite()) return os << "inf";
  return os << h.value();
}

inline HopfValue hopf(const ParabolicElement& a) {
  if (a.beta() == Complex{}) return HopfValue::infinity();
  return a.alpha() / a.beta();
}

// Chordal distance between h(a) and h(b) on the Riemann sphere, computed
// from representatives so that points near infinity are handled uniformly.
// It is 0 iff h(a) = h(b) and at most 1.
inline double hopf_separation(const ParabolicElement& a, const ParabolicElement& b) {
  return std::abs(det2(a, b)) / (a.norm() * b.norm());
}

// Moebius transformation of a parabolic element acting on CP^1:
// z -> ((1+ab) z - a^2) / (b^2 z + (1-ab)).
inline HopfValue mobius_apply(const ParabolicElement& a, const HopfValue& z) {
  const Complex al = a.alpha();
  const Complex be = a.beta();
  const Complex m11 = 1.0 + al * be, m12 = -al * al, m21 = be * be, m22 = 1.0 - al * be;
  if (z.is_infinite()) {
    if (m21 == Complex{}) return HopfValue::infinity();
    return m11 / m21;
  }
  const Complex num = m11 * z.value() + m12;
  const Complex den = m21 * z.value() + m22;
  if (den == Complex{}) return HopfValue::infinity();
  return num / den;
}

class DegenerateCrossRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kDegenerateSeparation = 1e-12;

// Cross-ratio [h(v0), h(v1), h(v2), h(v3)] via determinants. Throws
// DegenerateCrossRatio when h(v0) = h(v2) or h(v1) = h(v3).
inline Complex cross_ratio(const ParabolicElement& v0, const ParabolicElement& v1,
                           const ParabolicElement& v2, const ParabolicElement& v3,
                           double min_separation = kDegenerateSeparation) {
  if (hopf_separation(v0, v2) <= min_separation || hopf_separation(v1, v3) <= min_separation)
    throw DegenerateCrossRatio("degenerate cross-ratio: coincident Hopf values in denominator");
  return det2(v0, v3) * det2(v1, v2) / (det2(v0, v2) * det2(v1, v3));
}

}  // namespace optlim
