#pragma once

// Potential function of a link diagram built from per-crossing dilogarithm
// terms in the region variables w_1..w_n.
//
// For a positive crossing with regions (a, b, c, d) = (bottom, right, top,
// left) the term is
//
//   -Li2(wc/wb) - Li2(wc/wd) + Li2(wa wc/(wb wd)) + Li2(wb/wa) + Li2(wd/wa)
//   - pi^2/6 + log(wb/wa) log(wd/wa)
//
// and a negative crossing contributes the negation. All logarithms and
// dilogarithms use principal branches.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "optlim/diagram.hpp"
#include "optlim/dilog.hpp"
#include "optlim/error.hpp"

namespace optlim {

using Complex = std::complex<double>;

struct CrossingTerm {
  int sign = +1;
  Quadrants slots;
};

struct PotentialFunction {
  std::vector<CrossingTerm> terms;
  std::size_t n_vars = 0;
};

inline PotentialFunction build_potential(const LinkDiagram& diagram) {
  PotentialFunction pf;
  pf.n_vars = diagram.n_regions();
  pf.terms.reserve(diagram.n_crossings());
  for (std::size_t x = 0; x < diagram.n_crossings(); ++x)
    pf.terms.push_back({diagram.sign(x), diagram.quadrants(x)});
  return pf;
}

namespace detail {

enum Slot { kA = 0, kB = 1, kC = 2, kD = 3 };

// One Li2 term: coefficient (for a positive crossing) and the exponents of
// (wa, wb, wc, wd) in its argument.
struct DilogTerm {
  int coeff;
  std::array<int, 4> exponent;
};

inline constexpr std::array<DilogTerm, 5> kDilogTerms{{
    {-1, {0, -1, 1, 0}},   // wc/wb
    {-1, {0, 0, 1, -1}},   // wc/wd
    {+1, {1, -1, 1, -1}},  // wa wc/(wb wd)
    {+1, {-1, 1, 0, 0}},   // wb/wa
    {+1, {-1, 0, 0, 1}},   // wd/wa
}};

inline std::array<Complex, 4> slot_values(const CrossingTerm& t, std::span<const Complex> w) {
  return {w[static_cast<std::size_t>(t.slots.a)], w[static_cast<std::size_t>(t.slots.b)],
          w[static_cast<std::size_t>(t.slots.c)], w[static_cast<std::size_t>(t.slots.d)]};
}

inline Complex monomial(const std::array<Complex, 4>& v, const std::array<int, 4>& e) {
  Complex num = 1.0, den = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    for (int p = 0; p < e[k]; ++p) num *= v[k];
    for (int p = 0; p < -e[k]; ++p) den *= v[k];
  }
  return num / den;
}

// Principal log with Im in (-pi, pi] regardless of the sign of a zero
// imaginary part.
inline Complex principal_log(Complex z) {
  if (z.imag() == 0.0 && z.real() < 0.0) return {std::log(-z.real()), std::numbers::pi};
  return std::log(z);
}

// -log(1 - z) = z Li2'(z), on the cut z > 1 taken as the limit from below to
// match dilog().
inline Complex dilog_log_derivative(Complex z) {
  if (z.imag() == 0.0 && z.real() > 1.0) return {-std::log(z.real() - 1.0), -std::numbers::pi};
  return -std::log(1.0 - z);
}

inline void check_input(const PotentialFunction& pf, std::span<const Complex> w) {
  if (w.size() != pf.n_vars)
    throw Error(Stage::pipeline, "potential",
                "expected " + std::to_string(pf.n_vars) + " region variables, got " + std::to_string(w.size()));
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] == Complex{})
      throw Error(Stage::pipeline, "potential", "region variable w" + std::to_string(k + 1) + " is zero");
}

}  // namespace detail

// W_j of a single crossing term.
inline Complex eval_term(const CrossingTerm& t, std::span<const Complex> w) {
  using std::numbers::pi;
  const auto v = detail::slot_values(t, w);
  Complex sum = -pi * pi / 6.0;
  for (const auto& li : detail::kDilogTerms) sum += static_cast<double>(li.coeff) * dilog(detail::monomial(v, li.exponent));
  sum += detail::principal_log(v[detail::kB] / v[detail::kA]) * detail::principal_log(v[detail::kD] / v[detail::kA]);
  return static_cast<double>(t.sign) * sum;
}

inline Complex eval_W(const PotentialFunction& pf, std::span<const Complex> w) {
  detail::check_input(pf, w);
  Complex total = 0.0;
  for (const auto& t : pf.terms) total += eval_term(t, w);
  return total;
}

// Components w_k dW/dw_k, assembled from z Li2'(z) = -log(1 - z) and the
// product rule on the log-log term.
inline std::vector<Complex> grad_W(const PotentialFunction& pf, std::span<const Complex> w) {
  detail::check_input(pf, w);
  std::vector<Complex> g(pf.n_vars, 0.0);
  for (std::size_t j = 0; j < pf.terms.size(); ++j) {
    const auto& t = pf.terms[j];
    const auto v = detail::slot_values(t, w);
    const std::array<int, 4> idx{t.slots.a, t.slots.b, t.slots.c, t.slots.d};
    const double s = static_cast<double>(t.sign);
    for (std::size_t li = 0; li < detail::kDilogTerms.size(); ++li) {
      const auto& term = detail::kDilogTerms[li];
      const Complex z = detail::monomial(v, term.exponent);
      if (z == Complex{1.0, 0.0})
        throw Error(Stage::pipeline, "gradient",
                    "crossing " + std::to_string(j + 1) + ", dilogarithm term " + std::to_string(li + 1) +
                        ": argument equals 1 (logarithmic singularity)");
      const Complex dlog = detail::dilog_log_derivative(z);
      for (std::size_t k = 0; k < 4; ++k)
        if (term.exponent[k] != 0)
          g[static_cast<std::size_t>(idx[k])] += s * term.coeff * term.exponent[k] * dlog;
    }
    // log(wb/wa) log(wd/wa)
    const Complex lb = detail::principal_log(v[detail::kB] / v[detail::kA]);
    const Complex ld = detail::principal_log(v[detail::kD] / v[detail::kA]);
    g[static_cast<std::size_t>(t.slots.b)] += s * ld;
    g[static_cast<std::size_t>(t.slots.d)] += s * lb;
    g[static_cast<std::size_t>(t.slots.a)] -= s * (lb + ld);
  }
  return g;
}

// |exp(w_k dW/dw_k) - 1| for every k.
inline std::vector<double> residuals(const PotentialFunction& pf, std::span<const Complex> w) {
  const auto g = grad_W(pf, w);
  std::vector<double> r(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) r[k] = std::abs(std::exp(g[k]) - 1.0);
  return r;
}

// W - sum_k (w_k dW/dw_k) log w_k. `log_shift[k]`, when given, is added to
// the principal log of w_k (a multiple of 2 pi i selects another branch).
inline Complex eval_W0(const PotentialFunction& pf, std::span<const Complex> w,
                       std::span<const Complex> log_shift = {}) {
  const auto g = grad_W(pf, w);
  Complex total = eval_W(pf, w);
  for (std::size_t k = 0; k < w.size(); ++k) {
    Complex lw = detail::principal_log(w[k]);
    if (!log_shift.empty()) lw += log_shift[k];
    total -= g[k] * lw;
  }
  return total;
}

namespace detail {

inline std::string product(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  std::map<int, int> power;
  for (int i : idx) ++power[i];
  std::string out;
  for (auto [i, p] : power) {
    if (!out.empty()) out += '*';
    out += "w" + std::to_string(i + 1);
    if (p > 1) out += "^" + std::to_string(p);
  }
  return out;
}

inline std::string ratio(std::vector<int> num, std::vector<int> den) {
  const std::string n = product(std::move(num));
  const std::string d = product(den);
  return n + "/" + (den.size() > 1 ? "(" + d + ")" : d);
}

}  // namespace detail

// One bracket per crossing in the layout of the defining formula. The term
// is symmetric in (b, d); the pair is printed in ascending region order.
inline std::string format_term(const CrossingTerm& t) {
  const int a = t.slots.a, c = t.slots.c;
  const int b = std::min(t.slots.b, t.slots.d), d = std::max(t.slots.b, t.slots.d);
  const bool pos = t.sign > 0;
  const char* s1 = pos ? "-" : "";
  const char* minus = pos ? " - " : " + ";
  const char* plus = pos ? " + " : " - ";
  std::ostringstream os;
  os << '{' << s1 << "Li2(" << detail::ratio({c}, {b}) << ")" << minus << "Li2(" << detail::ratio({c}, {d}) << ")"
     << plus << "Li2(" << detail::ratio({a, c}, {b, d}) << ")" << plus << "Li2(" << detail::ratio({b}, {a}) << ")"
     << plus << "Li2(" << detail::ratio({d}, {a}) << ")" << minus << "pi^2/6" << plus << "log("
     << detail::ratio({b}, {a}) << ")*log(" << detail::ratio({d}, {a}) << ")}";
  return os.str();
}

inline std::string format_potential(const PotentialFunction& pf) {
  std::string out;
  for (std::size_t j = 0; j < pf.terms.size(); ++j) {
    out += j == 0 ? "W = " : "  + ";
    out += format_term(pf.terms[j]);
    out += '\n';
  }
  return out;
}

}  // namespace optlim
