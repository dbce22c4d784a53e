#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "optlim/potential.hpp"
#include "optlim/volume.hpp"
#include "support.hpp"

using namespace optlim;
using testing_support::diagram_of;
using std::numbers::pi;

namespace {

// Transcribed from the reference examples.
const char* kFig8Potential =
    "W = {Li2(w1/w2) + Li2(w1/w4) - Li2(w1*w3/(w2*w4)) - Li2(w2/w3) - Li2(w4/w3) + pi^2/6 - log(w2/w3)*log(w4/w3)}\n"
    "  + {Li2(w3/w2) + Li2(w3/w6) - Li2(w1*w3/(w2*w6)) - Li2(w2/w1) - Li2(w6/w1) + pi^2/6 - log(w2/w1)*log(w6/w1)}\n"
    "  + {-Li2(w4/w3) - Li2(w4/w5) + Li2(w4*w6/(w3*w5)) + Li2(w3/w6) + Li2(w5/w6) - pi^2/6 + log(w3/w6)*log(w5/w6)}\n"
    "  + {-Li2(w6/w1) - Li2(w6/w5) + Li2(w4*w6/(w1*w5)) + Li2(w1/w4) + Li2(w5/w4) - pi^2/6 + log(w1/w4)*log(w5/w4)}\n";

const char* kTrefoilPotential =
    "W = {-Li2(w3/w1) - Li2(w3/w5) + Li2(w2*w3/(w1*w5)) + Li2(w1/w2) + Li2(w5/w2) - pi^2/6 + log(w1/w2)*log(w5/w2)}\n"
    "  + {-Li2(w2/w1) - Li2(w2/w5) + Li2(w2*w4/(w1*w5)) + Li2(w1/w4) + Li2(w5/w4) - pi^2/6 + log(w1/w4)*log(w5/w4)}\n"
    "  + {-Li2(w4/w1) - Li2(w4/w5) + Li2(w3*w4/(w1*w5)) + Li2(w1/w3) + Li2(w5/w3) - pi^2/6 + log(w1/w3)*log(w5/w3)}\n"
    "  + {Li2(w1/w4) + Li2(w1/w6) - Li2(w1^2/(w4*w6)) - Li2(w4/w1) - Li2(w6/w1) + pi^2/6 - log(w4/w1)*log(w6/w1)}\n";

// Written out directly from the defining formula for a positive crossing.
Complex positive_term(Complex a, Complex b, Complex c, Complex d) {
  return -dilog(c / b) - dilog(c / d) + dilog(a * c / (b * d)) + dilog(b / a) + dilog(d / a) - pi * pi / 6.0 +
         std::log(b / a) * std::log(d / a);
}

std::vector<Complex> random_point(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> mod(0.5, 2.0), arg(-pi, pi);
  std::vector<Complex> w(n);
  for (auto& z : w) z = std::polar(mod(rng), arg(rng));
  return w;
}

}  // namespace

TEST(Potential, Fig8TextMatchesGolden) {
  EXPECT_EQ(format_potential(build_potential(diagram_of(testing_support::fig8_job()))), kFig8Potential);
}

TEST(Potential, TrefoilTextMatchesGolden) {
  EXPECT_EQ(format_potential(build_potential(diagram_of(testing_support::trefoil_job()))), kTrefoilPotential);
}

TEST(Potential, EvaluationMatchesFormula) {
  const auto pf = build_potential(diagram_of(testing_support::fig8_job()));
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto w = random_point(rng, pf.n_vars);
    Complex expected = 0;
    for (const auto& t : pf.terms) {
      const auto& s = t.slots;
      expected += static_cast<double>(t.sign) *
                  positive_term(w[static_cast<std::size_t>(s.a)], w[static_cast<std::size_t>(s.b)],
                                w[static_cast<std::size_t>(s.c)], w[static_cast<std::size_t>(s.d)]);
    }
    EXPECT_LE(std::abs(eval_W(pf, w) - expected), 1e-12);
  }
}

TEST(Potential, GradientMatchesFiniteDifferences) {
  for (const auto& job : testing_support::all_jobs()) {
    const auto pf = build_potential(diagram_of(job));
    std::mt19937_64 rng(22);
    for (int i = 0; i < 100; ++i) {
      const auto w = random_point(rng, pf.n_vars);
      EXPECT_LT(gradient_error(pf, w, 1e-6), 1e-6) << job.name;
    }
  }
}

TEST(Potential, AllOnesIsZero) {
  for (const auto& job : testing_support::all_jobs()) {
    const auto pf = build_potential(diagram_of(job));
    const std::vector<Complex> ones(pf.n_vars, 1.0);
    EXPECT_LE(std::abs(eval_W(pf, ones)), 1e-13) << job.name;
  }
}

TEST(Potential, HomogeneousOfDegreeZero) {
  const auto pf = build_potential(diagram_of(testing_support::trefoil_job()));
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    auto w = random_point(rng, pf.n_vars);
    const Complex before = eval_W(pf, w);
    const auto g = grad_W(pf, w);
    Complex sum = 0;
    for (auto x : g) sum += x;
    EXPECT_LE(std::abs(sum), 1e-12);  // Euler relation
    for (auto& z : w) z *= 1.7;
    EXPECT_LE(std::abs(eval_W(pf, w) - before), 1e-12);
  }
}

TEST(Potential, NegativeCrossingIsNegatedTerm) {
  CrossingTerm t{+1, {0, 1, 2, 3}};
  const std::vector<Complex> w{{1.0, 0.3}, {0.7, -1.1}, {2.0, 0.5}, {-0.4, 0.9}};
  CrossingTerm neg = t;
  neg.sign = -1;
  EXPECT_LE(std::abs(eval_term(t, w) + eval_term(neg, w)), 1e-15);
  // Symmetric in the left and right regions.
  CrossingTerm swapped{+1, {0, 3, 2, 1}};
  EXPECT_LE(std::abs(eval_term(t, w) - eval_term(swapped, w)), 1e-12);
}

TEST(Potential, ResidualsVanishOnGoldenSolutions) {
  const auto f = testing_support::fig8_data();
  const auto pf = build_potential(diagram_of(testing_support::fig8_job()));
  for (double r : residuals(pf, f.w0)) EXPECT_LT(r, 1e-9);
  const auto t = testing_support::trefoil_data();
  const auto pt = build_potential(diagram_of(testing_support::trefoil_job()));
  for (double r : residuals(pt, t.w0)) EXPECT_LT(r, 1e-9);

  std::mt19937_64 rng(24);
  double worst = 0;
  for (double r : residuals(pf, random_point(rng, 6))) worst = std::max(worst, r);
  EXPECT_GT(worst, 1e-3);
}

TEST(Potential, BranchShiftsChangeW0ByMultiplesOfPiSquared) {
  const auto f = testing_support::fig8_data();
  const auto pf = build_potential(diagram_of(testing_support::fig8_job()));
  const Complex base = eval_W0(pf, f.w0);
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<int> m(-3, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<Complex> shift(6);
    for (auto& s : shift) s = Complex(0.0, 2.0 * pi * m(rng));
    const Complex shifted = eval_W0(pf, f.w0, shift);
    EXPECT_NEAR(shifted.imag(), base.imag(), 1e-8);
    EXPECT_NEAR(reduce_mod_pi2(shifted.real() - base.real()), 0.0, 1e-8);
  }
}

TEST(Potential, InputValidation) {
  const auto pf = build_potential(diagram_of(testing_support::fig8_job()));
  EXPECT_THROW(eval_W(pf, std::vector<Complex>(5, 1.0)), Error);
  std::vector<Complex> w(6, 1.0);
  w[2] = 0.0;
  EXPECT_THROW(grad_W(pf, w), Error);
}
