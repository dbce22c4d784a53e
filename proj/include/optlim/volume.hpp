#pragma once

// Explicit solution of the hyperbolicity equations from a shadow-coloring,
// its verification, and the complex volume vol + i cs.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "optlim/coloring.hpp"
#include "optlim/diagram.hpp"
#include "optlim/error.hpp"
#include "optlim/potential.hpp"
#include "optlim/quandle.hpp"

namespace optlim {

struct CrossRatioCheck {
  int crossing = 0;
  std::string identity;  // e.g. "wd/wa"
  Complex lhs;           // determinant cross-ratio
  Complex rhs;           // ratio of solution components
  double error = 0;      // |lhs - rhs|
};

struct NondegeneracyCheck {
  int crossing = 0;
  std::string label;
  double min_separation = 0;
  bool passed = false;
};

struct VolumeReport {
  std::vector<Complex> w0;
  std::vector<double> residuals;
  double max_residual = 0;
  std::vector<CrossRatioCheck> cross_ratio_checks;
  std::vector<NondegeneracyCheck> nondegeneracy;
  Complex W0_raw;
  double vol = 0;
  double cs = 0;  // in (-pi^2/2, pi^2/2]
  std::vector<int> sign_choices;
};

struct VolumeOptions {
  double tolerance = 1e-9;  // residuals and relative cross-ratio error
  double separation = kHopfSeparation;
};

// Representative of x mod pi^2 in (-pi^2/2, pi^2/2].
inline double reduce_mod_pi2(double x) {
  constexpr double p2 = std::numbers::pi * std::numbers::pi;
  return x - p2 * std::ceil(x / p2 - 0.5);
}

// w_k = det(p, s_k).
inline std::vector<Complex> solution_w0(const RegionColoring& region, const ParabolicElement& p) {
  std::vector<Complex> w;
  w.reserve(region.size());
  for (std::size_t k = 0; k < region.size(); ++k) {
    const Complex v = det2(p, region[k]);
    if (hopf_separation(p, region[k]) <= 1e-14)
      throw Error(Stage::pipeline, "solution",
                  "w" + std::to_string(k + 1) + " = det(p, s" + std::to_string(k + 1) + ") vanishes; p is not admissible");
    w.push_back(v);
  }
  return w;
}

namespace detail {

// Quandle data around one crossing in the notation of the crossing picture:
// s colors the left region (slot d), a_k is the over-arc and a_l the under-arc
// on the top-left side of the crossing.
struct CrossingColors {
  int sign;
  ParabolicElement p, pk, ak, al, alk, s, sl, sk, slk;
};

inline CrossingColors crossing_colors(const LinkDiagram& d, const ShadowColoring& col, std::size_t x) {
  const auto& arcs = d.crossing_arcs(x);
  const int sign = d.sign(x);
  const ParabolicElement& ak = col.arc[static_cast<std::size_t>(arcs.over)];
  const ParabolicElement& al = col.arc[static_cast<std::size_t>(sign > 0 ? arcs.under_in : arcs.under_out)];
  const ParabolicElement& s = col.region[static_cast<std::size_t>(d.quadrants(x).d)];
  const ParabolicElement sl = star(s, al);
  return {sign, col.p, star(col.p, ak), ak, al, star(al, ak), s, sl, star(s, ak), star(sl, ak)};
}

struct Tetrahedron {
  const char* label;
  std::array<const ParabolicElement*, 4> v;
  bool inverted;  // shape parameter is the inverse cross-ratio
};

inline std::array<Tetrahedron, 4> tetrahedra(const CrossingColors& c) {
  if (c.sign > 0)
    return {{{"(p*ak, p, ak, s*ak)", {&c.pk, &c.p, &c.ak, &c.sk}, false},
             {"(p*ak, p, ak, (s*al)*ak)", {&c.pk, &c.p, &c.ak, &c.slk}, true},
             {"(p, al*ak, s*ak, (s*al)*ak)", {&c.p, &c.alk, &c.sk, &c.slk}, false},
             {"(p, al, s, s*al)", {&c.p, &c.al, &c.s, &c.sl}, true}}};
  return {{{"(p, p*ak, ak, (s*al)*ak)", {&c.p, &c.pk, &c.ak, &c.slk}, true},
           {"(p, p*ak, ak, s*ak)", {&c.p, &c.pk, &c.ak, &c.sk}, false},
           {"(p, al*ak, (s*al)*ak, s*ak)", {&c.p, &c.alk, &c.slk, &c.sk}, false},
           {"(p, al, s*al, s)", {&c.p, &c.al, &c.sl, &c.s}, true}}};
}

}  // namespace detail

// Shape parameters of the four tetrahedra at each crossing, computed as
// determinant cross-ratios of the shadow-coloring, against the region
// variable ratios they must equal:
//   positive crossing: wd/wa, wb/wc, wb/wa, wd/wc
//   negative crossing: wa/wb, wc/wd, wc/wb, wa/wd
inline std::vector<CrossRatioCheck> check_cross_ratios(const LinkDiagram& d, const ShadowColoring& col,
                                                       const std::vector<Complex>& w0,
                                                       double min_separation = kDegenerateSeparation) {
  std::vector<CrossRatioCheck> out;
  for (std::size_t x = 0; x < d.n_crossings(); ++x) {
    const auto c = detail::crossing_colors(d, col, x);
    const auto& q = d.quadrants(x);
    const auto w = [&](int r) { return w0[static_cast<std::size_t>(r)]; };
    struct Ratio {
      const char* name;
      Complex value;
    };
    const std::array<Ratio, 4> ratios =
        c.sign > 0 ? std::array<Ratio, 4>{{{"wd/wa", w(q.d) / w(q.a)},
                                           {"wb/wc", w(q.b) / w(q.c)},
                                           {"wb/wa", w(q.b) / w(q.a)},
                                           {"wd/wc", w(q.d) / w(q.c)}}}
                   : std::array<Ratio, 4>{{{"wa/wb", w(q.a) / w(q.b)},
                                           {"wc/wd", w(q.c) / w(q.d)},
                                           {"wc/wb", w(q.c) / w(q.b)},
                                           {"wa/wd", w(q.a) / w(q.d)}}};
    const auto tets = detail::tetrahedra(c);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& t = tets[k];
      Complex lhs;
      try {
        lhs = cross_ratio(*t.v[0], *t.v[1], *t.v[2], *t.v[3], min_separation);
      } catch (const DegenerateCrossRatio&) {
        throw Error(Stage::pipeline, "cross_ratios",
                    "degenerate tetrahedron " + std::string(t.label) + " at crossing " + std::to_string(x + 1));
      }
      if (t.inverted) lhs = 1.0 / lhs;
      out.push_back({static_cast<int>(x), ratios[k].name, lhs, ratios[k].value, std::abs(lhs - ratios[k].value)});
    }
  }
  return out;
}

// Pairwise distinct Hopf values on the vertices of every tetrahedron at each
// crossing, plus the distinctness triples (a, s, s*a) of the four arc sides.
inline std::vector<NondegeneracyCheck> check_nondegeneracy(const LinkDiagram& d, const ShadowColoring& col,
                                                           double separation = kHopfSeparation) {
  std::vector<NondegeneracyCheck> out;
  const auto min_pairwise = [](std::initializer_list<const ParabolicElement*> pts) {
    double m = 1.0;
    for (auto i = pts.begin(); i != pts.end(); ++i)
      for (auto j = std::next(i); j != pts.end(); ++j) m = std::min(m, hopf_separation(**i, **j));
    return m;
  };
  for (std::size_t x = 0; x < d.n_crossings(); ++x) {
    const auto c = detail::crossing_colors(d, col, x);
    const auto add = [&](std::string label, double sep) {
      out.push_back({static_cast<int>(x), std::move(label), sep, sep > separation});
    };
    for (const auto& t : detail::tetrahedra(c))
      add(std::string("tetrahedron ") + t.label, min_pairwise({t.v[0], t.v[1], t.v[2], t.v[3]}));
    add("triple (ak, s, s*ak)", min_pairwise({&c.ak, &c.s, &c.sk}));
    add("triple (ak, s*al, (s*al)*ak)", min_pairwise({&c.ak, &c.sl, &c.slk}));
    add("triple (al, s, s*al)", min_pairwise({&c.al, &c.s, &c.sl}));
    add("triple (al*ak, s*ak, (s*al)*ak)", min_pairwise({&c.alk, &c.sk, &c.slk}));
  }
  return out;
}

// Full pipeline. Throws Error(Stage::pipeline, step) naming the first
// failing step: solution, residuals, cross_ratios, nondegeneracy.
inline VolumeReport complex_volume(const LinkDiagram& d, const ShadowColoring& col, const VolumeOptions& opt = {}) {
  VolumeReport rep;
  const auto verification = verify_arc_coloring(d, col.arc, opt.tolerance);
  require_valid(verification);
  for (const auto& c : verification.crossings) rep.sign_choices.push_back(c.sign_choice);

  rep.w0 = solution_w0(col.region, col.p);
  const PotentialFunction pf = build_potential(d);

  rep.residuals = residuals(pf, rep.w0);
  rep.max_residual = *std::max_element(rep.residuals.begin(), rep.residuals.end());
  if (!(rep.max_residual <= opt.tolerance)) {
    std::ostringstream os;
    os << "hyperbolicity equations not satisfied: max |exp(w dW/dw) - 1| = " << rep.max_residual;
    throw Error(Stage::pipeline, "residuals", os.str());
  }

  rep.cross_ratio_checks = check_cross_ratios(d, col, rep.w0);
  for (const auto& c : rep.cross_ratio_checks)
    if (!(c.error <= opt.tolerance * std::max(1.0, std::abs(c.rhs)))) {
      std::ostringstream os;
      os << "shape parameter " << c.identity << " at crossing " << (c.crossing + 1) << " differs from its cross-ratio by "
         << c.error;
      throw Error(Stage::pipeline, "cross_ratios", os.str());
    }

  rep.nondegeneracy = check_nondegeneracy(d, col, opt.separation);
  for (const auto& c : rep.nondegeneracy)
    if (!c.passed)
      throw Error(Stage::pipeline, "nondegeneracy",
                  "degenerate configuration at crossing " + std::to_string(c.crossing + 1) + ": " + c.label);

  rep.W0_raw = eval_W0(pf, rep.w0);
  rep.vol = rep.W0_raw.imag();
  rep.cs = reduce_mod_pi2(-rep.W0_raw.real());
  return rep;
}

}  // namespace optlim
