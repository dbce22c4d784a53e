#pragma once

// Shadow-colorings: arc-colors from a boundary-parabolic representation,
// region-colors propagated across arcs, and the auxiliary point p.
//
// Region rule: for a directed arc colored a, if s colors the region on its
// right then the region on its left is colored s * a.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optlim/diagram.hpp"
#include "optlim/error.hpp"
#include "optlim/quandle.hpp"

namespace optlim {

// Colors indexed by arc (resp. region) index.
using ArcColoring = std::vector<ParabolicElement>;
using RegionColoring = std::vector<ParabolicElement>;

struct ShadowColoring {
  ArcColoring arc;
  RegionColoring region;
  ParabolicElement p;
};

// Hopf values closer than this (chordal distance) count as colliding.
inline constexpr double kHopfSeparation = 1e-8;

struct CrossingRelation {
  int sign_choice = +1;  // +1 if a_m = a_l * a_k, -1 if a_m = -(a_l * a_k)
  double residual = 0;
  bool passed = false;
};

struct ArcVerification {
  std::vector<CrossingRelation> crossings;
  bool passed() const {
    return std::all_of(crossings.begin(), crossings.end(), [](const auto& c) { return c.passed; });
  }
  double max_residual() const {
    double m = 0;
    for (const auto& c : crossings) m = std::max(m, c.residual);
    return m;
  }
};

// Checks a_out = +-(a_in * a_over) at positive crossings and
// a_out = +-(a_in *^-1 a_over) at negative ones.
inline ArcVerification verify_arc_coloring(const LinkDiagram& d, const ArcColoring& colors, double tol = 1e-9) {
  if (colors.size() != d.n_arcs())
    throw Error(Stage::arc_verification, "arc_colors",
                "expected " + std::to_string(d.n_arcs()) + " arc colors, got " + std::to_string(colors.size()));
  ArcVerification out;
  for (std::size_t x = 0; x < d.n_crossings(); ++x) {
    const auto& arcs = d.crossing_arcs(x);
    const auto& over = colors[static_cast<std::size_t>(arcs.over)];
    const auto& in = colors[static_cast<std::size_t>(arcs.under_in)];
    const auto& out_color = colors[static_cast<std::size_t>(arcs.under_out)];
    const ParabolicElement expected = d.sign(x) > 0 ? star(in, over) : star_inv(in, over);
    const double plus = distance(out_color, expected);
    const double minus = distance(out_color, -expected);
    CrossingRelation rel;
    rel.sign_choice = plus <= minus ? +1 : -1;
    rel.residual = std::min(plus, minus);
    rel.passed = rel.residual <= tol * std::max(1.0, out_color.norm());
    out.crossings.push_back(rel);
  }
  return out;
}

inline void require_valid(const ArcVerification& v) {
  for (std::size_t x = 0; x < v.crossings.size(); ++x)
    if (!v.crossings[x].passed) {
      std::ostringstream os;
      os << "arc colors violate the crossing relation at crossing " << (x + 1) << " (residual "
         << v.crossings[x].residual << "); they do not define a representation";
      throw Error(Stage::arc_verification, "crossing_relation", os.str());
    }
}

// Breadth-first propagation over the dual graph; every edge not used by the
// traversal is re-checked against the region rule.
inline RegionColoring propagate_regions(const LinkDiagram& d, const ArcColoring& arc, std::size_t seed_region,
                                        const ParabolicElement& seed_color, double tol = 1e-9) {
  if (seed_region >= d.n_regions())
    throw Error(Stage::coloring, "seed", "seed region " + std::to_string(seed_region + 1) + " does not exist");

  // Adjacency: (neighbor, arc, neighbor is on the left).
  struct Step {
    int region;
    int arc;
    bool to_left;
  };
  std::vector<std::vector<Step>> adj(d.n_regions());
  for (const auto& [e, info] : d.edges()) {
    adj[static_cast<std::size_t>(info.right_region)].push_back({info.left_region, info.arc, true});
    adj[static_cast<std::size_t>(info.left_region)].push_back({info.right_region, info.arc, false});
  }

  std::vector<std::optional<ParabolicElement>> color(d.n_regions());
  color[seed_region] = seed_color;
  std::queue<std::size_t> queue;
  queue.push(seed_region);
  while (!queue.empty()) {
    const std::size_t r = queue.front();
    queue.pop();
    for (const auto& step : adj[r]) {
      const auto& a = arc[static_cast<std::size_t>(step.arc)];
      const ParabolicElement next = step.to_left ? star(*color[r], a) : star_inv(*color[r], a);
      auto& slot = color[static_cast<std::size_t>(step.region)];
      if (!slot) {
        slot = next;
        queue.push(static_cast<std::size_t>(step.region));
      } else if (distance(*slot, next) > tol * std::max(1.0, slot->norm())) {
        throw Error(Stage::coloring, "propagation",
                    "region colors are inconsistent between regions " + std::to_string(r + 1) + " and " +
                        std::to_string(step.region + 1) + " across arc " + std::to_string(step.arc + 1));
      }
    }
  }
  RegionColoring out;
  out.reserve(color.size());
  for (std::size_t r = 0; r < color.size(); ++r) {
    if (!color[r])
      throw Error(Stage::coloring, "propagation", "region " + std::to_string(r + 1) + " is unreachable");
    out.push_back(*color[r]);
  }
  return out;
}

struct Lemma1Violation {
  int edge = 0;  // diagram edge id where the triple occurs
  int arc = 0;
  int right_region = 0;
  int left_region = 0;
  double separation = 0;  // smallest pairwise chordal distance in the triple
};

struct Lemma1Report {
  std::vector<Lemma1Violation> violations;
  bool passed() const { return violations.empty(); }
};

// h(a), h(s), h(s * a) pairwise distinct for every arc a and the regions s,
// s * a on its two sides.
inline Lemma1Report check_lemma1(const LinkDiagram& d, const ArcColoring& arc, const RegionColoring& region,
                                 double separation = kHopfSeparation) {
  Lemma1Report report;
  for (const auto& [e, info] : d.edges()) {
    const auto& a = arc[static_cast<std::size_t>(info.arc)];
    const auto& s = region[static_cast<std::size_t>(info.right_region)];
    const auto& sa = region[static_cast<std::size_t>(info.left_region)];
    const double sep = std::min({hopf_separation(a, s), hopf_separation(s, sa), hopf_separation(sa, a)});
    if (sep <= separation) report.violations.push_back({e, info.arc, info.right_region, info.left_region, sep});
  }
  return report;
}

struct SearchOptions {
  int max_attempts = 1000;
  std::size_t seed_region = 0;
  std::optional<ParabolicElement> seed_color;  // bypasses sampling when set
  double separation = kHopfSeparation;
  double tol = 1e-9;
};

struct RegionSearchResult {
  RegionColoring coloring;
  ParabolicElement seed_color;
  int attempts = 0;
};

namespace detail {

// Nonzero integer vector with entries in [-range, range]. Uses raw
// mt19937_64 output so results are identical across standard libraries.
inline ParabolicElement sample_integer_element(std::mt19937_64& rng, int range) {
  const auto span = static_cast<std::uint64_t>(2 * range + 1);
  while (true) {
    const double a = static_cast<double>(static_cast<std::int64_t>(rng() % span) - range);
    const double b = static_cast<double>(static_cast<std::int64_t>(rng() % span) - range);
    if (a != 0.0 || b != 0.0) return {a, b};
  }
}

inline int sample_range(int attempt) { return 3 + attempt / 4; }

}  // namespace detail

// Samples integer seed colors (range growing with the attempt count) until
// the propagated coloring passes check_lemma1. Deterministic in rng_seed.
inline RegionSearchResult find_region_coloring(const LinkDiagram& d, const ArcColoring& arc, std::uint64_t rng_seed,
                                               const SearchOptions& opt = {}) {
  if (opt.seed_color) {
    auto coloring = propagate_regions(d, arc, opt.seed_region, *opt.seed_color, opt.tol);
    const auto report = check_lemma1(d, arc, coloring, opt.separation);
    if (!report.passed()) {
      const auto& v = report.violations.front();
      throw Error(Stage::coloring, "lemma1",
                  "supplied region seed gives coinciding Hopf values at arc " + std::to_string(v.arc + 1) +
                      " between regions " + std::to_string(v.right_region + 1) + " and " +
                      std::to_string(v.left_region + 1));
    }
    return {std::move(coloring), *opt.seed_color, 1};
  }
  std::mt19937_64 rng(rng_seed);
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const ParabolicElement seed = detail::sample_integer_element(rng, detail::sample_range(attempt));
    const bool collides = std::any_of(arc.begin(), arc.end(),
                                      [&](const auto& a) { return hopf_separation(a, seed) <= opt.separation; });
    if (collides) continue;
    auto coloring = propagate_regions(d, arc, opt.seed_region, seed, opt.tol);
    if (check_lemma1(d, arc, coloring, opt.separation).passed()) return {std::move(coloring), seed, attempt + 1};
  }
  throw Error(Stage::coloring, "search_exhausted",
              "no region coloring satisfying the Hopf distinctness condition found in " +
                  std::to_string(opt.max_attempts) + " attempts");
}

// Checks h(p) against every arc and region color, and h(p * a) != h(a) for
// every arc color a. Returns an empty string when p is admissible.
inline std::string p_violation(const ArcColoring& arc, const RegionColoring& region, const ParabolicElement& p,
                               double separation = kHopfSeparation) {
  for (std::size_t k = 0; k < arc.size(); ++k) {
    if (hopf_separation(p, arc[k]) <= separation) return "h(p) coincides with h(a" + std::to_string(k + 1) + ")";
    if (hopf_separation(star(p, arc[k]), arc[k]) <= separation)
      return "h(p*a" + std::to_string(k + 1) + ") coincides with h(a" + std::to_string(k + 1) + ")";
  }
  for (std::size_t k = 0; k < region.size(); ++k)
    if (hopf_separation(p, region[k]) <= separation) return "h(p) coincides with h(s" + std::to_string(k + 1) + ")";
  return {};
}

inline ParabolicElement find_p(const ArcColoring& arc, const RegionColoring& region, std::uint64_t rng_seed,
                               const std::optional<ParabolicElement>& candidate = std::nullopt,
                               double separation = kHopfSeparation, int max_attempts = 1000) {
  if (candidate) {
    if (auto why = p_violation(arc, region, *candidate, separation); !why.empty())
      throw Error(Stage::coloring, "p_rejected", "supplied p is not admissible: " + why);
    return *candidate;
  }
  // Decorrelate from the region search that typically shares rng_seed.
  std::mt19937_64 rng(rng_seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const ParabolicElement p = detail::sample_integer_element(rng, detail::sample_range(attempt));
    if (p_violation(arc, region, p, separation).empty()) return p;
  }
  throw Error(Stage::coloring, "search_exhausted",
              "no admissible p found in " + std::to_string(max_attempts) + " attempts");
}

}  // namespace optlim
