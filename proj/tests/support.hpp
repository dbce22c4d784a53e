#pragma once

// Shared fixtures: the two worked examples with their reference data, the
// extra corpus, and random generators.

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "optlim/optlim.hpp"

namespace testing_support {

using optlim::Complex;
using optlim::ParabolicElement;

inline std::string jobs_dir() { return OPTLIM_JOBS_DIR; }
inline std::string corpus_dir() { return OPTLIM_CORPUS_DIR; }

inline Complex fig8_t(bool conjugate = false) { return {-0.5, (conjugate ? 1.0 : -1.0) * std::sqrt(3.0) / 2.0}; }

// Figure-eight example: colors as polynomials in t, t^2 + t + 1 = 0.
struct Fig8Data {
  Complex t;
  std::vector<ParabolicElement> arc, region;
  ParabolicElement p{2.0, 1.0};
  std::vector<Complex> w0;
};

inline Fig8Data fig8_data(bool conjugate = false) {
  const Complex t = fig8_t(conjugate);
  Fig8Data d{t, {}, {}, {2.0, 1.0}, {}};
  d.arc = {{0.0, t}, {1.0, 0.0}, {-t, 1.0 + t}, {-t, t}};
  d.region = {{1.0, 1.0},           {0.0, 1.0},           {-t - 1.0, t + 2.0},
              {-2.0 * t - 1.0, 2.0 * t + 3.0}, {-2.0 * t - 1.0, t + 4.0}, {1.0, t + 2.0}};
  d.w0 = {1.0, 2.0, 3.0 * t + 5.0, 6.0 * t + 7.0, 4.0 * t + 9.0, 2.0 * t + 3.0};
  return d;
}

struct TrefoilData {
  std::vector<ParabolicElement> arc, region;
  ParabolicElement p{2.0, 1.0};
  std::vector<Complex> w0;
};

inline TrefoilData trefoil_data() {
  TrefoilData d;
  d.arc = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}};
  d.region = {{-1.0, 2.0}, {1.0, 2.0}, {-1.0, 3.0}, {0.0, 1.0}, {1.0, 1.0}, {-2.0, 3.0}};
  d.w0 = {5.0, 3.0, 7.0, 2.0, 1.0, 8.0};
  return d;
}

inline optlim::JobInput load(const std::string& path) { return optlim::load_job(path); }
inline optlim::JobInput fig8_job() { return load(jobs_dir() + "/fig8.json"); }
inline optlim::JobInput fig8_conj_job() { return load(jobs_dir() + "/fig8_conj.json"); }
inline optlim::JobInput trefoil_job() { return load(jobs_dir() + "/trefoil.json"); }

inline optlim::LinkDiagram diagram_of(const optlim::JobInput& job) { return optlim::parse_diagram(job.diagram); }

// Extra diagrams with arc-colorings of the geometric representation and
// their hyperbolic volumes (trefoil: 0).
struct CorpusEntry {
  std::string file;
  double volume;
};

inline std::vector<CorpusEntry> corpus() {
  return {
      {"trefoil.json", 0.0},
      {"figure_eight.json", 2.029883212819307},
      {"knot_5_2.json", 2.828122088330783},
      {"knot_6_1.json", 3.163963228883143},
      {"whitehead.json", 3.663862376708876},
  };
}

// Every diagram with a known arc-coloring: the bundled jobs and the corpus.
inline std::vector<optlim::JobInput> all_jobs() {
  std::vector<optlim::JobInput> out{fig8_job(), fig8_conj_job(), trefoil_job()};
  for (const auto& e : corpus()) out.push_back(load(corpus_dir() + "/" + e.file));
  return out;
}

inline Complex random_complex(std::mt19937_64& rng, double r = 2.0) {
  std::uniform_real_distribution<double> u(-r, r);
  const double re = u(rng);
  return {re, u(rng)};
}

inline ParabolicElement random_element(std::mt19937_64& rng) {
  while (true) {
    const Complex a = random_complex(rng), b = random_complex(rng);
    if (std::abs(a) + std::abs(b) > 0.1) return {a, b};
  }
}

inline bool close(const ParabolicElement& x, const ParabolicElement& y, double tol) {
  return optlim::distance(x, y) <= tol * std::max(1.0, x.norm());
}

inline bool close(Complex x, Complex y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); }

}  // namespace testing_support
