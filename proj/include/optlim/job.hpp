#pragma once

// Job documents (JSON) and the end-to-end driver used by the command-line
// tool. Complex numbers are [re, im] pairs; a color is [[re, im], [re, im]].

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optlim/coloring.hpp"
#include "optlim/diagram.hpp"
#include "optlim/error.hpp"
#include "optlim/potential.hpp"
#include "optlim/quandle.hpp"
#include "optlim/volume.hpp"

namespace optlim {

using Json = nlohmann::ordered_json;

// Malformed job document or unreadable file.
class JobError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JobInput {
  std::string name;
  std::string diagram;  // PD-code text
  std::vector<std::pair<int, ParabolicElement>> arc_colors;  // 1-based arc ids
  std::optional<std::pair<int, ParabolicElement>> region_seed;
  std::optional<ParabolicElement> p;
  std::uint64_t rng_seed = 0;
  double tolerance = 1e-9;
};

namespace detail {

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw JobError(where + ": expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline ParabolicElement color_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw JobError(where + ": expected a color [[re, im], [re, im]]");
  const Complex a = complex_from_json(j[0], where), b = complex_from_json(j[1], where);
  if (a == Complex{} && b == Complex{}) throw JobError(where + ": color must be nonzero");
  return {a, b};
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JobError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// `base_dir` resolves {"file": ...} diagram references.
inline JobInput job_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw JobError("job document must be a JSON object");
  JobInput job;
  if (j.contains("name")) job.name = j.at("name").get<std::string>();

  if (!j.contains("diagram")) throw JobError("missing field 'diagram'");
  const Json& d = j.at("diagram");
  if (d.is_string()) {
    job.diagram = d.get<std::string>();
  } else if (d.is_array()) {
    for (const auto& line : d) {
      if (!line.is_string()) throw JobError("diagram: lines must be strings");
      job.diagram += line.get<std::string>();
      job.diagram += '\n';
    }
  } else if (d.is_object() && d.contains("file")) {
    job.diagram = detail::read_file(base_dir / d.at("file").get<std::string>());
  } else {
    throw JobError("diagram: expected PD text, an array of lines, or {\"file\": path}");
  }

  if (!j.contains("arc_colors") || !j.at("arc_colors").is_array()) throw JobError("missing array 'arc_colors'");
  for (const auto& entry : j.at("arc_colors")) {
    if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer())
      throw JobError("arc_colors: entries are [arc id, [re, im], [re, im]]");
    const int id = entry[0].get<int>();
    const std::string where = "arc_colors[" + std::to_string(id) + "]";
    job.arc_colors.emplace_back(id, detail::color_from_json(Json::array({entry[1], entry[2]}), where));
  }

  if (j.contains("region_seed")) {
    const Json& s = j.at("region_seed");
    if (!s.is_object() || !s.contains("region") || !s.contains("color"))
      throw JobError("region_seed: expected {\"region\": id, \"color\": [[re, im], [re, im]]}");
    job.region_seed.emplace(s.at("region").get<int>(), detail::color_from_json(s.at("color"), "region_seed"));
  }
  if (j.contains("p")) job.p = detail::color_from_json(j.at("p"), "p");
  if (j.contains("rng_seed")) job.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  if (j.contains("tolerance")) job.tolerance = j.at("tolerance").get<double>();
  if (!(job.tolerance > 0)) throw JobError("tolerance must be positive");
  return job;
}

inline JobInput load_job(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw JobError(path.string() + ": " + e.what());
  }
  try {
    return job_from_json(j, path.parent_path());
  } catch (const Json::exception& e) {
    throw JobError(path.string() + ": " + e.what());
  }
}

// Orders the job's arc colors by arc index. Ids must cover every arc once.
inline ArcColoring arc_coloring(const LinkDiagram& d, const JobInput& job) {
  std::vector<std::optional<ParabolicElement>> slots(d.n_arcs());
  for (const auto& [id, color] : job.arc_colors) {
    if (id < 1 || static_cast<std::size_t>(id) > d.n_arcs())
      throw Error(Stage::arc_verification, "arc_colors",
                  "arc id " + std::to_string(id) + " out of range 1.." + std::to_string(d.n_arcs()));
    if (slots[static_cast<std::size_t>(id - 1)])
      throw Error(Stage::arc_verification, "arc_colors", "arc " + std::to_string(id) + " colored twice");
    slots[static_cast<std::size_t>(id - 1)] = color;
  }
  ArcColoring out;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!slots[k]) throw Error(Stage::arc_verification, "arc_colors", "arc " + std::to_string(k + 1) + " has no color");
    out.push_back(*slots[k]);
  }
  return out;
}

enum class StopAfter { parse, coloring, volume };

struct RunOptions {
  // Replaces the job's rng_seed; the job's region_seed and p are then ignored
  // and both are sampled.
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;    // overrides the job's tolerance
  int random_colorings = 0;
  bool verify_gradient = false;
  StopAfter stop_after = StopAfter::volume;
};

struct GradientCheck {
  int points = 0;
  double max_relative_error = 0;
  bool passed = false;
};

struct InvarianceRun {
  std::uint64_t seed = 0;
  ParabolicElement seed_color{1.0, 0.0};
  ParabolicElement p{1.0, 0.0};
  double vol = 0;
  double cs = 0;
  double max_residual = 0;
};

// Everything a run produced, up to the first failure.
struct JobOutcome {
  std::optional<LinkDiagram> diagram;
  std::optional<ArcColoring> arc;
  std::optional<ArcVerification> verification;
  std::optional<RegionSearchResult> regions;
  std::optional<ParabolicElement> p;
  std::optional<GradientCheck> gradient;
  std::optional<VolumeReport> volume;
  std::vector<InvarianceRun> invariance;
  std::optional<Error> error;
  bool ok() const { return !error.has_value(); }
};

// Central differences of W in each w_k (step h |w_k|), scaled by w_k, against
// grad_W. Relative error uses max(|analytic|, 1) as denominator.
inline double gradient_error(const PotentialFunction& pf, const std::vector<Complex>& w, double h = 1e-6) {
  const auto g = grad_W(pf, w);
  double worst = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Complex step = h * std::abs(w[k]);
    auto up = w, down = w;
    up[k] += step;
    down[k] -= step;
    const Complex fd = w[k] * (eval_W(pf, up) - eval_W(pf, down)) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - g[k]) / std::max(std::abs(g[k]), 1.0));
  }
  return worst;
}

namespace detail {

inline double cs_distance(double a, double b) { return std::abs(reduce_mod_pi2(a - b)); }

}  // namespace detail

inline JobOutcome run_job(const JobInput& job, const RunOptions& opt = {}) {
  JobOutcome out;
  const std::uint64_t seed = opt.seed.value_or(job.rng_seed);
  const double tol = opt.tolerance.value_or(job.tolerance);
  try {
    out.diagram = parse_diagram(job.diagram);
    const LinkDiagram& d = *out.diagram;
    if (opt.stop_after == StopAfter::parse) return out;

    out.arc = arc_coloring(d, job);
    out.verification = verify_arc_coloring(d, *out.arc, tol);
    require_valid(*out.verification);

    SearchOptions search;
    search.tol = tol;
    if (job.region_seed && !opt.seed) {
      const auto& [region, color] = *job.region_seed;
      if (region < 1 || static_cast<std::size_t>(region) > d.n_regions())
        throw Error(Stage::coloring, "seed", "seed region " + std::to_string(region) + " does not exist");
      search.seed_region = static_cast<std::size_t>(region - 1);
      search.seed_color = color;
    }
    out.regions = find_region_coloring(d, *out.arc, seed, search);
    out.p = find_p(*out.arc, out.regions->coloring, seed, opt.seed ? std::nullopt : job.p);
    if (opt.stop_after == StopAfter::coloring) return out;

    const ShadowColoring coloring{*out.arc, out.regions->coloring, *out.p};
    if (opt.verify_gradient) {
      const PotentialFunction pf = build_potential(d);
      GradientCheck gc;
      gc.points = 1;
      gc.max_relative_error = gradient_error(pf, solution_w0(coloring.region, coloring.p));
      gc.passed = gc.max_relative_error < 1e-6;
      out.gradient = gc;
      if (!gc.passed) {
        std::ostringstream os;
        os << "analytic gradient disagrees with finite differences (relative error " << gc.max_relative_error << ")";
        throw Error(Stage::pipeline, "gradient", os.str());
      }
    }

    out.volume = complex_volume(d, coloring, {tol, kHopfSeparation});

    for (int k = 1; k <= opt.random_colorings; ++k) {
      const std::uint64_t run_seed = seed + static_cast<std::uint64_t>(k);
      SearchOptions random_search;
      random_search.tol = tol;
      const auto regions = find_region_coloring(d, *out.arc, run_seed, random_search);
      const ParabolicElement p = find_p(*out.arc, regions.coloring, run_seed);
      const auto rep = complex_volume(d, {*out.arc, regions.coloring, p}, {tol, kHopfSeparation});
      out.invariance.push_back({run_seed, regions.seed_color, p, rep.vol, rep.cs, rep.max_residual});
      constexpr double kAgreement = 1e-8;
      if (std::abs(rep.vol - out.volume->vol) > kAgreement ||
          detail::cs_distance(rep.cs, out.volume->cs) > kAgreement) {
        std::ostringstream os;
        os.precision(12);
        os << "random coloring " << k << " (seed " << run_seed << ") gives vol " << rep.vol << ", cs " << rep.cs
           << "; expected vol " << out.volume->vol << ", cs " << out.volume->cs;
        throw Error(Stage::pipeline, "invariance", os.str());
      }
    }
  } catch (const Error& e) {
    out.error = e;
  }
  return out;
}

// ---- report serialization ------------------------------------------------

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ParabolicElement& a) { return Json::array({to_json(a.alpha()), to_json(a.beta())}); }

inline Json diagram_json(const LinkDiagram& d) {
  Json j;
  j["crossings"] = d.n_crossings();
  j["regions"] = d.n_regions();
  j["arcs"] = d.n_arcs();
  j["components"] = d.n_components();
  Json xs = Json::array();
  for (std::size_t x = 0; x < d.n_crossings(); ++x) {
    const auto& q = d.quadrants(x);
    const auto& a = d.crossing_arcs(x);
    Json c;
    c["crossing"] = x + 1;
    c["sign"] = d.sign(x);
    c["quadrants"] = Json::array({q.a + 1, q.b + 1, q.c + 1, q.d + 1});
    c["over_arc"] = a.over + 1;
    c["under_in_arc"] = a.under_in + 1;
    c["under_out_arc"] = a.under_out + 1;
    xs.push_back(std::move(c));
  }
  j["crossing_data"] = std::move(xs);
  Json arcs = Json::array();
  for (const auto& arc : d.arcs()) arcs.push_back(arc.edges);
  j["arc_edges"] = std::move(arcs);
  Json regions = Json::array();
  for (const auto& r : d.regions()) regions.push_back(r.edges);
  j["region_edges"] = std::move(regions);
  return j;
}

inline Json colors_json(const std::vector<ParabolicElement>& colors) {
  Json j = Json::array();
  for (const auto& c : colors) j.push_back(to_json(c));
  return j;
}

inline Json volume_json(const VolumeReport& r) {
  Json j;
  Json w = Json::array();
  for (auto z : r.w0) w.push_back(to_json(z));
  j["w0"] = std::move(w);
  j["residuals"] = r.residuals;
  j["max_residual"] = r.max_residual;
  Json cr = Json::array();
  double worst = 0;
  for (const auto& c : r.cross_ratio_checks) {
    worst = std::max(worst, c.error);
    cr.push_back({{"crossing", c.crossing + 1},
                  {"identity", c.identity},
                  {"cross_ratio", to_json(c.lhs)},
                  {"ratio", to_json(c.rhs)},
                  {"error", c.error}});
  }
  j["cross_ratio_max_error"] = worst;
  j["cross_ratios"] = std::move(cr);
  double min_sep = 1.0;
  for (const auto& c : r.nondegeneracy) min_sep = std::min(min_sep, c.min_separation);
  j["nondegeneracy_checks"] = r.nondegeneracy.size();
  j["nondegeneracy_min_separation"] = min_sep;
  j["sign_choices"] = r.sign_choices;
  j["W0"] = to_json(r.W0_raw);
  j["vol"] = r.vol;
  j["cs"] = r.cs;
  return j;
}

inline Json outcome_json(const JobInput& job, const JobOutcome& out) {
  Json j;
  if (!job.name.empty()) j["name"] = job.name;
  j["status"] = out.ok() ? "ok" : "error";
  if (out.error) {
    j["stage"] = std::string(stage_name(out.error->stage()));
    j["step"] = out.error->step();
    j["message"] = out.error->what();
  }
  if (out.diagram) j["diagram"] = diagram_json(*out.diagram);
  if (out.arc) j["arc_colors"] = colors_json(*out.arc);
  if (out.verification) {
    Json v = Json::array();
    for (std::size_t x = 0; x < out.verification->crossings.size(); ++x) {
      const auto& c = out.verification->crossings[x];
      v.push_back({{"crossing", x + 1}, {"sign_choice", c.sign_choice}, {"residual", c.residual}, {"passed", c.passed}});
    }
    j["arc_verification"] = std::move(v);
  }
  if (out.regions) {
    j["region_seed_color"] = to_json(out.regions->seed_color);
    j["region_search_attempts"] = out.regions->attempts;
    j["region_colors"] = colors_json(out.regions->coloring);
  }
  if (out.p) j["p"] = to_json(*out.p);
  if (out.gradient)
    j["gradient_check"] = {{"points", out.gradient->points},
                           {"max_relative_error", out.gradient->max_relative_error},
                           {"passed", out.gradient->passed}};
  if (out.volume) j["volume"] = volume_json(*out.volume);
  if (!out.invariance.empty()) {
    Json runs = Json::array();
    for (const auto& r : out.invariance)
      runs.push_back({{"seed", r.seed},
                      {"region_seed_color", to_json(r.seed_color)},
                      {"p", to_json(r.p)},
                      {"vol", r.vol},
                      {"cs", r.cs},
                      {"max_residual", r.max_residual}});
    j["random_colorings"] = std::move(runs);
  }
  return j;
}

}  // namespace optlim
