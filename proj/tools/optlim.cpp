// optlim: complex volume of a boundary-parabolic representation from a link
// diagram and an arc-coloring.
//
//   optlim run       <job.json>   full pipeline, summary + optional JSON report
//   optlim parse     <job|pd>     diagram combinatorics
//   optlim color     <job.json>   arc verification and shadow-coloring
//   optlim potential <job|pd>     potential function terms
//   optlim solve     <job.json>   explicit solution and its checks
//
// Exit codes: 0 ok, 1 usage or I/O, 2 parse, 3 arc verification,
// 4 coloring search, 5 pipeline check.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "optlim/optlim.hpp"

namespace {

using namespace optlim;

int exit_code(Stage s) {
  switch (s) {
    case Stage::parse: return 2;
    case Stage::arc_verification: return 3;
    case Stage::coloring: return 4;
    case Stage::pipeline: return 5;
  }
  return 1;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << std::setprecision(12) << z.real() << (std::signbit(z.imag()) ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

std::string fmt(const ParabolicElement& a) { return "(" + fmt(a.alpha()) + ", " + fmt(a.beta()) + ")"; }

// A job document, or a bare PD-code file for the diagram-only commands.
JobInput load_input(const std::string& path, bool allow_pd) {
  const std::filesystem::path p(path);
  if (allow_pd && p.extension() != ".json") {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw JobError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    JobInput job;
    job.diagram = ss.str();
    return job;
  }
  return load_job(p);
}

void print_diagram(std::ostream& os, const LinkDiagram& d) {
  os << d.n_crossings() << " crossings, " << d.n_regions() << " regions, " << d.n_arcs() << " arcs, "
     << d.n_components() << (d.n_components() == 1 ? " component\n" : " components\n");
  for (std::size_t x = 0; x < d.n_crossings(); ++x) {
    const auto& q = d.quadrants(x);
    const auto& a = d.crossing_arcs(x);
    os << "  crossing " << x + 1 << ": sign " << (d.sign(x) > 0 ? '+' : '-') << ", regions (a,b,c,d) = (" << q.a + 1
       << "," << q.b + 1 << "," << q.c + 1 << "," << q.d + 1 << "), over arc " << a.over + 1 << ", under arcs "
       << a.under_in + 1 << " -> " << a.under_out + 1 << "\n";
  }
}

void print_coloring(std::ostream& os, const JobOutcome& out) {
  for (std::size_t k = 0; k < out.arc->size(); ++k) os << "  a" << k + 1 << " = " << fmt((*out.arc)[k]) << "\n";
  os << "arc relations hold, max residual " << fmt(out.verification->max_residual()) << "\n";
  os << "region seed " << fmt(out.regions->seed_color) << " (" << out.regions->attempts
     << (out.regions->attempts == 1 ? " attempt)\n" : " attempts)\n");
  const auto& s = out.regions->coloring;
  for (std::size_t k = 0; k < s.size(); ++k) os << "  s" << k + 1 << " = " << fmt(s[k]) << "\n";
  os << "p = " << fmt(*out.p) << "\n";
}

void print_solution(std::ostream& os, const VolumeReport& r) {
  for (std::size_t k = 0; k < r.w0.size(); ++k) os << "  w" << k + 1 << " = " << fmt(r.w0[k]) << "\n";
  double cr = 0;
  for (const auto& c : r.cross_ratio_checks) cr = std::max(cr, c.error);
  os << "max |exp(w dW/dw) - 1| = " << fmt(r.max_residual) << "\n";
  os << "shape parameters: " << r.cross_ratio_checks.size() << " cross-ratio identities, max error " << fmt(cr) << "\n";
  os << "non-degeneracy: " << r.nondegeneracy.size() << " checks passed\n";
}

void print_volume(std::ostream& os, const JobOutcome& out) {
  const auto& r = *out.volume;
  os << "W0  = " << fmt(r.W0_raw) << "\n";
  os << "vol = " << fmt(r.vol) << "\n";
  os << "cs  = " << fmt(r.cs) << "  (mod pi^2)\n";
  if (out.gradient) os << "gradient check: max relative error " << fmt(out.gradient->max_relative_error) << "\n";
  if (!out.invariance.empty())
    os << out.invariance.size() << " random colorings agree on vol and cs\n";
}

struct Common {
  std::string input;
  std::string json_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  int random_colorings = 0;
  bool verify_gradient = false;
  bool print_potential = false;
};

int execute(const std::string& command, const Common& c) {
  const bool diagram_only = command == "parse" || command == "potential";
  JobInput job = load_input(c.input, diagram_only);

  RunOptions opt;
  opt.seed = c.seed;
  opt.tolerance = c.tolerance;
  opt.random_colorings = c.random_colorings;
  opt.verify_gradient = c.verify_gradient;
  if (diagram_only) opt.stop_after = StopAfter::parse;
  else if (command == "color") opt.stop_after = StopAfter::coloring;

  const JobOutcome out = run_job(job, opt);

  if (!c.json_path.empty()) {
    std::ofstream js(c.json_path, std::ios::binary);
    if (!js) throw JobError("cannot write " + c.json_path);
    js << outcome_json(job, out).dump(2) << "\n";
  }

  auto& os = std::cout;
  if (!job.name.empty()) os << job.name << "\n";
  if (out.diagram && (command == "parse" || command == "run")) print_diagram(os, *out.diagram);
  if (out.diagram && command == "potential") {
    const auto pf = build_potential(*out.diagram);
    os << pf.terms.size() << " crossing terms in " << pf.n_vars << " region variables\n";
    if (c.print_potential) os << format_potential(pf);
  } else if (out.diagram && c.print_potential) {
    os << format_potential(build_potential(*out.diagram));
  }
  if (out.regions && out.p && command != "parse") print_coloring(os, out);
  if (out.volume && (command == "solve" || command == "run")) print_solution(os, *out.volume);
  if (out.volume && command == "run") print_volume(os, out);

  if (out.error) {
    std::cerr << "error [" << stage_name(out.error->stage()) << "/" << out.error->step() << "]: " << out.error->what()
              << "\n";
    if (out.verification && !out.verification->passed()) {
      for (std::size_t x = 0; x < out.verification->crossings.size(); ++x) {
        const auto& r = out.verification->crossings[x];
        std::cerr << "  crossing " << x + 1 << ": residual " << fmt(r.residual) << (r.passed ? "" : "  FAILED") << "\n";
      }
    }
    return exit_code(out.error->stage());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex volume of a boundary-parabolic link representation from an arc-coloring"};
  app.require_subcommand(1);

  Common common;
  const std::pair<const char*, const char*> commands[] = {
      {"run", "Run the full pipeline and report vol + i cs"},
      {"parse", "Parse a diagram (job file or PD-code file) and list its combinatorics"},
      {"color", "Verify the arc-coloring and build a shadow-coloring"},
      {"potential", "Build the potential function"},
      {"solve", "Construct the explicit solution and check it"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", common.input, "Job file (.json) or, for parse/potential, a PD-code file")->required();
    sub->add_option("--json", common.json_path, "Write the JSON report to this path");
    sub->add_option("--seed", common.seed, "Sample the region seed and p with this RNG seed");
    sub->add_option("--tolerance", common.tolerance, "Numerical tolerance (default: job value, 1e-9)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--print-potential", common.print_potential, "Print the symbolic potential function");
    if (std::string(name) == "run") {
      sub->add_flag("--verify-gradient", common.verify_gradient,
                    "Compare the analytic gradient with finite differences first");
      sub->add_option("--random-colorings", common.random_colorings,
                      "Repeat with k random shadow-colorings and require identical vol and cs")
          ->check(CLI::NonNegativeNumber);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return execute(app.get_subcommands().front()->get_name(), common);
  } catch (const JobError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
