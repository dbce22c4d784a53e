#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optlim {

// Pipeline stage that raised an error. The CLI maps these onto exit codes.
enum class Stage {
  parse,
  arc_verification,
  coloring,
  pipeline,
};

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::parse: return "parse";
    case Stage::arc_verification: return "arc_verification";
    case Stage::coloring: return "coloring";
    case Stage::pipeline: return "pipeline";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Stage stage, std::string step, const std::string& what)
      : std::runtime_error(what), stage_(stage), step_(std::move(step)) {}

  Stage stage() const noexcept { return stage_; }
  // Finer-grained, machine-readable name of the failing step,
  // e.g. "syntax", "planarity", "residuals", "cross_ratios".
  const std::string& step() const noexcept { return step_; }

 private:
  Stage stage_;
  std::string step_;
};

inline Error parse_error(std::string step, const std::string& what) {
  return Error(Stage::parse, std::move(step), what);
}

}  // namespace optlim
