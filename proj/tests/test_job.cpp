#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "optlim/job.hpp"
#include "support.hpp"

using namespace optlim;

namespace {

Json fig8_json() {
  std::ifstream in(testing_support::jobs_dir() + "/fig8.json");
  return Json::parse(in);
}

std::string failing_step(const JobOutcome& out) {
  if (!out.error) return "ok";
  return std::string(stage_name(out.error->stage())) + "/" + out.error->step();
}

}  // namespace

TEST(Job, LoadsBundledJobs) {
  const auto job = testing_support::fig8_job();
  EXPECT_EQ(job.arc_colors.size(), 4u);
  ASSERT_TRUE(job.region_seed);
  EXPECT_EQ(job.region_seed->first, 1);
  ASSERT_TRUE(job.p);
  EXPECT_EQ(*job.p, ParabolicElement(2.0, 1.0));
  EXPECT_EQ(job.rng_seed, 0u);
  EXPECT_DOUBLE_EQ(job.tolerance, 1e-9);
}

TEST(Job, DiagramForms) {
  auto j = fig8_json();
  const auto lines = job_from_json(j);
  std::string text;
  for (const auto& l : j["diagram"]) text += l.get<std::string>() + "\n";
  j["diagram"] = text;
  const auto as_string = job_from_json(j);
  EXPECT_EQ(lines.diagram, as_string.diagram);

  const auto dir = std::filesystem::temp_directory_path() / "optlim_job_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "fig8.pd") << text;
  j["diagram"] = {{"file", "fig8.pd"}};
  const auto as_file = job_from_json(j, dir);
  EXPECT_EQ(as_file.diagram, text);
  j["diagram"] = {{"file", "missing.pd"}};
  EXPECT_THROW(job_from_json(j, dir), JobError);
}

TEST(Job, MalformedDocuments) {
  auto j = fig8_json();
  j.erase("diagram");
  EXPECT_THROW(job_from_json(j), JobError);
  j = fig8_json();
  j["arc_colors"][0] = Json::array({1, Json::array({0, 0}), Json::array({0, 0})});
  EXPECT_THROW(job_from_json(j), JobError);
  j = fig8_json();
  j["arc_colors"][0] = Json::array({1, Json::array({0, 0})});
  EXPECT_THROW(job_from_json(j), JobError);
  j = fig8_json();
  j["p"] = Json::array({1, 2});
  EXPECT_THROW(job_from_json(j), JobError);
  j = fig8_json();
  j["tolerance"] = -1;
  EXPECT_THROW(job_from_json(j), JobError);
  EXPECT_THROW(job_from_json(Json::array()), JobError);
}

TEST(Job, ArcIdsMustCoverArcs) {
  auto job = testing_support::fig8_job();
  job.arc_colors.pop_back();
  EXPECT_EQ(failing_step(run_job(job)), "arc_verification/arc_colors");
  job = testing_support::fig8_job();
  job.arc_colors[1].first = 1;
  EXPECT_EQ(failing_step(run_job(job)), "arc_verification/arc_colors");
  job = testing_support::fig8_job();
  job.arc_colors[1].first = 9;
  EXPECT_EQ(failing_step(run_job(job)), "arc_verification/arc_colors");
}

TEST(Job, RunReproducesGoldenIntermediates) {
  const auto out = run_job(testing_support::fig8_job());
  ASSERT_TRUE(out.ok()) << out.error->what();
  const auto f = testing_support::fig8_data();
  for (std::size_t k = 0; k < 6; ++k) EXPECT_TRUE(testing_support::close(out.regions->coloring[k], f.region[k], 1e-12));
  EXPECT_EQ(*out.p, f.p);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_LE(std::abs(out.volume->w0[k] - f.w0[k]), 1e-12);
}

TEST(Job, FailureStages) {
  auto job = testing_support::fig8_job();
  job.arc_colors[2].second = ParabolicElement(job.arc_colors[2].second.alpha() + 1e-3, job.arc_colors[2].second.beta());
  EXPECT_EQ(failing_step(run_job(job)), "arc_verification/crossing_relation");

  job = testing_support::fig8_job();
  job.diagram = "X 1 3 2 4 over=3\nX 2 3 1 4 over=4\n";
  EXPECT_EQ(failing_step(run_job(job)), "parse/trivial_component");

  job = testing_support::fig8_job();
  job.region_seed->second = ParabolicElement(1.0, 0.0);
  EXPECT_EQ(failing_step(run_job(job)), "coloring/lemma1");

  job = testing_support::fig8_job();
  job.p = ParabolicElement(1.0, 1.0);  // h(p) = h(s1)
  EXPECT_EQ(failing_step(run_job(job)), "coloring/p_rejected");

  job = testing_support::trefoil_job();
  RunOptions strict;
  strict.tolerance = 1e-18;
  EXPECT_EQ(failing_step(run_job(job, strict)), "pipeline/residuals");
}

TEST(Job, SeedOverrideSamplesColoring) {
  RunOptions opt;
  opt.seed = 7;
  const auto out = run_job(testing_support::trefoil_job(), opt);
  ASSERT_TRUE(out.ok());
  EXPECT_NE(out.regions->seed_color, ParabolicElement(-1.0, 2.0));
  EXPECT_NEAR(std::abs(out.volume->cs), std::numbers::pi * std::numbers::pi / 6, 1e-9);
}

TEST(Job, RandomColoringsAgree) {
  RunOptions opt;
  opt.random_colorings = 20;
  opt.verify_gradient = true;
  for (const auto& job : testing_support::all_jobs()) {
    const auto out = run_job(job, opt);
    EXPECT_TRUE(out.ok()) << job.name << ": " << (out.error ? out.error->what() : "");
    EXPECT_EQ(out.invariance.size(), 20u);
    ASSERT_TRUE(out.gradient);
    EXPECT_TRUE(out.gradient->passed);
  }
}

TEST(Job, ReportIsDeterministic) {
  RunOptions opt;
  opt.random_colorings = 3;
  const auto job = testing_support::fig8_job();
  const std::string a = outcome_json(job, run_job(job, opt)).dump(2);
  const std::string b = outcome_json(job, run_job(job, opt)).dump(2);
  EXPECT_EQ(a, b);
  const auto j = Json::parse(a);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["diagram"]["regions"], 6);
  EXPECT_NEAR(j["volume"]["vol"].get<double>(), 2.029883212819307, 1e-9);
  EXPECT_EQ(j["volume"]["w0"].size(), 6u);
}

TEST(Job, ErrorReportNamesStage) {
  auto job = testing_support::fig8_job();
  job.arc_colors[0].second = ParabolicElement(1.0, 1.0);
  const auto j = outcome_json(job, run_job(job));
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["stage"], "arc_verification");
  EXPECT_EQ(j["step"], "crossing_relation");
  EXPECT_TRUE(j.contains("arc_verification"));
  EXPECT_FALSE(j.contains("volume"));
}
