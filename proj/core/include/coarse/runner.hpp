#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "coarse/analysis.hpp"
#include "coarse/oracle.hpp"
#include "coarse/problem_spec.hpp"

namespace coarse {

// Command implementations behind the CLI.  Each runner loads a spec file,
// solves, and writes JSON/CSV artifacts into out_dir.  Validation problems
// throw ValidationError (exit 2), solver failures SolverError (exit 3), and
// failed uniqueness certification CertificationError (exit 4, after the
// artifacts are written).

struct RunnerOverrides {
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
  std::optional<SeedChoice> seed_choice;
};

CompiledProblem load_problem_with_overrides(const std::filesystem::path& spec,
                                            const RunnerOverrides& ov);

struct SolveRun {
  CompiledProblem problem;
  SolveOutcome outcome;  // unit space
  std::vector<std::filesystem::path> files;
};

SolveRun run_solve(const std::filesystem::path& spec, const std::filesystem::path& out_dir,
                   const RunnerOverrides& ov = {});

struct SweepRow {
  int n = 0;
  double payoff = 0.0;
  double last_cutoff = 0.0;  // s_{N-1}, original units
  double max_residual = 0.0;
};

struct SweepRun {
  std::vector<SweepRow> rows;
  SolveMode mode = SolveMode::Convex;
  std::vector<std::filesystem::path> files;
};

SweepRun run_sweep(const std::filesystem::path& spec, int n_from, int n_to,
                   const std::filesystem::path& out_dir, const RunnerOverrides& ov = {});

enum class CompareKind { LikelihoodRatio, UniformVariability };

struct CompareRun {
  CompareKind kind = CompareKind::LikelihoodRatio;
  std::optional<ShiftReport> shift;
  std::optional<VariabilityReport> variability;
  std::vector<std::filesystem::path> files;
};

CompareRun run_compare(const std::filesystem::path& base_spec,
                       const std::filesystem::path& shifted_spec, CompareKind kind,
                       const std::filesystem::path& out_dir, const RunnerOverrides& ov = {});

struct OracleRun {
  BiPoolingSolution solution;  // degenerate for interval oracles, unit space
  std::vector<std::filesystem::path> files;
};

OracleRun run_oracle(const std::filesystem::path& spec, int grid,
                     const std::filesystem::path& out_dir, const RunnerOverrides& ov = {});

struct PricingRun {
  MenuSolution menu;
  std::vector<std::filesystem::path> files;
};

PricingRun run_pricing(const std::filesystem::path& spec, const std::filesystem::path& out_dir,
                       const RunnerOverrides& ov = {});

// Re-ingestion of an emitted solution.json (the round-trip surface).
struct LoadedSolution {
  std::string kind;  // "interval" or "bipooling"
  double lo = 0.0, hi = 1.0;
  IntervalSolution interval;      // unit space; filled when kind == "interval"
  BiPoolingSolution bipooling;    // filled when kind == "bipooling"
  double payoff = 0.0;
  double max_residual = 0.0;
};

LoadedSolution load_solution_json(const std::filesystem::path& file);

}  // namespace coarse
