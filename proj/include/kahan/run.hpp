#pragma once

// Executes a RunConfig: builds the map, iterates it, runs the requested
// analyses and renders CSV, SVG and text artifacts.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kahan/config.hpp"
#include "kahan/dynamics.hpp"

namespace kahan {

enum class Command { Discretize, Orbit, Darboux, AnalyzeBeam, Report };

std::optional<Command> parse_command(std::string_view name);
std::string to_string(Command c);

/// The system, scheme and map of a config with every parameter (and h) bound.
struct PreparedSystem {
  std::string title;
  PolyOdeSystem system;
  ImplicitScheme scheme;
  BirationalMap map;
  /// A conserved quantity known for the case (empty when none).
  std::optional<RationalFunction> first_integral;
  std::string integral_name;
};

PreparedSystem prepare(const RunConfig& c);

/// The configured window, or the reference-solver seed built from `ode`.
std::vector<double> initial_window(const RunConfig& c, const PreparedSystem& s);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Header `step,x1_0,...` (xJ_k is component J at shift k), one row per point.
std::string orbit_csv(const Orbit& orbit, int order, int dim);

/// Static SVG polyline of two state coordinates (or step against the single
/// coordinate of a one-dimensional state).  Fewer than two finite points give
/// an empty frame.
std::string phase_portrait_svg(const Orbit& orbit, std::pair<int, int> plot, const std::vector<std::string>& labels);

/// max_k |K(x_k) - K(x_0)| / |K(x_0)| over the orbit points.
double relative_drift(const RationalFunction& k, const BirationalMap& m, const Orbit& orbit);

struct Artifacts {
  std::string text;
  std::vector<std::filesystem::path> files;
};

/// Writes the artifacts below `out` (created when missing) and returns the
/// report text.  Library errors propagate; the caller maps them to exit codes.
Artifacts run(Command cmd, const RunConfig& c, const std::filesystem::path& out);

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Maps an error code to kExitConfig or kExitNumeric.
int exit_code_for(ErrorCode code);

}  // namespace kahan
