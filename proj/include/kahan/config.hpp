#pragma once

// Run configuration: a small INI/TOML-like text format.
//
//   preset = quartic          # or: order = 2; rhs: -a*x1^3
//   [params]
//   a = 1; b = 2; c = 3; d = 5
//   h = 0.1
//   [initial]
//   window = 0.3, 0.31
//   [run]
//   steps = 1000
//
// Statements are separated by newlines or `;`, keys from values by `=` or
// `:`, and `#` starts a comment.  Inside [params] every key except the list
// keys `alphavec`/`betavec` names a parameter; elsewhere only the keys below are
// accepted.  Numbers are read as exact rationals (0.1 is 1/10).

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kahan/polynomial.hpp"

namespace kahan {

inline const std::vector<std::string> kPresets = {"lv", "quartic", "weierstrass", "beam-sym", "beam-lag"};

struct RunConfig {
  /// Preset name; empty for an inline system.
  std::string preset;
  /// Inline system: d^order x_i/dt^order = rhs[i].
  int order = 0;
  std::vector<Polynomial> rhs;

  std::map<std::string, Rational> params;
  Rational h;
  /// Affine weights for the Lagrangian beam; empty means alpha_5 = beta_3 = 1.
  std::vector<Rational> alpha;
  std::vector<Rational> beta;

  /// Initial map state (shift-major), or ODE data x^(d)_j at t = 0
  /// (derivative-major) used to seed the window from the reference solver.
  std::vector<double> window;
  std::vector<double> ode_initial;
  int steps = 100;

  /// Darboux search degree; negative disables it.
  int darboux_maxdeg = -1;
  bool spectra = false;
  bool measure = false;
  bool symplectic = false;
  bool convergence = false;
  int samples = 20;
  std::uint64_t seed = 20240601;

  std::string csv = "orbit.csv";
  std::string svg = "orbit.svg";
  std::string report = "report.txt";
  /// State indices drawn on the phase portrait.
  std::pair<int, int> plot{0, 1};

  bool is_inline() const { return preset.empty(); }
  bool is_beam() const { return preset == "beam-sym" || preset == "beam-lag"; }
  int state_order() const;
  int state_dim() const;
};

/// Defaults for a named preset.  Throws ValidationError for unknown names.
RunConfig preset_config(const std::string& name);

/// Throws ParseError (with line and column) on malformed text and
/// ValidationError on inconsistent content.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file; a missing file is a ValidationError.
RunConfig load_config(const std::filesystem::path& path);

/// Throws ValidationError (or AffineConstraintViolated for beam weights).
void validate(const RunConfig& c);

}  // namespace kahan
