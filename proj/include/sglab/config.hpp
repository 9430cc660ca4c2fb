#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sglab/models.hpp"

namespace sglab {

enum class Spacing { Linear, Geometric };

struct TimeGridSpec {
  double t_min = 1.0;
  double t_max = 200.0;
  int points = 0;  // 0: geometric steps of sqrt(2)
  Spacing spacing = Spacing::Geometric;

  std::vector<double> values() const;

  friend bool operator==(const TimeGridSpec&, const TimeGridSpec&) = default;
};

struct Tolerances {
  double norm = 1e-10;
  double projection = 1e-8;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct OutputSpec {
  std::string directory = "out";
  bool csv = true;
  bool json = true;

  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

/// One experiment, loaded from the flat `section.key = value` format.
struct ExperimentConfig {
  ModelSpec model;
  TimeGridSpec grid;
  Complex mu{1.0, 0.0};
  std::optional<int> contour_nodes;
  std::optional<double> contour_radius;
  int eigenvalue_count = 5;
  double translation_shift = 1.0;
  Tolerances tolerances;
  OutputSpec output;
  Index max_dim = 200000;
  std::uint64_t seed = 42;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses config text. Unknown keys, malformed values and invalid grids fail
/// with ErrorCode::Config naming the line and key. When model.max_index is
/// absent it is set to the smallest adequate truncation for grid.t_max; an
/// explicit max_index below that, or a dimension above max_dim, fails with
/// TruncationError.
ExperimentConfig parse_config(std::string_view text, std::optional<Index> max_dim_override = {});
ExperimentConfig load_config(const std::string& path, std::optional<Index> max_dim_override = {});

/// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const ExperimentConfig& config);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Hash of the canonical text.
std::string config_hash(const ExperimentConfig& config);

std::string format_double(double value);
std::string format_complex(Complex value);
std::optional<Complex> parse_complex(std::string_view text);

}  // namespace sglab
