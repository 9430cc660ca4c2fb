#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sglab/block_matrix.hpp"

namespace sglab {

enum class Family {
  DiagJordan,   // e0 with eigenvalue i, then Jordan pairs with eigenvalue ik - 1/k
  JordanPairs,  // 2x2 blocks with eigenvalues i(n + 1/n), i(n - 1/n)
  LogSpectrum,  // diagonal i log n on the order-N difference weighted space
};

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view text);

struct ModelSpec {
  Family family = Family::JordanPairs;
  Index max_index = 2;
  int order = 1;  // LOG_SPECTRUM only
  Complex mu_default{1.0, 0.0};

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Growth bound of every family built here.
inline constexpr double kGrowthBound = 0.0;

struct BlockInfo {
  Index start = 0;
  int size = 1;
  std::vector<Complex> eigenvalues;  // one per diagonal entry
};

struct BlockStructure {
  std::vector<BlockInfo> blocks;
  Index dim = 0;
};

struct Eigenvalue {
  Complex value;
  int multiplicity = 1;
};

/// Smallest truncation that resolves the block supremum up to time t_max:
/// max_index >= ceil(50 t) for the Jordan families, dim >= 8 t for LOG_SPECTRUM.
Index required_max_index(Family family, double t_max);
Index dimension_for(Family family, Index max_index);

/// Throws TruncationError naming the required max_index and dim.
void check_truncation(const ModelSpec& spec, double t_max);

class Model {
 public:
  explicit Model(ModelSpec spec);

  const ModelSpec& spec() const noexcept { return spec_; }
  const BlockStructure& structure() const noexcept { return structure_; }
  const NormContext& norm_context() const noexcept { return context_; }
  Index dim() const noexcept { return structure_.dim; }

  BlockDiagonalMatrix evolve(double t) const;
  BlockDiagonalMatrix generator() const;
  /// (A - mu I)^{-1}, blockwise closed form.
  BlockDiagonalMatrix resolvent(Complex mu) const;
  /// Sorted by imaginary part (ties by real part), with multiplicities.
  std::vector<Eigenvalue> eigenvalues() const;

  /// Distance from mu to the truncated spectrum.
  double spectral_distance(Complex mu) const;

 private:
  Model(ModelSpec spec, std::pair<BlockStructure, NormContext> built);

  ModelSpec spec_;
  BlockStructure structure_;
  NormContext context_;
};

/// Block layout and norm context for a spec, validating it.
std::pair<BlockStructure, NormContext> build_model(const ModelSpec& spec);

}  // namespace sglab
