#pragma once

#include <array>
#include <vector>

#include "sglab/linalg.hpp"

namespace sglab {

/// One diagonal block: 1x1 or 2x2 (upper triangular in every model here,
/// but the type does not assume it). Entries are row-major.
struct Block {
  Index start = 0;
  int size = 1;
  std::array<Complex, 4> entries{};

  Complex at(int r, int c) const { return entries[static_cast<std::size_t>(r * size + c)]; }
  Complex& at(int r, int c) { return entries[static_cast<std::size_t>(r * size + c)]; }
};

/// Block-diagonal matrix with 1x1 and 2x2 blocks covering 0..dim-1 contiguously.
/// All model operators (T(t), A, resolvents, spectral projections) live here.
class BlockDiagonalMatrix {
 public:
  explicit BlockDiagonalMatrix(std::vector<Block> blocks);

  Index dim() const noexcept { return dim_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }

  ComplexVector apply(const ComplexVector& x) const;
  ComplexVector apply_adjoint(const ComplexVector& x) const;
  LinearMap as_linear_map() const;

  ComplexMatrix dense() const;
  Complex trace() const;

  /// Exact Euclidean operator norm: max over blocks of the block norm.
  double euclidean_norm() const;

  friend BlockDiagonalMatrix operator*(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b);
  friend BlockDiagonalMatrix operator+(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b);
  friend BlockDiagonalMatrix operator-(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b);
  friend BlockDiagonalMatrix operator*(Complex s, const BlockDiagonalMatrix& a);

  /// Same layout, every block zero.
  BlockDiagonalMatrix zeros_like() const;
  BlockDiagonalMatrix identity_like() const;

 private:
  std::vector<Block> blocks_;
  Index dim_ = 0;
};

/// Operator norm of a block-diagonal operator between weighted spaces.
/// Euclidean on both sides reduces to the exact block supremum; otherwise the
/// structured product D_cod * M * L_dom is estimated by power iteration.
double operator_norm(const BlockDiagonalMatrix& m, const NormContext& domain,
                     const NormContext& codomain, const NormOptions& options = {});

}  // namespace sglab
