#include "sglab/block_matrix.hpp"

#include <algorithm>
#include <string>

#include "sglab/error.hpp"

namespace sglab {

namespace {

void check_same_layout(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b) {
  require(a.blocks().size() == b.blocks().size() && a.dim() == b.dim(),
          ErrorCode::DimensionMismatch, "block layouts differ");
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    require(a.blocks()[i].start == b.blocks()[i].start && a.blocks()[i].size == b.blocks()[i].size,
            ErrorCode::DimensionMismatch, "block layouts differ at block " + std::to_string(i));
  }
}

template <class Op>
BlockDiagonalMatrix combine(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b, Op op) {
  check_same_layout(a, b);
  std::vector<Block> out = a.blocks();
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) out[i].entries[k] = op(a.blocks()[i].entries[k], b.blocks()[i].entries[k]);
  }
  return BlockDiagonalMatrix(std::move(out));
}

}  // namespace

BlockDiagonalMatrix::BlockDiagonalMatrix(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  require(!blocks_.empty(), ErrorCode::InvalidArgument, "block matrix needs at least one block");
  Index next = 0;
  for (const auto& b : blocks_) {
    require(b.size == 1 || b.size == 2, ErrorCode::InvalidArgument, "block size must be 1 or 2");
    require(b.start == next, ErrorCode::InvalidArgument, "blocks must partition the index range");
    for (int k = 0; k < b.size * b.size; ++k) {
      const Complex z = b.entries[static_cast<std::size_t>(k)];
      require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::InvalidArgument,
              "block entry is not finite");
    }
    next += b.size;
  }
  dim_ = next;
}

ComplexVector BlockDiagonalMatrix::apply(const ComplexVector& x) const {
  require(x.size() == dim_, ErrorCode::DimensionMismatch, "block matvec dimension mismatch");
  ComplexVector y(dim_);
  for (const auto& b : blocks_) {
    const Index s = b.start;
    if (b.size == 1) {
      y[s] = b.entries[0] * x[s];
    } else {
      y[s] = b.entries[0] * x[s] + b.entries[1] * x[s + 1];
      y[s + 1] = b.entries[2] * x[s] + b.entries[3] * x[s + 1];
    }
  }
  return y;
}

ComplexVector BlockDiagonalMatrix::apply_adjoint(const ComplexVector& x) const {
  require(x.size() == dim_, ErrorCode::DimensionMismatch, "block matvec dimension mismatch");
  ComplexVector y(dim_);
  for (const auto& b : blocks_) {
    const Index s = b.start;
    if (b.size == 1) {
      y[s] = std::conj(b.entries[0]) * x[s];
    } else {
      y[s] = std::conj(b.entries[0]) * x[s] + std::conj(b.entries[2]) * x[s + 1];
      y[s + 1] = std::conj(b.entries[1]) * x[s] + std::conj(b.entries[3]) * x[s + 1];
    }
  }
  return y;
}

LinearMap BlockDiagonalMatrix::as_linear_map() const {
  return LinearMap{dim_, dim_, [this](const ComplexVector& x) { return apply(x); },
                   [this](const ComplexVector& x) { return apply_adjoint(x); }};
}

ComplexMatrix BlockDiagonalMatrix::dense() const {
  ComplexMatrix m(dim_, dim_);
  for (const auto& b : blocks_) {
    for (int r = 0; r < b.size; ++r)
      for (int c = 0; c < b.size; ++c) m(b.start + r, b.start + c) = b.at(r, c);
  }
  return m;
}

Complex BlockDiagonalMatrix::trace() const {
  Complex acc = 0.0;
  for (const auto& b : blocks_) {
    acc += b.entries[0];
    if (b.size == 2) acc += b.entries[3];
  }
  return acc;
}

double BlockDiagonalMatrix::euclidean_norm() const {
  double best = 0.0;
  for (const auto& b : blocks_) {
    const double n = b.size == 1 ? std::abs(b.entries[0])
                                 : singular_value_2x2(b.entries[0], b.entries[1], b.entries[2],
                                                      b.entries[3]);
    best = std::max(best, n);
  }
  return best;
}

BlockDiagonalMatrix operator*(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b) {
  check_same_layout(a, b);
  std::vector<Block> out = a.blocks_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Block& x = a.blocks_[i];
    const Block& y = b.blocks_[i];
    if (x.size == 1) {
      out[i].entries[0] = x.entries[0] * y.entries[0];
    } else {
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out[i].at(r, c) = x.at(r, 0) * y.at(0, c) + x.at(r, 1) * y.at(1, c);
    }
  }
  return BlockDiagonalMatrix(std::move(out));
}

BlockDiagonalMatrix operator+(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b) {
  return combine(a, b, [](Complex x, Complex y) { return x + y; });
}

BlockDiagonalMatrix operator-(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b) {
  return combine(a, b, [](Complex x, Complex y) { return x - y; });
}

BlockDiagonalMatrix operator*(Complex s, const BlockDiagonalMatrix& a) {
  std::vector<Block> out = a.blocks_;
  for (auto& b : out)
    for (auto& z : b.entries) z *= s;
  return BlockDiagonalMatrix(std::move(out));
}

BlockDiagonalMatrix BlockDiagonalMatrix::zeros_like() const {
  std::vector<Block> out = blocks_;
  for (auto& b : out) b.entries = {};
  return BlockDiagonalMatrix(std::move(out));
}

BlockDiagonalMatrix BlockDiagonalMatrix::identity_like() const {
  std::vector<Block> out = blocks_;
  for (auto& b : out) {
    b.entries = {};
    if (b.size == 1) {
      b.entries[0] = 1.0;
    } else {
      b.entries[0] = 1.0;
      b.entries[3] = 1.0;
    }
  }
  return BlockDiagonalMatrix(std::move(out));
}

double operator_norm(const BlockDiagonalMatrix& m, const NormContext& domain,
                     const NormContext& codomain, const NormOptions& options) {
  require(domain.dim() == m.dim() && codomain.dim() == m.dim(), ErrorCode::DimensionMismatch,
          "operator dimension does not match its norm contexts");
  if (domain.kind() == NormKind::Euclidean && codomain.kind() == NormKind::Euclidean &&
      options.method != NormMethod::Dense) {
    return m.euclidean_norm();
  }
  return operator_norm_estimate(m.as_linear_map(), domain, codomain, options).value;
}

}  // namespace sglab
