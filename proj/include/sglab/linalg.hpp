#pragma once

#include <complex>
#include <functional>
#include <initializer_list>

#include <Eigen/Dense>

namespace sglab {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultNormTol = 1e-10;
inline constexpr Index kDenseFallbackLimit = 512;

/// Dense complex matrix with at least one row and column and finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix(Index rows, Index cols);
  explicit ComplexMatrix(Eigen::MatrixXcd values);

  static ComplexMatrix identity(Index n);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }

  Complex operator()(Index r, Index c) const { return values_(r, c); }
  Complex& operator()(Index r, Index c) { return values_(r, c); }

  const Eigen::MatrixXcd& eigen() const noexcept { return values_; }

  ComplexVector apply(const ComplexVector& x) const;
  ComplexVector apply_adjoint(const ComplexVector& x) const;
  ComplexMatrix adjoint() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

 private:
  Eigen::MatrixXcd values_;
};

/// Largest absolute entrywise difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

enum class NormKind { Euclidean, DeltaWeighted };

/// Norm on C^dim: plain l2, or the l2 norm of the order-N backward
/// difference of the coefficient sequence (with N implicit zeros before the
/// first coefficient).
class NormContext {
 public:
  static NormContext euclidean(Index dim);
  static NormContext delta_weighted(int order, Index dim);

  NormKind kind() const noexcept { return kind_; }
  int order() const noexcept { return order_; }
  Index dim() const noexcept { return dim_; }

  /// v -> D v (identity for Euclidean).
  ComplexVector to_coordinates(const ComplexVector& v) const;
  /// v -> D^{-1} v.
  ComplexVector from_coordinates(const ComplexVector& v) const;
  ComplexVector to_coordinates_adjoint(const ComplexVector& v) const;
  ComplexVector from_coordinates_adjoint(const ComplexVector& v) const;

  friend bool operator==(const NormContext&, const NormContext&) = default;

 private:
  NormContext(NormKind kind, int order, Index dim) : kind_(kind), order_(order), dim_(dim) {}

  NormKind kind_;
  int order_;
  Index dim_;
};

/// Lower-banded order-N backward difference matrix,
/// D[n][n-j] = (-1)^j C(N, j) for 0 <= j <= min(n, N).
ComplexMatrix difference_matrix(int order, Index dim);

/// Explicit inverse of difference_matrix: L[n][k] = C(n-k+N-1, N-1), k <= n.
ComplexMatrix cumulative_matrix(int order, Index dim);

// Structured O(N*dim) forms of the two matrices above and their adjoints.
ComplexVector apply_difference(int order, const ComplexVector& v);
ComplexVector solve_difference(int order, const ComplexVector& v);
ComplexVector apply_difference_adjoint(int order, const ComplexVector& v);
ComplexVector solve_difference_adjoint(int order, const ComplexVector& v);

double weighted_vector_norm(const NormContext& ctx, const ComplexVector& v);

enum class NormMethod {
  Auto,   // power iteration, dense SVD if it stalls and dim <= kDenseFallbackLimit
  Power,  // power iteration only
  Dense,  // dense SVD of the coordinate matrix
};

struct NormOptions {
  double tol = kDefaultNormTol;
  NormMethod method = NormMethod::Auto;
  long max_iterations = 0;  // 0 means 10 * dim
};

/// Matrix-free linear map (rows x cols) with its adjoint.
struct LinearMap {
  Index rows = 0;
  Index cols = 0;
  std::function<ComplexVector(const ComplexVector&)> apply;
  std::function<ComplexVector(const ComplexVector&)> apply_adjoint;
};

struct NormEstimate {
  double value = 0.0;
  long iterations = 0;
  bool used_dense = false;
};

/// Largest singular value of a matrix-free map. Power iteration on the Gram
/// operator from the normalized all-ones vector.
NormEstimate largest_singular_value(const LinearMap& map, const NormOptions& options = {});

/// Largest singular value via dense SVD of the map's materialized matrix.
double dense_largest_singular_value(const LinearMap& map);

/// Wraps `map` as D_cod * map * L_dom so that its Euclidean norm is the
/// operator norm between the two weighted spaces.
LinearMap in_coordinates(LinearMap map, const NormContext& domain, const NormContext& codomain);

LinearMap as_linear_map(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m, const NormContext& domain,
                     const NormContext& codomain, double tol = kDefaultNormTol);

NormEstimate operator_norm_estimate(const LinearMap& map, const NormContext& domain,
                                    const NormContext& codomain, const NormOptions& options = {});

/// Closed-form largest singular value of a 2x2 matrix [[a, b], [c, d]].
double singular_value_2x2(Complex a, Complex b, Complex c, Complex d);

double binomial(int n, int k);

}  // namespace sglab
