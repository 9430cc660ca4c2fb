#include "sglab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sglab/error.hpp"

namespace sglab {

namespace {

void check_finite(const Eigen::MatrixXcd& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    for (Index r = 0; r < m.rows(); ++r) {
      const Complex z = m(r, c);
      require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::InvalidArgument,
              "matrix entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not finite");
    }
  }
}

void check_order(int order, Index dim) {
  require(order != 0, ErrorCode::InvalidArgument, "identity transform not a weighting");
  require(order >= 1, ErrorCode::InvalidArgument, "difference order must be positive");
  require(dim > order, ErrorCode::InvalidArgument,
          "dimension " + std::to_string(dim) + " must exceed difference order " +
              std::to_string(order));
}

// Signed band (-1)^j C(N, j), j = 0..N.
std::vector<double> difference_band(int order) {
  std::vector<double> band(static_cast<std::size_t>(order) + 1);
  for (int j = 0; j <= order; ++j) band[j] = (j % 2 == 0 ? 1.0 : -1.0) * binomial(order, j);
  return band;
}

// Deterministic start: normalized all-ones. If the map annihilates it, try
// two more fixed vectors; an empty result means the map kills all three.
ComplexVector start_vector(const LinearMap& map) {
  const Index dim = map.cols;
  std::vector<ComplexVector> candidates;
  candidates.push_back(ComplexVector::Ones(dim));
  candidates.push_back(ComplexVector::LinSpaced(dim, Complex(1.0), Complex(double(dim))));
  ComplexVector phases(dim);
  for (Index j = 0; j < dim; ++j) phases[j] = std::polar(1.0, 0.7 * double(j));
  candidates.push_back(phases);
  for (auto& v : candidates) {
    v /= v.norm();
    if (map.apply(v).norm() > 0.0) return v;
  }
  return ComplexVector();
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return std::round(result);
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(Index rows, Index cols) {
  require(rows >= 1 && cols >= 1, ErrorCode::InvalidArgument, "matrix must be at least 1x1");
  values_ = Eigen::MatrixXcd::Zero(rows, cols);
}

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd values) : values_(std::move(values)) {
  require(values_.rows() >= 1 && values_.cols() >= 1, ErrorCode::InvalidArgument,
          "matrix must be at least 1x1");
  check_finite(values_);
}

ComplexMatrix ComplexMatrix::identity(Index n) {
  require(n >= 1, ErrorCode::InvalidArgument, "identity needs n >= 1");
  return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const Index r = static_cast<Index>(rows.size());
  require(r >= 1, ErrorCode::InvalidArgument, "empty matrix literal");
  const Index c = static_cast<Index>(rows.begin()->size());
  Eigen::MatrixXcd m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    require(static_cast<Index>(row.size()) == c, ErrorCode::InvalidArgument, "ragged matrix literal");
    Index j = 0;
    for (const auto& z : row) m(i, j++) = z;
    ++i;
  }
  return ComplexMatrix(std::move(m));
}

ComplexVector ComplexMatrix::apply(const ComplexVector& x) const {
  require(x.size() == cols(), ErrorCode::DimensionMismatch, "matvec dimension mismatch");
  return values_ * x;
}

ComplexVector ComplexMatrix::apply_adjoint(const ComplexVector& x) const {
  require(x.size() == rows(), ErrorCode::DimensionMismatch, "adjoint matvec dimension mismatch");
  return values_.adjoint() * x;
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(values_.adjoint().eval()); }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "matrix product dimension mismatch");
  return ComplexMatrix((a.values_ * b.values_).eval());
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          "matrix sum dimension mismatch");
  return ComplexMatrix((a.values_ + b.values_).eval());
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          "matrix difference dimension mismatch");
  return ComplexMatrix((a.values_ - b.values_).eval());
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  return ComplexMatrix((s * a.values_).eval());
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          "max_abs_diff dimension mismatch");
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Difference transforms

ComplexMatrix difference_matrix(int order, Index dim) {
  check_order(order, dim);
  const auto band = difference_band(order);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (Index n = 0; n < dim; ++n) {
    for (Index j = 0; j <= std::min<Index>(n, order); ++j) d(n, n - j) = band[j];
  }
  return ComplexMatrix(std::move(d));
}

ComplexMatrix cumulative_matrix(int order, Index dim) {
  check_order(order, dim);
  Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(dim, dim);
  // Entries depend only on n - k.
  std::vector<double> diag(static_cast<std::size_t>(dim));
  for (Index m = 0; m < dim; ++m) diag[m] = binomial(static_cast<int>(m) + order - 1, order - 1);
  for (Index n = 0; n < dim; ++n) {
    for (Index k = 0; k <= n; ++k) l(n, k) = diag[n - k];
  }
  return ComplexMatrix(std::move(l));
}

ComplexVector apply_difference(int order, const ComplexVector& v) {
  check_order(order, v.size());
  const auto band = difference_band(order);
  const Index dim = v.size();
  ComplexVector out(dim);
  for (Index n = 0; n < dim; ++n) {
    Complex acc = v[n];
    for (Index j = 1; j <= std::min<Index>(n, order); ++j) acc += band[j] * v[n - j];
    out[n] = acc;
  }
  return out;
}

ComplexVector solve_difference(int order, const ComplexVector& v) {
  check_order(order, v.size());
  const auto band = difference_band(order);
  const Index dim = v.size();
  ComplexVector out(dim);
  for (Index n = 0; n < dim; ++n) {
    Complex acc = v[n];
    for (Index j = 1; j <= std::min<Index>(n, order); ++j) acc -= band[j] * out[n - j];
    out[n] = acc;
  }
  return out;
}

ComplexVector apply_difference_adjoint(int order, const ComplexVector& v) {
  check_order(order, v.size());
  const auto band = difference_band(order);
  const Index dim = v.size();
  ComplexVector out(dim);
  for (Index k = 0; k < dim; ++k) {
    Complex acc = v[k];
    for (Index j = 1; j <= order && k + j < dim; ++j) acc += band[j] * v[k + j];
    out[k] = acc;
  }
  return out;
}

ComplexVector solve_difference_adjoint(int order, const ComplexVector& v) {
  check_order(order, v.size());
  const auto band = difference_band(order);
  const Index dim = v.size();
  ComplexVector out(dim);
  for (Index k = dim - 1; k >= 0; --k) {
    Complex acc = v[k];
    for (Index j = 1; j <= order && k + j < dim; ++j) acc -= band[j] * out[k + j];
    out[k] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// NormContext

NormContext NormContext::euclidean(Index dim) {
  require(dim >= 1, ErrorCode::InvalidArgument, "norm context dimension must be positive");
  return NormContext(NormKind::Euclidean, 0, dim);
}

NormContext NormContext::delta_weighted(int order, Index dim) {
  check_order(order, dim);
  return NormContext(NormKind::DeltaWeighted, order, dim);
}

ComplexVector NormContext::to_coordinates(const ComplexVector& v) const {
  require(v.size() == dim_, ErrorCode::DimensionMismatch, "vector length differs from context dim");
  return kind_ == NormKind::Euclidean ? v : apply_difference(order_, v);
}

ComplexVector NormContext::from_coordinates(const ComplexVector& v) const {
  require(v.size() == dim_, ErrorCode::DimensionMismatch, "vector length differs from context dim");
  return kind_ == NormKind::Euclidean ? v : solve_difference(order_, v);
}

ComplexVector NormContext::to_coordinates_adjoint(const ComplexVector& v) const {
  require(v.size() == dim_, ErrorCode::DimensionMismatch, "vector length differs from context dim");
  return kind_ == NormKind::Euclidean ? v : apply_difference_adjoint(order_, v);
}

ComplexVector NormContext::from_coordinates_adjoint(const ComplexVector& v) const {
  require(v.size() == dim_, ErrorCode::DimensionMismatch, "vector length differs from context dim");
  return kind_ == NormKind::Euclidean ? v : solve_difference_adjoint(order_, v);
}

double weighted_vector_norm(const NormContext& ctx, const ComplexVector& v) {
  return ctx.to_coordinates(v).norm();
}

// ---------------------------------------------------------------------------
// Operator norms

double singular_value_2x2(Complex a, Complex b, Complex c, Complex d) {
  const double frob = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::abs(a * d - b * c);
  const double disc = std::max(0.0, frob * frob - 4.0 * det * det);
  return std::sqrt(0.5 * (frob + std::sqrt(disc)));
}

LinearMap as_linear_map(const ComplexMatrix& m) {
  return LinearMap{m.rows(), m.cols(), [&m](const ComplexVector& x) { return m.apply(x); },
                   [&m](const ComplexVector& x) { return m.apply_adjoint(x); }};
}

LinearMap in_coordinates(LinearMap map, const NormContext& domain, const NormContext& codomain) {
  require(map.cols == domain.dim() && map.rows == codomain.dim(), ErrorCode::DimensionMismatch,
          "operator shape does not match its norm contexts");
  LinearMap out;
  out.rows = map.rows;
  out.cols = map.cols;
  out.apply = [inner = map.apply, domain, codomain](const ComplexVector& x) {
    return codomain.to_coordinates(inner(domain.from_coordinates(x)));
  };
  out.apply_adjoint = [inner = map.apply_adjoint, domain, codomain](const ComplexVector& y) {
    return domain.from_coordinates_adjoint(inner(codomain.to_coordinates_adjoint(y)));
  };
  return out;
}

double dense_largest_singular_value(const LinearMap& map) {
  Eigen::MatrixXcd dense(map.rows, map.cols);
  ComplexVector e = ComplexVector::Zero(map.cols);
  for (Index j = 0; j < map.cols; ++j) {
    e[j] = 1.0;
    dense.col(j) = map.apply(e);
    e[j] = 0.0;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

NormEstimate largest_singular_value(const LinearMap& map, const NormOptions& options) {
  require(options.tol > 0.0, ErrorCode::InvalidArgument, "norm tolerance must be positive");
  const Index dim = map.cols;
  if (options.method == NormMethod::Dense) {
    return NormEstimate{dense_largest_singular_value(map), 0, true};
  }

  const long cap = options.max_iterations > 0 ? options.max_iterations : 10L * dim;
  ComplexVector x = start_vector(map);
  if (x.size() == 0) return NormEstimate{0.0, 0, false};

  double sigma = 0.0;
  double prev_delta = -1.0;
  long iter = 0;
  for (; iter < cap; ++iter) {
    const ComplexVector z = map.apply(x);
    const double next = z.norm();
    const double delta = std::abs(next - sigma);
    sigma = std::max(sigma, next);
    ComplexVector y = map.apply_adjoint(z);
    const double ynorm = y.norm();
    if (ynorm == 0.0) return NormEstimate{sigma, iter + 1, false};
    x = y / ynorm;

    if (iter >= 1) {
      if (delta <= 1e-3 * options.tol * sigma) return NormEstimate{sigma, iter + 1, false};
      if (prev_delta > 0.0) {
        const double rho = delta / prev_delta;
        if (rho < 1.0 && delta <= options.tol * sigma &&
            delta * rho / (1.0 - rho) <= options.tol * sigma)
          return NormEstimate{sigma, iter + 1, false};
      }
    }
    prev_delta = delta;
  }

  if (options.method == NormMethod::Auto && dim <= kDenseFallbackLimit) {
    return NormEstimate{dense_largest_singular_value(map), iter, true};
  }
  throw IllConditionedError("power iteration did not converge in " + std::to_string(cap) +
                                " iterations (last estimate " + std::to_string(sigma) + ")",
                            sigma);
}

NormEstimate operator_norm_estimate(const LinearMap& map, const NormContext& domain,
                                    const NormContext& codomain, const NormOptions& options) {
  return largest_singular_value(in_coordinates(map, domain, codomain), options);
}

double operator_norm(const ComplexMatrix& m, const NormContext& domain,
                     const NormContext& codomain, double tol) {
  NormOptions options;
  options.tol = tol;
  return operator_norm_estimate(as_linear_map(m), domain, codomain, options).value;
}

}  // namespace sglab
