#pragma once

#include <span>
#include <vector>

#include "sglab/models.hpp"

namespace sglab {

class Envelope;

/// Counterclockwise circle used for Riesz projection quadrature.
struct Contour {
  Complex center;
  double radius = 0.0;
  int nodes = 64;
};

inline constexpr double kContourMargin = 1e-6;
inline constexpr double kQuadratureDoublingTol = 1e-8;

struct ProjectionReport {
  BlockDiagonalMatrix projection;
  double idempotency_defect = 0.0;  // ||P^2 - P||
  double commutation_defect = 0.0;  // max over t in {0,1,10,100} of ||T(t)P - P T(t)||
  Index rank = 0;                   // trace(P) rounded
  double rank_defect = 0.0;         // |trace(P) - rank|
  std::vector<Complex> enclosed;
};

/// Times at which commutation with the semigroup is checked.
inline constexpr double kCommutationTimes[] = {0.0, 1.0, 10.0, 100.0};

/// P = (1/(2 pi i)) \oint (mu I - A)^{-1} d mu by the trapezoidal rule on the
/// circle. The rule is repeated with twice the nodes; if that moves P by more
/// than kQuadratureDoublingTol the call fails with NONCONVERGED.
ProjectionReport riesz_projection_quadrature(const Model& model, const Contour& contour,
                                             double doubling_tol = kQuadratureDoublingTol);

/// Exact spectral projection for the eigenvalue at `eigenvalue_index` of
/// model.eigenvalues().
ProjectionReport riesz_projection_closed(const Model& model, std::size_t eigenvalue_index);

/// Circle around lambda with radius half the distance to the nearest other
/// eigenvalue (capped at 0.5) and 64 nodes.
Contour hypothesis_a_check(const Model& model, Complex lambda);

struct DecayCurve {
  std::vector<double> t;
  std::vector<double> value;
  double loglog_slope = 0.0;
  bool identically_zero = false;
  bool decaying = false;
};

/// Samples t -> ||T(t) P|| / f(t) in the model's norm. Decaying iff the
/// log-log least-squares slope is <= -0.5 and the last sample is below 0.1x
/// the first (or the curve is identically zero).
DecayCurve hypothesis_b_check(const Model& model, const Contour& contour,
                              std::span<const double> ts, const Envelope& envelope,
                              const NormOptions& options = {});

/// Same check for a precomputed projection.
DecayCurve projection_decay_curve(const Model& model, const BlockDiagonalMatrix& projection,
                                  std::span<const double> ts, const Envelope& envelope,
                                  const NormOptions& options = {});

}  // namespace sglab
