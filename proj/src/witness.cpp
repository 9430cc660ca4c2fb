#include <cmath>
#include <numbers>
#include <string>

#include "sglab/asymptotics.hpp"
#include "sglab/error.hpp"

namespace sglab {

WitnessVector witness_vector(double t, Index dim) {
  require(t > std::numbers::e, ErrorCode::InvalidArgument, "witness needs t > e");
  const Index need = static_cast<Index>(std::ceil(4.0 * t)) + 1;
  require(dim >= need, ErrorCode::InvalidArgument,
          "witness at t = " + std::to_string(t) + " needs dim >= " + std::to_string(need));
  WitnessVector w;
  w.entries = ComplexVector::Zero(dim);
  for (Index k = 0; k < dim; ++k) {
    const double n = double(k + 2);
    if (n <= 2.0 * t) {
      w.entries[k] = n;
    } else if (n <= 4.0 * t) {
      w.entries[k] = 4.0 * t - n;
    }
  }
  w.norm_squared = apply_difference(1, w.entries).squaredNorm();
  w.norm = std::sqrt(w.norm_squared);
  return w;
}

WitnessBound witness_lower_bound(const Model& model, double t) {
  require(model.spec().family == Family::LogSpectrum && model.spec().order == 1,
          ErrorCode::InvalidArgument, "witness bound is defined on LOG_SPECTRUM with N = 1");
  const Index need_dim = static_cast<Index>(std::ceil(8.0 * t));
  if (model.dim() < need_dim) {
    throw TruncationError("witness at t = " + std::to_string(t) + " needs dim >= " +
                              std::to_string(need_dim) + ", got " + std::to_string(model.dim()),
                          static_cast<long>(need_dim + 1), static_cast<long>(need_dim));
  }
  const auto x = witness_vector(t, model.dim());
  const auto y = (model.evolve(t) * model.resolvent(Complex(0.0, 0.0))).apply(x.entries);
  WitnessBound out;
  out.t = t;
  out.raw_ratio = weighted_vector_norm(model.norm_context(), y) / x.norm;
  out.normalized = out.raw_ratio * std::log(t) / t;
  out.witness_norm_squared = x.norm_squared;
  return out;
}

}  // namespace sglab
