#include "sglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sglab/asymptotics.hpp"
#include "sglab/error.hpp"

namespace sglab {

namespace {

constexpr double kEigenvalueMatchTol = 1e-12;
constexpr double kClusterTol = 1e-9;
constexpr double kRadiusCap = 0.5;
constexpr int kDefaultNodes = 64;
constexpr double kZeroCurve = 1e-10;

std::string describe(Complex z) {
  return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

void validate_contour(const Model& model, const Contour& contour) {
  require(contour.nodes >= 16 && contour.nodes % 2 == 0, ErrorCode::InvalidArgument,
          "contour needs an even number of nodes >= 16");
  require(contour.radius > 0.0 && std::isfinite(contour.radius), ErrorCode::InvalidArgument,
          "contour radius must be positive");
  for (const auto& b : model.structure().blocks) {
    for (const Complex z : b.eigenvalues) {
      const double margin = std::abs(std::abs(z - contour.center) - contour.radius);
      require(margin >= kContourMargin, ErrorCode::ContourTooClose,
              "eigenvalue " + describe(z) + " is within " + std::to_string(margin) +
                  " of the contour");
    }
  }
}

BlockDiagonalMatrix trapezoid(const Model& model, const Contour& contour, int nodes) {
  BlockDiagonalMatrix sum = model.generator().zeros_like();
  for (int j = 0; j < nodes; ++j) {
    const Complex offset =
        std::polar(contour.radius, 2.0 * std::numbers::pi * double(j) / double(nodes));
    // (mu I - A)^{-1} = -(A - mu I)^{-1}; d mu = i offset d theta.
    sum = sum - offset * model.resolvent(contour.center + offset);
  }
  return Complex(1.0 / double(nodes), 0.0) * sum;
}

ProjectionReport finish_report(const Model& model, BlockDiagonalMatrix projection,
                               std::vector<Complex> enclosed) {
  ProjectionReport report{std::move(projection), 0.0, 0.0, 0, 0.0, std::move(enclosed)};
  const auto& p = report.projection;
  report.idempotency_defect = (p * p - p).euclidean_norm();
  for (const double t : kCommutationTimes) {
    const auto tt = model.evolve(t);
    report.commutation_defect = std::max(report.commutation_defect, (tt * p - p * tt).euclidean_norm());
  }
  const double trace = p.trace().real();
  report.rank = static_cast<Index>(std::llround(trace));
  report.rank_defect = std::abs(trace - double(report.rank));
  return report;
}

}  // namespace

ProjectionReport riesz_projection_quadrature(const Model& model, const Contour& contour,
                                             double doubling_tol) {
  validate_contour(model, contour);
  auto coarse = trapezoid(model, contour, contour.nodes);
  const auto fine = trapezoid(model, contour, 2 * contour.nodes);
  const double change = (fine - coarse).euclidean_norm();
  require(change <= doubling_tol, ErrorCode::NonConverged,
          "doubling quadrature nodes moved the projection by " + std::to_string(change));

  std::vector<Complex> enclosed;
  for (const auto& e : model.eigenvalues()) {
    if (std::abs(e.value - contour.center) < contour.radius) enclosed.push_back(e.value);
  }
  return finish_report(model, std::move(coarse), std::move(enclosed));
}

ProjectionReport riesz_projection_closed(const Model& model, std::size_t eigenvalue_index) {
  const auto eigs = model.eigenvalues();
  require(eigenvalue_index < eigs.size(), ErrorCode::InvalidArgument,
          "eigenvalue index " + std::to_string(eigenvalue_index) + " out of range (" +
              std::to_string(eigs.size()) + " eigenvalues)");
  const Complex lambda = eigs[eigenvalue_index].value;
  auto p = model.generator().zeros_like();
  std::vector<Block> blocks = p.blocks();
  const auto& info = model.structure().blocks;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Block& b = blocks[i];
    const auto& ev = info[i].eigenvalues;
    if (b.size == 1) {
      if (ev[0] == lambda) b.entries[0] = 1.0;
      continue;
    }
    const Complex a = ev[0];
    const Complex c = ev[1];
    if (a == c) {
      if (a == lambda) b.entries = {1.0, 0.0, 0.0, 1.0};
    } else if (a == lambda) {
      b.entries = {1.0, 1.0 / (a - c), 0.0, 0.0};
    } else if (c == lambda) {
      b.entries = {0.0, -1.0 / (a - c), 0.0, 1.0};
    }
  }
  return finish_report(model, BlockDiagonalMatrix(std::move(blocks)), {lambda});
}

Contour hypothesis_a_check(const Model& model, Complex lambda) {
  const auto eigs = model.eigenvalues();
  bool found = false;
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& e : eigs) {
    const double d = std::abs(e.value - lambda);
    if (d <= kEigenvalueMatchTol) {
      found = true;
    } else {
      nearest = std::min(nearest, d);
    }
  }
  require(found, ErrorCode::InvalidArgument, describe(lambda) + " is not an eigenvalue of the model");
  if (nearest < kClusterTol) {
    fail(ErrorCode::ClusteredSpectrum,
         "no admissible circle around " + describe(lambda) + " (nearest eigenvalue at distance " +
             std::to_string(nearest) + ")");
  }
  return Contour{lambda, std::min(0.5 * nearest, kRadiusCap), kDefaultNodes};
}

DecayCurve projection_decay_curve(const Model& model, const BlockDiagonalMatrix& projection,
                                  std::span<const double> ts, const Envelope& envelope,
                                  const NormOptions& options) {
  require(!ts.empty(), ErrorCode::InvalidArgument, "empty time grid");
  DecayCurve curve;
  const auto& ctx = model.norm_context();
  for (const double t : ts) {
    const auto tp = model.evolve(t) * projection;
    curve.t.push_back(t);
    curve.value.push_back(operator_norm(tp, ctx, ctx, options) / envelope(t));
  }
  curve.identically_zero =
      std::all_of(curve.value.begin(), curve.value.end(), [](double v) { return v <= kZeroCurve; });
  if (curve.identically_zero) {
    curve.decaying = true;
    return curve;
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < curve.t.size(); ++i) {
    if (curve.t[i] > 0.0 && curve.value[i] > 0.0) {
      lx.push_back(std::log(curve.t[i]));
      ly.push_back(std::log(curve.value[i]));
    }
  }
  if (lx.size() >= 2) curve.loglog_slope = fit_line(lx, ly).slope;
  curve.decaying = lx.size() >= 2 && curve.loglog_slope <= -0.5 &&
                   curve.value.back() < 0.1 * curve.value.front();
  return curve;
}

DecayCurve hypothesis_b_check(const Model& model, const Contour& contour,
                              std::span<const double> ts, const Envelope& envelope,
                              const NormOptions& options) {
  const auto report = riesz_projection_quadrature(model, contour);
  return projection_decay_curve(model, report.projection, ts, envelope, options);
}

}  // namespace sglab
