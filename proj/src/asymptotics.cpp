#include "sglab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sglab/error.hpp"

namespace sglab {

namespace {

void check_increasing(std::span<const double> ts) {
  require(!ts.empty(), ErrorCode::InvalidArgument, "empty time grid");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(std::isfinite(ts[i]) && ts[i] >= 0.0, ErrorCode::InvalidArgument,
            "time grid entries must be finite and nonnegative");
    if (i > 0)
      require(ts[i] > ts[i - 1], ErrorCode::InvalidArgument, "time grid must be strictly increasing");
  }
}

}  // namespace

std::string_view to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::SemigroupNorm: return "SEMIGROUP_NORM";
    case Quantity::ResolventProductNorm: return "RESOLVENT_PRODUCT_NORM";
    case Quantity::Ratio: return "RATIO";
  }
  return "UNKNOWN";
}

std::string_view to_string(RateFamily family) {
  switch (family) {
    case RateFamily::Power: return "POWER";
    case RateFamily::InverseLog: return "INVERSE_LOG";
    case RateFamily::Constant: return "CONSTANT";
  }
  return "UNKNOWN";
}

std::vector<double> NormSamples::times() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.t);
  return out;
}

std::vector<double> NormSamples::values() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.value);
  return out;
}

// ---------------------------------------------------------------------------
// Grids

std::vector<double> geometric_grid(double t_min, double t_max, int points) {
  require(t_min > 0.0 && t_max > t_min && points >= 2, ErrorCode::InvalidArgument,
          "geometric grid needs 0 < t_min < t_max and at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double step = std::log(t_max / t_min) / double(points - 1);
  for (int i = 0; i < points; ++i) out[i] = t_min * std::exp(step * double(i));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

std::vector<double> linear_grid(double t_min, double t_max, int points) {
  require(t_min >= 0.0 && t_max > t_min && points >= 2, ErrorCode::InvalidArgument,
          "linear grid needs 0 <= t_min < t_max and at least two points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[i] = t_min + (t_max - t_min) * double(i) / double(points - 1);
  out.back() = t_max;
  return out;
}

std::vector<double> sqrt2_grid(double t_min, double t_max) {
  require(t_min > 0.0 && t_max > t_min, ErrorCode::InvalidArgument,
          "sqrt(2) grid needs 0 < t_min < t_max");
  const int steps = static_cast<int>(std::ceil(std::log(t_max / t_min) / std::log(std::sqrt(2.0)) - 1e-9));
  return geometric_grid(t_min, t_max, std::max(steps, 1) + 1);
}

// ---------------------------------------------------------------------------
// Sampling

NormSamples sample_norms(const Model& model, std::span<const double> ts, Quantity quantity,
                         const SamplingOptions& options) {
  check_increasing(ts);
  if (options.check_truncation) check_truncation(model.spec(), ts.back());
  const auto& ctx = model.norm_context();

  std::optional<BlockDiagonalMatrix> resolvent;
  if (quantity != Quantity::SemigroupNorm) resolvent = model.resolvent(options.mu);

  NormSamples out;
  out.quantity = quantity;
  out.points.reserve(ts.size());
  for (const double t : ts) {
    const auto evolution = model.evolve(t);
    double value = 0.0;
    if (quantity == Quantity::SemigroupNorm) {
      value = operator_norm(evolution, ctx, ctx, options.norm);
    } else {
      const double product = operator_norm(evolution * *resolvent, ctx, ctx, options.norm);
      value = quantity == Quantity::Ratio ? product / operator_norm(evolution, ctx, ctx, options.norm)
                                          : product;
    }
    require(std::isfinite(value) && value > 0.0, ErrorCode::Degenerate,
            "norm sample at t = " + std::to_string(t) + " is not positive");
    out.points.push_back(NormSample{t, value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Envelope

Envelope::Envelope(std::vector<Knot> knots, double a_estimate)
    : knots_(std::move(knots)), a_estimate_(a_estimate) {
  require(!knots_.empty(), ErrorCode::InvalidArgument, "envelope needs at least one knot");
}

double Envelope::log_value(double t) const {
  if (knots_.size() == 1) return knots_.front().log_f;
  auto segment = [this](std::size_t i, double at) {
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    return a.log_f + (b.log_f - a.log_f) * (at - a.t) / (b.t - a.t);
  };
  if (t <= knots_.front().t) return segment(0, t);
  if (t >= knots_.back().t) return segment(knots_.size() - 2, t);
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double value, const Knot& k) { return value < k.t; });
  return segment(static_cast<std::size_t>(it - knots_.begin()) - 1, t);
}

double Envelope::operator()(double t) const { return std::exp(log_value(t)); }

double Envelope::max_second_difference() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 2 < knots_.size(); ++i) {
    const Knot& a = knots_[i];
    const Knot& b = knots_[i + 1];
    const Knot& c = knots_[i + 2];
    const double s1 = (b.log_f - a.log_f) / (b.t - a.t);
    const double s2 = (c.log_f - b.log_f) / (c.t - b.t);
    worst = std::max(worst, (s2 - s1) / (c.t - a.t));
  }
  return knots_.size() < 3 ? 0.0 : worst;
}

Envelope concave_envelope(const NormSamples& samples) {
  require(samples.points.size() >= 3, ErrorCode::InsufficientSamples,
          "envelope needs at least three samples");
  std::vector<Knot> pts;
  for (const auto& p : samples.points) {
    require(std::isfinite(p.value) && p.value > 0.0, ErrorCode::InvalidArgument,
            "envelope samples must be positive");
    pts.push_back(Knot{p.t, std::log(p.value)});
  }
  std::sort(pts.begin(), pts.end(), [](const Knot& a, const Knot& b) {
    return a.t < b.t || (a.t == b.t && a.log_f > b.log_f);
  });
  require(pts.front().t < pts.back().t, ErrorCode::Degenerate, "all sample times are equal");

  // Monotone chain, upper hull only: keep clockwise turns.
  std::vector<Knot> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().t == p.t) continue;  // keep the larger value
    while (hull.size() >= 2) {
      const Knot& o = hull[hull.size() - 2];
      const Knot& a = hull.back();
      const double cross = (a.t - o.t) * (p.log_f - o.log_f) - (a.log_f - o.log_f) * (p.t - o.t);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }

  Envelope envelope(std::move(hull), 1.0);
  double a = 0.0;
  for (const auto& p : samples.points) a = std::max(a, p.value / envelope(p.t));
  return Envelope(envelope.knots(), std::min(a, 1.0));
}

TranslationCheck envelope_translation_check(const Envelope& envelope, double shift,
                                            std::span<const double> s_grid) {
  require(shift > 0.0, ErrorCode::InvalidArgument, "translation must be positive");
  require(!s_grid.empty(), ErrorCode::InvalidArgument, "empty s grid");
  const double lo = envelope.knots().front().t;
  const double hi = envelope.knots().back().t;
  TranslationCheck out;
  out.shift = shift;
  for (const double s : s_grid) {
    require(s >= lo && s <= hi, ErrorCode::InvalidArgument,
            "s = " + std::to_string(s) + " lies outside the envelope knots");
    out.s.push_back(s);
    out.ratio.push_back(std::exp(envelope.log_value(shift + s) - envelope.log_value(s)));
  }
  const auto last = std::max_element(out.s.begin(), out.s.end()) - out.s.begin();
  out.verdict = std::abs(out.ratio[static_cast<std::size_t>(last)] - 1.0) <= kTranslationTol;
  return out;
}

// ---------------------------------------------------------------------------
// Fits

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InsufficientSamples,
          "line fit needs two or more paired points");
  const double n = double(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

RateFit fit_rate(const NormSamples& samples, RateFamily family, FitWindow window) {
  require(window.t_min >= std::numbers::e, ErrorCode::InvalidArgument,
          "fit window must start at t >= e");
  std::vector<double> lt, lv;
  RateFit fit;
  fit.family = family;
  fit.window_min = std::numeric_limits<double>::infinity();
  fit.window_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : samples.points) {
    if (p.t < window.t_min || p.t > window.t_max) continue;
    require(p.value > 0.0, ErrorCode::InvalidArgument, "fit samples must be positive");
    lt.push_back(std::log(p.t));
    lv.push_back(std::log(p.value));
    fit.window_min = std::min(fit.window_min, p.t);
    fit.window_max = std::max(fit.window_max, p.t);
  }
  require(lt.size() >= kMinFitSamples, ErrorCode::InsufficientSamples,
          "rate fit needs at least " + std::to_string(kMinFitSamples) + " samples in the window, got " +
              std::to_string(lt.size()));
  fit.samples = lt.size();

  // Log of v / g(t), where g is the fixed shape of the family.
  std::vector<double> scaled(lv.size());
  if (family == RateFamily::Power) {
    const auto line = fit_line(lt, lv);
    fit.exponent = line.slope;
    fit.coefficient = std::exp(line.intercept);
    fit.residual = line.rms;
    for (std::size_t i = 0; i < lv.size(); ++i) scaled[i] = lv[i] - line.slope * lt[i];
  } else {
    fit.exponent = family == RateFamily::InverseLog ? -1.0 : 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i)
      scaled[i] = family == RateFamily::InverseLog ? lv[i] + std::log(lt[i]) : lv[i];
    double mean = 0.0;
    for (const double s : scaled) mean += s;
    mean /= double(scaled.size());
    double ss = 0.0;
    for (const double s : scaled) ss += (s - mean) * (s - mean);
    fit.coefficient = std::exp(mean);
    fit.residual = std::sqrt(ss / double(scaled.size()));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  fit.spread = std::exp(*hi - *lo);
  fit.trend_slope = fit_line(lt, scaled).slope;
  return fit;
}

}  // namespace sglab
