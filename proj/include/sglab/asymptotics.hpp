#pragma once

#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "sglab/models.hpp"

namespace sglab {

enum class Quantity { SemigroupNorm, ResolventProductNorm, Ratio };

std::string_view to_string(Quantity quantity);

struct NormSample {
  double t = 0.0;
  double value = 0.0;
};

/// Sampled ||T(t)||, ||T(t) R_mu|| or their ratio; t strictly increasing,
/// values finite and positive.
struct NormSamples {
  Quantity quantity = Quantity::SemigroupNorm;
  std::vector<NormSample> points;

  std::vector<double> times() const;
  std::vector<double> values() const;
};

struct SamplingOptions {
  Complex mu{1.0, 0.0};
  NormOptions norm{};
  bool check_truncation = true;
};

NormSamples sample_norms(const Model& model, std::span<const double> ts, Quantity quantity,
                         const SamplingOptions& options = {});

/// Geometric grid from t_min to t_max with the given number of points.
std::vector<double> geometric_grid(double t_min, double t_max, int points);
std::vector<double> linear_grid(double t_min, double t_max, int points);
/// Geometric grid with ratio sqrt(2) starting at t_min, ending exactly at t_max.
std::vector<double> sqrt2_grid(double t_min, double t_max);

// ---------------------------------------------------------------------------
// Concave-log envelope

struct Knot {
  double t = 0.0;
  double log_f = 0.0;
};

/// Positive majorant f whose logarithm is concave and piecewise linear in t.
/// Outside the knot range the first/last hull slopes are continued.
class Envelope {
 public:
  Envelope(std::vector<Knot> knots, double a_estimate);

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  double a_estimate() const noexcept { return a_estimate_; }

  double log_value(double t) const;
  double operator()(double t) const;

  /// Largest second divided difference of log f over consecutive knots.
  double max_second_difference() const;

 private:
  std::vector<Knot> knots_;
  double a_estimate_;
};

/// Upper concave hull of (t, log value) with a_estimate = max value / f.
Envelope concave_envelope(const NormSamples& samples);

struct TranslationCheck {
  double shift = 0.0;
  std::vector<double> s;
  std::vector<double> ratio;  // f(shift + s) / f(s)
  bool verdict = false;       // |ratio - 1| <= 0.05 at the largest s
};

inline constexpr double kTranslationTol = 0.05;

TranslationCheck envelope_translation_check(const Envelope& envelope, double shift,
                                            std::span<const double> s_grid);

// ---------------------------------------------------------------------------
// Rate fitting

enum class RateFamily { Power, InverseLog, Constant };

std::string_view to_string(RateFamily family);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct FitWindow {
  double t_min = std::numbers::e * std::numbers::e;
  double t_max = std::numeric_limits<double>::infinity();
};

/// Fitted law v(t) ~ coefficient * g(t) on a window, with the two-sided
/// bracket (spread = max/min of v/g) and the residual trend slope of
/// log(v/g) against log t.
struct RateFit {
  RateFamily family = RateFamily::Power;
  double coefficient = 0.0;
  double exponent = 0.0;  // alpha for POWER, -1 (power of log t) for INVERSE_LOG, 0 for CONSTANT
  double residual = 0.0;  // RMS in log space
  double window_min = 0.0;
  double window_max = 0.0;
  std::size_t samples = 0;
  double spread = 1.0;
  double trend_slope = 0.0;
};

inline constexpr std::size_t kMinFitSamples = 8;

RateFit fit_rate(const NormSamples& samples, RateFamily family, FitWindow window = {});

// ---------------------------------------------------------------------------
// Hardy inequality

struct HardyReport {
  double lhs = 0.0;    // sum |c_n|^2 / n^2, n from 1
  double rhs = 0.0;    // sum |c_{n+1} - c_n|^2 with c_0 = 0 and c = 0 past the end
  double ratio = 0.0;  // lhs / (4 rhs), 0 for the zero sequence
};

HardyReport hardy_check(std::span<const Complex> c);

// ---------------------------------------------------------------------------
// Witness experiment on LOG_SPECTRUM with N = 1

struct WitnessVector {
  ComplexVector entries;  // entry k is the coefficient of e_{k+2}
  double norm = 0.0;      // order-1 difference norm
  double norm_squared = 0.0;  // exact for integer entries
};

/// Tent sequence c_n = n (n <= 2t), 4t - n (2t < n <= 4t), 0 otherwise.
WitnessVector witness_vector(double t, Index dim);

struct WitnessBound {
  double t = 0.0;
  double raw_ratio = 0.0;   // ||T(t) A^{-1} x|| / ||x||
  double normalized = 0.0;  // raw_ratio * log(t) / t
  double witness_norm_squared = 0.0;
};

WitnessBound witness_lower_bound(const Model& model, double t);

}  // namespace sglab
