#include "sglab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "sglab/asymptotics.hpp"
#include "sglab/error.hpp"
#include "sglab/spectral.hpp"

namespace sglab {

using json = nlohmann::ordered_json;

namespace {

constexpr double kEnvelopeSlack = 1e-12;
constexpr double kImaginaryAxisTol = 1e-12;
constexpr double kSpreadBound = 3.0;
constexpr double kTrendBound = 0.15;

class Stopwatch {
 public:
  explicit Stopwatch(json& sink) : sink_(sink) {}

  void lap(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    sink_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  json& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json config_json(const ExperimentConfig& config) {
  json out = json::object();
  std::istringstream in(to_config_text(config));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

json fit_json(const RateFit& f) {
  return json{{"family", to_string(f.family)},   {"coefficient", f.coefficient},
              {"exponent", f.exponent},          {"residual", f.residual},
              {"window_min", f.window_min},      {"window_max", f.window_max},
              {"samples", f.samples},            {"spread", f.spread},
              {"trend_slope", f.trend_slope}};
}

json envelope_json(const Envelope& env) {
  json knots = json::array();
  for (const auto& k : env.knots()) knots.push_back(json{{"t", k.t}, {"log_f", k.log_f}});
  return json{{"knots", knots},
              {"a_estimate", env.a_estimate()},
              {"max_second_difference", env.max_second_difference()}};
}

void start_report(RunReport& r, std::string command, const ExperimentConfig& config) {
  r.command = std::move(command);
  r.config = config_json(config);
  r.config_hash = sglab::config_hash(config);
}

NormOptions norm_options(const ExperimentConfig& config) {
  NormOptions o;
  o.tol = config.tolerances.norm;
  return o;
}

/// Fits a rate, recording either the fit or the reason it was skipped.
std::optional<RateFit> try_fit(RunReport& r, const std::string& name, const NormSamples& samples,
                               RateFamily family, FitWindow window = {}) {
  try {
    auto fit = fit_rate(samples, family, window);
    r.fits[name] = fit_json(fit);
    return fit;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientSamples) throw;
    r.fits[name] = json{{"skipped", e.what()}};
    return std::nullopt;
  }
}

void skipped(RunReport& r, const std::string& name, const std::string& why) {
  r.verdicts.push_back({name, Status::Skipped, why});
}

void verdict(RunReport& r, const std::string& name, bool ok, const std::string& detail) {
  r.verdicts.push_back({name, ok ? Status::Pass : Status::Fail, detail});
}

NormSamples ratio_of(const NormSamples& num, const NormSamples& den) {
  NormSamples out;
  out.quantity = Quantity::Ratio;
  for (std::size_t i = 0; i < num.points.size(); ++i) {
    out.points.push_back({num.points[i].t, num.points[i].value / den.points[i].value});
  }
  return out;
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Skipped: return "SKIPPED";
  }
  return "?";
}

json RunReport::to_json(bool include_timings) const {
  json v = json::array();
  for (const auto& x : verdicts) {
    v.push_back(json{{"name", x.name}, {"status", to_string(x.status)}, {"detail", x.detail}});
  }
  json out = json::object();
  out["command"] = command;
  out["config"] = config;
  out["samples"] = samples;
  out["fits"] = fits;
  out["projections"] = projections;
  out["verdicts"] = v;
  out["timings"] = include_timings ? timings : json::object();
  out["version"] = json{{"library", kLibraryVersion}, {"config_hash", config_hash}};
  return out;
}

int RunReport::exit_code() const {
  return std::any_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.status == Status::Fail; })
             ? 1
             : 0;
}

// ---------------------------------------------------------------------------

RunReport run_simulate(const ExperimentConfig& config) {
  RunReport r;
  start_report(r, "simulate", config);
  Stopwatch clock(r.timings);

  const Model model(config.model);
  const auto ts = config.grid.values();
  SamplingOptions opts{config.mu, norm_options(config), true};
  clock.lap("setup");
  const auto semigroup = sample_norms(model, ts, Quantity::SemigroupNorm, opts);
  clock.lap("semigroup_norm");
  const auto product = sample_norms(model, ts, Quantity::ResolventProductNorm, opts);
  clock.lap("resolvent_product_norm");
  const auto ratio = ratio_of(product, semigroup);

  r.samples["t"] = ts;
  r.samples["semigroup_norm"] = semigroup.values();
  r.samples["resolvent_product_norm"] = product.values();
  r.samples["ratio"] = ratio.values();
  r.csv.header = {"t", "semigroup_norm", "resolvent_product_norm", "ratio"};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    r.csv.rows.push_back({ts[i], semigroup.points[i].value, product.points[i].value, ratio.points[i].value});
  }

  try_fit(r, "semigroup_norm.POWER", semigroup, RateFamily::Power);
  const auto product_fit = try_fit(r, "resolvent_product_norm.CONSTANT", product, RateFamily::Constant);
  const auto ratio_power = try_fit(r, "ratio.POWER", ratio, RateFamily::Power);
  const auto ratio_log = try_fit(r, "ratio.INVERSE_LOG", ratio, RateFamily::InverseLog);
  clock.lap("fits");

  const auto rv = ratio.values();
  verdict(r, "ratio_decreases", rv.back() < rv.front(),
          "ratio " + fmt(rv.front()) + " at t=" + fmt(ts.front()) + ", " + fmt(rv.back()) + " at t=" + fmt(ts.back()));

  const std::string need_more = "fewer than 8 samples in the fit window";
  switch (config.model.family) {
    case Family::JordanPairs:
    case Family::DiagJordan: {
      if (product_fit) {
        verdict(r, "resolvent_product_bounded", product_fit->spread <= kSpreadBound,
                "spread " + fmt(product_fit->spread) + " (bound " + fmt(kSpreadBound) + ")");
      } else {
        skipped(r, "resolvent_product_bounded", need_more);
      }
      if (ratio_power) {
        const double a = ratio_power->exponent;
        verdict(r, "ratio_inverse_linear", a >= -1.1 && a <= -0.9, "fitted exponent " + fmt(a));
      } else {
        skipped(r, "ratio_inverse_linear", need_more);
      }
      break;
    }
    case Family::LogSpectrum: {
      if (ratio_log) {
        const bool ok = ratio_log->spread <= kSpreadBound && std::abs(ratio_log->trend_slope) <= kTrendBound;
        verdict(r, "ratio_inverse_log", ok,
                "spread " + fmt(ratio_log->spread) + ", trend slope " + fmt(ratio_log->trend_slope));
      } else {
        skipped(r, "ratio_inverse_log", need_more);
      }
      const auto growth = try_fit(r, "semigroup_norm.POWER[10,100]", semigroup, RateFamily::Power, {10.0, 100.0});
      if (growth) {
        const double a = growth->exponent;
        const double n = config.model.order;
        verdict(r, "semigroup_polynomial_growth", a >= n - 0.2 && a <= n + 0.2,
                "fitted exponent " + fmt(a) + " on [10, 100] for order " + std::to_string(config.model.order));
      } else {
        skipped(r, "semigroup_polynomial_growth", need_more);
      }
      break;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

RunReport run_theorem_check(const ExperimentConfig& config) {
  RunReport r;
  start_report(r, "theorem-check", config);
  Stopwatch clock(r.timings);

  const Model model(config.model);
  const auto ts = config.grid.values();
  const NormOptions nopt = norm_options(config);
  SamplingOptions opts{config.mu, nopt, true};
  clock.lap("setup");

  // Envelope conditions.
  const auto semigroup = sample_norms(model, ts, Quantity::SemigroupNorm, opts);
  const auto envelope = concave_envelope(semigroup);
  std::vector<double> f;
  bool majorizes = true;
  for (const auto& p : semigroup.points) {
    f.push_back(envelope(p.t));
    majorizes = majorizes && p.value <= f.back() * (1.0 + kEnvelopeSlack);
  }
  const double kink = envelope.max_second_difference();
  const bool concave = !(kink > kEnvelopeSlack);
  std::vector<double> s_grid;
  for (const double s : ts) {
    if (s + config.translation_shift <= envelope.knots().back().t) s_grid.push_back(s);
  }
  r.fits["envelope"] = envelope_json(envelope);
  bool translation_ok = false;
  std::string translation_detail = "grid too short for the translation shift";
  if (!s_grid.empty()) {
    const auto tc = envelope_translation_check(envelope, config.translation_shift, s_grid);
    translation_ok = tc.verdict;
    translation_detail = "f(s+" + fmt(tc.shift) + ")/f(s) = " + fmt(tc.ratio.back()) + " at s=" + fmt(tc.s.back());
    r.fits["translation"] = json{{"shift", tc.shift}, {"s", tc.s}, {"ratio", tc.ratio}};
  }
  const double a = envelope.a_estimate();
  const bool envelope_ok = majorizes && concave && translation_ok && a > 0.0 && a <= 1.0;
  verdict(r, "envelope_conditions", envelope_ok,
          std::string(majorizes ? "majorizes" : "does not majorize") + ", max second difference " +
              fmt(kink) + ", a=" + fmt(a) + ", " + translation_detail);
  clock.lap("envelope");

  // Eigenvalues on the imaginary axis, lowest first.
  std::vector<Complex> targets;
  for (const auto& e : model.eigenvalues()) {
    if (std::abs(e.value.real()) <= kImaginaryAxisTol) targets.push_back(e.value);
    if (static_cast<int>(targets.size()) == config.eigenvalue_count) break;
  }
  std::vector<std::vector<double>> projection_curves;
  int evaluated = 0, decaying = 0;
  std::string failures;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const Complex lambda = targets[j];
    json entry{{"eigenvalue", complex_json(lambda)}};
    const std::string name = "eigenvalue_" + std::to_string(j + 1);
    try {
      Contour contour = hypothesis_a_check(model, lambda);
      if (config.contour_nodes) contour.nodes = *config.contour_nodes;
      if (config.contour_radius) contour.radius = *config.contour_radius;
      const auto proj = riesz_projection_quadrature(model, contour, config.tolerances.projection);
      const auto curve = projection_decay_curve(model, proj.projection, ts, envelope, nopt);
      entry["status"] = "EVALUATED";
      entry["contour"] = json{{"center", complex_json(contour.center)},
                              {"radius", contour.radius},
                              {"nodes", contour.nodes}};
      entry["rank"] = proj.rank;
      entry["rank_defect"] = proj.rank_defect;
      entry["idempotency_defect"] = proj.idempotency_defect;
      entry["commutation_defect"] = proj.commutation_defect;
      entry["loglog_slope"] = curve.loglog_slope;
      entry["identically_zero"] = curve.identically_zero;
      entry["decaying"] = curve.decaying;
      entry["curve"] = curve.value;
      projection_curves.push_back(curve.value);
      ++evaluated;
      if (curve.decaying) {
        ++decaying;
      } else {
        failures += " " + name;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ClusteredSpectrum && e.code() != ErrorCode::ContourTooClose &&
          e.code() != ErrorCode::NonConverged) {
        throw;
      }
      entry["status"] = "SKIPPED";
      entry["reason"] = e.what();
      projection_curves.emplace_back(ts.size(), std::nan(""));
    }
    r.projections.push_back(entry);
  }
  if (evaluated == 0) {
    skipped(r, "projection_decay", "no eigenvalue on the imaginary axis admitted a contour");
  } else {
    verdict(r, "projection_decay", decaying == evaluated,
            std::to_string(decaying) + "/" + std::to_string(evaluated) + " projected orbits decay" +
                (failures.empty() ? "" : "; not decaying:" + failures));
  }
  clock.lap("projections");

  // Conclusion: ||T(t) R_mu|| / f(t) should tend to zero.
  const auto product = sample_norms(model, ts, Quantity::ResolventProductNorm, opts);
  std::vector<double> conclusion;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    conclusion.push_back(product.points[i].value / f[i]);
    if (ts[i] > 0.0) {
      lx.push_back(std::log(ts[i]));
      ly.push_back(std::log(conclusion.back()));
    }
  }
  const double slope = lx.size() >= 2 ? fit_line(lx, ly).slope : 0.0;
  const bool conclusion_ok =
      lx.size() >= 2 && slope <= -0.1 && conclusion.back() <= 0.5 * conclusion.front();
  r.fits["conclusion"] = json{{"loglog_slope", slope},
                              {"first", conclusion.front()},
                              {"last", conclusion.back()}};
  verdict(r, "conclusion_decay", conclusion_ok,
          "log-log slope " + fmt(slope) + ", ratio " + fmt(conclusion.front()) + " -> " + fmt(conclusion.back()));
  clock.lap("conclusion");

  r.samples["t"] = ts;
  r.samples["semigroup_norm"] = semigroup.values();
  r.samples["envelope"] = f;
  r.samples["resolvent_product_norm"] = product.values();
  r.samples["conclusion_ratio"] = conclusion;
  r.csv.header = {"t", "semigroup_norm", "envelope", "resolvent_product_norm", "conclusion_ratio"};
  for (std::size_t j = 0; j < projection_curves.size(); ++j) {
    r.csv.header.push_back("projection_ratio_" + std::to_string(j + 1));
  }
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> row{ts[i], semigroup.points[i].value, f[i], product.points[i].value, conclusion[i]};
    for (const auto& c : projection_curves) row.push_back(c[i]);
    r.csv.rows.push_back(std::move(row));
  }
  return r;
}

// ---------------------------------------------------------------------------

RunReport run_hardy(const HardyOptions& options) {
  require(options.cases >= 1, ErrorCode::InvalidArgument, "--cases must be positive");
  require(options.max_len >= 2, ErrorCode::InvalidArgument, "--max-len must be at least 2");
  RunReport r;
  r.command = "hardy";
  r.config = json{{"cases", std::to_string(options.cases)},
                  {"max_len", std::to_string(options.max_len)},
                  {"seed", std::to_string(options.seed)}};
  Stopwatch clock(r.timings);

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> length(2, options.max_len);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  long worst_case = -1;
  std::vector<Complex> worst_seq;
  for (long k = 0; k < options.cases; ++k) {
    std::vector<Complex> c(static_cast<std::size_t>(length(rng)));
    for (auto& x : c) x = Complex(normal(rng), normal(rng));
    const auto h = hardy_check(c);
    if (h.ratio > worst) {
      worst = h.ratio;
      worst_case = k;
      worst_seq = std::move(c);
    }
  }
  clock.lap("random");

  // Structured sequences that push the ratio toward its supremum.
  json adversarial = json::array();
  double worst_structured = 0.0;
  const auto n = static_cast<std::size_t>(options.max_len);
  auto probe = [&](const std::string& name, auto&& gen) {
    std::vector<Complex> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = gen(double(i + 1));
    const auto h = hardy_check(c);
    worst_structured = std::max(worst_structured, h.ratio);
    adversarial.push_back(json{{"sequence", name}, {"ratio", h.ratio}});
  };
  probe("1/sqrt(n)", [](double k) { return Complex(1.0 / std::sqrt(k), 0.0); });
  probe("sqrt(n)", [](double k) { return Complex(std::sqrt(k), 0.0); });
  probe("n", [](double k) { return Complex(k, 0.0); });
  probe("sqrt(n) log(n+1)", [](double k) { return Complex(std::sqrt(k) * std::log(k + 1.0), 0.0); });
  probe("n^0.45", [](double k) { return Complex(std::pow(k, 0.45), 0.0); });
  clock.lap("structured");

  json seq = json::array();
  for (const auto& z : worst_seq) seq.push_back(complex_json(z));
  r.samples["worst_ratio"] = worst;
  r.samples["worst_case"] = worst_case;
  r.samples["worst_sequence"] = seq;
  r.samples["structured"] = adversarial;
  const double overall = std::max(worst, worst_structured);
  verdict(r, "hardy_inequality", overall <= 1.0,
          "largest lhs/(4 rhs) = " + fmt(overall) + " over " + std::to_string(options.cases) +
              " random and 5 structured sequences");
  r.config_hash = fnv1a_hex(r.config.dump());
  return r;
}

// ---------------------------------------------------------------------------

RunReport run_witness(const WitnessOptions& options) {
  require(!options.times.empty(), ErrorCode::InvalidArgument, "no witness times given");
  for (std::size_t i = 0; i < options.times.size(); ++i) {
    require(options.times[i] > std::numbers::e, ErrorCode::InvalidArgument,
            "witness times must exceed e");
    require(i == 0 || options.times[i] > options.times[i - 1], ErrorCode::InvalidArgument,
            "witness times must be strictly increasing");
  }
  const double t_max = options.times.back();
  const Index need = static_cast<Index>(std::ceil(8.0 * t_max));
  const Index dim = options.dim == 0 ? need : options.dim;
  if (dim < need) {
    throw TruncationError("witness at t = " + fmt(t_max) + " needs dim >= " + std::to_string(need) +
                              ", got " + std::to_string(dim),
                          static_cast<long>(need + 1), static_cast<long>(need));
  }
  RunReport r;
  r.command = "witness";
  json times = json::array();
  for (const double t : options.times) times.push_back(t);
  r.config = json{{"times", times.dump()}, {"dim", std::to_string(dim)}};
  Stopwatch clock(r.timings);

  const Model model(ModelSpec{Family::LogSpectrum, dim + 1, 1, Complex(1.0, 0.0)});
  const auto a_inv = model.resolvent(Complex(0.0, 0.0));
  std::vector<WitnessBound> bounds;
  std::vector<double> opnorms;
  for (const double t : options.times) {
    bounds.push_back(witness_lower_bound(model, t));
    opnorms.push_back(operator_norm(model.evolve(t) * a_inv, model.norm_context(), model.norm_context()));
  }
  clock.lap("witness");

  std::vector<double> raw, normalized, norm2;
  for (const auto& b : bounds) {
    raw.push_back(b.raw_ratio);
    normalized.push_back(b.normalized);
    norm2.push_back(b.witness_norm_squared);
    r.csv.rows.push_back({b.t, b.raw_ratio, b.normalized});
  }
  r.csv.header = {"t", "raw_ratio", "normalized"};
  r.samples["t"] = options.times;
  r.samples["raw_ratio"] = raw;
  r.samples["normalized"] = normalized;
  r.samples["witness_norm_squared"] = norm2;
  r.samples["operator_norm"] = opnorms;

  const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  verdict(r, "witness_bracket", *lo > 0.0 && *hi <= 5.0 * *lo,
          "normalized ratio in [" + fmt(*lo) + ", " + fmt(*hi) + "]");
  bool below = true;
  for (std::size_t i = 0; i < raw.size(); ++i) below = below && raw[i] <= opnorms[i] * (1.0 + 1e-9);
  verdict(r, "witness_below_operator_norm", below, "raw ratio never exceeds the computed operator norm");
  bool exact_norm = true;
  for (const auto& b : bounds) {
    const double expect = 4.0 * b.t + 2.0;
    if (std::floor(2.0 * b.t) == 2.0 * b.t) {
      exact_norm = exact_norm && std::abs(b.witness_norm_squared - expect) <= 1e-9 * expect;
    }
  }
  verdict(r, "witness_norm", exact_norm, "squared norm equals 4t+2 for half-integer t");
  r.config_hash = fnv1a_hex(r.config.dump());
  return r;
}

}  // namespace sglab
