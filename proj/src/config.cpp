#include "sglab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sglab/asymptotics.hpp"
#include "sglab/error.hpp"

namespace sglab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(int line, std::string_view key, const std::string& what) {
  std::string msg = "line " + std::to_string(line);
  if (!key.empty()) msg += ": " + std::string(key);
  fail(ErrorCode::Config, msg + ": " + what);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Entry {
  int line;
  std::string value;
};

const char* const kKnownKeys[] = {
    "model.family",     "model.max_index",   "model.order",       "model.mu",
    "grid.t_min",       "grid.t_max",        "grid.points",       "grid.spacing",
    "run.mu",           "run.max_dim",       "run.seed",          "contour.nodes",
    "contour.radius",   "theorem.eigenvalues", "theorem.shift",   "tolerances.norm",
    "tolerances.projection", "output.directory", "output.formats",
};

bool known(std::string_view key) {
  for (const char* k : kKnownKeys) {
    if (key == k) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_complex(Complex value) {
  std::string out = format_double(value.real());
  const double im = value.imag();
  if (im >= 0.0 && !std::signbit(im)) out += '+';
  out += format_double(im);
  out += 'i';
  return out;
}

std::optional<Complex> parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.back() != 'i') {
    const auto re = to_double(text);
    if (!re) return std::nullopt;
    return Complex(*re, 0.0);
  }
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [](std::string_view s) -> std::optional<double> {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    if (s.front() == '+') s.remove_prefix(1);
    return to_double(s);
  };
  if (split == std::string_view::npos) {
    const auto im = imag_part(body);
    if (!im) return std::nullopt;
    return Complex(0.0, *im);
  }
  const auto re = to_double(body.substr(0, split));
  const auto im = imag_part(body.substr(split));
  if (!re || !im) return std::nullopt;
  return Complex(*re, *im);
}

std::vector<double> TimeGridSpec::values() const {
  if (points == 0) return sqrt2_grid(t_min, t_max);
  return spacing == Spacing::Geometric ? geometric_grid(t_min, t_max, points)
                                       : linear_grid(t_min, t_max, points);
}

ExperimentConfig parse_config(std::string_view text, std::optional<Index> max_dim_override) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) config_error(line_no, {}, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) config_error(line_no, {}, "missing key");
    if (!known(key)) config_error(line_no, key, "unknown key");
    if (value.empty()) config_error(line_no, key, "missing value");
    if (entries.count(key)) {
      config_error(line_no, key, "duplicate key (first set on line " +
                                     std::to_string(entries[key].line) + ")");
    }
    entries.emplace(key, Entry{line_no, value});
  }

  auto find = [&](std::string_view key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto get_double = [&](std::string_view key, double& out) {
    if (const Entry* e = find(key)) {
      const auto v = to_double(e->value);
      if (!v) config_error(e->line, key, "not a finite number: '" + e->value + "'");
      out = *v;
    }
  };
  auto get_int = [&](std::string_view key, auto& out) {
    using Int = std::remove_reference_t<decltype(out)>;
    if (const Entry* e = find(key)) {
      const auto v = to_integer<Int>(e->value);
      if (!v) config_error(e->line, key, "not an integer: '" + e->value + "'");
      out = *v;
    }
  };
  auto get_complex = [&](std::string_view key, Complex& out) {
    if (const Entry* e = find(key)) {
      const auto v = parse_complex(e->value);
      if (!v) config_error(e->line, key, "not a complex number: '" + e->value + "'");
      out = *v;
    }
  };
  auto line_of = [&](std::string_view key) { return find(key) ? find(key)->line : 0; };

  ExperimentConfig c;
  const Entry* family = find("model.family");
  if (!family) config_error(0, "model.family", "required key missing");
  const auto fam = parse_family(family->value);
  if (!fam) {
    config_error(family->line, "model.family",
                 "unknown family '" + family->value + "' (DIAG_JORDAN, JORDAN_PAIRS, LOG_SPECTRUM)");
  }
  c.model.family = *fam;
  get_int("model.order", c.model.order);
  if (c.model.order < 1) config_error(line_of("model.order"), "model.order", "must be >= 1");
  get_complex("model.mu", c.model.mu_default);
  c.mu = c.model.mu_default;
  get_complex("run.mu", c.mu);

  get_double("grid.t_min", c.grid.t_min);
  get_double("grid.t_max", c.grid.t_max);
  get_int("grid.points", c.grid.points);
  if (const Entry* e = find("grid.spacing")) {
    if (e->value == "geometric") {
      c.grid.spacing = Spacing::Geometric;
    } else if (e->value == "linear") {
      c.grid.spacing = Spacing::Linear;
    } else {
      config_error(e->line, "grid.spacing", "expected 'geometric' or 'linear'");
    }
  }
  if (c.grid.t_min < 0.0) config_error(line_of("grid.t_min"), "grid.t_min", "must be >= 0");
  if (!(c.grid.t_max > c.grid.t_min)) {
    config_error(line_of("grid.t_max"), "grid.t_max", "must exceed grid.t_min");
  }
  if (c.grid.points < 0 || c.grid.points == 1) {
    config_error(line_of("grid.points"), "grid.points", "must be 0 (sqrt(2) steps) or >= 2");
  }
  if ((c.grid.spacing == Spacing::Geometric || c.grid.points == 0) && c.grid.t_min <= 0.0) {
    config_error(line_of("grid.t_min"), "grid.t_min", "geometric spacing needs t_min > 0");
  }

  if (const Entry* e = find("contour.nodes")) {
    int nodes = 0;
    get_int("contour.nodes", nodes);
    if (nodes < 16 || nodes % 2 != 0) config_error(e->line, "contour.nodes", "must be even and >= 16");
    c.contour_nodes = nodes;
  }
  if (const Entry* e = find("contour.radius")) {
    double r = 0.0;
    get_double("contour.radius", r);
    if (r <= 0.0) config_error(e->line, "contour.radius", "must be positive");
    c.contour_radius = r;
  }
  get_int("theorem.eigenvalues", c.eigenvalue_count);
  if (c.eigenvalue_count < 1) {
    config_error(line_of("theorem.eigenvalues"), "theorem.eigenvalues", "must be >= 1");
  }
  get_double("theorem.shift", c.translation_shift);
  if (c.translation_shift <= 0.0) config_error(line_of("theorem.shift"), "theorem.shift", "must be positive");
  get_double("tolerances.norm", c.tolerances.norm);
  get_double("tolerances.projection", c.tolerances.projection);
  if (c.tolerances.norm <= 0.0) config_error(line_of("tolerances.norm"), "tolerances.norm", "must be positive");
  if (c.tolerances.projection <= 0.0) {
    config_error(line_of("tolerances.projection"), "tolerances.projection", "must be positive");
  }

  if (const Entry* e = find("output.directory")) c.output.directory = e->value;
  if (const Entry* e = find("output.formats")) {
    c.output.csv = c.output.json = false;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto f = trim(item);
      if (f == "csv") {
        c.output.csv = true;
      } else if (f == "json") {
        c.output.json = true;
      } else {
        config_error(e->line, "output.formats", "unknown format '" + std::string(f) + "'");
      }
    }
    if (!c.output.csv && !c.output.json) config_error(e->line, "output.formats", "no format given");
  }
  get_int("run.max_dim", c.max_dim);
  if (max_dim_override) c.max_dim = *max_dim_override;
  if (c.max_dim < 1) config_error(line_of("run.max_dim"), "run.max_dim", "must be positive");
  get_int("run.seed", c.seed);

  const Index need = required_max_index(c.model.family, c.grid.t_max);
  if (const Entry* e = find("model.max_index")) {
    Index mi = 0;
    get_int("model.max_index", mi);
    if (mi < 2) config_error(e->line, "model.max_index", "must be >= 2");
    c.model.max_index = mi;
    check_truncation(c.model, c.grid.t_max);
  } else {
    c.model.max_index = need;
  }
  const Index dim = dimension_for(c.model.family, c.model.max_index);
  if (dim > c.max_dim) {
    throw TruncationError("t_max = " + format_double(c.grid.t_max) + " needs max_index >= " +
                              std::to_string(need) + " (dim " + std::to_string(dim) +
                              "), above the dimension cap " + std::to_string(c.max_dim),
                          static_cast<long>(need), static_cast<long>(dim));
  }
  // Validates order against dim and both resolvent points against the spectrum.
  try {
    const Model model(c.model);
    if (model.spectral_distance(c.mu) < 1e-12) {
      config_error(line_of("run.mu"), "run.mu", "lies on the spectrum");
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Config) throw;
    config_error(0, "model", err.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, std::optional<Index> max_dim_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), max_dim_override);
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  auto put = [&](std::string_view key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  put("model.family", std::string(to_string(c.model.family)));
  put("model.max_index", std::to_string(c.model.max_index));
  put("model.order", std::to_string(c.model.order));
  put("model.mu", format_complex(c.model.mu_default));
  put("grid.t_min", format_double(c.grid.t_min));
  put("grid.t_max", format_double(c.grid.t_max));
  put("grid.points", std::to_string(c.grid.points));
  put("grid.spacing", c.grid.spacing == Spacing::Geometric ? "geometric" : "linear");
  put("run.mu", format_complex(c.mu));
  put("run.max_dim", std::to_string(c.max_dim));
  put("run.seed", std::to_string(c.seed));
  if (c.contour_nodes) put("contour.nodes", std::to_string(*c.contour_nodes));
  if (c.contour_radius) put("contour.radius", format_double(*c.contour_radius));
  put("theorem.eigenvalues", std::to_string(c.eigenvalue_count));
  put("theorem.shift", format_double(c.translation_shift));
  put("tolerances.norm", format_double(c.tolerances.norm));
  put("tolerances.projection", format_double(c.tolerances.projection));
  put("output.directory", c.output.directory);
  std::string formats;
  if (c.output.csv) formats = "csv";
  if (c.output.json) formats += formats.empty() ? "json" : ",json";
  if (!formats.empty()) put("output.formats", formats);
  return out;
}

std::string config_hash(const ExperimentConfig& config) { return fnv1a_hex(to_config_text(config)); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sglab
