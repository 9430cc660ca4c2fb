#include "sglab/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sglab/error.hpp"

namespace sglab {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSpectrumHitDistance = 1e-12;

Complex diag_jordan_eigenvalue(Index k) {
  const double kd = static_cast<double>(k);
  return Complex(-1.0 / kd, kd);
}

Complex pair_upper(Index n) {
  const double nd = static_cast<double>(n);
  return Complex(0.0, nd + 1.0 / nd);
}

Complex pair_lower(Index n) {
  const double nd = static_cast<double>(n);
  return Complex(0.0, nd - 1.0 / nd);
}

BlockStructure layout(const ModelSpec& spec) {
  BlockStructure s;
  Index next = 0;
  auto push = [&](int size, std::vector<Complex> eig) {
    s.blocks.push_back(BlockInfo{next, size, std::move(eig)});
    next += size;
  };
  switch (spec.family) {
    case Family::DiagJordan:
      push(1, {kI});
      for (Index k = 1; k < spec.max_index; ++k) {
        const Complex lambda = diag_jordan_eigenvalue(k);
        push(2, {lambda, lambda});
      }
      break;
    case Family::JordanPairs:
      for (Index n = 2; n <= spec.max_index; ++n) push(2, {pair_upper(n), pair_lower(n)});
      break;
    case Family::LogSpectrum:
      for (Index n = 2; n <= spec.max_index; ++n)
        push(1, {Complex(0.0, std::log(static_cast<double>(n)))});
      break;
  }
  s.dim = next;
  return s;
}

void validate(const ModelSpec& spec) {
  require(spec.max_index >= 2, ErrorCode::InvalidArgument, "max_index must be at least 2");
  if (spec.family == Family::LogSpectrum) {
    require(spec.order >= 1, ErrorCode::InvalidArgument, "LOG_SPECTRUM order must be positive");
    require(dimension_for(spec.family, spec.max_index) > spec.order, ErrorCode::InvalidArgument,
            "LOG_SPECTRUM needs more basis elements than its difference order");
  }
  require(std::isfinite(spec.mu_default.real()) && std::isfinite(spec.mu_default.imag()),
          ErrorCode::InvalidArgument, "mu_default must be finite");
}

// Blocks of the same layout as the model, filled per block index.
template <class Fill>
BlockDiagonalMatrix fill_blocks(const BlockStructure& s, Fill fill) {
  std::vector<Block> blocks;
  blocks.reserve(s.blocks.size());
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    Block b;
    b.start = s.blocks[i].start;
    b.size = s.blocks[i].size;
    fill(i, s.blocks[i], b);
    blocks.push_back(b);
  }
  return BlockDiagonalMatrix(std::move(blocks));
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::DiagJordan: return "DIAG_JORDAN";
    case Family::JordanPairs: return "JORDAN_PAIRS";
    case Family::LogSpectrum: return "LOG_SPECTRUM";
  }
  return "UNKNOWN";
}

std::optional<Family> parse_family(std::string_view text) {
  if (text == "DIAG_JORDAN") return Family::DiagJordan;
  if (text == "JORDAN_PAIRS") return Family::JordanPairs;
  if (text == "LOG_SPECTRUM") return Family::LogSpectrum;
  return std::nullopt;
}

Index dimension_for(Family family, Index max_index) {
  switch (family) {
    case Family::DiagJordan: return 1 + 2 * (max_index - 1);
    case Family::JordanPairs: return 2 * (max_index - 1);
    case Family::LogSpectrum: return max_index - 1;
  }
  return 0;
}

Index required_max_index(Family family, double t_max) {
  const double t = std::max(t_max, 0.0);
  switch (family) {
    case Family::DiagJordan:
    case Family::JordanPairs:
      return std::max<Index>(2, static_cast<Index>(std::ceil(50.0 * t)));
    case Family::LogSpectrum:
      // dim = max_index - 1 >= 8 t
      return std::max<Index>(2, static_cast<Index>(std::ceil(8.0 * t)) + 1);
  }
  return 2;
}

void check_truncation(const ModelSpec& spec, double t_max) {
  const Index need = required_max_index(spec.family, t_max);
  if (spec.max_index < need) {
    const Index need_dim = dimension_for(spec.family, need);
    throw TruncationError(std::string(to_string(spec.family)) + " at t_max = " +
                              std::to_string(t_max) + " needs max_index >= " +
                              std::to_string(need) + " (dim >= " + std::to_string(need_dim) +
                              "), got max_index = " + std::to_string(spec.max_index),
                          static_cast<long>(need), static_cast<long>(need_dim));
  }
}

std::pair<BlockStructure, NormContext> build_model(const ModelSpec& spec) {
  validate(spec);
  BlockStructure s = layout(spec);
  NormContext ctx = spec.family == Family::LogSpectrum
                        ? NormContext::delta_weighted(spec.order, s.dim)
                        : NormContext::euclidean(s.dim);
  return {std::move(s), ctx};
}

Model::Model(ModelSpec spec) : Model(spec, build_model(spec)) {}

Model::Model(ModelSpec spec, std::pair<BlockStructure, NormContext> built)
    : spec_(spec), structure_(std::move(built.first)), context_(built.second) {
  require(spectral_distance(spec_.mu_default) >= kSpectrumHitDistance, ErrorCode::SpectrumHit,
          "mu_default lies on the spectrum");
}

BlockDiagonalMatrix Model::evolve(double t) const {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::InvalidArgument, "evolve needs finite t >= 0");
  switch (spec_.family) {
    case Family::DiagJordan:
      return fill_blocks(structure_, [t](std::size_t, const BlockInfo& info, Block& b) {
        const Complex e = std::exp(info.eigenvalues[0] * t);
        if (info.size == 1) {
          b.entries[0] = e;
        } else {
          b.entries = {e, t * e, 0.0, e};
        }
      });
    case Family::JordanPairs:
      return fill_blocks(structure_, [t](std::size_t i, const BlockInfo&, Block& b) {
        const double n = static_cast<double>(i + 2);
        const Complex phase = std::polar(1.0, n * t);
        b.entries = {phase * std::polar(1.0, t / n), phase * (n * std::sin(t / n)), 0.0,
                     phase * std::polar(1.0, -t / n)};
      });
    case Family::LogSpectrum:
      return fill_blocks(structure_, [t](std::size_t i, const BlockInfo&, Block& b) {
        b.entries[0] = std::polar(1.0, t * std::log(static_cast<double>(i + 2)));
      });
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

BlockDiagonalMatrix Model::generator() const {
  return fill_blocks(structure_, [](std::size_t, const BlockInfo& info, Block& b) {
    if (info.size == 1) {
      b.entries[0] = info.eigenvalues[0];
    } else {
      b.entries = {info.eigenvalues[0], 1.0, 0.0, info.eigenvalues[1]};
    }
  });
}

BlockDiagonalMatrix Model::resolvent(Complex mu) const {
  const double dist = spectral_distance(mu);
  require(dist >= kSpectrumHitDistance, ErrorCode::SpectrumHit,
          "resolvent point is within " + std::to_string(dist) + " of the spectrum");
  return fill_blocks(structure_, [mu](std::size_t, const BlockInfo& info, Block& b) {
    const Complex ra = 1.0 / (info.eigenvalues[0] - mu);
    if (info.size == 1) {
      b.entries[0] = ra;
    } else {
      const Complex rb = 1.0 / (info.eigenvalues[1] - mu);
      b.entries = {ra, -ra * rb, 0.0, rb};
    }
  });
}

std::vector<Eigenvalue> Model::eigenvalues() const {
  std::vector<Complex> all;
  for (const auto& b : structure_.blocks) all.insert(all.end(), b.eigenvalues.begin(), b.eigenvalues.end());
  std::sort(all.begin(), all.end(), [](Complex a, Complex b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  std::vector<Eigenvalue> out;
  for (const Complex z : all) {
    if (!out.empty() && out.back().value == z) {
      ++out.back().multiplicity;
    } else {
      out.push_back(Eigenvalue{z, 1});
    }
  }
  return out;
}

double Model::spectral_distance(Complex mu) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : structure_.blocks)
    for (const Complex z : b.eigenvalues) best = std::min(best, std::abs(z - mu));
  return best;
}

}  // namespace sglab
