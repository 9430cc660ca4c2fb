#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "sglab/asymptotics.hpp"
#include "sglab/error.hpp"
#include "sglab/models.hpp"

using namespace sglab;
using C = std::complex<double>;

namespace {

constexpr C I{0.0, 1.0};

Model make(Family f, Index max_index, int order = 1) { return Model(ModelSpec{f, max_index, order, C(1.0)}); }

const Family kFamilies[] = {Family::DiagJordan, Family::JordanPairs, Family::LogSpectrum};

double block_diff(const BlockDiagonalMatrix& a, const BlockDiagonalMatrix& b) { return (a - b).euclidean_norm(); }

double dense_diff(const ComplexMatrix& a, const Eigen::MatrixXcd& b) {
  return (a.eigen() - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("block layouts") {
  const auto dj = build_model(ModelSpec{Family::DiagJordan, 3, 1, C(1)});
  REQUIRE(dj.first.blocks.size() == 3);
  CHECK(dj.first.dim == 5);
  CHECK(dj.first.blocks[0].size == 1);
  CHECK(dj.first.blocks[0].eigenvalues[0] == I);
  CHECK(dj.first.blocks[1].eigenvalues[0] == I - 1.0);
  CHECK(dj.first.blocks[1].eigenvalues[1] == I - 1.0);
  CHECK(dj.first.blocks[2].eigenvalues[0] == 2.0 * I - 0.5);
  CHECK(dj.second.kind() == NormKind::Euclidean);

  const auto jp = build_model(ModelSpec{Family::JordanPairs, 2, 1, C(1)});
  REQUIRE(jp.first.blocks.size() == 1);
  CHECK(jp.first.blocks[0].eigenvalues[0] == 2.5 * I);
  CHECK(jp.first.blocks[0].eigenvalues[1] == 1.5 * I);
  CHECK(jp.second.kind() == NormKind::Euclidean);

  const auto ls = build_model(ModelSpec{Family::LogSpectrum, 4, 1, C(1)});
  REQUIRE(ls.first.blocks.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(ls.first.blocks[k].eigenvalues[0] == I * std::log(double(k + 2)));
  CHECK(ls.second.kind() == NormKind::DeltaWeighted);
  CHECK(ls.second.order() == 1);
}

TEST_CASE("blocks partition the index range") {
  for (const Family f : kFamilies) {
    for (Index m : {2, 3, 17}) {
      if (f == Family::LogSpectrum && m == 2) {
        CHECK_THROWS_AS(build_model(ModelSpec{f, m, 1, C(1)}), Error);
        continue;
      }
      const auto s = build_model(ModelSpec{f, m, 1, C(1)}).first;
      Index next = 0;
      for (const auto& b : s.blocks) {
        CHECK(b.start == next);
        CHECK(b.eigenvalues.size() == std::size_t(b.size));
        next += b.size;
      }
      CHECK(next == s.dim);
      CHECK(s.dim == dimension_for(f, m));
    }
  }
}

TEST_CASE("invalid specs are rejected") {
  CHECK_THROWS_AS(make(Family::JordanPairs, 1), Error);
  CHECK_THROWS_AS(make(Family::LogSpectrum, 5, 0), Error);
  CHECK_THROWS_AS(make(Family::LogSpectrum, 3, 2), Error);  // dim 2 is too small for order 2
  CHECK_THROWS_AS(Model(ModelSpec{Family::LogSpectrum, 5, 1, I * std::log(3.0)}), Error);
  CHECK_THROWS_AS(Model(ModelSpec{Family::JordanPairs, 5, 1, 2.5 * I}), Error);
  CHECK(kGrowthBound == 0.0);
}

TEST_CASE("evolve at zero is the identity") {
  for (const Family f : kFamilies) {
    const auto m = make(f, 9);
    CHECK(block_diff(m.evolve(0.0), m.evolve(0.0).identity_like()) == 0.0);
  }
}

TEST_CASE("jordan pair block at t = pi") {
  const auto m = make(Family::JordanPairs, 2);
  const auto b = m.evolve(std::numbers::pi).blocks()[0];
  CHECK(std::abs(b.at(0, 0) - I) <= 1e-14);
  CHECK(std::abs(b.at(0, 1) - 2.0) <= 1e-14);
  CHECK(std::abs(b.at(1, 0)) == 0.0);
  CHECK(std::abs(b.at(1, 1) + I) <= 1e-14);
}

TEST_CASE("negative time and spectrum hits are errors") {
  const auto m = make(Family::LogSpectrum, 6);
  CHECK_THROWS_AS(m.evolve(-1.0), Error);
  try {
    m.resolvent(I * std::log(4.0));
    FAIL("expected SPECTRUM_HIT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpectrumHit);
  }
  CHECK_THROWS_AS(make(Family::DiagJordan, 4).resolvent(I - 1.0 + 1e-14), Error);
}

TEST_CASE("generators") {
  const auto jp = make(Family::JordanPairs, 2).generator().blocks()[0];
  CHECK(jp.at(0, 0) == 2.0 * I + 0.5 * I);
  CHECK(jp.at(0, 1) == C(1.0));
  CHECK(jp.at(1, 0) == C(0.0));
  CHECK(jp.at(1, 1) == 2.0 * I - 0.5 * I);
  const auto ls = make(Family::LogSpectrum, 3).generator().blocks()[0];
  CHECK(ls.at(0, 0).imag() == doctest::Approx(0.693147180559945));
  const auto dj = make(Family::DiagJordan, 4).generator().blocks()[3];
  CHECK(dj.at(0, 0) == 3.0 * I - 1.0 / 3.0);
  CHECK(dj.at(0, 1) == C(1.0));
  CHECK(dj.at(1, 1) == 3.0 * I - 1.0 / 3.0);
}

TEST_CASE("evolve matches the matrix exponential of the generator") {
  for (const Family f : kFamilies) {
    const auto m = make(f, 7);
    const Eigen::MatrixXcd a = m.generator().dense().eigen();
    for (const double t : {0.3, 1.0, 4.5, 12.0}) {
      const Eigen::MatrixXcd e = oracle::expm(a * t);
      CHECK(dense_diff(m.evolve(t).dense(), e) <= 1e-10 * (1.0 + e.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("diag-jordan ordering sends the second basis vector of a pair onto t e1 + e2") {
  const auto m = make(Family::DiagJordan, 3);
  const double t = 2.5;
  ComplexVector e2 = ComplexVector::Zero(m.dim());
  e2[2] = 1.0;
  const auto y = m.evolve(t).apply(e2);
  const C scale = std::exp((I - 1.0) * t);
  CHECK(std::abs(y[1] - scale * t) <= 1e-14);
  CHECK(std::abs(y[2] - scale) <= 1e-14);
}

TEST_CASE("difference quotient of evolve converges to the generator") {
  for (const Family f : kFamilies) {
    const auto m = make(f, 6);
    const auto a = m.generator();
    const double scale = a.euclidean_norm();
    for (const double h : {1e-5, 1e-6}) {
      const auto q = Complex(1.0 / h, 0.0) * (m.evolve(h) - m.evolve(0.0));
      CHECK((q - a).euclidean_norm() <= h * scale * scale + 1e-8);
    }
  }
}

TEST_CASE("resolvent examples") {
  const auto ls = make(Family::LogSpectrum, 6);
  const auto r = ls.resolvent(C(0.0));
  for (std::size_t k = 0; k < r.blocks().size(); ++k) {
    CHECK(std::abs(r.blocks()[k].at(0, 0) - (-I / std::log(double(k + 2)))) <= 1e-15);
  }

  // Product with the semigroup against the closed form for T_n(t) A_n^{-1}.
  const auto jp = make(Family::JordanPairs, 9);
  const double t = 3.7;
  const auto p = jp.evolve(t) * jp.resolvent(C(0.0));
  for (std::size_t k = 0; k < p.blocks().size(); ++k) {
    const double n = double(k + 2);
    const C pre = I * n / (1.0 - std::pow(n, 4)) * std::exp(I * n * t);
    const C e = std::exp(I * t / n);
    const C expect[4] = {pre * (n * n - 1) * e, pre * ((n * n - 1) * n * std::sin(t / n) + I * n / e), 0.0,
                         pre * (n * n + 1) / e};
    for (int q = 0; q < 4; ++q) CHECK(std::abs(p.blocks()[k].entries[q] - expect[q]) <= 1e-10);
  }

  for (const Family f : kFamilies) {
    const auto m = make(f, 12);
    for (const C mu : {C(1.0), C(0.3, 2.2), C(-2.0, -1.0)}) {
      const auto id = (m.generator() - mu * m.generator().identity_like()) * m.resolvent(mu);
      CHECK(block_diff(id, id.identity_like()) <= 1e-12);
    }
  }
}

TEST_CASE("eigenvalue lists") {
  const auto dj = make(Family::DiagJordan, 2).eigenvalues();
  REQUIRE(dj.size() == 2);
  CHECK(dj[0].value == I - 1.0);
  CHECK(dj[0].multiplicity == 2);
  CHECK(dj[1].value == I);
  CHECK(dj[1].multiplicity == 1);

  const auto jp = make(Family::JordanPairs, 2).eigenvalues();
  REQUIRE(jp.size() == 2);
  CHECK(jp[0].value == 1.5 * I);
  CHECK(jp[1].value == 2.5 * I);

  const auto ls = make(Family::LogSpectrum, 3).eigenvalues();
  REQUIRE(ls.size() == 2);
  CHECK(ls[0].value == I * std::log(2.0));
  CHECK(ls[1].value == I * std::log(3.0));

  for (const Family f : kFamilies) {
    const auto e = make(f, 40).eigenvalues();
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i - 1].value.imag() <= e[i].value.imag());
    for (const auto& x : e) CHECK((f == Family::DiagJordan || x.value.real() == 0.0));
  }
}

TEST_CASE("property: semigroup law on a 20-point grid") {
  // Dyadic grid points so that t + s is exact and only the evolution itself is tested.
  std::vector<double> grid;
  for (int k = 0; k < 20; ++k) grid.push_back(std::round(100.0 * k / 19.0 * 1024.0) / 1024.0);
  for (const Family f : kFamilies) {
    const auto m = make(f, 200);
    std::vector<BlockDiagonalMatrix> ev;
    for (const double t : grid) ev.push_back(m.evolve(t));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        worst = std::max(worst, block_diff(m.evolve(grid[i] + grid[j]), ev[i] * ev[j]));
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("property: spectral mapping on triangular blocks") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 50.0);
  for (const Family f : kFamilies) {
    const auto m = make(f, 30);
    for (int trial = 0; trial < 10; ++trial) {
      const double t = ut(rng);
      const auto e = m.evolve(t);
      for (std::size_t k = 0; k < e.blocks().size(); ++k) {
        const auto& b = e.blocks()[k];
        const auto& eig = m.structure().blocks[k].eigenvalues;
        for (int d = 0; d < b.size; ++d) CHECK(std::abs(b.at(d, d) - std::exp(eig[d] * t)) <= 1e-12);
        if (b.size == 2) CHECK(b.at(1, 0) == C(0.0));
      }
    }
  }
}

TEST_CASE("property: resolvent identity") {
  std::mt19937_64 rng(23);
  for (const Family f : kFamilies) {
    const auto m = make(f, 25);
    for (int trial = 0; trial < 20; ++trial) {
      C mu, nu;
      do mu = oracle::random_point(rng, 4.0) + C(0, 3); while (m.spectral_distance(mu) < 0.1);
      do nu = oracle::random_point(rng, 4.0) + C(0, 3); while (m.spectral_distance(nu) < 0.1);
      const auto lhs = m.resolvent(mu) - m.resolvent(nu);
      const auto rhs = (mu - nu) * (m.resolvent(mu) * m.resolvent(nu));
      double worst = 0.0;
      for (std::size_t k = 0; k < lhs.blocks().size(); ++k) {
        for (int q = 0; q < 4; ++q) worst = std::max(worst, std::abs(lhs.blocks()[k].entries[q] - rhs.blocks()[k].entries[q]));
      }
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("diag-jordan scalar block is unimodular") {
  const auto m = make(Family::DiagJordan, 5);
  for (const double t : {0.0, 0.5, 3.0, 77.0, 1000.0}) {
    CHECK(std::abs(std::abs(m.evolve(t).blocks()[0].at(0, 0)) - 1.0) <= 1e-14);
  }
}

TEST_CASE("jordan pairs grow linearly at adequate truncation") {
  for (const double t : {20.0, 63.0, 200.0}) {
    const auto m = make(Family::JordanPairs, required_max_index(Family::JordanPairs, t));
    const double v = operator_norm(m.evolve(t), m.norm_context(), m.norm_context(), {});
    CHECK(v / t >= 0.9);
    CHECK(v / t <= 1.1);
  }
}

TEST_CASE("truncation rule") {
  CHECK(required_max_index(Family::JordanPairs, 100.0) == 5000);
  CHECK(required_max_index(Family::DiagJordan, 10.0) == 500);
  CHECK(dimension_for(Family::LogSpectrum, required_max_index(Family::LogSpectrum, 200.0)) == 1600);
  try {
    check_truncation(ModelSpec{Family::JordanPairs, 100, 1, C(1)}, 50.0);
    FAIL("expected TRUNCATION_INADEQUATE");
  } catch (const TruncationError& e) {
    CHECK(e.code() == ErrorCode::TruncationInadequate);
    CHECK(e.required_max_index() == 2500);
    CHECK(e.required_dim() == 4998);
  }
  CHECK_NOTHROW(check_truncation(ModelSpec{Family::JordanPairs, 2500, 1, C(1)}, 50.0));
}
