#include "doctest.h"
#include "oracles.hpp"
#include "sglab/block_matrix.hpp"
#include "sglab/error.hpp"
#include "sglab/linalg.hpp"

using namespace sglab;
using C = std::complex<double>;

namespace {

ComplexVector vec(std::initializer_list<C> xs) {
  ComplexVector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const C x : xs) v[i++] = x;
  return v;
}

ComplexVector tent(double t, Index dim) {
  ComplexVector v = ComplexVector::Zero(dim);
  for (Index k = 0; k < dim; ++k) {
    const double n = double(k + 2);
    if (n <= 2 * t) {
      v[k] = n;
    } else if (n <= 4 * t) {
      v[k] = 4 * t - n;
    }
  }
  return v;
}

}  // namespace

TEST_CASE("difference matrix of order 1 is the bidiagonal backward difference") {
  const auto d = difference_matrix(1, 3);
  const auto expect = ComplexMatrix::from_rows({{1, 0, 0}, {-1, 1, 0}, {0, -1, 1}});
  CHECK(max_abs_diff(d, expect) == 0.0);
}

TEST_CASE("difference matrix of order 2 equals the squared first difference") {
  const auto d = difference_matrix(2, 4);
  CHECK(d(0, 0) == C(1));
  CHECK(d(1, 0) == C(-2));
  CHECK(d(2, 0) == C(1));
  CHECK(d(3, 0) == C(0));
  CHECK((d.eigen() - oracle::difference_power(2, 4)).cwiseAbs().maxCoeff() == 0.0);
  for (int n = 1; n <= 4; ++n) {
    for (Index dim : {n + 1, 7, 19}) {
      CHECK((difference_matrix(n, dim).eigen() - oracle::difference_power(n, dim)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("constant sequence has no differences after the boundary term") {
  const auto out = difference_matrix(1, 2).apply(vec({1, 1}));
  CHECK(out[0] == C(1));
  CHECK(out[1] == C(0));
}

TEST_CASE("difference transforms reject invalid orders and sizes") {
  CHECK_THROWS_WITH_AS(difference_matrix(0, 4), doctest::Contains("identity transform not a weighting"), Error);
  CHECK_THROWS_AS(difference_matrix(2, 2), Error);
  CHECK_THROWS_AS(cumulative_matrix(3, 3), Error);
  CHECK_THROWS_AS(NormContext::delta_weighted(0, 5), Error);
  CHECK_THROWS_AS(NormContext::delta_weighted(2, 2), Error);
}

TEST_CASE("cumulative matrix inverts the difference matrix") {
  const auto l1 = cumulative_matrix(1, 3);
  CHECK(max_abs_diff(l1, ComplexMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {1, 1, 1}})) == 0.0);
  const auto l2 = cumulative_matrix(2, 3);
  CHECK(max_abs_diff(l2, ComplexMatrix::from_rows({{1, 0, 0}, {2, 1, 0}, {3, 2, 1}})) == 0.0);
  for (int n = 1; n <= 4; ++n) {
    const Index dim = 9;
    const auto l = cumulative_matrix(n, dim);
    const Eigen::MatrixXcd inv = oracle::difference_power(n, dim).inverse();
    CHECK((l.eigen() - inv).cwiseAbs().maxCoeff() <= 1e-9);
    for (Index r = 0; r < dim; ++r) {
      for (Index c = 0; c <= r; ++c) CHECK(l(r, c).real() == oracle::binom(int(r - c) + n - 1, n - 1));
    }
  }
}

TEST_CASE("structured D L = I entrywise for dim up to 2048 and order up to 4") {
  for (int n = 1; n <= 4; ++n) {
    for (Index dim : {Index(n + 1), Index(64), Index(2048)}) {
      double worst = 0.0;
      const Index step = dim > 256 ? 97 : 1;
      for (Index k = 0; k < dim; k += step) {
        ComplexVector e = ComplexVector::Zero(dim);
        e[k] = 1.0;
        const auto col = apply_difference(n, solve_difference(n, e));
        const auto col2 = solve_difference(n, apply_difference(n, e));
        worst = std::max({worst, (col - e).cwiseAbs().maxCoeff(), (col2 - e).cwiseAbs().maxCoeff()});
      }
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("structured transforms agree with their dense counterparts and adjoints") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    const Index dim = 23;
    const auto d = difference_matrix(n, dim).eigen();
    const auto l = cumulative_matrix(n, dim).eigen();
    const auto v = oracle::random_vector(rng, dim);
    CHECK((apply_difference(n, v) - d * v).norm() <= 1e-12 * v.norm() * 10);
    CHECK((solve_difference(n, v) - l * v).norm() <= 1e-10 * (l * v).norm());
    CHECK((apply_difference_adjoint(n, v) - d.adjoint() * v).norm() <= 1e-11 * v.norm());
    CHECK((solve_difference_adjoint(n, v) - l.adjoint() * v).norm() <= 1e-10 * (l.adjoint() * v).norm());
  }
}

TEST_CASE("weighted vector norms") {
  const auto ctx = NormContext::delta_weighted(1, 60);
  const double n2 = std::pow(weighted_vector_norm(ctx, tent(10.0, 60)), 2);
  CHECK(n2 == doctest::Approx(42.0).epsilon(1e-14));

  ComplexVector e0 = ComplexVector::Zero(5);
  e0[0] = 1.0;
  CHECK(std::pow(weighted_vector_norm(NormContext::delta_weighted(1, 5), e0), 2) == doctest::Approx(2.0));
  // The last coefficient has no successor inside the truncation.
  ComplexVector e4 = ComplexVector::Zero(5);
  e4[4] = 1.0;
  CHECK(std::pow(weighted_vector_norm(NormContext::delta_weighted(1, 5), e4), 2) == doctest::Approx(1.0));

  CHECK(weighted_vector_norm(NormContext::euclidean(2), vec({3, 4})) == doctest::Approx(5.0));
  CHECK_THROWS_AS(weighted_vector_norm(NormContext::euclidean(3), vec({3, 4})), Error);
}

TEST_CASE("weighted norm is zero only for the zero vector") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 3; ++n) {
    const auto ctx = NormContext::delta_weighted(n, 12);
    CHECK(weighted_vector_norm(ctx, ComplexVector::Zero(12)) == 0.0);
    for (int trial = 0; trial < 20; ++trial) CHECK(weighted_vector_norm(ctx, oracle::random_vector(rng, 12)) > 0.0);
  }
}

TEST_CASE("complex matrix construction validates shape and entries") {
  CHECK_THROWS_AS(ComplexMatrix(0, 3), Error);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
  bad(1, 0) = C(std::nan(""), 0.0);
  CHECK_THROWS_AS(ComplexMatrix{bad}, Error);
  bad(1, 0) = C(0.0, INFINITY);
  CHECK_THROWS_AS(ComplexMatrix{bad}, Error);
}

TEST_CASE("operator norm of the identity is one in every context") {
  const auto id = ComplexMatrix::identity(9);
  CHECK(operator_norm(id, NormContext::euclidean(9), NormContext::euclidean(9)) == doctest::Approx(1.0).epsilon(1e-12));
  for (int n = 1; n <= 3; ++n) {
    const auto ctx = NormContext::delta_weighted(n, 9);
    CHECK(operator_norm(id, ctx, ctx) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("2x2 Jordan pair block norm is bracketed by its off-diagonal entry") {
  const double n = 10.0, t = 5.0;
  const C a = std::exp(C(0, t / n)), b = n * std::sin(t / n), d = std::exp(C(0, -t / n));
  const auto m = ComplexMatrix::from_rows({{a, b}, {0, d}});
  const double v = operator_norm(m, NormContext::euclidean(2), NormContext::euclidean(2));
  CHECK(v >= n * std::sin(t / n));
  CHECK(v <= n * std::sin(t / n) + 1.0);
  CHECK(v == doctest::Approx(oracle::norm_2x2(a, b, 0, d)).epsilon(1e-10));
}

TEST_CASE("closed-form 2x2 singular value matches the Gram eigenvalue oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const C a = oracle::random_point(rng, 5), b = oracle::random_point(rng, 50);
    const C c = trial % 2 ? C(0) : oracle::random_point(rng, 5), d = oracle::random_point(rng, 5);
    CHECK(singular_value_2x2(a, b, c, d) == doctest::Approx(oracle::norm_2x2(a, b, c, d)).epsilon(1e-12));
  }
}

TEST_CASE("log-spectrum diagonal in the weighted norm stays between 1 and 2t+1") {
  const Index dim = 200;
  const auto ctx = NormContext::delta_weighted(1, dim);
  for (const double t : {1.0, 5.0, 12.0, 25.0}) {
    ComplexMatrix m(dim, dim);
    for (Index k = 0; k < dim; ++k) m(k, k) = std::exp(C(0.0, t * std::log(double(k + 2))));
    const double v = operator_norm(m, ctx, ctx);
    CHECK(v >= 1.0);
    CHECK(v <= 2.0 * t + 1.0);
    CHECK(v == doctest::Approx(oracle::weighted_norm(m.eigen(), 1, 1)).epsilon(1e-9));
  }
}

TEST_CASE("property: norm of a matrix equals norm of its adjoint") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const Index r = 2 + Index(rng() % 40), c = 2 + Index(rng() % 40);
    const ComplexMatrix m(oracle::random_matrix(rng, r, c));
    const double a = operator_norm(m, NormContext::euclidean(c), NormContext::euclidean(r));
    const double b = operator_norm(m.adjoint(), NormContext::euclidean(r), NormContext::euclidean(c));
    CHECK(std::abs(a - b) <= 10 * kDefaultNormTol * a);
  }
}

TEST_CASE("property: operator norm is submultiplicative") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 2 + Index(rng() % 30);
    const int order = int(rng() % 3);
    const auto ctx = order ? NormContext::delta_weighted(order, n + order) : NormContext::euclidean(n);
    const Index dim = ctx.dim();
    const ComplexMatrix a(oracle::random_matrix(rng, dim, dim)), b(oracle::random_matrix(rng, dim, dim));
    const double ab = operator_norm(a * b, ctx, ctx);
    CHECK(ab <= operator_norm(a, ctx, ctx) * operator_norm(b, ctx, ctx) * (1 + 10 * kDefaultNormTol));
  }
}

TEST_CASE("property: power iteration matches the dense SVD") {
  std::mt19937_64 rng(303);
  const Index sizes[] = {2, 3, 8, 17, 40, 96, 200, 512};
  for (const Index n : sizes) {
    const ComplexMatrix m(oracle::random_matrix(rng, n, n));
    const auto map = as_linear_map(m);
    const auto est = largest_singular_value(map);
    const double dense = dense_largest_singular_value(map);
    CHECK(std::abs(est.value - dense) <= 10 * kDefaultNormTol * dense);
    CHECK(dense == doctest::Approx(oracle::spectral_norm(m.eigen())).epsilon(1e-12));
  }
}

TEST_CASE("property: weighted operator norm agrees with the dense oracle and bounds images") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int dom = 1 + int(rng() % 3), cod = int(rng() % 3);
    const Index dim = 6 + Index(rng() % 40);
    const ComplexMatrix m(oracle::random_matrix(rng, dim, dim));
    const auto dctx = NormContext::delta_weighted(dom, dim);
    const auto cctx = cod ? NormContext::delta_weighted(cod, dim) : NormContext::euclidean(dim);
    const double v = operator_norm(m, dctx, cctx);
    CHECK(v == doctest::Approx(oracle::weighted_norm(m.eigen(), dom, cod)).epsilon(1e-8));
    for (int k = 0; k < 10; ++k) {
      const auto x = oracle::random_vector(rng, dim);
      CHECK(weighted_vector_norm(cctx, m.apply(x)) <= v * weighted_vector_norm(dctx, x) * (1 + 10 * kDefaultNormTol));
    }
  }
}

TEST_CASE("power iteration reports non-convergence with its last estimate") {
  // Two nearly equal singular values slow the iteration down.
  const Index n = 600;
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = 1.0 - 1e-6 * double(i);
  const ComplexMatrix m(d);
  NormOptions opts;
  opts.method = NormMethod::Power;
  opts.max_iterations = 3;
  try {
    largest_singular_value(as_linear_map(m), opts);
    FAIL("expected ILL_CONDITIONED");
  } catch (const IllConditionedError& e) {
    CHECK(e.code() == ErrorCode::IllConditioned);
    CHECK(e.last_estimate() > 0.99);
    CHECK(e.last_estimate() <= 1.0 + 1e-12);
  }
  // Auto mode falls back to the dense SVD for small problems.
  const ComplexMatrix small(d.topLeftCorner(50, 50));
  opts.method = NormMethod::Auto;
  const auto est = largest_singular_value(as_linear_map(small), opts);
  CHECK(est.used_dense);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("operator norm is deterministic") {
  std::mt19937_64 rng(505);
  const ComplexMatrix m(oracle::random_matrix(rng, 64, 64));
  const auto ctx = NormContext::delta_weighted(2, 64);
  const double a = operator_norm(m, ctx, ctx), b = operator_norm(m, ctx, ctx);
  CHECK(a == b);
}

TEST_CASE("zero map has norm zero") {
  const ComplexMatrix z(5, 5);
  CHECK(operator_norm(z, NormContext::euclidean(5), NormContext::euclidean(5)) == 0.0);
}

TEST_CASE("block diagonal norm equals the dense norm") {
  std::mt19937_64 rng(606);
  std::vector<Block> blocks;
  Index start = 0;
  for (int k = 0; k < 30; ++k) {
    Block b;
    b.start = start;
    b.size = 1 + int(rng() % 2);
    for (auto& e : b.entries) e = oracle::random_point(rng, 3);
    if (b.size == 1) b.entries[1] = b.entries[2] = b.entries[3] = 0.0;
    start += b.size;
    blocks.push_back(b);
  }
  const BlockDiagonalMatrix m(blocks);
  const auto ctx = NormContext::euclidean(m.dim());
  const double exact = operator_norm(m, ctx, ctx, {});
  CHECK(exact == doctest::Approx(oracle::spectral_norm(m.dense().eigen())).epsilon(1e-12));
  NormOptions dense;
  dense.method = NormMethod::Dense;
  CHECK(operator_norm(m, ctx, ctx, dense) == doctest::Approx(exact).epsilon(1e-12));
  const auto wctx = NormContext::delta_weighted(1, m.dim());
  CHECK(operator_norm(m, wctx, wctx, {}) ==
        doctest::Approx(oracle::weighted_norm(m.dense().eigen(), 1, 1)).epsilon(1e-8));
}
