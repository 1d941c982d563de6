#include <random>

#include "doctest.h"
#include "dpp/point_process.hpp"
#include "test_util.hpp"

using namespace dpp;
using namespace dpp::testing;

namespace {

LEnsemble<Rational> random_lensemble(std::mt19937_64& rng, int n, bool with_window) {
  for (;;) {
    Matrix<Rational> l = random_rational_matrix(rng, n, n);
    std::optional<Config> window;
    if (with_window) {
      std::uniform_int_distribution<std::uint64_t> dist(0, full_config(n).mask);
      window = Config{dist(rng)};
    }
    try {
      return LEnsemble<Rational>(GroundSet::of_size(n), std::move(l), window);
    } catch (const SingularMatrixError&) {
    }
  }
}

PfLEnsemble<Rational> random_pf_lensemble(std::mt19937_64& rng, int n, bool with_window) {
  for (;;) {
    auto l = random_rational_skew(rng, 2 * n);
    std::optional<Config> window;
    if (with_window) {
      std::uniform_int_distribution<std::uint64_t> dist(0, full_config(n).mask);
      window = Config{dist(rng)};
    }
    try {
      return PfLEnsemble<Rational>(GroundSet::of_size(n), std::move(l), window);
    } catch (const SingularMatrixError&) {
    }
  }
}

}  // namespace

TEST_CASE("lensemble_prob: identity L on two points") {
  LEnsemble<Rational> e(GroundSet::of_size(2), Matrix<Rational>::identity(2));
  CHECK(e.normalization() == Rational(4));
  CHECK(lensemble_prob(e, Config{0b01}) == Rational(1, 4));
  CHECK(lensemble_prob(e, Config{0}) == Rational(1, 4));  // 1/det(I+L)
  CHECK(lensemble_prob(e, Config{0b11}) == Rational(1, 4));
}

TEST_CASE("lensemble_prob: support condition under a window") {
  Matrix<Rational> l = Matrix<Rational>::identity(3);
  LEnsemble<Rational> e(GroundSet::of_size(3), l, Config{0b011});
  // configs not containing the window complement {2} have probability 0
  CHECK(lensemble_prob(e, Config{0b001}) == Rational(0));
  Rational total(0);
  for (std::uint64_t m = 0; m < 8; ++m) total += lensemble_prob(e, Config{m});
  CHECK(total == Rational(1));
}

TEST_CASE("lensemble probabilities sum to one") {
  std::mt19937_64 rng(201);
  for (int t = 0; t < 5; ++t) {
    auto e = random_lensemble(rng, 5, t % 2 == 1);
    Rational total(0);
    for (std::uint64_t m = 0; m < 32; ++m) total += lensemble_prob(e, Config{m});
    CHECK(total == Rational(1));
  }
}

TEST_CASE("lensemble_kernel: identity L gives K = I/2, L = 0 gives empty process") {
  LEnsemble<Rational> e(GroundSet::of_size(2), Matrix<Rational>::identity(2));
  auto k = lensemble_kernel(e);
  CHECK(k.k == Matrix<Rational>::identity(2) * Rational(1, 2));

  LEnsemble<Rational> zero(GroundSet::of_size(2), Matrix<Rational>(2, 2));
  CHECK(lensemble_kernel(zero).k == Matrix<Rational>(2, 2));
}

TEST_CASE("lensemble_kernel: Prop 1.1 and Prop 1.2 agree without a window") {
  std::mt19937_64 rng(202);
  for (int t = 0; t < 5; ++t) {
    auto e = random_lensemble(rng, 4, false);
    auto k = lensemble_kernel(e);
    Matrix<Rational> alt = e.l() * inverse(e.window_matrix());
    CHECK(k.k == alt);
  }
}

TEST_CASE("lensemble_kernel: minors equal enumerated correlations, all windows") {
  std::mt19937_64 rng(203);
  for (int t = 0; t < 6; ++t) {
    auto e = random_lensemble(rng, 5, t >= 3);
    auto rho = brute_force_correlations(lensemble_table(e));
    auto k = lensemble_kernel(e);
    const SubsetIndex w = e.window().indices();
    const int wn = static_cast<int>(w.size());
    for (std::uint64_t sub = 0; sub < (std::uint64_t(1) << wn); ++sub) {
      Config y_window{sub};  // subset in window coordinates
      Config y_global{0};
      for (int b = 0; b < wn; ++b)
        if (y_window.contains(b)) y_global = y_global.with(w[b]);
      CHECK(kernel_correlation(k, y_window) == rho[y_global.mask]);
    }
  }
}

TEST_CASE("kernel gauge freedom: diagonal conjugation preserves minors") {
  std::mt19937_64 rng(204);
  auto e = random_lensemble(rng, 4, false);
  auto k = lensemble_kernel(e);
  Matrix<Rational> d = Matrix<Rational>::identity(4);
  for (int i = 0; i < 4; ++i) {
    Rational v = random_rational(rng);
    d(i, i) = scalar_traits<Rational>::is_zero(v) ? Rational(1) : v;
  }
  Matrix<Rational> conj = d * k.k * inverse(d);
  for (std::uint64_t m = 0; m < 16; ++m) {
    Config y{m};
    CHECK(principal_minor(conj, y.indices()) == kernel_correlation(k, y));
  }
}

TEST_CASE("pf_lensemble: L = 0 is the empty process, kernel vanishes") {
  GroundSet g = GroundSet::of_size(2);
  PfLEnsemble<Rational> e(g, SkewMatrix<Rational>::from_upper(4, std::vector<Rational>(6, Rational(0))));
  CHECK(e.normalization() == Rational(1));  // pf J = 1
  CHECK(pf_lensemble_prob(e, Config{0}) == Rational(1));
  CHECK(pf_lensemble_prob(e, Config{0b01}) == Rational(0));
  auto k = pf_lensemble_kernel(e);
  CHECK(k.k.matrix() == Matrix<Rational>(4, 4));  // J + J^{-1} = 0
}

TEST_CASE("pf_lensemble: one point with L(x',x'') = a") {
  Rational a(3, 5);
  auto l = SkewMatrix<Rational>::from_upper(2, {a});
  PfLEnsemble<Rational> e(GroundSet::of_size(1), l);
  CHECK(pf_lensemble_prob(e, Config{1}) == a / (1 + a));
  CHECK(pf_lensemble_prob(e, Config{0}) == 1 / (1 + a));
  auto k = pf_lensemble_kernel(e);
  CHECK(kernel_correlation(k, Config{1}) == a / (1 + a));
  // one-point correlation reads off the (1,2) block entry
  CHECK(k.k(0, 1) == a / (1 + a));
}

TEST_CASE("pf_lensemble probabilities sum to one") {
  std::mt19937_64 rng(205);
  for (int t = 0; t < 5; ++t) {
    auto e = random_pf_lensemble(rng, 3, t % 2 == 1);
    Rational total(0);
    for (std::uint64_t m = 0; m < 8; ++m) total += pf_lensemble_prob(e, Config{m});
    CHECK(total == Rational(1));
  }
}

TEST_CASE("pf_lensemble_kernel: pf minors equal enumerated correlations") {
  std::mt19937_64 rng(206);
  for (int t = 0; t < 6; ++t) {
    auto e = random_pf_lensemble(rng, 4, t >= 3);
    auto rho = brute_force_correlations(pf_lensemble_table(e));
    auto k = pf_lensemble_kernel(e);
    const SubsetIndex w = e.window().indices();
    const int wn = static_cast<int>(w.size());
    for (std::uint64_t sub = 0; sub < (std::uint64_t(1) << wn); ++sub) {
      Config y_window{sub};
      Config y_global{0};
      for (int b = 0; b < wn; ++b)
        if (y_window.contains(b)) y_global = y_global.with(w[b]);
      CHECK(kernel_correlation(k, y_window) == rho[y_global.mask]);
    }
  }
}

TEST_CASE("brute_force_correlations: point mass and uniform") {
  GroundSet g = GroundSet::of_size(2);
  ProbTable<Rational> point{g, {Rational(0), Rational(0), Rational(0), Rational(1)}};
  auto rho = brute_force_correlations(point);
  for (std::uint64_t m = 0; m < 4; ++m) CHECK(rho[m] == Rational(1));

  ProbTable<Rational> uniform{g, std::vector<Rational>(4, Rational(1, 4))};
  rho = brute_force_correlations(uniform);
  CHECK(rho[0] == Rational(1));
  CHECK(rho[0b01] == Rational(1, 2));
  CHECK(rho[0b10] == Rational(1, 2));
  CHECK(rho[0b11] == Rational(1, 4));
}

TEST_CASE("brute_force_correlations: L-ensemble identity example") {
  LEnsemble<Rational> e(GroundSet::of_size(2), Matrix<Rational>::identity(2));
  auto rho = brute_force_correlations(lensemble_table(e));
  CHECK(rho[0b11] == Rational(1, 4));
  auto k = lensemble_kernel(e);
  CHECK(kernel_correlation(k, Config{0b11}) == Rational(1, 4));
}

TEST_CASE("enumerate_sample: point mass, determinism, negative rejection") {
  GroundSet g = GroundSet::of_size(2);
  ProbTable<Rational> point{g, {Rational(0), Rational(0), Rational(1), Rational(0)}};
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) CHECK(enumerate_sample(point, seed) == Config{2});

  ProbTable<Rational> bad{g, {Rational(1, 2), Rational(1), Rational(-1, 2), Rational(0)}};
  CHECK_THROWS_AS((void)enumerate_sample(bad, 0), std::domain_error);

  ProbTable<Rational> uniform2{g, {Rational(1, 2), Rational(0), Rational(0), Rational(1, 2)}};
  CHECK(enumerate_sample(uniform2, 7) == enumerate_sample(uniform2, 7));
}

TEST_CASE("enumerate_sample: binomial frequency within 5 sigma") {
  GroundSet g = GroundSet::of_size(2);
  ProbTable<Rational> uniform2{g, {Rational(1, 2), Rational(0), Rational(0), Rational(1, 2)}};
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    if (enumerate_sample(uniform2, seed) == Config{0}) ++hits;
  CHECK(std::abs(hits - 500) <= 79);  // 5 * sqrt(1000/4)

  LEnsemble<Rational> e(GroundSet::of_size(2), Matrix<Rational>::identity(2));
  auto table = lensemble_table(e);
  int occupied = 0;
  const int draws = 10000;
  for (std::uint64_t seed = 0; seed < draws; ++seed)
    if (enumerate_sample(table, seed).contains(0)) ++occupied;
  CHECK(std::abs(occupied - 5000) <= 250);  // 5 * sqrt(10^4/4)
}
