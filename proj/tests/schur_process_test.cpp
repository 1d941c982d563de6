#include <cmath>
#include <random>

#include "doctest.h"
#include "dpp/schur_process.hpp"
#include "test_util.hpp"

using namespace dpp;
using namespace dpp::testing;

namespace {

SchurSpec<Rational> rational_spec_T2(Rational x0, Rational y1, Rational x1, Rational y2, bool pf_mode = false) {
  SchurSpec<Rational> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<Rational>{{x0}}, Specialization<Rational>{{x1}}};
  spec.rho_minus = {Specialization<Rational>{{y1}}, Specialization<Rational>{{y2}}};
  spec.pfaffian_mode = pf_mode;
  return spec;
}

SchurSpec<double> double_spec_T1(double x, double y, bool pf_mode = false) {
  SchurSpec<double> spec;
  spec.t = 1;
  spec.rho_plus = {Specialization<double>{{x}}};
  spec.rho_minus = {Specialization<double>{{y}}};
  spec.pfaffian_mode = pf_mode;
  return spec;
}

// Literal sum over interlacing sequences with explicit mu links; independent
// of the chain contraction inside SchurEnumerator.
template <class S>
S direct_mass(const SchurSpec<S>& spec, int cutoff, const std::vector<SpacePoint>& points) {
  const auto shapes = partitions_up_to(cutoff);
  S total = scalar_traits<S>::zero();
  std::vector<int> idx(spec.t, 0);
  for (;;) {
    PartitionSequence<S> seq;
    for (int i = 0; i < spec.t; ++i) seq.lambdas.push_back(shapes[idx[i]]);
    bool ok = true;
    for (const SpacePoint& p : points)
      if (!occupies(seq.lambdas[p.level - 1], p.position)) { ok = false; break; }
    if (ok) {
      // sum over all mu links
      S mass = spec.pfaffian_mode ? tau_direct(seq.lambdas[0], spec.rho_plus[0]) : schur(seq.lambdas[0], spec.rho_plus[0]);
      for (int i = 1; i < spec.t; ++i) {
        S link = scalar_traits<S>::zero();
        for (const Partition& mu : subdiagrams(seq.lambdas[i - 1])) {
          if (!seq.lambdas[i].contains(mu)) continue;
          link += skew_schur(seq.lambdas[i - 1], mu, spec.rho_minus[i - 1]) *
                  skew_schur(seq.lambdas[i], mu, spec.rho_plus[i]);
        }
        mass *= link;
      }
      mass *= schur(seq.lambdas[spec.t - 1], spec.rho_minus[spec.t - 1]);
      total += mass;
    }
    int c = spec.t - 1;
    while (c >= 0 && ++idx[c] == static_cast<int>(shapes.size())) idx[c--] = 0;
    if (c < 0) break;
  }
  return total;
}

}  // namespace

TEST_CASE("weight: empty sequence, one-row closed form, factor product") {
  SchurSpec<Rational> spec = rational_spec_T2(Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5));
  PartitionSequence<Rational> empty_seq;
  empty_seq.lambdas = {Partition::empty(), Partition::empty()};
  empty_seq.mus = {Partition::empty()};
  CHECK(weight(spec, empty_seq) == Rational(1));

  SchurSpec<Rational> one;
  one.t = 1;
  Rational x(1, 2), y(1, 3);
  one.rho_plus = {Specialization<Rational>{{x}}};
  one.rho_minus = {Specialization<Rational>{{y}}};
  for (int r = 1; r <= 4; ++r) {
    PartitionSequence<Rational> seq;
    seq.lambdas = {Partition({r})};
    CHECK(weight(one, seq) == rational_pow(x * y, r));
  }

  PartitionSequence<Rational> seq;
  seq.lambdas = {Partition({2, 1}), Partition({1, 1})};
  seq.mus = {Partition({1})};
  Rational expect = schur(seq.lambdas[0], spec.rho_plus[0]) *
                    skew_schur(seq.lambdas[0], seq.mus[0], spec.rho_minus[0]) *
                    skew_schur(seq.lambdas[1], seq.mus[0], spec.rho_plus[1]) *
                    schur(seq.lambdas[1], spec.rho_minus[1]);
  CHECK(weight(spec, seq) == expect);

  // non-interlacing vanishes
  PartitionSequence<Rational> bad;
  bad.lambdas = {Partition({1}), Partition({1})};
  bad.mus = {Partition({2})};
  CHECK(weight(spec, bad) == Rational(0));
}

TEST_CASE("config_of: staircases and window errors") {
  PartitionSequence<Rational> seq;
  seq.lambdas = {Partition::empty()};
  Config c = config_of(seq, -3, 2);  // staircase at -1,-2,-3
  CHECK(c.contains(0));
  CHECK(c.contains(1));
  CHECK(c.contains(2));
  CHECK_FALSE(c.contains(3));

  seq.lambdas = {Partition({2})};  // points at 1, then staircase from -2
  c = config_of(seq, -3, 2);
  CHECK(c.contains(4));            // u = 1
  CHECK_FALSE(c.contains(3));      // u = 0
  CHECK_FALSE(c.contains(2));      // u = -1 vacated
  CHECK(c.contains(1));            // u = -2
  CHECK(c.contains(0));            // u = -3

  seq.lambdas = {Partition({3, 1})};  // points at 2, -1, then staircase -3, -4, ...
  c = config_of(seq, -4, 3);
  CHECK(c.contains(6));   // u = 2
  CHECK(c.contains(3));   // u = -1
  CHECK(c.contains(1));   // u = -3
  CHECK(c.contains(0));   // u = -4
  CHECK_FALSE(c.contains(2));  // u = -2
  CHECK_FALSE(c.contains(4));  // u = 0

  CHECK_THROWS_AS((void)config_of(seq, -4, 1), std::invalid_argument);   // top point escapes
  CHECK_THROWS_AS((void)config_of(seq, 0, 3), std::invalid_argument);    // positive part below u_min
}

TEST_CASE("SchurEnumerator: chain contraction equals the literal tuple sum") {
  auto spec = rational_spec_T2(Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5));
  SchurEnumerator<Rational> en(spec, 4);
  CHECK(en.total_mass() == direct_mass(spec, 4, {}));
  CHECK(en.mass_containing({{1, 0}}) == direct_mass(spec, 4, {{1, 0}}));
  CHECK(en.mass_containing({{1, 0}, {2, -2}}) == direct_mass(spec, 4, {{1, 0}, {2, -2}}));

  auto pf_spec = rational_spec_T2(Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5), true);
  SchurEnumerator<Rational> pf_en(pf_spec, 4);
  CHECK(pf_en.total_mass() == direct_mass(pf_spec, 4, {}));
  CHECK(pf_en.mass_containing({{2, 1}}) == direct_mass(pf_spec, 4, {{2, 1}}));
}

TEST_CASE("partition function convergence with rigorous tails (both modes)") {
  for (bool pf_mode : {false, true}) {
    auto spec = rational_spec_T2(Rational(1, 2), Rational(1, 3), Rational(1, 2), Rational(1, 4), pf_mode);
    const Rational z = spec_partition_function(spec);
    SchurEnumerator<Rational> en(spec, 12);
    Rational prev(0);
    for (int cutoff : {8, 10, 12}) {
      const Rational partial = en.mass_with_size_cap(cutoff);
      CHECK(partial > prev);        // monotone approach
      CHECK(partial < z);
      CHECK(z - partial <= enumeration_tail_bound(spec, cutoff));
      prev = partial;
    }
  }
}

TEST_CASE("contour_integrate: residue sanity") {
  ContourConfig cc;
  auto inv_zw = [](Complex z, Complex w) { return Complex(1.0, 0.0) / (z * w); };
  auto r = contour_integrate(inv_zw, 1.0, 1.0, cc);
  CHECK(std::abs(r.value - Complex(1.0, 0.0)) < 1e-12);

  // z^{-1} w^{-1} / (1 - zw/4): only the constant term of the geometric series survives
  auto geo = [](Complex z, Complex w) {
    return Complex(1.0, 0.0) / (z * w * (Complex(1.0, 0.0) - z * w / 4.0));
  };
  r = contour_integrate(geo, 0.9, 0.9, cc);
  CHECK(std::abs(r.value - Complex(1.0, 0.0)) < 1e-11);

  auto entire = [](Complex z, Complex w) { return std::exp(z) * (w * w + 3.0); };
  r = contour_integrate(entire, 1.3, 0.7, cc);
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("laurent_coefficient: geometric series coefficients") {
  ContourConfig cc;
  const double x = 0.4;
  auto f = [&](Complex z) { return Complex(1.0, 0.0) / (Complex(1.0, 0.0) - x * z); };
  for (long m = 0; m <= 5; ++m) {
    auto r = laurent_coefficient(f, m, 1.0, cc);
    CHECK(std::abs(r.value - std::pow(x, m)) < 1e-12);
  }
  CHECK(std::abs(laurent_coefficient(f, -1, 1.0, cc).value) < 1e-12);
}

TEST_CASE("toeplitz_W: identity, one-sided geometric, quadrature oracle") {
  Specialization<double> none;
  Matrix<double> w = toeplitz_W(none, none, -2, 2);
  CHECK(w == Matrix<double>::identity(5));

  Specialization<double> xs{{0.5}};
  w = toeplitz_W(xs, none, -2, 2);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) CHECK(w(a, b) == doctest::Approx(a >= b ? std::pow(0.5, a - b) : 0.0).epsilon(1e-12));

  Specialization<double> ys{{0.3}};
  w = toeplitz_W(xs, ys, -3, 3);
  ContourConfig cc;
  auto symbol = [&](Complex z) {
    return Complex(1.0, 0.0) / ((Complex(1.0, 0.0) - 0.5 * z) * (Complex(1.0, 0.0) - 0.3 / z));
  };
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      auto r = laurent_coefficient(symbol, a - b, 1.0, cc);
      CHECK(std::abs(w(a, b) - r.value) < 1e-10);
    }
  }
}

TEST_CASE("epsilon_toeplitz: empty case, skewness, quadrature oracle") {
  Specialization<double> none;
  auto eps = epsilon_toeplitz(none, -2, 2);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) CHECK(eps(a, b) == doctest::Approx((a == b + 1 ? 1.0 : 0.0) - (b == a + 1 ? 1.0 : 0.0)));

  Specialization<double> rho{{0.5, 0.25}};
  auto eps2 = epsilon_toeplitz(rho, -3, 3);  // construction enforces exact skewness
  ContourConfig cc;
  auto symbol = [&](Complex z) {
    Complex h1(1.0, 0.0), h2(1.0, 0.0);
    for (double x : rho.vars) {
      h1 /= Complex(1.0, 0.0) - x * z;
      h2 /= Complex(1.0, 0.0) - x / z;
    }
    return (z - Complex(1.0, 0.0) / z) * h1 * h2;
  };
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      auto r = laurent_coefficient(symbol, a - b, 1.0, cc);
      CHECK(std::abs(eps2(a, b) - r.value) < 1e-10);
    }
  }
}

TEST_CASE("schur_kernel: bare staircase kernel for empty specializations") {
  SchurSpec<double> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<double>{}, Specialization<double>{}};
  spec.rho_minus = {Specialization<double>{}, Specialization<double>{}};
  for (long u : {-3L, -1L, 0L, 2L}) {
    for (long v : {-3L, -1L, 0L, 2L}) {
      const double expect_le = (u == v && u <= -1) ? 1.0 : 0.0;  // i <= j
      const double expect_gt = (u == v && u >= 0) ? -1.0 : 0.0;  // i > j
      CHECK(std::abs(schur_kernel(spec, 1, u, 2, v) - expect_le) < 1e-9);
      CHECK(std::abs(schur_kernel(spec, 1, u, 1, v) - expect_le) < 1e-9);
      CHECK(std::abs(schur_kernel(spec, 2, u, 1, v) - expect_gt) < 1e-9);
    }
  }
}

TEST_CASE("schur_kernel: one-row process, rho(1,0) = 3/16 at x = y = 1/2") {
  auto spec = double_spec_T1(0.5, 0.5);
  const Complex k00 = schur_kernel(spec, 1, 0, 1, 0);
  CHECK(std::abs(k00 - Complex(3.0 / 16.0, 0.0)) < 1e-8);

  SchurEnumerator<double> en(spec, 18);
  for (long u : {-2L, -1L, 0L, 1L, 2L}) {
    auto oracle = brute_correlations(en, {{1, u}});
    const Complex k = schur_kernel(spec, 1, u, 1, u);
    CHECK(std::abs(k.real() - oracle.value) <= 1e-8 + oracle.tail);
    CHECK(std::abs(k.imag()) < 1e-9);
  }
}

TEST_CASE("schur_kernel: two-point determinant against the enumeration oracle") {
  SchurSpec<double> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<double>{{0.5}}, Specialization<double>{{0.4}}};
  spec.rho_minus = {Specialization<double>{{0.3}}, Specialization<double>{{0.5}}};
  SchurEnumerator<double> en(spec, 14);
  const std::vector<std::vector<SpacePoint>> cases = {
      {{1, 0}}, {{2, 0}}, {{2, 1}}, {{1, 0}, {2, 0}}, {{1, -1}, {2, 1}}, {{1, 1}, {1, -2}}};
  for (const auto& pts : cases) {
    auto oracle = brute_correlations(en, pts);
    const Complex d = schur_kernel_det(spec, pts);
    CHECK(std::abs(d.real() - oracle.value) <= 1e-6 + oracle.tail);
    CHECK(std::abs(d.imag()) < 1e-8);
  }
}

TEST_CASE("schur_kernel: radius-case difference is the interval Toeplitz entry") {
  SchurSpec<double> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<double>{{0.45}}, Specialization<double>{{0.35}}};
  spec.rho_minus = {Specialization<double>{{0.25}}, Specialization<double>{{0.4}}};
  auto [outer_r, _] = schur_contour_radii(spec, 1, 2);
  auto [inner_r, __] = schur_contour_radii(spec, 2, 1);
  Matrix<double> w12 = toeplitz_interval_W(spec, 1, 2, -3, 3);
  for (long u = -3; u <= 3; ++u) {
    for (long v = -3; v <= 3; ++v) {
      ContourConfig inner_cc;
      inner_cc.r_z = inner_cc.r_w = inner_r;
      const Complex outer_val = schur_kernel(spec, 1, u, 2, v);  // default: i <= j outer
      const Complex inner_val = schur_kernel(spec, 1, u, 2, v, inner_cc);
      const double entry = w12(static_cast<int>(u + 3), static_cast<int>(v + 3));
      CHECK(std::abs((inner_val - outer_val) - Complex(-entry, 0.0)) < 1e-8);
    }
  }
}

TEST_CASE("pf_schur_kernel: diagonal block vanishes and one-point matches the tau oracle") {
  SchurSpec<double> spec;
  spec.t = 1;
  spec.rho_plus = {Specialization<double>{{0.3}}};
  spec.rho_minus = {Specialization<double>{{0.4}}};
  spec.pfaffian_mode = true;

  const PfKernelBlock blk = pf_schur_kernel(spec, 1, 0, 1, 0);
  CHECK(std::abs(blk.k11) < 1e-10);
  CHECK(std::abs(blk.k22) < 1e-10);
  CHECK(std::abs(blk.k21 + blk.k12) < 1e-10);

  SchurEnumerator<double> en(spec, 16);
  for (long u : {-2L, -1L, 0L, 1L}) {
    auto oracle = brute_correlations(en, {{1, u}});
    const Complex one_pt = pf_schur_kernel(spec, 1, u, 1, u).k12;
    CHECK(std::abs(one_pt.real() - oracle.value) <= 1e-6 + oracle.tail);
    CHECK(std::abs(one_pt.imag()) < 1e-8);
  }
}

TEST_CASE("pf_schur_kernel: two-point pfaffian against the oracle, skew defect small") {
  SchurSpec<double> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<double>{{0.4}}, Specialization<double>{{0.3}}};
  spec.rho_minus = {Specialization<double>{{0.25}}, Specialization<double>{{0.35}}};
  spec.pfaffian_mode = true;
  SchurEnumerator<double> en(spec, 12);
  const std::vector<std::vector<SpacePoint>> cases = {{{1, 0}, {2, 0}}, {{1, -1}, {2, 1}}};
  for (const auto& pts : cases) {
    auto oracle = brute_correlations(en, pts);
    Matrix<Complex> m = pf_schur_kernel_matrix(spec, pts);
    CHECK(max_skew_defect(m) < 1e-9);
    const Complex p = pf_schur_correlation(spec, pts);
    CHECK(std::abs(p.real() - oracle.value) <= 1e-5 + oracle.tail);
  }
}

TEST_CASE("pf_schur_kernel: K12 |zw| branch difference equals the Toeplitz residue term") {
  SchurSpec<double> spec;
  spec.t = 2;
  spec.rho_plus = {Specialization<double>{{0.4}}, Specialization<double>{{0.3}}};
  spec.rho_minus = {Specialization<double>{{0.25}}, Specialization<double>{{0.35}}};
  spec.pfaffian_mode = true;
  Matrix<double> v12 = toeplitz_interval_W(spec, 1, 2, -2, 2);
  for (long u = -2; u <= 2; ++u) {
    for (long v = -2; v <= 2; ++v) {
      const Complex lt = pf_schur_k12(spec, 1, u, 2, v, false);  // case rule for i < j
      const Complex ge = pf_schur_k12(spec, 1, u, 2, v, true);
      const double entry = v12(static_cast<int>(u + 2), static_cast<int>(v + 2));
      CHECK(std::abs((ge - lt) - Complex(entry, 0.0)) < 1e-8);
    }
  }
}
