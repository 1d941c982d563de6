#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dpp/partitions.hpp"
#include "dpp/point_process.hpp"
#include "dpp/symfunc.hpp"

namespace dpp {

// Interlacing sequence weights: rho_plus holds rho_0^+ .. rho_{T-1}^+,
// rho_minus holds rho_1^- .. rho_T^-.  In pfaffian_mode the left factor is
// tau instead of a straight Schur function.
template <class S>
struct SchurSpec {
  int t = 0;
  std::vector<Specialization<S>> rho_plus;
  std::vector<Specialization<S>> rho_minus;
  bool pfaffian_mode = false;

  void validate() const {
    if (t < 1) throw std::invalid_argument("SchurSpec: need at least one level");
    if (static_cast<int>(rho_plus.size()) != t || static_cast<int>(rho_minus.size()) != t)
      throw std::invalid_argument("SchurSpec: need T plus- and T minus-specializations");
  }

  // rho^+_{[lo,hi)} as a variable union; indices follow the paper's labels.
  Specialization<S> plus_union(int lo, int hi) const {
    Specialization<S> out;
    for (int i = lo; i < hi; ++i)
      if (i >= 0 && i < t) out = union_spec(out, rho_plus[i]);
    return out;
  }

  // rho^-_{[lo,hi]} with 1-based labels rho_1^- .. rho_T^-.
  Specialization<S> minus_union(int lo, int hi) const {
    Specialization<S> out;
    for (int j = lo; j <= hi; ++j)
      if (j >= 1 && j <= t) out = union_spec(out, rho_minus[j - 1]);
    return out;
  }

  double rho_max() const {
    double m = 0.0;
    for (const auto& r : rho_plus)
      for (const auto& x : r.vars) m = std::max(m, scalar_traits<S>::magnitude(x));
    for (const auto& r : rho_minus)
      for (const auto& x : r.vars) m = std::max(m, scalar_traits<S>::magnitude(x));
    return m;
  }
};

template <class S>
struct PartitionSequence {
  std::vector<Partition> lambdas;  // lambda^(1) .. lambda^(T)
  std::vector<Partition> mus;      // mu^(1) .. mu^(T-1)
};

template <class S>
bool interlacing(const PartitionSequence<S>& seq) {
  const int t = static_cast<int>(seq.lambdas.size());
  if (static_cast<int>(seq.mus.size()) != t - 1) return false;
  for (int i = 0; i + 1 < t; ++i) {
    if (!seq.lambdas[i].contains(seq.mus[i])) return false;
    if (!seq.lambdas[i + 1].contains(seq.mus[i])) return false;
  }
  return true;
}

// Weight of one interlacing sequence (2T factors); zero when containment fails.
template <class S>
S weight(const SchurSpec<S>& spec, const PartitionSequence<S>& seq) {
  spec.validate();
  if (static_cast<int>(seq.lambdas.size()) != spec.t || static_cast<int>(seq.mus.size()) != spec.t - 1)
    throw std::invalid_argument("weight: sequence shape does not match T");
  if (!interlacing(seq)) return scalar_traits<S>::zero();
  S w = spec.pfaffian_mode ? tau_direct(seq.lambdas[0], spec.rho_plus[0]) : schur(seq.lambdas[0], spec.rho_plus[0]);
  for (int i = 1; i < spec.t; ++i) {
    w *= skew_schur(seq.lambdas[i - 1], seq.mus[i - 1], spec.rho_minus[i - 1]);
    w *= skew_schur(seq.lambdas[i], seq.mus[i - 1], spec.rho_plus[i]);
  }
  w *= skew_schur(seq.lambdas[spec.t - 1], Partition::empty(), spec.rho_minus[spec.t - 1]);
  return w;
}

struct SpacePoint {
  int level;     // 1-based
  long position; // u in Z
};

// Occupancy of (level, u) by the point configuration {lambda_j - j}:
// explicit rows first, frozen staircase u = -j past the last row.
inline bool occupies(const Partition& la, long u) {
  if (u < -static_cast<long>(la.length())) return true;
  for (int j = 1; j <= la.length(); ++j)
    if (la.shifted(j) == u) return true;
  return false;
}

// Bitmask over {1..T} x [u_min, u_max], level-major.
template <class S>
Config config_of(const PartitionSequence<S>& seq, long u_min, long u_max) {
  if (u_min > u_max) throw std::invalid_argument("config_of: empty window");
  const int width = static_cast<int>(u_max - u_min + 1);
  const int t = static_cast<int>(seq.lambdas.size());
  if (width * t > 64) throw std::invalid_argument("config_of: window too wide for a 64-bit mask");
  Config c{0};
  for (int i = 0; i < t; ++i) {
    const Partition& la = seq.lambdas[i];
    if (la.length() > 0 && la.shifted(1) > u_max)
      throw std::invalid_argument("config_of: point above the window at level " + std::to_string(i + 1));
    for (int j = 1; j <= la.length(); ++j) {
      if (la.part(j - 1) > 0 && la.shifted(j) < u_min)
        throw std::invalid_argument("config_of: occupied point below u_min at level " + std::to_string(i + 1));
    }
    for (long u = u_min; u <= u_max; ++u)
      if (occupies(la, u)) c = c.with(i * width + static_cast<int>(u - u_min));
  }
  return c;
}

namespace detail {

// s_{la/mu} over p variables vanishes unless every column of the skew shape
// has at most p cells; cheap pre-filter before the Jacobi-Trudi determinant.
inline bool skew_column_bound(const Partition& la, const Partition& mu, int p) {
  if (!la.contains(mu)) return false;
  const Partition lc = la.conjugate(), mc = mu.conjugate();
  for (int c = 0; c < lc.length(); ++c)
    if (lc.part(c) - mc.part(c) > p) return false;
  return true;
}

inline bool detail_nonneg(const Rational& x) { return sgn(x) >= 0; }
inline bool detail_nonneg(double x) { return x >= 0.0; }

template <class S>
bool all_nonnegative(const SchurSpec<S>& spec) {
  auto ok = [](const Specialization<S>& r) {
    for (const auto& x : r.vars)
      if (!detail_nonneg(x)) return false;
    return true;
  };
  for (const auto& r : spec.rho_plus)
    if (!ok(r)) return false;
  for (const auto& r : spec.rho_minus)
    if (!ok(r)) return false;
  return true;
}

}  // namespace detail

// Exhaustive machinery over all sequences with every |lambda^(i)| <= cutoff.
// mu links are marginalized into per-edge sums, so masses over lambda-tuples
// contract as a vector chain.
template <class S>
class SchurEnumerator {
 public:
  SchurEnumerator(SchurSpec<S> spec, int cutoff) : spec_(std::move(spec)), cutoff_(cutoff) {
    spec_.validate();
    shapes_ = partitions_up_to(cutoff);
    const int count = static_cast<int>(shapes_.size());
    left_.resize(count);
    right_.resize(count);
    for (int s = 0; s < count; ++s) {
      left_[s] = spec_.pfaffian_mode ? tau_direct(shapes_[s], spec_.rho_plus[0]) : schur(shapes_[s], spec_.rho_plus[0]);
      right_[s] = schur(shapes_[s], spec_.rho_minus[spec_.t - 1]);
    }
    shape_index_ = [&] {
      std::map<std::vector<int>, int> m;
      for (int s = 0; s < count; ++s) m[shapes_[s].parts()] = s;
      return m;
    }();
    edges_.resize(spec_.t - 1);
    for (int e = 0; e + 1 < spec_.t; ++e) edges_[e] = build_edge(spec_.rho_minus[e], spec_.rho_plus[e + 1]);
  }

  const std::vector<Partition>& shapes() const { return shapes_; }
  int cutoff() const { return cutoff_; }
  const SchurSpec<S>& spec() const { return spec_; }

  // Total weight mass of sequences with every |lambda^(i)| <= size_cap.
  S mass_with_size_cap(int size_cap) const {
    std::vector<char> keep(shapes_.size());
    for (std::size_t s = 0; s < shapes_.size(); ++s) keep[s] = shapes_[s].size() <= size_cap;
    return chain_mass({}, keep);
  }

  S total_mass() const { return mass_with_size_cap(cutoff_); }

  // Unnormalized mass of sequences whose configuration contains all points.
  S mass_containing(const std::vector<SpacePoint>& points) const {
    std::vector<std::vector<long>> per_level(spec_.t);
    for (const SpacePoint& p : points) {
      if (p.level < 1 || p.level > spec_.t) throw std::invalid_argument("mass_containing: level out of range");
      per_level[p.level - 1].push_back(p.position);
    }
    std::vector<char> keep(shapes_.size(), 1);
    return chain_mass(per_level, keep);
  }

 private:
  using EdgeRow = std::vector<std::pair<int, S>>;  // (target shape, value), sorted

  // edge(s1 -> s2) = sum over mu of s_{s1/mu}(rho_minus) s_{s2/mu}(rho_plus)
  std::vector<EdgeRow> build_edge(const Specialization<S>& rm, const Specialization<S>& rp) const {
    const int count = static_cast<int>(shapes_.size());
    const int pm = static_cast<int>(rm.vars.size());
    const int pp = static_cast<int>(rp.vars.size());
    // sparse skew tables keyed by mu
    std::vector<std::vector<std::pair<int, S>>> down(count), up(count);
    for (int s = 0; s < count; ++s) {
      for (const Partition& mu : subdiagrams(shapes_[s])) {
        const int mi = shape_index_.at(mu.parts());
        if (detail::skew_column_bound(shapes_[s], mu, pm)) {
          S v = skew_schur(shapes_[s], mu, rm);
          if (!scalar_traits<S>::is_zero(v)) down[s].emplace_back(mi, std::move(v));
        }
        if (detail::skew_column_bound(shapes_[s], mu, pp)) {
          S v = skew_schur(shapes_[s], mu, rp);
          if (!scalar_traits<S>::is_zero(v)) up[s].emplace_back(mi, std::move(v));
        }
      }
    }
    std::vector<EdgeRow> rows(count);
    for (int s1 = 0; s1 < count; ++s1) {
      if (down[s1].empty()) continue;
      for (int s2 = 0; s2 < count; ++s2) {
        if (up[s2].empty()) continue;
        S acc = scalar_traits<S>::zero();
        bool hit = false;
        auto a = down[s1].begin();
        auto b = up[s2].begin();
        while (a != down[s1].end() && b != up[s2].end()) {
          if (a->first < b->first) ++a;
          else if (b->first < a->first) ++b;
          else {
            acc += a->second * b->second;
            hit = true;
            ++a;
            ++b;
          }
        }
        if (hit && !scalar_traits<S>::is_zero(acc)) rows[s1].emplace_back(s2, std::move(acc));
      }
    }
    return rows;
  }

  bool level_ok(int level0, int shape, const std::vector<std::vector<long>>& constraints) const {
    if (constraints.empty()) return true;
    for (long u : constraints[level0])
      if (!occupies(shapes_[shape], u)) return false;
    return true;
  }

  S chain_mass(const std::vector<std::vector<long>>& constraints, const std::vector<char>& keep) const {
    const int count = static_cast<int>(shapes_.size());
    std::vector<S> v(count, scalar_traits<S>::zero());
    for (int s = 0; s < count; ++s) {
      if (keep[s] && level_ok(0, s, constraints)) v[s] = left_[s];
    }
    for (int e = 0; e + 1 < spec_.t; ++e) {
      std::vector<S> next(count, scalar_traits<S>::zero());
      for (int s1 = 0; s1 < count; ++s1) {
        if (scalar_traits<S>::is_zero(v[s1])) continue;
        for (const auto& [s2, val] : edges_[e][s1]) {
          if (!keep[s2] || !level_ok(e + 1, s2, constraints)) continue;
          next[s2] += v[s1] * val;
        }
      }
      v = std::move(next);
    }
    S total = scalar_traits<S>::zero();
    for (int s = 0; s < count; ++s) {
      if (!scalar_traits<S>::is_zero(v[s])) total += v[s] * right_[s];
    }
    return total;
  }

  SchurSpec<S> spec_;
  int cutoff_;
  std::vector<Partition> shapes_;
  std::map<std::vector<int>, int> shape_index_;
  std::vector<S> left_, right_;
  std::vector<std::vector<EdgeRow>> edges_;
};

// Exact partition function of the spec (Prop 2.1 / Prop 3.2 closed form).
template <class S>
S spec_partition_function(const SchurSpec<S>& spec) {
  return spec.pfaffian_mode ? pf_Z(spec.rho_plus, spec.rho_minus) : schur_Z(spec.rho_plus, spec.rho_minus);
}

// Chernoff-style bound on the unnormalized mass of sequences with some
// |lambda^(i)| > cutoff: scaling the minus specializations from level i on by
// t0 >= 1 dominates t0^{|lambda^(i)|}, so the mass is at most
// t0^{-(cutoff+1)} Z(scaled).  Requires nonnegative variables.
template <class S>
S enumeration_tail_bound(const SchurSpec<S>& spec, int cutoff) {
  spec.validate();
  if (!detail::all_nonnegative(spec)) throw std::domain_error("enumeration_tail_bound: needs nonnegative variables");
  S best_total = scalar_traits<S>::zero();
  bool found = false;
  for (int grid = 1; grid <= 24; ++grid) {
    const S t0 = scalar_traits<S>::one() + S(grid) / S(4);  // 1.25 .. 7
    S total = scalar_traits<S>::zero();
    bool feasible = true;
    for (int level = 1; level <= spec.t && feasible; ++level) {
      SchurSpec<S> scaled = spec;
      for (int j = level; j <= spec.t; ++j)
        for (auto& x : scaled.rho_minus[j - 1].vars) x *= t0;
      try {
        S z = spec_partition_function(scaled);
        S damp = scalar_traits<S>::one();
        for (int p = 0; p <= cutoff; ++p) damp /= t0;
        total += damp * z;
      } catch (const std::domain_error&) {
        feasible = false;
      }
    }
    if (feasible && (!found || scalar_traits<S>::magnitude(total) < scalar_traits<S>::magnitude(best_total))) {
      best_total = total;
      found = true;
    }
  }
  if (!found) throw std::domain_error("enumeration_tail_bound: no feasible Chernoff scaling; variables too large");
  return best_total;
}

template <class S>
struct BruteResult {
  S value;      // enumerated mass / Z
  S tail;       // rigorous bound on the neglected (nonnegative) remainder / Z
};

// Normalized correlation of a point set by direct enumeration below cutoff,
// with a rigorous geometric tail bound.  Throws when the bound exceeds tol.
template <class S>
BruteResult<S> brute_correlations(const SchurEnumerator<S>& enumerator, const std::vector<SpacePoint>& points,
                                  std::optional<double> tol = std::nullopt) {
  const S z = spec_partition_function(enumerator.spec());
  BruteResult<S> out{enumerator.mass_containing(points) / z,
                     enumeration_tail_bound(enumerator.spec(), enumerator.cutoff()) / z};
  if (tol && scalar_traits<S>::magnitude(out.tail) > *tol) {
    throw std::runtime_error("brute_correlations: tail bound " + scalar_debug_string(out.tail) +
                             " exceeds requested tolerance");
  }
  return out;
}

template <class S>
BruteResult<S> brute_correlations(const SchurSpec<S>& spec, const std::vector<SpacePoint>& points, int cutoff,
                                  std::optional<double> tol = std::nullopt) {
  return brute_correlations(SchurEnumerator<S>(spec, cutoff), points, tol);
}

// ---- numeric contour machinery (complex double), defined in src/ ----

struct ContourConfig {
  double r_z = 0.0;  // 0 = automatic radius from the spec and case rule
  double r_w = 0.0;
  int quad_points = 64;
  int max_points = 65536;
  double rel_tol = 1e-10;
};

struct ContourResult {
  Complex value;
  int quad_points = 0;
  int doublings = 0;
  bool converged = false;
};

// (1/(2 pi i))^2 double trapezoid sum over circles of radii (r_z, r_w),
// refined by doubling until the relative change drops below rel_tol.
ContourResult contour_integrate(const std::function<Complex(Complex, Complex)>& f, double r_z, double r_w,
                                const ContourConfig& cc);

// Laurent coefficient of index m on the circle |z| = r.
ContourResult laurent_coefficient(const std::function<Complex(Complex)>& f, long m, double r, const ContourConfig& cc);

// Okounkov-Reshetikhin kernel, Eq-2.7 form: radii per the case rule
// i <= j -> |z|,|w| > 1;  i > j -> |z|,|w| < 1.
Complex schur_kernel(const SchurSpec<double>& spec, int i, long u, int j, long v, const ContourConfig& cc = {});

struct PfKernelBlock {
  Complex k11, k12, k21, k22;
};

// Pfaffian Schur kernel 2x2 block; K21(i,u;j,v) = -K12(j,v;i,u).
PfKernelBlock pf_schur_kernel(const SchurSpec<double>& spec, int i, long u, int j, long v,
                              const ContourConfig& cc = {});

// K12 entry alone, with the |zw| side forced; the case rule picks
// |zw| > 1 for i >= j and |zw| < 1 for i < j.
Complex pf_schur_k12(const SchurSpec<double>& spec, int i, long u, int j, long v, bool zw_outer,
                     const ContourConfig& cc = {});

// det [K(p_s, p_t)] over a point set.
Complex schur_kernel_det(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                         const ContourConfig& cc = {});

// Assembled 2S x 2S block matrix over a point set (rows 2s, 2s+1 per point).
Matrix<Complex> pf_schur_kernel_matrix(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                                       const ContourConfig& cc = {});

double max_skew_defect(const Matrix<Complex>& m);

// pf of the assembled matrix after exact antisymmetrization.
Complex pf_schur_correlation(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                             const ContourConfig& cc = {});

// Toeplitz matrix on [u_min, u_max] with symbol H(rho_minus; z) H(rho_plus; z^{-1}):
// W(u, v) = sum_q h_{u-v+q}(rho_minus) h_q(rho_plus), truncated under a
// geometric tail bound.
Matrix<double> toeplitz_W(const Specialization<double>& rho_minus, const Specialization<double>& rho_plus,
                          long u_min, long u_max);

// Entries of the interval product W_{[i,j)} = W_i ... W_{j-1}, computed from
// the product symbol on the union specializations.
Matrix<double> toeplitz_interval_W(const SchurSpec<double>& spec, int i, int j, long u_min, long u_max);

// Skew Toeplitz matrix with entries g_{u-v-1} - g_{u-v+1} where g is the
// coefficient sequence of H(rho; z) H(rho; z^{-1}).
SkewMatrix<double> epsilon_toeplitz(const Specialization<double>& rho, long u_min, long u_max);

// Contour radii used by schur_kernel for the given case.
std::pair<double, double> schur_contour_radii(const SchurSpec<double>& spec, int i, int j);

}  // namespace dpp
