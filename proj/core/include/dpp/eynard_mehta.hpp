#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/linalg.hpp"
#include "dpp/matrix.hpp"
#include "dpp/point_process.hpp"

namespace dpp {

// A point of the disjoint union X^(1) u ... u X^(k); level is 1-based.
struct LevelPoint {
  int level;
  int point;
};

// Multi-level determinantal chain: Phi (n x |X1|), W_m (|Xm| x |Xm+1|),
// Psi (|Xk| x n).
template <class S>
struct EMSpec {
  std::vector<GroundSet> levels;
  int n = 0;
  Matrix<S> phi;
  std::vector<Matrix<S>> ws;
  Matrix<S> psi;

  int k() const { return static_cast<int>(levels.size()); }

  void validate() const {
    if (levels.empty()) throw std::invalid_argument("EMSpec: needs at least one level");
    if (n <= 0) throw std::invalid_argument("EMSpec: n must be positive");
    if (static_cast<int>(ws.size()) != k() - 1) throw std::invalid_argument("EMSpec: needs k-1 transfer matrices");
    if (phi.rows() != n || phi.cols() != levels.front().size())
      throw std::invalid_argument("EMSpec: Phi must be n x |X1|");
    for (int m = 0; m < k() - 1; ++m) {
      if (ws[m].rows() != levels[m].size() || ws[m].cols() != levels[m + 1].size())
        throw std::invalid_argument("EMSpec: W" + std::to_string(m + 1) + " shape mismatch");
    }
    if (psi.rows() != levels.back().size() || psi.cols() != n)
      throw std::invalid_argument("EMSpec: Psi must be |Xk| x n");
  }
};

// Pfaffian analog: epsilon skew on X1, V_m transfer chain, Xi (|Xk| x 2n);
// every level carries exactly 2n points.
template <class S>
struct PfEMSpec {
  std::vector<GroundSet> levels;
  int n = 0;  // half the points per level
  SkewMatrix<S> epsilon;
  std::vector<Matrix<S>> vs;
  Matrix<S> xi;

  int k() const { return static_cast<int>(levels.size()); }

  void validate() const {
    if (levels.empty()) throw std::invalid_argument("PfEMSpec: needs at least one level");
    if (n <= 0) throw std::invalid_argument("PfEMSpec: n must be positive");
    if (static_cast<int>(vs.size()) != k() - 1) throw std::invalid_argument("PfEMSpec: needs k-1 transfer matrices");
    if (epsilon.dim() != levels.front().size())
      throw std::invalid_argument("PfEMSpec: epsilon must live on X1");
    for (int m = 0; m < k() - 1; ++m) {
      if (vs[m].rows() != levels[m].size() || vs[m].cols() != levels[m + 1].size())
        throw std::invalid_argument("PfEMSpec: V" + std::to_string(m + 1) + " shape mismatch");
    }
    if (xi.rows() != levels.back().size() || xi.cols() != 2 * n)
      throw std::invalid_argument("PfEMSpec: Xi must be |Xk| x 2n");
  }
};

namespace detail {

// Chain product W_i ... W_{j-1}; identity for i >= j.  This is the
// empty-interval convention used inside composite kernel expressions.
template <class S>
Matrix<S> chain_product(const std::vector<Matrix<S>>& ws, const std::vector<GroundSet>& levels, int i, int j) {
  if (i >= j) return Matrix<S>::identity(levels[i - 1].size());
  Matrix<S> out = ws[i - 1];
  for (int m = i + 1; m < j; ++m) out = out * ws[m - 1];
  return out;
}

}  // namespace detail

// Standalone W_{[i,j)}: the product for i < j and the zero matrix of shape
// |Xi| x |Xj| for i >= j.
template <class S>
Matrix<S> w_interval(const EMSpec<S>& spec, int i, int j) {
  if (i < 1 || i > spec.k() || j < 1 || j > spec.k()) throw std::invalid_argument("w_interval: level out of range");
  if (i >= j) return Matrix<S>(spec.levels[i - 1].size(), spec.levels[j - 1].size());
  return detail::chain_product(spec.ws, spec.levels, i, j);
}

template <class S>
Matrix<S> v_interval(const PfEMSpec<S>& spec, int i, int j) {
  if (i < 1 || i > spec.k() || j < 1 || j > spec.k()) throw std::invalid_argument("v_interval: level out of range");
  if (i >= j) return Matrix<S>(spec.levels[i - 1].size(), spec.levels[j - 1].size());
  return detail::chain_product(spec.vs, spec.levels, i, j);
}

// Weight of one configuration (one sorted n-subset per level):
// det Phi[:,c1] * prod_m det W_m[c_m, c_{m+1}] * det Psi[c_k,:].
template <class S>
S em_weight(const EMSpec<S>& spec, const std::vector<SubsetIndex>& config) {
  spec.validate();
  if (static_cast<int>(config.size()) != spec.k()) throw std::invalid_argument("em_weight: one subset per level required");
  SubsetIndex all_n;
  for (int i = 0; i < spec.n; ++i) all_n.push_back(i);
  for (int m = 0; m < spec.k(); ++m) {
    if (static_cast<int>(config[m].size()) != spec.n)
      throw std::invalid_argument("em_weight: level " + std::to_string(m + 1) + " must hold exactly n points");
    check_subset_index(config[m], spec.levels[m].size());
  }
  S out = det(spec.phi.submatrix(all_n, config.front()));
  for (int m = 0; m + 1 < spec.k(); ++m) out *= det(spec.ws[m].submatrix(config[m], config[m + 1]));
  out *= det(spec.psi.submatrix(config.back(), all_n));
  return out;
}

// det M with M = Phi W_1 ... W_{k-1} Psi; equals the total weight mass.
template <class S>
S em_partition(const EMSpec<S>& spec) {
  spec.validate();
  return det(spec.phi * detail::chain_product(spec.ws, spec.levels, 1, spec.k()) * spec.psi);
}

template <class S>
Matrix<S> em_m_matrix(const EMSpec<S>& spec) {
  return spec.phi * detail::chain_product(spec.ws, spec.levels, 1, spec.k()) * spec.psi;
}

// Ground set {v1..vn} u X^(1) u ... u X^(k) with level labels prefixed.
template <class S>
GroundSet em_embedded_ground(const EMSpec<S>& spec, int virtual_count) {
  std::vector<std::string> labels;
  for (int t = 0; t < virtual_count; ++t) labels.push_back("v" + std::to_string(t + 1));
  for (int m = 0; m < spec.k(); ++m)
    for (const std::string& lab : spec.levels[m].labels()) labels.push_back(std::to_string(m + 1) + ":" + lab);
  return GroundSet(std::move(labels));
}

// Flat index of a level point inside the embedded/combined ground set.
template <class Spec>
int level_point_offset(const Spec& spec, int level) {
  int off = 0;
  for (int m = 1; m < level; ++m) off += spec.levels[m - 1].size();
  return off;
}

// Conditional L-ensemble whose window marginals reproduce the multi-level
// weights: blocks Phi, -W_1 ... -W_{k-1}, Psi laid out cyclically.
template <class S>
LEnsemble<S> em_embed_L(const EMSpec<S>& spec) {
  spec.validate();
  const int k = spec.k();
  int total = spec.n;
  for (const auto& g : spec.levels) total += g.size();
  Matrix<S> l(total, total);
  const auto level_base = [&](int level) { return spec.n + level_point_offset(spec, level); };
  for (int t = 0; t < spec.n; ++t)
    for (int c = 0; c < spec.levels[0].size(); ++c) l(t, level_base(1) + c) = spec.phi(t, c);
  for (int m = 1; m < k; ++m)
    for (int r = 0; r < spec.levels[m - 1].size(); ++r)
      for (int c = 0; c < spec.levels[m].size(); ++c) l(level_base(m) + r, level_base(m + 1) + c) = -spec.ws[m - 1](r, c);
  for (int r = 0; r < spec.levels[k - 1].size(); ++r)
    for (int t = 0; t < spec.n; ++t) l(level_base(k) + r, t) = spec.psi(r, t);

  Config window{0};
  for (int i = spec.n; i < total; ++i) window = window.with(i);
  return LEnsemble<S>(em_embedded_ground(spec, spec.n), std::move(l), window);
}

// Eq 1.4 carries an ambiguity in the second interval index of the first
// term; the theorem's W_{[1,j)} is the default, the proof's W_{[i,j)} is
// kept behind this switch for the oracle to discriminate.
enum class EmKernelReading { theorem_w1j, proof_wij };

// Correlation kernel blocks K_ij = W_{[i,k)} Psi M^{-1} Phi W_{[1,j)} - W_{[i,j)},
// rows indexed by X^(i), columns by X^(j).
template <class S>
Kernel<S> em_kernel(const EMSpec<S>& spec, EmKernelReading reading = EmKernelReading::theorem_w1j) {
  spec.validate();
  const int k = spec.k();
  const Matrix<S> minv = inverse(em_m_matrix(spec));
  std::vector<Matrix<S>> left(k + 1);   // W_{[i,k)} Psi, identity convention inside the chain
  std::vector<Matrix<S>> right(k + 1);  // Phi W_{[1,j)}
  for (int i = 1; i <= k; ++i) left[i] = detail::chain_product(spec.ws, spec.levels, i, k) * spec.psi;
  for (int j = 1; j <= k; ++j) right[j] = spec.phi * detail::chain_product(spec.ws, spec.levels, 1, j);

  int total = 0;
  for (const auto& g : spec.levels) total += g.size();
  Matrix<S> km(total, total);
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      Matrix<S> block;
      if (reading == EmKernelReading::theorem_w1j) {
        block = left[i] * minv * right[j];
      } else {
        block = left[i] * minv * spec.phi * detail::chain_product(spec.ws, spec.levels, i, j);
      }
      if (i < j) block -= w_interval(spec, i, j);
      const int ro = level_point_offset(spec, i), co = level_point_offset(spec, j);
      for (int r = 0; r < block.rows(); ++r)
        for (int c = 0; c < block.cols(); ++c) km(ro + r, co + c) = block(r, c);
    }
  }
  return Kernel<S>{em_embedded_ground(spec, 0), std::move(km)};
}

// ---- Pfaffian chain ----

template <class S>
S pf_em_weight(const PfEMSpec<S>& spec, const std::vector<SubsetIndex>& config) {
  spec.validate();
  if (static_cast<int>(config.size()) != spec.k()) throw std::invalid_argument("pf_em_weight: one subset per level required");
  SubsetIndex all_2n;
  for (int i = 0; i < 2 * spec.n; ++i) all_2n.push_back(i);
  for (int m = 0; m < spec.k(); ++m) {
    if (static_cast<int>(config[m].size()) != 2 * spec.n)
      throw std::invalid_argument("pf_em_weight: level " + std::to_string(m + 1) + " must hold exactly 2n points");
    check_subset_index(config[m], spec.levels[m].size());
  }
  S out = principal_minor(spec.epsilon, config.front());
  for (int m = 0; m + 1 < spec.k(); ++m) out *= det(spec.vs[m].submatrix(config[m], config[m + 1]));
  out *= det(spec.xi.submatrix(config.back(), all_2n));
  return out;
}

// N = Xi^t V_{[1,k)}^t epsilon V_{[1,k)} Xi (2n x 2n skew).
template <class S>
SkewMatrix<S> pf_em_n_matrix(const PfEMSpec<S>& spec) {
  spec.validate();
  const Matrix<S> g = detail::chain_product(spec.vs, spec.levels, 1, spec.k()) * spec.xi;
  return SkewMatrix<S>(g.transpose() * spec.epsilon.matrix() * g);
}

template <class S>
S pf_em_partition(const PfEMSpec<S>& spec) {
  return pfaffian(pf_em_n_matrix(spec));
}

// Thm 1.9 kernel, Eq 1.7 blocks assembled into the flat 2x2-block skew matrix.
template <class S>
PfKernel<S> pf_em_kernel(const PfEMSpec<S>& spec) {
  spec.validate();
  const int k = spec.k();
  const Matrix<S> ninv = inverse(pf_em_n_matrix(spec).matrix());
  const Matrix<S> g = detail::chain_product(spec.vs, spec.levels, 1, spec.k()) * spec.xi;  // V_{[1,k)} Xi

  std::vector<Matrix<S>> vxi(k + 1);  // V_{[i,k)} Xi
  std::vector<Matrix<S>> cmat(k + 1); // V_{[1,i)}^t eps V_{[1,k)} Xi
  std::vector<Matrix<S>> dleft(k + 1);// V_{[1,i)}^t eps
  for (int i = 1; i <= k; ++i) {
    vxi[i] = detail::chain_product(spec.vs, spec.levels, i, k) * spec.xi;
    const Matrix<S> v1i = detail::chain_product(spec.vs, spec.levels, 1, i);
    dleft[i] = v1i.transpose() * spec.epsilon.matrix();
    cmat[i] = dleft[i] * g;
  }

  int total = 0;
  for (const auto& gset : spec.levels) total += gset.size();
  Matrix<S> flat(2 * total, 2 * total);
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      const Matrix<S> b_j = g.transpose() * dleft[j].transpose() * S(-1);  // Xi^t V_{[1,k)}^t eps V_{[1,j)}
      Matrix<S> k11 = vxi[i] * ninv * vxi[j].transpose();
      Matrix<S> k12 = vxi[i] * ninv * b_j;
      Matrix<S> k21 = cmat[i] * ninv * vxi[j].transpose() * S(-1);
      Matrix<S> k22 = cmat[i] * ninv * b_j * S(-1);
      const Matrix<S> d_ij = dleft[i] * detail::chain_product(spec.vs, spec.levels, 1, j);
      k22 += d_ij;
      if (i < j) k12 -= v_interval(spec, i, j);
      if (j < i) k21 += v_interval(spec, j, i).transpose();
      const int ro = level_point_offset(spec, i), co = level_point_offset(spec, j);
      for (int r = 0; r < k11.rows(); ++r) {
        for (int c = 0; c < k11.cols(); ++c) {
          flat(2 * (ro + r), 2 * (co + c)) = k11(r, c);
          flat(2 * (ro + r), 2 * (co + c) + 1) = k12(r, c);
          flat(2 * (ro + r) + 1, 2 * (co + c)) = k21(r, c);
          flat(2 * (ro + r) + 1, 2 * (co + c) + 1) = k22(r, c);
        }
      }
    }
  }
  GroundSet ground = [&] {
    std::vector<std::string> labels;
    for (int m = 0; m < k; ++m)
      for (const std::string& lab : spec.levels[m].labels()) labels.push_back(std::to_string(m + 1) + ":" + lab);
    return GroundSet(std::move(labels));
  }();
  return PfKernel<S>{std::move(ground), SkewMatrix<S>(std::move(flat))};
}

// Conditional Pfaffian L-ensemble from the proof of Thm 1.9, in the
// interleaved (x', x'') flat convention.
template <class S>
PfLEnsemble<S> pf_em_embed_L(const PfEMSpec<S>& spec) {
  spec.validate();
  const int k = spec.k();
  int level_total = 0;
  for (const auto& g : spec.levels) level_total += g.size();
  const int total = spec.n + level_total;  // ground points
  Matrix<S> flat(2 * total, 2 * total);

  const auto prime = [&](int ground_index) { return 2 * ground_index; };
  const auto dprime = [&](int ground_index) { return 2 * ground_index + 1; };
  const auto level_pt = [&](int level, int a) { return spec.n + level_point_offset(spec, level) + a; };

  // epsilon between primed copies of X^(1)
  for (int a = 0; a < spec.levels[0].size(); ++a)
    for (int b = 0; b < spec.levels[0].size(); ++b) flat(prime(level_pt(1, a)), prime(level_pt(1, b))) = spec.epsilon(a, b);
  // V_m between X^(m)'' and X^(m+1)'
  for (int m = 1; m < k; ++m) {
    for (int a = 0; a < spec.levels[m - 1].size(); ++a) {
      for (int b = 0; b < spec.levels[m].size(); ++b) {
        flat(dprime(level_pt(m, a)), prime(level_pt(m + 1, b))) = spec.vs[m - 1](a, b);
        flat(prime(level_pt(m + 1, b)), dprime(level_pt(m, a))) = -spec.vs[m - 1](a, b);
      }
    }
  }
  // Xi^t between the 2n virtual coordinates and X^(k)''
  for (int s = 0; s < 2 * spec.n; ++s) {
    for (int a = 0; a < spec.levels[k - 1].size(); ++a) {
      flat(s, dprime(level_pt(k, a))) = spec.xi(a, s);
      flat(dprime(level_pt(k, a)), s) = -spec.xi(a, s);
    }
  }

  std::vector<std::string> labels;
  for (int t = 0; t < spec.n; ++t) labels.push_back("v" + std::to_string(t + 1));
  for (int m = 0; m < k; ++m)
    for (const std::string& lab : spec.levels[m].labels()) labels.push_back(std::to_string(m + 1) + ":" + lab);
  Config window{0};
  for (int i = spec.n; i < total; ++i) window = window.with(i);
  return PfLEnsemble<S>(GroundSet(std::move(labels)), SkewMatrix<S>(std::move(flat)), window);
}

// All size-r subsets of {0..m-1} in lexicographic order.
inline std::vector<SubsetIndex> all_n_subsets(int m, int r) {
  std::vector<SubsetIndex> out;
  if (r > m || r < 0) return out;
  SubsetIndex cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == m - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Exhaustive weight table over all per-level configurations.
template <class S, class Spec>
struct EmTable {
  std::vector<std::vector<SubsetIndex>> configs;
  std::vector<S> weights;
  S total = scalar_traits<S>::zero();
};

template <class S>
EmTable<S, EMSpec<S>> em_enumerate(const EMSpec<S>& spec) {
  EmTable<S, EMSpec<S>> table;
  std::vector<std::vector<SubsetIndex>> per_level;
  for (int m = 0; m < spec.k(); ++m) per_level.push_back(all_n_subsets(spec.levels[m].size(), spec.n));
  std::vector<std::size_t> idx(spec.k(), 0);
  for (;;) {
    std::vector<SubsetIndex> config;
    for (int m = 0; m < spec.k(); ++m) config.push_back(per_level[m][idx[m]]);
    S w = em_weight(spec, config);
    table.total += w;
    table.configs.push_back(std::move(config));
    table.weights.push_back(std::move(w));
    int m = spec.k() - 1;
    while (m >= 0 && ++idx[m] == per_level[m].size()) idx[m--] = 0;
    if (m < 0) break;
  }
  return table;
}

template <class S>
EmTable<S, PfEMSpec<S>> pf_em_enumerate(const PfEMSpec<S>& spec) {
  EmTable<S, PfEMSpec<S>> table;
  std::vector<std::vector<SubsetIndex>> per_level;
  for (int m = 0; m < spec.k(); ++m) per_level.push_back(all_n_subsets(spec.levels[m].size(), 2 * spec.n));
  std::vector<std::size_t> idx(spec.k(), 0);
  for (;;) {
    std::vector<SubsetIndex> config;
    for (int m = 0; m < spec.k(); ++m) config.push_back(per_level[m][idx[m]]);
    S w = pf_em_weight(spec, config);
    table.total += w;
    table.configs.push_back(std::move(config));
    table.weights.push_back(std::move(w));
    int m = spec.k() - 1;
    while (m >= 0 && ++idx[m] == per_level[m].size()) idx[m--] = 0;
    if (m < 0) break;
  }
  return table;
}

// rho(points) of the normalized multi-level measure by direct summation.
template <class S, class Spec>
S em_oracle_correlation(const EmTable<S, Spec>& table, const std::vector<LevelPoint>& points) {
  S mass = scalar_traits<S>::zero();
  for (std::size_t c = 0; c < table.configs.size(); ++c) {
    bool contains_all = true;
    for (const LevelPoint& p : points) {
      const SubsetIndex& level = table.configs[c][p.level - 1];
      bool found = false;
      for (int idx : level)
        if (idx == p.point) { found = true; break; }
      if (!found) { contains_all = false; break; }
    }
    if (contains_all) mass += table.weights[c];
  }
  return mass / table.total;
}

}  // namespace dpp
