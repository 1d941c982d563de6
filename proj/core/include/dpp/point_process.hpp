#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpp/linalg.hpp"
#include "dpp/matrix.hpp"

namespace dpp {

// Default cap on full-table enumeration: 2^20 configurations.
// DPP_MAX_ENUM (a configuration count) overrides it.
inline std::uint64_t max_enum_configs() {
  if (const char* env = std::getenv("DPP_MAX_ENUM")) {
    const unsigned long long v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return std::uint64_t(1) << 20;
}

// Finite ordered phase space; the label order fixes all matrix indexing.
class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j]) throw std::invalid_argument("duplicate ground set label: " + labels_[i]);
  }

  static GroundSet of_size(int n, const std::string& prefix = "x") {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (int i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return GroundSet(std::move(labels));
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<int>(i);
    throw std::invalid_argument("label not in ground set: " + label);
  }

 private:
  std::vector<std::string> labels_;
};

// Point configuration as a bitmask over a ground set.
struct Config {
  std::uint64_t mask = 0;

  bool contains(int i) const { return (mask >> i) & 1; }
  Config with(int i) const { return Config{mask | (std::uint64_t(1) << i)}; }
  int count() const { return __builtin_popcountll(mask); }
  bool subset_of(Config o) const { return (mask & ~o.mask) == 0; }

  SubsetIndex indices() const {
    SubsetIndex s;
    for (int i = 0; i < 64; ++i)
      if (contains(i)) s.push_back(i);
    return s;
  }

  friend bool operator==(Config a, Config b) { return a.mask == b.mask; }
  friend bool operator<(Config a, Config b) { return a.mask < b.mask; }
};

inline Config full_config(int n) { return Config{(n >= 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1)}; }

// Signed/complex values are allowed; only sampling requires an actual
// probability distribution.
template <class S>
struct ProbTable {
  GroundSet ground;
  std::vector<S> values;  // indexed by Config::mask, size 2^|ground|

  const S& at(Config c) const { return values.at(c.mask); }
};

template <class S>
class LEnsemble {
 public:
  LEnsemble(GroundSet ground, Matrix<S> l) : LEnsemble(std::move(ground), std::move(l), std::nullopt) {}

  LEnsemble(GroundSet ground, Matrix<S> l, std::optional<Config> window)
      : ground_(std::move(ground)), l_(std::move(l)) {
    const int n = ground_.size();
    if (l_.rows() != n || l_.cols() != n) throw std::invalid_argument("L must be square of ground-set size");
    window_ = window.value_or(full_config(n));
    if ((window_.mask & ~full_config(n).mask) != 0) throw std::invalid_argument("window outside ground set");
    norm_ = det(window_matrix());
    if (is_singular(window_matrix(), norm_)) {
      throw SingularMatrixError("L-ensemble normalization det(I_Y + L) = " + scalar_debug_string(norm_));
    }
  }

  const GroundSet& ground() const { return ground_; }
  const Matrix<S>& l() const { return l_; }
  Config window() const { return window_; }
  const S& normalization() const { return norm_; }

  // I_Y + L with the identity block only on window points.
  Matrix<S> window_matrix() const {
    Matrix<S> m = l_;
    for (int i = 0; i < ground_.size(); ++i)
      if (window_.contains(i)) m(i, i) += scalar_traits<S>::one();
    return m;
  }

 private:
  GroundSet ground_;
  Matrix<S> l_;
  Config window_;
  S norm_;
};

// Flat 2|X| x 2|X| skew matrix; point i owns rows/columns (2i, 2i+1),
// primed coordinate first.
template <class S>
class PfLEnsemble {
 public:
  PfLEnsemble(GroundSet ground, SkewMatrix<S> l) : PfLEnsemble(std::move(ground), std::move(l), std::nullopt) {}

  PfLEnsemble(GroundSet ground, SkewMatrix<S> l, std::optional<Config> window)
      : ground_(std::move(ground)), l_(std::move(l)) {
    const int n = ground_.size();
    if (l_.dim() != 2 * n) throw std::invalid_argument("Pfaffian L must have dimension 2|X|");
    window_ = window.value_or(full_config(n));
    if ((window_.mask & ~full_config(n).mask) != 0) throw std::invalid_argument("window outside ground set");
    norm_ = pfaffian(window_matrix());
    if constexpr (scalar_traits<S>::is_exact) {
      if (scalar_traits<S>::is_zero(norm_)) throw SingularMatrixError("pf(J_Y + L) = 0");
    } else {
      if (scalar_traits<S>::magnitude(norm_) < 1e-12) throw SingularMatrixError("pf(J_Y + L) ~ 0");
    }
  }

  const GroundSet& ground() const { return ground_; }
  const SkewMatrix<S>& l() const { return l_; }
  Config window() const { return window_; }
  const S& normalization() const { return norm_; }

  // J_Y + L with the [[0,1],[-1,0]] block on each window point.
  SkewMatrix<S> window_matrix() const {
    Matrix<S> m = l_.matrix();
    for (int i = 0; i < ground_.size(); ++i) {
      if (window_.contains(i)) {
        m(2 * i, 2 * i + 1) += scalar_traits<S>::one();
        m(2 * i + 1, 2 * i) -= scalar_traits<S>::one();
      }
    }
    return SkewMatrix<S>(std::move(m));
  }

 private:
  GroundSet ground_;
  SkewMatrix<S> l_;
  Config window_;
  S norm_;
};

template <class S>
struct Kernel {
  GroundSet ground;
  Matrix<S> k;
};

template <class S>
struct PfKernel {
  GroundSet ground;
  SkewMatrix<S> k;  // dimension 2|ground|, block (2i,2i+1)
};

// Flat indices (2i, 2i+1) for every ground point in a config.
inline SubsetIndex doubled_indices(Config c) {
  SubsetIndex s;
  for (int i = 0; i < 64; ++i) {
    if (c.contains(i)) {
      s.push_back(2 * i);
      s.push_back(2 * i + 1);
    }
  }
  return s;
}

// Prob{X} = det L_{Y u complement(window)} / det(I_Y + L) for X = Y u complement,
// and 0 for configs that do not contain the window complement.
template <class S>
S lensemble_prob(const LEnsemble<S>& e, Config x) {
  const int n = e.ground().size();
  const Config comp{full_config(n).mask & ~e.window().mask};
  if (!comp.subset_of(x)) return scalar_traits<S>::zero();
  return principal_minor(e.l(), x.indices()) / e.normalization();
}

// Prop 1.1 / 1.2 kernel on the window: K = I_Y - (I_Y + L)^{-1}|_{Y x Y}.
template <class S>
Kernel<S> lensemble_kernel(const LEnsemble<S>& e) {
  const Matrix<S> inv = inverse(e.window_matrix());
  const SubsetIndex w = e.window().indices();
  Matrix<S> k = Matrix<S>::identity(static_cast<int>(w.size())) - inv.submatrix(w, w);
  std::vector<std::string> labels;
  for (int i : w) labels.push_back(e.ground().label(i));
  return Kernel<S>{GroundSet(std::move(labels)), std::move(k)};
}

template <class S>
S pf_lensemble_prob(const PfLEnsemble<S>& e, Config x) {
  const int n = e.ground().size();
  const Config comp{full_config(n).mask & ~e.window().mask};
  if (!comp.subset_of(x)) return scalar_traits<S>::zero();
  return principal_minor(e.l(), doubled_indices(x)) / e.normalization();
}

// Prop 1.6 / 1.7 kernel: K = J_Y + (J_Y + L)^{-1}|_{Y x Y}.
template <class S>
PfKernel<S> pf_lensemble_kernel(const PfLEnsemble<S>& e) {
  const Matrix<S> inv = inverse(e.window_matrix().matrix());
  const SubsetIndex w = doubled_indices(e.window());
  Matrix<S> k = inv.submatrix(w, w);
  for (std::size_t b = 0; b + 1 < w.size(); b += 2) {
    k(static_cast<int>(b), static_cast<int>(b + 1)) += scalar_traits<S>::one();
    k(static_cast<int>(b + 1), static_cast<int>(b)) -= scalar_traits<S>::one();
  }
  std::vector<std::string> labels;
  for (int i : e.window().indices()) labels.push_back(e.ground().label(i));
  return PfKernel<S>{GroundSet(std::move(labels)), SkewMatrix<S>(std::move(k))};
}

// rho(Y) = sum over X containing Y of T(X), via the superset zeta transform.
template <class S>
std::vector<S> brute_force_correlations(const ProbTable<S>& t) {
  const int n = t.ground.size();
  const std::uint64_t total = std::uint64_t(1) << n;
  if (total > max_enum_configs() || t.values.size() != total) {
    throw std::invalid_argument("brute_force_correlations: enumeration cap exceeded or table incomplete");
  }
  std::vector<S> rho = t.values;
  for (int bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t(1) << bit;
    for (std::uint64_t m = 0; m < total; ++m) {
      if (!(m & b)) rho[m] += rho[m | b];
    }
  }
  return rho;
}

template <class S>
S kernel_correlation(const Kernel<S>& k, Config y) {
  return principal_minor(k.k, y.indices());
}

template <class S>
S kernel_correlation(const PfKernel<S>& k, Config y) {
  return principal_minor(k.k, doubled_indices(y));
}

namespace detail {
inline bool scalar_nonneg(const Rational& x) { return sgn(x) >= 0; }
inline bool scalar_nonneg(double x) { return x >= 0.0; }
inline bool scalar_nonneg(const Complex& x) { return x.imag() == 0.0 && x.real() >= 0.0; }
}  // namespace detail

// Inverse-CDF draw over the enumerated table, in mask order.
// Exact scalars compare the cumulative sums against r / 2^64 exactly.
template <class S>
Config enumerate_sample(const ProbTable<S>& t, std::uint64_t seed) {
  const int n = t.ground.size();
  const std::uint64_t total = std::uint64_t(1) << n;
  if (total > max_enum_configs() || t.values.size() != total) {
    throw std::invalid_argument("enumerate_sample: enumeration cap exceeded or table incomplete");
  }
  for (const S& v : t.values) {
    if (!detail::scalar_nonneg(v)) {
      throw std::domain_error("enumerate_sample: negative probability in table");
    }
  }
  std::mt19937_64 rng(seed);
  const std::uint64_t r = rng();
  if constexpr (scalar_traits<S>::is_exact) {
    Rational u = Rational(r) / rational_pow(Rational(2), 64);
    Rational acc(0);
    for (std::uint64_t m = 0; m < total; ++m) {
      acc += t.values[m];
      if (u < acc) return Config{m};
    }
  } else {
    const double u = static_cast<double>(r) * 0x1p-64;
    double acc = 0.0;
    for (std::uint64_t m = 0; m < total; ++m) {
      acc += scalar_traits<S>::magnitude(t.values[m]);
      if (u < acc) return Config{m};
    }
  }
  return Config{total - 1};
}

// Full probability table of a (conditional) L-ensemble over 2^X.
template <class S>
ProbTable<S> lensemble_table(const LEnsemble<S>& e) {
  const int n = e.ground().size();
  const std::uint64_t total = std::uint64_t(1) << n;
  if (total > max_enum_configs()) throw std::invalid_argument("lensemble_table: enumeration cap exceeded");
  ProbTable<S> t{e.ground(), std::vector<S>(total, scalar_traits<S>::zero())};
  for (std::uint64_t m = 0; m < total; ++m) t.values[m] = lensemble_prob(e, Config{m});
  return t;
}

template <class S>
ProbTable<S> pf_lensemble_table(const PfLEnsemble<S>& e) {
  const int n = e.ground().size();
  const std::uint64_t total = std::uint64_t(1) << n;
  if (total > max_enum_configs()) throw std::invalid_argument("pf_lensemble_table: enumeration cap exceeded");
  ProbTable<S> t{e.ground(), std::vector<S>(total, scalar_traits<S>::zero())};
  for (std::uint64_t m = 0; m < total; ++m) t.values[m] = pf_lensemble_prob(e, Config{m});
  return t;
}

}  // namespace dpp
