#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "dpp/linalg.hpp"
#include "dpp/matrix.hpp"
#include "dpp/partitions.hpp"

namespace dpp {

// Finite-variable specialization of the symmetric function algebra.
// The empty list is the trivial specialization (h_0 = 1, h_k = 0 otherwise).
template <class S>
struct Specialization {
  std::vector<S> vars;
};

// Concatenation adds power sums, so H(r1 u r2; z) = H(r1; z) H(r2; z).
template <class S>
Specialization<S> union_spec(const Specialization<S>& r1, const Specialization<S>& r2) {
  Specialization<S> out = r1;
  out.vars.insert(out.vars.end(), r2.vars.begin(), r2.vars.end());
  return out;
}

// h_0 .. h_d of the specialization, from prod_i (1 - x_i z)^{-1}.
template <class S>
std::vector<S> h_values(const Specialization<S>& rho, int d) {
  if (d < 0) throw std::invalid_argument("h_values: negative degree");
  std::vector<S> h(d + 1, scalar_traits<S>::zero());
  h[0] = scalar_traits<S>::one();
  for (const S& x : rho.vars) {
    for (int k = 1; k <= d; ++k) h[k] += x * h[k - 1];
  }
  return h;
}

namespace detail {

template <class S>
inline S h_at(const std::vector<S>& h, long k) {
  if (k < 0 || k >= static_cast<long>(h.size())) {
    if (k >= static_cast<long>(h.size())) throw std::logic_error("h table too short");
    return scalar_traits<S>::zero();
  }
  return h[static_cast<std::size_t>(k)];
}

}  // namespace detail

// Jacobi-Trudi determinant s_{lambda/mu} = det[h_{l_i - m_j}]_{N x N},
// N >= max(l(lambda), l(mu)); zero whenever mu is not contained in lambda.
template <class S>
S skew_schur(const Partition& la, const Partition& mu, const Specialization<S>& rho, int padding = -1) {
  const int needed = std::max(la.length(), mu.length());
  const int n = (padding < 0) ? needed : padding;
  if (n < needed) throw std::invalid_argument("skew_schur: padding below max partition length");
  if (n == 0) return scalar_traits<S>::one();
  const int hmax = la.part(0) + n;
  const std::vector<S> h = h_values(rho, std::max(hmax, 0));
  Matrix<S> jt(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      jt(i - 1, j - 1) = detail::h_at(h, la.shifted(i) - mu.shifted(j));
    }
  }
  return det(jt);
}

template <class S>
S schur(const Partition& la, const Specialization<S>& rho) {
  return skew_schur(la, Partition::empty(), rho);
}

// tau_lambda = sum over kappa inside lambda with even conjugate of s_{lambda/kappa}.
template <class S>
S tau_direct(const Partition& la, const Specialization<S>& rho) {
  S out = scalar_traits<S>::zero();
  for (const Partition& ka : subdiagrams(la)) {
    if (ka.conjugate_even()) out += skew_schur(la, ka, rho);
  }
  return out;
}

// Pfaffian route to tau_lambda: pf[ sum_a (h_{l_i-a-1} h_{l_j-a} - h_{l_i-a} h_{l_j-a-1}) ]
// of size 2N >= l(lambda).  The a-sum runs over [-2N, l_1]: the lower end is
// pinned by the 2N x 2N size (columns k_j = kappa_j - j >= -2N), the upper end
// by h_{<0} = 0.
template <class S>
S tau_pf(const Partition& la, const Specialization<S>& rho, int padding = -1) {
  int two_n = (padding < 0) ? la.length() + (la.length() % 2) : padding;
  if (two_n % 2 != 0 || two_n < la.length()) throw std::invalid_argument("tau_pf: padding must be even and >= l(lambda)");
  if (two_n == 0) return scalar_traits<S>::one();
  const long lmax = la.shifted(1);
  const std::vector<S> h = h_values(rho, std::max<long>(la.part(0) + 2 * two_n + 2, 0));
  Matrix<S> a(two_n, two_n);
  for (int i = 1; i <= two_n; ++i) {
    for (int j = 1; j <= two_n; ++j) {
      const long li = la.shifted(i), lj = la.shifted(j);
      S entry = scalar_traits<S>::zero();
      for (long t = -static_cast<long>(two_n); t <= lmax; ++t) {
        entry += detail::h_at(h, li - t - 1) * detail::h_at(h, lj - t) - detail::h_at(h, li - t) * detail::h_at(h, lj - t - 1);
      }
      a(i - 1, j - 1) = entry;
    }
  }
  return pfaffian(SkewMatrix<S>(std::move(a)));
}

// Indicator of "kappa has even conjugate" as a Pfaffian of the delta matrix
// [k_j = k_i - 1] - [k_i = k_j - 1], size 2N >= l(kappa).
inline Rational even_conjugate_indicator(const Partition& ka, int n_pad) {
  const int two_n = 2 * n_pad;
  if (two_n < ka.length()) throw std::invalid_argument("even_conjugate_indicator: padding below l(kappa)");
  if (two_n == 0) return Rational(1);
  Matrix<Rational> a(two_n, two_n);
  for (int i = 1; i <= two_n; ++i) {
    for (int j = 1; j <= two_n; ++j) {
      const long ki = ka.shifted(i), kj = ka.shifted(j);
      Rational v(0);
      if (kj == ki - 1) v += 1;
      if (ki == kj - 1) v -= 1;
      a(i - 1, j - 1) = v;
    }
  }
  return pfaffian(SkewMatrix<Rational>(std::move(a)));
}

namespace detail {
inline bool product_diverges(const Rational& xy) { return abs(xy) >= 1; }
inline bool product_diverges(double xy) { return std::fabs(xy) >= 1.0; }
inline bool product_diverges(const Complex& xy) { return std::abs(xy) >= 1.0; }
}  // namespace detail

// Cauchy identity product H(r1; r2) = prod_{i,j} (1 - x_i y_j)^{-1}.
template <class S>
S cauchy_H(const Specialization<S>& r1, const Specialization<S>& r2) {
  S out = scalar_traits<S>::one();
  for (const S& x : r1.vars) {
    for (const S& y : r2.vars) {
      const S xy = x * y;
      if (detail::product_diverges(xy)) throw std::domain_error("cauchy_H: divergent product, |x*y| >= 1");
      out /= scalar_traits<S>::one() - xy;
    }
  }
  return out;
}

// H°(rho) = prod_{i<j} (1 - x_i x_j)^{-1}, the even-conjugate generating product.
template <class S>
S h_o(const Specialization<S>& rho) {
  S out = scalar_traits<S>::one();
  for (std::size_t i = 0; i < rho.vars.size(); ++i) {
    for (std::size_t j = i + 1; j < rho.vars.size(); ++j) {
      const S xy = rho.vars[i] * rho.vars[j];
      if (detail::product_diverges(xy)) throw std::domain_error("h_o: divergent product, |x_i*x_j| >= 1");
      out /= scalar_traits<S>::one() - xy;
    }
  }
  return out;
}

// Z = prod_{0 <= i < j <= T} H(rho_i^+; rho_j^-).
// rho_plus holds rho_0^+ .. rho_{T-1}^+, rho_minus holds rho_1^- .. rho_T^-.
template <class S>
S schur_Z(const std::vector<Specialization<S>>& rho_plus, const std::vector<Specialization<S>>& rho_minus) {
  if (rho_plus.size() != rho_minus.size()) throw std::invalid_argument("schur_Z: plus/minus level counts differ");
  const int t = static_cast<int>(rho_plus.size());
  S out = scalar_traits<S>::one();
  for (int i = 0; i < t; ++i)
    for (int j = i + 1; j <= t; ++j) out *= cauchy_H(rho_plus[i], rho_minus[j - 1]);
  return out;
}

// Z° = H°(rho^-_{[1,T]}) * prod_{0 <= i < j <= T} H(rho_i^+; rho_j^-).
template <class S>
S pf_Z(const std::vector<Specialization<S>>& rho_plus, const std::vector<Specialization<S>>& rho_minus) {
  Specialization<S> minus_union;
  for (const auto& r : rho_minus) minus_union = union_spec(minus_union, r);
  return h_o(minus_union) * schur_Z(rho_plus, rho_minus);
}

}  // namespace dpp
