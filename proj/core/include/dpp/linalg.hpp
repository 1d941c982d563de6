#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "dpp/matrix.hpp"

namespace dpp {

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Fraction-free elimination; exact whenever division is exact in S.
template <class S>
S det_bareiss(Matrix<S> w) {
  const int n = w.rows();
  if (n == 0) return scalar_traits<S>::one();
  int sign = 1;
  S prev = scalar_traits<S>::one();
  for (int k = 0; k + 1 < n; ++k) {
    if (scalar_traits<S>::is_zero(w(k, k))) {
      int r = -1;
      for (int i = k + 1; i < n; ++i) {
        if (!scalar_traits<S>::is_zero(w(i, k))) { r = i; break; }
      }
      if (r < 0) return scalar_traits<S>::zero();
      for (int j = 0; j < n; ++j) std::swap(w(k, j), w(r, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        w(i, j) = (w(k, k) * w(i, j) - w(i, k) * w(k, j)) / prev;
      }
      w(i, k) = scalar_traits<S>::zero();
    }
    prev = w(k, k);
  }
  S out = w(n - 1, n - 1);
  if (sign < 0) out = -out;
  return out;
}

// Partial-pivot LU determinant for floating scalars.
template <class S>
S det_lu(Matrix<S> w) {
  const int n = w.rows();
  if (n == 0) return scalar_traits<S>::one();
  S out = scalar_traits<S>::one();
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = scalar_traits<S>::magnitude(w(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double mag = scalar_traits<S>::magnitude(w(i, k));
      if (mag > best) { best = mag; p = i; }
    }
    if (best == 0.0) return scalar_traits<S>::zero();
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(w(k, j), w(p, j));
      out = -out;
    }
    out *= w(k, k);
    for (int i = k + 1; i < n; ++i) {
      const S f = w(i, k) / w(k, k);
      for (int j = k + 1; j < n; ++j) w(i, j) -= f * w(k, j);
    }
  }
  return out;
}

template <class S>
double max_row_norm(const Matrix<S>& a) {
  double best = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
      const double m = scalar_traits<S>::magnitude(a(i, j));
      s += m * m;
    }
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

}  // namespace detail

template <class S>
S det(const Matrix<S>& a) {
  if (!a.is_square()) throw std::invalid_argument("det: matrix is not square");
  if constexpr (scalar_traits<S>::is_exact) {
    return detail::det_bareiss(a);
  } else {
    return detail::det_lu(a);
  }
}

// Floating-point singularity rule: |det| < 1e-12 * (max row norm)^n.
template <class S>
bool is_singular(const Matrix<S>& a, const S& determinant) {
  if constexpr (scalar_traits<S>::is_exact) {
    return scalar_traits<S>::is_zero(determinant);
  } else {
    const int n = a.rows();
    const double scale = std::pow(std::max(detail::max_row_norm(a), 1e-300), n);
    return scalar_traits<S>::magnitude(determinant) < 1e-12 * scale;
  }
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  if (!a.is_square()) throw std::invalid_argument("inverse: matrix is not square");
  const S d = det(a);
  if (is_singular(a, d)) {
    throw SingularMatrixError("inverse: singular matrix, det = " + scalar_debug_string(d));
  }
  const int n = a.rows();
  Matrix<S> w = a;
  Matrix<S> inv = Matrix<S>::identity(n);
  for (int k = 0; k < n; ++k) {
    int p = -1;
    if constexpr (scalar_traits<S>::is_exact) {
      for (int i = k; i < n; ++i) {
        if (!scalar_traits<S>::is_zero(w(i, k))) { p = i; break; }
      }
    } else {
      double best = 0.0;
      for (int i = k; i < n; ++i) {
        const double mag = scalar_traits<S>::magnitude(w(i, k));
        if (mag > best) { best = mag; p = i; }
      }
    }
    if (p < 0) throw SingularMatrixError("inverse: singular matrix, det = " + scalar_debug_string(d));
    if (p != k) {
      for (int j = 0; j < n; ++j) {
        std::swap(w(k, j), w(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    }
    const S piv = w(k, k);
    for (int j = 0; j < n; ++j) {
      w(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const S f = w(i, k);
      if (scalar_traits<S>::is_zero(f)) continue;
      for (int j = 0; j < n; ++j) {
        w(i, j) -= f * w(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

// Skew-symmetric elimination, Parlett-Reid style.  Convention:
// pf [[0,a],[-a,0]] = a, the signed perfect-matching expansion.
template <class S>
S pfaffian(const SkewMatrix<S>& skew) {
  const int n = skew.dim();
  if (n == 0) return scalar_traits<S>::one();
  if (n % 2 == 1) return scalar_traits<S>::zero();
  Matrix<S> w = skew.matrix();
  S out = scalar_traits<S>::one();
  for (int k = 0; k + 1 < n; k += 2) {
    int p = -1;
    if constexpr (scalar_traits<S>::is_exact) {
      for (int i = k + 1; i < n; ++i) {
        if (!scalar_traits<S>::is_zero(w(i, k))) { p = i; break; }
      }
    } else {
      double best = 0.0;
      for (int i = k + 1; i < n; ++i) {
        const double mag = scalar_traits<S>::magnitude(w(i, k));
        if (mag > best) { best = mag; p = i; }
      }
    }
    if (p < 0) return scalar_traits<S>::zero();
    if (p != k + 1) {
      for (int j = 0; j < n; ++j) std::swap(w(k + 1, j), w(p, j));
      for (int i = 0; i < n; ++i) std::swap(w(i, k + 1), w(i, p));
      out = -out;
    }
    const S piv = w(k, k + 1);
    out *= piv;
    std::vector<S> tau(n, scalar_traits<S>::zero());
    for (int i = k + 2; i < n; ++i) tau[i] = w(k, i) / piv;
    for (int i = k + 2; i < n; ++i) {
      for (int j = k + 2; j < n; ++j) {
        w(i, j) += tau[i] * w(j, k + 1) - tau[j] * w(i, k + 1);
      }
    }
  }
  return out;
}

template <class S>
struct BlockInverse {
  Matrix<S> top_left, top_right, bottom_left, bottom_right;
  Matrix<S> m_matrix;  // B D^{-1} C - A
};

// Inverse of [[A,B],[C,D]] in terms of D^{-1} and M = B D^{-1} C - A:
// [[-M^{-1}, M^{-1} B D^{-1}], [D^{-1} C M^{-1}, D^{-1} - D^{-1} C M^{-1} B D^{-1}]].
template <class S>
BlockInverse<S> block_inverse(const Matrix<S>& a, const Matrix<S>& b, const Matrix<S>& c, const Matrix<S>& d) {
  if (!a.is_square() || !d.is_square()) throw std::invalid_argument("block_inverse: A and D must be square");
  if (b.rows() != a.rows() || b.cols() != d.cols() || c.rows() != d.rows() || c.cols() != a.cols()) {
    throw std::invalid_argument("block_inverse: off-diagonal block shapes do not match");
  }
  const Matrix<S> dinv = inverse(d);
  Matrix<S> m = b * dinv * c - a;
  const Matrix<S> minv = inverse(m);
  BlockInverse<S> out{Matrix<S>(), Matrix<S>(), Matrix<S>(), Matrix<S>(), std::move(m)};
  out.top_left = minv * S(-1);
  out.top_right = minv * b * dinv;
  out.bottom_left = dinv * c * minv;
  out.bottom_right = dinv - dinv * c * minv * b * dinv;
  return out;
}

template <class S>
S principal_minor(const Matrix<S>& a, const SubsetIndex& s) {
  if (!a.is_square()) throw std::invalid_argument("principal_minor: matrix is not square");
  check_subset_index(s, a.rows());
  return det(a.submatrix(s, s));
}

template <class S>
S principal_minor(const SkewMatrix<S>& a, const SubsetIndex& s) {
  check_subset_index(s, a.dim());
  return pfaffian(a.principal_submatrix(s));
}

}  // namespace dpp
