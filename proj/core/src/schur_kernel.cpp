#include <cmath>
#include <stdexcept>

#include "dpp/schur_process.hpp"

namespace dpp {

namespace {

Complex ipow(Complex z, long e) {
  if (e < 0) return Complex(1.0, 0.0) / ipow(z, -e);
  Complex out(1.0, 0.0);
  while (e > 0) {
    if (e & 1) out *= z;
    z *= z;
    e >>= 1;
  }
  return out;
}

// H(rho; z) = prod_i (1 - x_i z)^{-1} for a finite real specialization.
Complex h_eval(const std::vector<double>& vars, Complex z) {
  Complex out(1.0, 0.0);
  for (double x : vars) out /= Complex(1.0, 0.0) - x * z;
  return out;
}

double effective_rho(const SchurSpec<double>& spec) {
  const double rho = spec.rho_max();
  if (rho >= 1.0) throw std::domain_error("schur kernel: variables must lie strictly inside the unit disc");
  return std::max(rho, 0.25);
}

void check_radius(double r, const SchurSpec<double>& spec) {
  const double margin = 1e-9;
  if (r <= 0) throw std::invalid_argument("contour radius must be positive");
  if (std::fabs(r - 1.0) < margin) throw std::invalid_argument("contour radius collides with the poles at |z| = 1");
  auto probe = [&](const Specialization<double>& rho) {
    for (double x : rho.vars) {
      const double ax = std::fabs(x);
      if (ax > 0 && (std::fabs(r - 1.0 / ax) < margin || std::fabs(r - ax) < margin))
        throw std::invalid_argument("contour radius collides with a pole modulus");
    }
  };
  for (const auto& rho : spec.rho_plus) probe(rho);
  for (const auto& rho : spec.rho_minus) probe(rho);
}

}  // namespace

std::pair<double, double> schur_contour_radii(const SchurSpec<double>& spec, int i, int j) {
  const double rho = effective_rho(spec);
  const double r = (i <= j) ? 0.5 * (1.0 + 1.0 / rho) : 0.5 * (1.0 + rho);
  return {r, r};
}

Complex schur_kernel(const SchurSpec<double>& spec, int i, long u, int j, long v, const ContourConfig& cc) {
  spec.validate();
  if (i < 1 || i > spec.t || j < 1 || j > spec.t) throw std::invalid_argument("schur_kernel: level out of range");
  auto [r_z, r_w] = schur_contour_radii(spec, i, j);
  if (cc.r_z > 0) r_z = cc.r_z;
  if (cc.r_w > 0) r_w = cc.r_w;
  check_radius(r_z, spec);
  check_radius(r_w, spec);

  const auto num_z = spec.minus_union(i, spec.t).vars;   // rho^-_{[i,T]}
  const auto num_w = spec.plus_union(0, j).vars;         // rho^+_{[0,j)}
  const auto den_z = spec.plus_union(0, i).vars;         // rho^+_{[0,i)} at z^{-1}
  const auto den_w = spec.minus_union(j, spec.t).vars;   // rho^-_{[j,T]} at w^{-1}

  auto f = [&](Complex z, Complex w) {
    const Complex one(1.0, 0.0);
    Complex val = h_eval(num_z, z) * h_eval(num_w, w);
    val /= (z * w - one);
    val /= h_eval(den_z, one / z);
    val /= h_eval(den_w, one / w);
    return val * ipow(z, -u - 1) * ipow(w, -v - 1);
  };
  return contour_integrate(f, r_z, r_w, cc).value;
}

namespace {

struct PfRadii {
  double k11_z, k11_w;
  double k12_z, k12_w_ge;  // i >= j branch (|zw| > 1)
  double k12_w_lt;         // i < j branch (|zw| < 1)
  double k22_z, k22_w;
};

PfRadii pf_radii(const SchurSpec<double>& spec) {
  const double rho = effective_rho(spec);
  PfRadii r{};
  const double outer = 0.5 * (1.0 + 1.0 / rho);
  const double inner = 0.5 * (1.0 + rho);
  r.k11_z = r.k11_w = outer;
  r.k12_z = outer;
  const double c_hi = 0.5 * (1.0 + outer / rho);  // midway in (1, r_z / rho)
  r.k12_w_ge = c_hi / outer;
  r.k12_w_lt = 0.5 / outer;  // |zw| = 1/2
  r.k22_z = r.k22_w = inner;
  return r;
}

}  // namespace

Complex pf_schur_k12(const SchurSpec<double>& spec, int i, long u, int j, long v, bool zw_outer,
                     const ContourConfig& cc) {
  spec.validate();
  if (i < 1 || i > spec.t || j < 1 || j > spec.t) throw std::invalid_argument("pf_schur_k12: level out of range");
  const PfRadii radii = pf_radii(spec);
  const Complex one(1.0, 0.0);
  const auto m_i = spec.minus_union(i, spec.t).vars;
  const auto m_j = spec.minus_union(j, spec.t).vars;
  const auto x_i = union_spec(spec.minus_union(1, spec.t), spec.plus_union(0, i)).vars;
  const auto x_j = union_spec(spec.minus_union(1, spec.t), spec.plus_union(0, j)).vars;
  auto f = [&](Complex z, Complex w) {
    Complex val = (z - w) / ((z * z - one) * (z * w - one) * w);
    val *= h_eval(m_i, z) * h_eval(x_j, w);
    val /= h_eval(x_i, one / z) * h_eval(m_j, one / w);
    return val * ipow(z, -u) * ipow(w, -v);
  };
  const double r_w = zw_outer ? radii.k12_w_ge : radii.k12_w_lt;
  check_radius(radii.k12_z, spec);
  check_radius(r_w, spec);
  return contour_integrate(f, radii.k12_z, r_w, cc).value;
}

PfKernelBlock pf_schur_kernel(const SchurSpec<double>& spec, int i, long u, int j, long v, const ContourConfig& cc) {
  spec.validate();
  if (!spec.pfaffian_mode) throw std::invalid_argument("pf_schur_kernel: spec is not in pfaffian mode");
  if (i < 1 || i > spec.t || j < 1 || j > spec.t) throw std::invalid_argument("pf_schur_kernel: level out of range");
  const PfRadii radii = pf_radii(spec);
  const Complex one(1.0, 0.0);

  const auto minus_i = spec.minus_union(i, spec.t).vars;
  const auto minus_j = spec.minus_union(j, spec.t).vars;
  const auto mixed_i = union_spec(spec.minus_union(1, spec.t), spec.plus_union(0, i)).vars;
  const auto mixed_j = union_spec(spec.minus_union(1, spec.t), spec.plus_union(0, j)).vars;

  PfKernelBlock out{};

  {
    auto f = [&](Complex z, Complex w) {
      Complex val = (z - w) / ((z * z - one) * (w * w - one) * (z * w - one));
      val *= h_eval(minus_i, z) * h_eval(minus_j, w);
      val /= h_eval(mixed_i, one / z) * h_eval(mixed_j, one / w);
      return val * ipow(z, -u) * ipow(w, -v);
    };
    check_radius(radii.k11_z, spec);
    out.k11 = contour_integrate(f, radii.k11_z, radii.k11_w, cc).value;
  }

  // K12 case rule: |zw| > 1 for i >= j, |zw| < 1 for i < j.
  out.k12 = pf_schur_k12(spec, i, u, j, v, i >= j, cc);
  out.k21 = -pf_schur_k12(spec, j, v, i, u, j >= i, cc);

  {
    auto f = [&](Complex z, Complex w) {
      Complex val = (z - w) / (z * w * (one - z * w));
      val *= h_eval(mixed_i, z) * h_eval(mixed_j, w);
      val /= h_eval(minus_i, one / z) * h_eval(minus_j, one / w);
      return val * ipow(z, -u) * ipow(w, -v);
    };
    check_radius(radii.k22_z, spec);
    out.k22 = contour_integrate(f, radii.k22_z, radii.k22_w, cc).value;
  }
  return out;
}

Complex schur_kernel_det(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                         const ContourConfig& cc) {
  const int s = static_cast<int>(points.size());
  Matrix<Complex> m(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      m(a, b) = schur_kernel(spec, points[a].level, points[a].position, points[b].level, points[b].position, cc);
  return det(m);
}

Matrix<Complex> pf_schur_kernel_matrix(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                                       const ContourConfig& cc) {
  const int s = static_cast<int>(points.size());
  Matrix<Complex> m(2 * s, 2 * s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      const PfKernelBlock blk =
          pf_schur_kernel(spec, points[a].level, points[a].position, points[b].level, points[b].position, cc);
      m(2 * a, 2 * b) = blk.k11;
      m(2 * a, 2 * b + 1) = blk.k12;
      m(2 * a + 1, 2 * b) = blk.k21;
      m(2 * a + 1, 2 * b + 1) = blk.k22;
    }
  }
  return m;
}

double max_skew_defect(const Matrix<Complex>& m) {
  double worst = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i; j < m.cols(); ++j) worst = std::max(worst, std::abs(m(i, j) + m(j, i)));
  return worst;
}

Complex pf_schur_correlation(const SchurSpec<double>& spec, const std::vector<SpacePoint>& points,
                             const ContourConfig& cc) {
  Matrix<Complex> m = pf_schur_kernel_matrix(spec, points, cc);
  Matrix<Complex> anti = (m - m.transpose()) * Complex(0.5, 0.0);
  return pfaffian(SkewMatrix<Complex>(std::move(anti)));
}

namespace {

// Coefficient sequence c_m of H(rho_minus; z) H(rho_plus; z^{-1}):
// c_m = sum_q h_{m+q}(rho_minus) h_q(rho_plus), summed under a geometric
// stabilization check (table size doubling).
std::vector<double> symbol_coefficients(const Specialization<double>& rho_minus,
                                        const Specialization<double>& rho_plus, long m_min, long m_max) {
  double max_minus = 0.0, max_plus = 0.0;
  for (double x : rho_minus.vars) max_minus = std::max(max_minus, std::fabs(x));
  for (double x : rho_plus.vars) max_plus = std::max(max_plus, std::fabs(x));
  if (max_minus * max_plus >= 1.0) throw std::domain_error("toeplitz symbol diverges: max|x| * max|y| >= 1");

  const long span = m_max - m_min + 1;
  std::vector<double> prev(span, 0.0);
  for (int depth = 128; depth <= 16384; depth *= 2) {
    const auto hm = h_values(rho_minus, static_cast<int>(std::max<long>(m_max + depth, depth)));
    const auto hp = h_values(rho_plus, depth);
    std::vector<double> cur(span, 0.0);
    for (long m = m_min; m <= m_max; ++m) {
      double acc = 0.0;
      for (long q = std::max<long>(0, -m); q <= depth; ++q) acc += hm[m + q] * hp[q];
      cur[m - m_min] = acc;
    }
    double change = 0.0, scale = 1.0;
    for (long k = 0; k < span; ++k) {
      change = std::max(change, std::fabs(cur[k] - prev[k]));
      scale = std::max(scale, std::fabs(cur[k]));
    }
    prev = std::move(cur);
    if (depth > 128 && change <= 1e-15 * scale) return prev;
  }
  throw std::runtime_error("toeplitz symbol coefficients did not stabilize");
}

}  // namespace

Matrix<double> toeplitz_W(const Specialization<double>& rho_minus, const Specialization<double>& rho_plus,
                          long u_min, long u_max) {
  if (u_min > u_max) throw std::invalid_argument("toeplitz_W: empty window");
  const long span = u_max - u_min;
  const auto coeff = symbol_coefficients(rho_minus, rho_plus, -span, span);
  const int n = static_cast<int>(span + 1);
  Matrix<double> w(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w(a, b) = coeff[(a - b) + span];
  return w;
}

Matrix<double> toeplitz_interval_W(const SchurSpec<double>& spec, int i, int j, long u_min, long u_max) {
  spec.validate();
  if (i >= j) {
    const int n = static_cast<int>(u_max - u_min + 1);
    return Matrix<double>(n, n);
  }
  return toeplitz_W(spec.minus_union(i, j - 1), spec.plus_union(i, j), u_min, u_max);
}

SkewMatrix<double> epsilon_toeplitz(const Specialization<double>& rho, long u_min, long u_max) {
  if (u_min > u_max) throw std::invalid_argument("epsilon_toeplitz: empty window");
  const long span = u_max - u_min;
  const auto coeff = symbol_coefficients(rho, rho, 0, span + 1);  // symmetric: g_{-m} = g_m
  auto g = [&](long m) { return coeff[std::labs(m)]; };
  const int n = static_cast<int>(span + 1);
  Matrix<double> eps(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const long m = a - b;
      eps(a, b) = g(m - 1) - g(m + 1);
    }
  }
  return SkewMatrix<double>(std::move(eps));
}

}  // namespace dpp
