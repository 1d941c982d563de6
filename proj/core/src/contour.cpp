#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dpp/schur_process.hpp"

namespace dpp {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_config(const ContourConfig& cc) {
  if (!power_of_two(cc.quad_points)) throw std::invalid_argument("quad_points must be a power of two");
  if (cc.max_points < cc.quad_points) throw std::invalid_argument("max_points below quad_points");
  if (cc.rel_tol <= 0) throw std::invalid_argument("rel_tol must be positive");
}

// (1/(2 pi i))^2 sum over the n x n product grid; the z dz measure turns the
// circle integral into a plain node average.
Complex trapezoid2(const std::function<Complex(Complex, Complex)>& f, double r_z, double r_w, int n) {
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<Complex> zs(n), ws(n);
  for (int a = 0; a < n; ++a) {
    const double th = step * a;
    zs[a] = Complex(r_z * std::cos(th), r_z * std::sin(th));
    ws[a] = Complex(r_w * std::cos(th), r_w * std::sin(th));
  }
  Complex acc(0.0, 0.0);
  for (int a = 0; a < n; ++a) {
    Complex row(0.0, 0.0);
    for (int b = 0; b < n; ++b) row += f(zs[a], ws[b]) * ws[b];
    acc += row * zs[a];
  }
  return acc / Complex(static_cast<double>(n) * n, 0.0);
}

Complex trapezoid1(const std::function<Complex(Complex)>& f, double r, int n) {
  const double step = 2.0 * std::numbers::pi / n;
  Complex acc(0.0, 0.0);
  for (int a = 0; a < n; ++a) {
    const double th = step * a;
    const Complex z(r * std::cos(th), r * std::sin(th));
    acc += f(z) * z;
  }
  return acc / Complex(static_cast<double>(n), 0.0);
}

}  // namespace

ContourResult contour_integrate(const std::function<Complex(Complex, Complex)>& f, double r_z, double r_w,
                                const ContourConfig& cc) {
  check_config(cc);
  if (r_z <= 0 || r_w <= 0) throw std::invalid_argument("contour_integrate: radii must be positive");
  int n = cc.quad_points;
  Complex prev = trapezoid2(f, r_z, r_w, n);
  ContourResult out{prev, n, 0, false};
  while (2 * n <= cc.max_points) {
    n *= 2;
    ++out.doublings;
    const Complex cur = trapezoid2(f, r_z, r_w, n);
    const double change = std::abs(cur - prev);
    prev = cur;
    if (change <= cc.rel_tol * std::max(1.0, std::abs(cur))) {
      out.value = cur;
      out.quad_points = n;
      out.converged = true;
      return out;
    }
  }
  throw std::runtime_error("contour_integrate: no convergence within " + std::to_string(cc.max_points) +
                           " quadrature points");
}

ContourResult laurent_coefficient(const std::function<Complex(Complex)>& f, long m, double r,
                                  const ContourConfig& cc) {
  check_config(cc);
  if (r <= 0) throw std::invalid_argument("laurent_coefficient: radius must be positive");
  auto g = [&](Complex z) {
    Complex zp(1.0, 0.0);
    const Complex zi = (m >= 0) ? Complex(1.0, 0.0) / z : z;
    for (long k = 0; k < std::labs(m); ++k) zp *= zi;
    return f(z) * zp / z;  // f(z) z^{-m-1}
  };
  int n = cc.quad_points;
  Complex prev = trapezoid1(g, r, n);
  ContourResult out{prev, n, 0, false};
  while (2 * n <= cc.max_points) {
    n *= 2;
    ++out.doublings;
    const Complex cur = trapezoid1(g, r, n);
    const double change = std::abs(cur - prev);
    prev = cur;
    if (change <= cc.rel_tol * std::max(1.0, std::abs(cur))) {
      out.value = cur;
      out.quad_points = n;
      out.converged = true;
      return out;
    }
  }
  throw std::runtime_error("laurent_coefficient: no convergence within " + std::to_string(cc.max_points) +
                           " quadrature points");
}

}  // namespace dpp
