#include "sgq/spatial.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgq {

double SpatialHierarchy::pair(std::span<const double> functional, std::span<const double> coeffs) const {
  if (functional.size() != coeffs.size())
    throw std::invalid_argument("functional has " + std::to_string(functional.size()) +
                                " coefficients, element has " + std::to_string(coeffs.size()));
  return std::inner_product(functional.begin(), functional.end(), coeffs.begin(), 0.0);
}

std::vector<double> ScalarHierarchy::prolong(std::span<const double> coeffs, unsigned, unsigned) const {
  return {coeffs.begin(), coeffs.end()};
}

double ScalarHierarchy::norm(std::span<const double> coeffs, unsigned) const {
  return coeffs.empty() ? 0.0 : std::abs(coeffs[0]);
}

std::size_t Fem1D::dofs(unsigned level) { return (std::size_t{1} << level) - 1; }

double Fem1D::mesh_size(unsigned level) { return std::ldexp(1.0, -static_cast<int>(level)); }

std::vector<double> Fem1D::nodes(unsigned level) {
  std::vector<double> x(dofs(level));
  const double h = mesh_size(level);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i + 1) * h;
  return x;
}

std::vector<double> Fem1D::prolong(std::span<const double> coeffs, unsigned from, unsigned to) const {
  if (to < from) throw std::invalid_argument("Fem1D::prolong: target level below source");
  if (coeffs.size() != dofs(from)) throw std::invalid_argument("Fem1D::prolong: size mismatch");
  std::vector<double> cur(coeffs.begin(), coeffs.end());
  for (unsigned l = from; l < to; ++l) {
    std::vector<double> next(dofs(l + 1));
    const std::size_t n = cur.size();
    // fine node 2i+1 coincides with coarse node i; even fine nodes are midpoints.
    for (std::size_t i = 0; i < n; ++i) next[2 * i + 1] = cur[i];
    for (std::size_t i = 0; i <= n; ++i) {
      const double left = i > 0 ? cur[i - 1] : 0.0;
      const double right = i < n ? cur[i] : 0.0;
      next[2 * i] = 0.5 * (left + right);
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> Fem1D::restrict_nodal(std::span<const double> coeffs, unsigned from, unsigned to) const {
  if (to > from) throw std::invalid_argument("Fem1D::restrict_nodal: target level above source");
  if (coeffs.size() != dofs(from)) throw std::invalid_argument("Fem1D::restrict_nodal: size mismatch");
  const std::size_t stride = std::size_t{1} << (from - to);
  std::vector<double> out(dofs(to));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs[(i + 1) * stride - 1];
  return out;
}

double Fem1D::norm(std::span<const double> coeffs, unsigned level) const { return norms(coeffs, level).h1; }

Fem1D::Norms Fem1D::norms(std::span<const double> coeffs, unsigned level) const {
  if (coeffs.size() != dofs(level)) throw std::invalid_argument("Fem1D::norms: size mismatch");
  const double h = mesh_size(level);
  const std::size_t n = coeffs.size();
  double l2 = 0.0, h1 = 0.0;
  for (std::size_t e = 0; e <= n; ++e) {
    const double u0 = e > 0 ? coeffs[e - 1] : 0.0;
    const double u1 = e < n ? coeffs[e] : 0.0;
    l2 += h * (u0 * u0 + u0 * u1 + u1 * u1) / 3.0;
    h1 += (u1 - u0) * (u1 - u0) / h;
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

namespace {

constexpr std::array<double, 5> kGaussX = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                           0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussW = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                           0.4786286704993665, 0.2369268850561891};

}  // namespace

double Fem1D::h1_error(std::span<const double> coeffs, unsigned level, const Function& dw) const {
  if (coeffs.size() != dofs(level)) throw std::invalid_argument("Fem1D::h1_error: size mismatch");
  const double h = mesh_size(level);
  const std::size_t n = coeffs.size();
  double s = 0.0;
  for (std::size_t e = 0; e <= n; ++e) {
    const double u0 = e > 0 ? coeffs[e - 1] : 0.0;
    const double u1 = e < n ? coeffs[e] : 0.0;
    const double slope = (u1 - u0) / h;
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double x = h * (e + 0.5 * (1.0 + kGaussX[q]));
      const double d = dw(x) - slope;
      s += 0.5 * h * kGaussW[q] * d * d;
    }
  }
  return std::sqrt(s);
}

double Fem1D::l2_error(std::span<const double> coeffs, unsigned level, const Function& w) const {
  if (coeffs.size() != dofs(level)) throw std::invalid_argument("Fem1D::l2_error: size mismatch");
  const double h = mesh_size(level);
  const std::size_t n = coeffs.size();
  double s = 0.0;
  for (std::size_t e = 0; e <= n; ++e) {
    const double u0 = e > 0 ? coeffs[e - 1] : 0.0;
    const double u1 = e < n ? coeffs[e] : 0.0;
    for (std::size_t q = 0; q < kGaussX.size(); ++q) {
      const double t = 0.5 * (1.0 + kGaussX[q]);
      const double d = w(h * (e + t)) - ((1.0 - t) * u0 + t * u1);
      s += 0.5 * h * kGaussW[q] * d * d;
    }
  }
  return std::sqrt(s);
}

std::vector<double> Fem1D::project(unsigned level, const Function& w) const {
  std::vector<double> x = nodes(level);
  for (double& v : x) v = w(v);
  return x;
}

std::vector<double> Fem1D::solve(unsigned level, const Function& a, const Function& f) const {
  const std::size_t elems = std::size_t{1} << level;
  const double h = mesh_size(level);
  std::vector<double> a_elem(elems), f_elem(elems);
  for (std::size_t e = 0; e < elems; ++e) {
    const double mid = (e + 0.5) * h;
    a_elem[e] = a(mid);
    f_elem[e] = f(mid);
  }
  return solve_elementwise(level, a_elem, f_elem);
}

std::vector<double> Fem1D::solve_elementwise(unsigned level, std::span<const double> a_elem,
                                             std::span<const double> f_elem) const {
  const std::size_t elems = std::size_t{1} << level;
  if (a_elem.size() != elems || f_elem.size() != elems)
    throw std::invalid_argument("Fem1D::solve: need one coefficient per element");
  const std::size_t n = dofs(level);
  if (n == 0) return {};
  const double h = mesh_size(level);

  // Tridiagonal stiffness: diag_i = (a_i + a_{i+1}) / h, off_i = -a_{i+1} / h.
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = (a_elem[i] + a_elem[i + 1]) / h;
    rhs[i] = 0.5 * h * (f_elem[i] + f_elem[i + 1]);
    if (i + 1 < n) off[i] = -a_elem[i + 1] / h;
  }

  // Thomas algorithm; a nonpositive pivot means the bilinear form is not coercive.
  std::vector<double> c(n), d(n), u(n);
  double pivot = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) pivot = diag[i] - off[i - 1] * c[i - 1];
    if (!(pivot > 0.0)) {
      std::ostringstream os;
      os << "Fem1D::solve: stiffness matrix not positive definite at row " << i
         << " (diffusion coefficient not uniformly positive?)";
      throw std::runtime_error(os.str());
    }
    c[i] = i + 1 < n ? off[i] / pivot : 0.0;
    d[i] = (rhs[i] - (i > 0 ? off[i - 1] * d[i - 1] : 0.0)) / pivot;
  }
  for (std::size_t i = n; i-- > 0;) u[i] = d[i] - (i + 1 < n ? c[i] * u[i + 1] : 0.0);

  double res = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = diag[i] * u[i] - rhs[i];
    double scale = std::abs(diag[i] * u[i]) + std::abs(rhs[i]);
    if (i > 0) {
      r += off[i - 1] * u[i - 1];
      scale += std::abs(off[i - 1] * u[i - 1]);
    }
    if (i + 1 < n) {
      r += off[i] * u[i + 1];
      scale += std::abs(off[i] * u[i + 1]);
    }
    res = std::max(res, std::abs(r));
    ref = std::max(ref, scale);
  }
  // normwise backward error: |A u - f| relative to |A| |u| + |f|
  if (res > 1e-12 * ref && res > 0.0) {
    std::ostringstream os;
    os << "Fem1D::solve: relative residual " << res / ref << " exceeds 1e-12";
    throw std::runtime_error(os.str());
  }
  return u;
}

std::vector<double> detail(const SpatialHierarchy& h, unsigned level, const LevelSampler& sampler) {
  std::vector<double> fine = sampler(level);
  if (fine.size() != h.dim(level)) throw std::invalid_argument("detail: sampler returned wrong size");
  if (level == 0) return fine;
  const std::vector<double> coarse = h.prolong(sampler(level - 1), level - 1, level);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] -= coarse[i];
  return fine;
}

double fitted_slope(std::span<const double> m, std::span<const double> errors) {
  if (m.size() != errors.size() || m.size() < 2) throw std::invalid_argument("fitted_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = std::log(m[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sgq
