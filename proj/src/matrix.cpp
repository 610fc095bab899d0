#include "qcoin/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcoin/error.hpp"

namespace qcoin {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_)
    throw Error(ErrorCode::DimensionMismatch, "entries length must equal dim^2");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix must be square");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v) {
  ComplexMatrix m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
  return r;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::hermiticity_deviation() const {
  double d = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

// ---------------------------------------------------------------------------

std::string DensityMatrix::check(const ComplexMatrix& m) {
  if (m.dim() == 0) return "empty matrix";
  const double scale = 1.0 + m.max_abs();
  if (m.hermiticity_deviation() > kHermitianTolerance * scale) return "not Hermitian";
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > kTraceTolerance || std::abs(tr.imag()) > kTraceTolerance)
    return "trace is not 1";
  const auto eig = hermitian_eig(m);
  if (eig.values.front() < -kPsdTolerance) return "negative eigenvalue";
  return {};
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (auto why = check(m_); !why.empty()) throw Error(ErrorCode::InvalidDensityMatrix, why);
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// ---------------------------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix r(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return r;
}

namespace {

// Unitary U = [[c, s], [-conj(u) s, conj(u) c]] that diagonalizes the
// Hermitian block [[a, z], [conj(z), b]] via U^dagger H U.
struct JacobiRotation {
  double c;
  double s;
  Complex u;
};

JacobiRotation jacobi_rotation(double a, double b, Complex z) {
  const double g = std::abs(z);
  const double tau = (b - a) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, z / g};
}

// X <- X U on columns p, q.
void rotate_columns(ComplexMatrix& x, std::size_t p, std::size_t q, const JacobiRotation& r) {
  const Complex ub = std::conj(r.u);
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const Complex xp = x(k, p), xq = x(k, q);
    x(k, p) = r.c * xp - ub * r.s * xq;
    x(k, q) = r.s * xp + ub * r.c * xq;
  }
}

// X <- U^dagger X on rows p, q.
void rotate_rows(ComplexMatrix& x, std::size_t p, std::size_t q, const JacobiRotation& r) {
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const Complex xp = x(p, k), xq = x(q, k);
    x(p, k) = r.c * xp - r.u * r.s * xq;
    x(q, k) = r.s * xp + r.u * r.c * xq;
  }
}

constexpr int kMaxSweeps = 80;

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& h) {
  const std::size_t n = h.dim();
  if (h.hermiticity_deviation() > 1e-10 * (1.0 + h.max_abs()))
    throw Error(ErrorCode::NonHermitianInput, "hermitian_eig");

  ComplexMatrix a = (h + h.adjoint()) * Complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex z = a(p, q);
        const double app = a(p, p).real(), aqq = a(q, q).real();
        if (std::abs(z) <= 1e-18 * (std::abs(app) + std::abs(aqq)) || std::abs(z) < 1e-300)
          continue;
        const auto r = jacobi_rotation(app, aqq, z);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, r);
        rotated = true;
      }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& h) {
  const auto eig = hermitian_eig(h);
  if (eig.values.front() < -1e-8) throw Error(ErrorCode::NotPSD, "sqrt_psd");
  const std::size_t n = h.dim();
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(eig.values[k], 0.0));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vi = eig.vectors(i, k) * root;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(eig.vectors(j, k));
    }
  }
  return r;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  ComplexMatrix x = a;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          alpha += std::norm(x(k, p));
          beta += std::norm(x(k, q));
          gamma += std::conj(x(k, p)) * x(k, q);
        }
        if (std::abs(gamma) <= 1e-17 * std::sqrt(alpha * beta) || std::abs(gamma) < 1e-300)
          continue;
        rotate_columns(x, p, q, jacobi_rotation(alpha, beta, gamma));
        rotated = true;
      }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(x(i, k));
    sv[k] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

namespace {

// F such that F F^dagger = m, keeping eigen-directions above the numerical
// rank threshold. Dropped columns are left zero.
ComplexMatrix psd_factor(const ComplexMatrix& m) {
  const auto eig = hermitian_eig(m);
  const std::size_t n = m.dim();
  const double threshold = 64.0 * 2.220446049250313e-16 * std::max(eig.values.back(), 0.0);
  ComplexMatrix f(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.values[k] <= threshold) continue;
    const double root = std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) f(i, k) = eig.vectors(i, k) * root;
  }
  return f;
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorCode::DimensionMismatch, "fidelity");
  // Tr sqrt(sqrt(rho) sigma sqrt(rho)) equals the trace norm of A^dagger B
  // for any factors rho = A A^dagger, sigma = B B^dagger.
  const ComplexMatrix overlap = psd_factor(rho.matrix()).adjoint() * psd_factor(sigma.matrix());
  const auto sv = singular_values(overlap);
  const double root = std::accumulate(sv.begin(), sv.end(), 0.0);
  return std::clamp(root * root, 0.0, 1.0);
}

}  // namespace qcoin
