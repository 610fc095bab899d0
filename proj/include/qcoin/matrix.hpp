#pragma once

// Small dense complex matrices (dim <= ~16) and the fidelity machinery built
// on a complex Jacobi eigensolver.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qcoin {

using Complex = std::complex<double>;

/// Square complex matrix stored row-major. Value type; every operation
/// returns a new matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::initializer_list<double> values);
  /// |v><v|
  static ComplexMatrix outer(std::span<const Complex> v);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  /// max |a_ij - conj(a_ji)|
  double hermiticity_deviation() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// A ComplexMatrix that passed the density-matrix checks: Hermitian,
/// unit trace and positive semidefinite within tolerance.
class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-10;
  static constexpr double kPsdTolerance = 1e-10;

  /// Throws Error{InvalidDensityMatrix} when a check fails.
  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  double purity() const;

  /// Reason the matrix is not a density matrix, or empty when it is.
  static std::string check(const ComplexMatrix& m);

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Cyclic complex Jacobi. Input is symmetrized as (h + h^dagger)/2; throws
/// NonHermitianInput when the deviation exceeds 1e-10 * (1 + max|h|).
EigenDecomposition hermitian_eig(const ComplexMatrix& h);

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
/// clamped to zero; anything below throws NotPSD.
ComplexMatrix sqrt_psd(const ComplexMatrix& h);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const ComplexMatrix& a);

/// Uhlmann fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qcoin
