#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace kreinkit {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major storage.  The single operator carrier for
/// the toolkit.  Dimensions are desk-scale; the decomposition kernels cap at
/// 32.  Zero-sized matrices are legal and behave as the empty operator (they
/// arise as rank-0 defect blocks).
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Complex(0.0, 0.0)) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols);
  static ComplexMatrix diagonal(const std::vector<Complex>& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }

  const std::vector<Complex>& data() const noexcept { return a_; }

  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex s);

  /// Conjugate transpose.
  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
                      std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const ComplexMatrix& b);

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Complex> a_;
};

ComplexMatrix operator*(Complex s, const ComplexMatrix& m);
ComplexMatrix operator*(double s, const ComplexMatrix& m);

/// Hermitian part (M + M*)/2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// ||M - M*||_F; zero exactly when M is Hermitian.
double hermitian_residual(const ComplexMatrix& m);

/// Largest entrywise |a_ij - b_ij|; throws DimensionError on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// [A B; C D] with consistent block shapes.
ComplexMatrix assemble_2x2(const ComplexMatrix& a, const ComplexMatrix& b,
                           const ComplexMatrix& c, const ComplexMatrix& d);

/// diag(A, B) embedding.
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace kreinkit
