#ifndef PEQ_LINALG_HPP
#define PEQ_LINALG_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "peq/error.hpp"

namespace peq {
namespace cstar {

/// Exact Gaussian rational a + b i with GMP rational components.
struct Scalar {
  mpq_class re, im;

  Scalar() : re(0), im(0) {}
  Scalar(long r) : re(r), im(0) {}
  Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  Scalar conj() const { return Scalar(re, -im); }

  Scalar operator+(const Scalar& o) const { return {re + o.re, im + o.im}; }
  Scalar operator-(const Scalar& o) const { return {re - o.re, im - o.im}; }
  Scalar operator-() const { return {-re, -im}; }
  Scalar operator*(const Scalar& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  Scalar inverse() const {
    mpq_class n = re * re + im * im;
    if (n == 0) throw AxiomError("DivisionByZero", "scalar inverse");
    return {re / n, -im / n};
  }
  Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

  bool operator==(const Scalar& o) const { return re == o.re && im == o.im; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string str() const;
  static Scalar parse(const std::string& text);
};

using Vec = std::vector<Scalar>;

/// Dense matrix over the Gaussian rationals.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<Scalar> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(r * c) {}
  static Mat identity(int n);
  static Mat unit(int n, int i, int j);  // matrix unit E_ij

  Scalar& at(int i, int j) { return a[i * cols + j]; }
  const Scalar& at(int i, int j) const { return a[i * cols + j]; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat scaled(const Scalar& c) const;
  Mat adjoint() const;  // conjugate transpose
  Scalar trace() const;
  bool is_zero() const;
  bool operator==(const Mat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }

  Vec flatten() const { return a; }
  static Mat unflatten(int r, int c, const Vec& v);

  // Kronecker-style: the matrix of X -> (*this) * X on n x n matrices,
  // with row-major flattening.
  Mat left_mult_operator(int n) const;
};

/// Reduced row echelon form of a family of vectors; the row space with
/// exact membership and coordinate solving.
class RowSpace {
public:
  RowSpace() = default;
  explicit RowSpace(int width) : width_(width) {}

  int width() const { return width_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& rows() const { return rows_; }

  // returns true if the vector enlarged the space
  bool add(Vec v);
  void add_all(const std::vector<Vec>& vs) {
    for (const auto& v : vs) add(v);
  }

  bool contains(Vec v) const;
  Vec reduce(Vec v) const;  // residual after elimination

  bool same_space(const RowSpace& o) const;
  bool contains_space(const RowSpace& o) const;

private:
  int width_ = 0;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

// Solve the linear system: express v in the span of `basis` (which need
// not be echelonized); returns coordinates or nullopt.
std::optional<Vec> solve_coordinates(const std::vector<Vec>& basis, const Vec& v);

// Basis of the kernel of the linear map given by applying `image` to the
// standard basis: vectors x with sum x_i image[i] = 0.
std::vector<Vec> kernel_basis(const std::vector<Vec>& image, int width);

// Exact positive semidefiniteness of a Hermitian matrix by pivoted Schur
// complements.
bool is_positive_semidefinite(const Mat& m);

// Monic minimal polynomial (low to high coefficients, trailing 1) of the
// element with the given powers-in-coordinates generator: powers[k] is
// the coordinate vector of w^k; the caller supplies a function producing
// the next power.
std::vector<Scalar> minimal_polynomial(const std::function<Vec(int)>& power,
                                       int max_degree);

// All rational roots with multiplicity of a polynomial with rational
// (real) coefficients, lowest degree first; also reports whether the
// polynomial splits completely over the rationals.
struct RationalRoots {
  std::vector<mpq_class> roots;
  bool complete = false;  // product of linear factors over Q
};

RationalRoots rational_roots(std::vector<mpq_class> coeffs);

}  // namespace cstar
}  // namespace peq

#endif
