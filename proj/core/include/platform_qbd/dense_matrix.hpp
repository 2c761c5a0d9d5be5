#pragma once

#include <cstddef>
#include <vector>

namespace pqbd {

using Vec = std::vector<double>;

// Dense row-major matrix. Small and deliberately boring: the models in this
// library top out at a few thousand rows, so there is no blocking or BLAS.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Mat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  Mat& operator+=(const Mat& other);
  Mat& operator-=(const Mat& other);
  Mat& operator*=(double s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, Mat a);

Mat transpose(const Mat& a);

// Largest |entry|; zero for an empty matrix.
double max_abs(const Mat& a);
double max_abs(const Vec& v);

// y = x * a for a row vector x.
Vec vec_mat(const Vec& x, const Mat& a);
// y = a * x for a column vector x.
Vec mat_vec(const Mat& a, const Vec& x);

double dot(const Vec& a, const Vec& b);
double sum(const Vec& v);
Vec ones(std::size_t n);

// Kronecker product of arbitrary rectangular matrices.
Mat kron_product(const Mat& a, const Mat& b);
// Kronecker sum a ⊗ I + I ⊗ b; both operands must be square.
Mat kron_sum(const Mat& a, const Mat& b);

// LU factorization with partial pivoting. `allow_singular` keeps going past
// tiny pivots (recording them) so callers can locate the redundant equation
// of a rank-deficient system; solving with such a factor is refused.
class LuFactor {
 public:
  explicit LuFactor(Mat a, bool allow_singular = false);

  Vec solve(Vec b) const;
  Mat solve(Mat b) const;  // multi-RHS: solves A X = B column-wise

  bool singular() const { return singular_count_ > 0; }
  std::size_t singular_count() const { return singular_count_; }
  double min_pivot() const { return min_pivot_; }
  // Original row index of the weakest pivot (the equation that went
  // redundant first under partial pivoting).
  std::size_t min_pivot_equation() const { return min_pivot_equation_; }

 private:
  Mat lu_;
  std::vector<std::size_t> perm_;
  double min_pivot_ = 0.0;
  std::size_t min_pivot_equation_ = 0;
  std::size_t singular_count_ = 0;
};

Vec solve_dense(const Mat& a, const Vec& b);
Mat solve_dense(const Mat& a, const Mat& b);

// Left null vector of a conservative generator, normalized to sum 1.
// The redundant balance equation (weakest pivot) is replaced by the
// normalization row. Rank deficiency beyond one dimension is an error.
Vec stationary_from_generator(const Mat& q);

// Spectral radius via power iteration from the all-ones vector; if the
// iteration stalls (e.g. complex dominant pair) the modulus is taken from
// the 2x2 Rayleigh block spanned by the last two iterates.
double spectral_radius(const Mat& a, double tol = 1e-10, std::size_t max_iter = 20000);

// w = exp(q t) v by uniformization. Long horizons are split so each step's
// Poisson weights stay representable. Entrywise truncation error <= tol.
Vec expm_action(const Mat& q, const Vec& v, double t, double tol = 1e-12);

}  // namespace pqbd
