#include "platform_qbd/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "platform_qbd/errors.hpp"

namespace pqbd {

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat& Mat::operator+=(const Mat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("matrix sub: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

Mat operator+(Mat a, const Mat& b) { return a += b; }
Mat operator-(Mat a, const Mat& b) { return a -= b; }
Mat operator*(double s, Mat a) { return a *= s; }

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: shape mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

double max_abs(const Mat& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vec vec_mat(const Vec& x, const Mat& a) {
  if (x.size() != a.rows()) throw DimensionError("vec_mat: shape mismatch");
  Vec y(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) y[j] += xi * ai[j];
  }
  return y;
}

Vec mat_vec(const Mat& a, const Vec& x) {
  if (x.size() != a.cols()) throw DimensionError("mat_vec: shape mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sum(const Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

Vec ones(std::size_t n) { return Vec(n, 1.0); }

Mat kron_product(const Mat& a, const Mat& b) {
  Mat c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

Mat kron_sum(const Mat& a, const Mat& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols())
    throw DimensionError("kron_sum: operands must be square");
  return kron_product(a, Mat::identity(b.rows())) +
         kron_product(Mat::identity(a.rows()), b);
}

LuFactor::LuFactor(Mat a, bool allow_singular) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw DimensionError("lu: matrix must be square");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double scale = max_abs(lu_);
  const double tol = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  min_pivot_ = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
    }
    const double piv = lu_(k, k);
    const double apiv = std::abs(piv);
    if (apiv < min_pivot_) {
      min_pivot_ = apiv;
      min_pivot_equation_ = perm_[k];
    }
    if (apiv <= tol || apiv == 0.0) {
      ++singular_count_;
      if (!allow_singular) throw SingularMatrixError(k, piv);
      continue;  // treat as an exact zero pivot, skip elimination
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / piv;
      lu_(i, k) = m;
      if (m == 0.0) continue;
      const double* rk = lu_.row(k);
      double* ri = lu_.row(i);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
    }
  }
}

Vec LuFactor::solve(Vec b) const {
  const std::size_t n = lu_.rows();
  if (b.size() != n) throw DimensionError("lu solve: rhs size mismatch");
  if (singular_count_ > 0) throw SolverError("lu solve: factor is singular");
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = b[perm_[i]];
  for (std::size_t i = 1; i < n; ++i) {
    const double* ri = lu_.row(i);
    double s = y[i];
    for (std::size_t j = 0; j < i; ++j) s -= ri[j] * y[j];
    y[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const double* ri = lu_.row(i);
    double s = y[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * y[j];
    y[i] = s / ri[i];
  }
  return y;
}

Mat LuFactor::solve(Mat b) const {
  const std::size_t n = lu_.rows();
  if (b.rows() != n) throw DimensionError("lu solve: rhs rows mismatch");
  if (singular_count_ > 0) throw SolverError("lu solve: factor is singular");
  const std::size_t m = b.cols();
  Mat y(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = b.row(perm_[i]);
    std::copy(src, src + m, y.row(i));
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double* ri = lu_.row(i);
    double* yi = y.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double f = ri[j];
      if (f == 0.0) continue;
      const double* yj = y.row(j);
      for (std::size_t c = 0; c < m; ++c) yi[c] -= f * yj[c];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    const double* ri = lu_.row(i);
    double* yi = y.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double f = ri[j];
      if (f == 0.0) continue;
      const double* yj = y.row(j);
      for (std::size_t c = 0; c < m; ++c) yi[c] -= f * yj[c];
    }
    const double d = ri[i];
    for (std::size_t c = 0; c < m; ++c) yi[c] /= d;
  }
  return y;
}

Vec solve_dense(const Mat& a, const Vec& b) { return LuFactor(a).solve(b); }
Mat solve_dense(const Mat& a, const Mat& b) { return LuFactor(a).solve(std::move(b)); }

Vec stationary_from_generator(const Mat& q) {
  const std::size_t n = q.rows();
  if (n == 0 || q.cols() != n) throw DimensionError("stationary: generator must be square");
  if (n == 1) return Vec{1.0};

  Mat m = transpose(q);
  LuFactor probe(m, /*allow_singular=*/true);
  if (probe.singular_count() > 1)
    throw SolverError("stationary: rank deficiency beyond the single redundant balance equation");
  const std::size_t redundant = probe.min_pivot_equation();

  Mat m2 = transpose(q);
  for (std::size_t j = 0; j < n; ++j) m2(redundant, j) = 1.0;
  Vec rhs(n, 0.0);
  rhs[redundant] = 1.0;
  Vec pi = LuFactor(m2).solve(std::move(rhs));

  const double peak = max_abs(pi);
  for (double& x : pi)
    if (x < 0.0 && x > -1e-9 * peak) x = 0.0;
  const double total = sum(pi);
  if (!(total > 0.0)) throw SolverError("stationary: normalization failed");
  for (double& x : pi) x /= total;

  const Vec residual = vec_mat(pi, q);
  const double rtol = 1e-6 * std::max(1.0, max_abs(q));
  if (max_abs(residual) > rtol)
    throw SolverError("stationary: balance residual too large");
  return pi;
}

double spectral_radius(const Mat& a, double tol, std::size_t max_iter) {
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  if (a.cols() != n) throw DimensionError("spectral_radius: matrix must be square");
  if (max_abs(a) == 0.0) return 0.0;

  Vec v = ones(n);
  double vnorm = std::sqrt(dot(v, v));
  for (double& x : v) x /= vnorm;
  double prev = 0.0;
  Vec w;
  for (std::size_t it = 0; it < max_iter; ++it) {
    w = mat_vec(a, v);
    const double wnorm = std::sqrt(dot(w, w));
    if (wnorm == 0.0) return 0.0;  // iterate collapsed (nilpotent direction)
    const double lam = dot(v, w);
    // residual of v as an eigenvector candidate
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(w[i] - lam * v[i]));
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wnorm;
    if (it > 2 && std::abs(lam - prev) <= tol * std::max(1.0, std::abs(lam)) &&
        res <= std::sqrt(tol) * std::max(1.0, std::abs(lam)))
      return std::abs(lam);
    prev = lam;
  }

  // Stalled: dominant pair is likely complex. Take the modulus from the
  // 2x2 Rayleigh block over span{v, Av}.
  w = mat_vec(a, v);
  Vec q1 = v;
  double n1 = std::sqrt(dot(q1, q1));
  for (double& x : q1) x /= n1;
  Vec q2 = w;
  const double proj = dot(q1, q2);
  for (std::size_t i = 0; i < n; ++i) q2[i] -= proj * q1[i];
  const double n2 = std::sqrt(dot(q2, q2));
  if (n2 <= 1e-300) return std::abs(prev);
  for (double& x : q2) x /= n2;
  const Vec aq1 = mat_vec(a, q1), aq2 = mat_vec(a, q2);
  const double b11 = dot(q1, aq1), b12 = dot(q1, aq2);
  const double b21 = dot(q2, aq1), b22 = dot(q2, aq2);
  const double tr = b11 + b22, det = b11 * b22 - b12 * b21;
  const double disc = tr * tr / 4.0 - det;
  if (disc < 0.0) return std::sqrt(det);
  const double r1 = tr / 2.0 + std::sqrt(disc), r2 = tr / 2.0 - std::sqrt(disc);
  return std::max(std::abs(r1), std::abs(r2));
}

Vec expm_action(const Mat& q, const Vec& v, double t, double tol) {
  const std::size_t n = q.rows();
  if (q.cols() != n || v.size() != n) throw DimensionError("expm_action: shape mismatch");
  if (t < 0.0) throw SolverError("expm_action: negative time");
  if (t == 0.0 || n == 0) return v;

  double lam = 0.0;
  for (std::size_t i = 0; i < n; ++i) lam = std::max(lam, std::abs(q(i, i)));
  if (lam == 0.0) return v;  // zero generator

  const std::size_t steps = static_cast<std::size_t>(std::max(1.0, std::ceil(lam * t / 40.0)));
  const double s = lam * (t / static_cast<double>(steps));
  Mat p = q;
  p *= 1.0 / lam;
  for (std::size_t i = 0; i < n; ++i) p(i, i) += 1.0;

  const double step_tol = tol / static_cast<double>(steps);
  const std::size_t k_max =
      static_cast<std::size_t>(s + 20.0 * std::sqrt(s) + 60.0);

  Vec w = v;
  for (std::size_t st = 0; st < steps; ++st) {
    const double scale = std::max(1.0, max_abs(w));
    Vec term = w;
    double coef = std::exp(-s);
    double cum = coef;
    Vec acc(n);
    for (std::size_t i = 0; i < n; ++i) acc[i] = coef * term[i];
    for (std::size_t k = 1; k <= k_max; ++k) {
      term = mat_vec(p, term);
      coef *= s / static_cast<double>(k);
      for (std::size_t i = 0; i < n; ++i) acc[i] += coef * term[i];
      cum += coef;
      if (1.0 - cum <= step_tol / scale) break;
    }
    w = std::move(acc);
  }
  return w;
}

}  // namespace pqbd
