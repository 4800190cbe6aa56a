#pragma once

// Shared linear algebra, sampling and dimensional constants.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shadows {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr const char* kLibraryVersion = "0.3.1";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected because it violates a documented precondition or invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A combinatorial guard (dimension, number of slabs or generators) was exceeded.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap. The best iterate is kept so
/// callers can inspect or reuse it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, Vec best) : Error(what), best_(std::move(best)) {}
  const Vec& best_iterate() const { return best_; }

 private:
  Vec best_;
};

/// A computed quantity contradicts a guaranteed inequality; never silently accepted.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// RandomSource
// ---------------------------------------------------------------------------

/// Explicit, replayable random stream. The engine is mt19937_64 (whose output
/// sequence is fixed by the standard) and all derived variates are computed
/// here rather than through std distributions, so streams are bit-identical
/// across standard library implementations.
class RandomSource {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/box-muller";

  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::string algorithm() const { return kAlgorithm; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Independent stream derived from this seed and a component tag.
  RandomSource fork(std::uint64_t tag) const {
    return RandomSource(seed_ ^ (tag * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// ---------------------------------------------------------------------------
// Sampling and constants
// ---------------------------------------------------------------------------

inline Vec sample_unit_sphere(int n, RandomSource& rng) {
  if (n < 1) throw InvalidArgument("sample_unit_sphere: dimension must be >= 1");
  Vec x(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    norm = x.norm();
  } while (norm < 1e-300);
  return x / norm;
}

inline double log_unit_ball_volume(int n) {
  if (n < 0) throw InvalidArgument("unit_ball_volume: negative dimension");
  const double half = 0.5 * n;
  return half * std::log(std::numbers::pi) - std::lgamma(half + 1.0);
}

/// Volume of the n-dimensional Euclidean unit ball, pi^(n/2) / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
  if (n < 0 || n > 200) throw InvalidArgument("unit_ball_volume: n must lie in [0, 200]");
  return std::exp(log_unit_ball_volume(n));
}

// ---------------------------------------------------------------------------
// Matrix helpers
// ---------------------------------------------------------------------------

inline bool is_unit(const Vec& v, double tol = 1e-12) { return std::abs(v.norm() - 1.0) <= tol; }

inline bool all_finite(const Mat& m) { return m.allFinite(); }

struct SymmetricEigen {
  Vec values;
  Mat vectors;  // columns
};

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix.
inline SymmetricEigen jacobi_eigen(const Mat& m, int max_sweeps = 100) {
  const Eigen::Index n = m.rows();
  Mat a = m;
  Mat v = Mat::Identity(n, n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-300 || std::sqrt(off) <= 1e-16 * a.norm()) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return {a.diagonal(), v};
}

/// Symmetric square root of a symmetric positive semidefinite matrix.
inline Mat psd_sqrt(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InvalidArgument("psd_sqrt: matrix must be square and non-empty");
  if (!m.allFinite()) throw InvalidArgument("psd_sqrt: non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("psd_sqrt: matrix is not symmetric");
  const SymmetricEigen eig = jacobi_eigen(0.5 * (m + m.transpose()));
  Vec root(eig.values.size());
  for (Eigen::Index i = 0; i < root.size(); ++i) {
    const double lam = eig.values[i];
    if (lam < -1e-10 * scale) throw InvalidArgument("psd_sqrt: matrix is indefinite (eigenvalue " + std::to_string(lam) + ")");
    root[i] = std::sqrt(std::max(lam, 0.0));
  }
  Mat r = eig.vectors * root.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (r + r.transpose());
}

/// Orthonormal basis (as columns) of the hyperplane perpendicular to a unit vector.
inline Mat orthogonal_complement(const Vec& u) {
  const Eigen::Index n = u.size();
  Eigen::HouseholderQR<Mat> qr{Mat(u)};
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - 1);
}

/// Calls fn(indices) for every k-subset of {0..m-1} in lexicographic order.
/// fn may return false to stop early.
template <typename Fn>
void for_each_combination(int m, int k, Fn&& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if constexpr (std::is_same_v<decltype(fn(idx)), bool>) {
      if (!fn(idx)) return;
    } else {
      fn(idx);
    }
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline double binomial(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

/// Orthonormal basis (columns) for the span of the given columns, using a
/// rank-revealing QR with a relative threshold.
inline Mat span_basis(const Mat& cols, double rel_tol = 1e-10) {
  if (cols.cols() == 0) return Mat(cols.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(cols);
  qr.setThreshold(rel_tol);
  const Eigen::Index r = qr.rank();
  Mat q = qr.householderQ() * Mat::Identity(cols.rows(), cols.rows());
  return q.leftCols(r);
}

}  // namespace shadows
