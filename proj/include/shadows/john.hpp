#pragma once

// Minimal-volume enclosing ellipsoids of origin-symmetric point sets, via the
// D-optimal design problem, and the isotropic contact decomposition read off
// the optimal design.

#include "shadows/kernel.hpp"
#include "shadows/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace shadows {

inline constexpr long kMveeIterationCap = 1000000;

/// E = {x : x^T H x <= 1} with H symmetric positive definite.
class Ellipsoid {
 public:
  explicit Ellipsoid(Mat shape) : shape_(std::move(shape)) {
    if (shape_.rows() != shape_.cols() || shape_.rows() == 0) throw InvalidArgument("ellipsoid shape must be square");
    if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, shape_.cwiseAbs().maxCoeff()))
      throw InvalidArgument("ellipsoid shape must be symmetric");
    Eigen::LLT<Mat> llt(shape_);
    if (llt.info() != Eigen::Success) throw InvalidArgument("ellipsoid shape must be positive definite");
  }

  int dim() const { return static_cast<int>(shape_.rows()); }
  const Mat& shape() const { return shape_; }
  double gauge_squared(const Vec& x) const { return x.dot(shape_ * x); }
  double volume() const {
    return std::exp(log_unit_ball_volume(dim()) - 0.5 * std::log(shape_.determinant()));
  }

 private:
  Mat shape_;
};

struct JohnDecomposition {
  Mat contacts;  // unit rows
  Vec weights;

  int dim() const { return static_cast<int>(contacts.cols()); }
  int size() const { return static_cast<int>(contacts.rows()); }
  WeightedDirections as_weighted_directions() const { return {contacts, weights}; }
};

struct MveeResult {
  Ellipsoid ellipsoid;
  Mat points;   // one representative per antipodal pair, rows
  Vec weights;  // design weights on `points`, summing to 1
  long iterations;
  double max_gauge;          // max_k v_k^T H v_k
  double min_support_gauge;  // min over positive weights
};

/// Keeps one point of every antipodal pair (and drops repeats).
inline Mat collapse_antipodal(const Mat& points, double tol = 1e-12) {
  std::vector<Vec> reps;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Vec p = points.row(i).transpose();
    const double scale = std::max(1.0, p.norm());
    bool dup = false;
    for (const Vec& q : reps) {
      if ((p - q).norm() <= tol * scale || (p + q).norm() <= tol * scale) {
        dup = true;
        break;
      }
    }
    if (!dup && p.norm() > 0.0) reps.push_back(p);
  }
  Mat out(static_cast<Eigen::Index>(reps.size()), points.cols());
  for (std::size_t i = 0; i < reps.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = reps[i].transpose();
  return out;
}

/// Minimal-volume ellipsoid containing the symmetric set {±v_k}, computed as
/// the D-optimal design max log det sum_k lambda_k v_k v_k^T over the simplex
/// by Frank-Wolfe iterations with Wolfe-Atwood away steps. On exit
/// max_k v_k^T H v_k <= 1 + eps and every supporting point has gauge >= 1 - eps,
/// where H = (n M)^{-1}.
inline MveeResult mvee_symmetric(const Mat& points, double eps = 1e-8) {
  if (!(eps >= 1e-10 && eps <= 1e-2)) throw InvalidArgument("mvee_symmetric: eps must lie in [1e-10, 1e-2]");
  const Mat v = collapse_antipodal(points);
  const int n = static_cast<int>(points.cols());
  const int k = static_cast<int>(v.rows());
  {
    Eigen::FullPivLU<Mat> lu(v);
    lu.setThreshold(1e-10);
    if (k < n || lu.rank() < n) throw InvalidArgument("mvee_symmetric: points do not span R^n");
  }

  Vec lambda = Vec::Constant(k, 1.0 / k);
  Mat m = v.transpose() * lambda.asDiagonal() * v;
  Vec g(k);
  auto gauges = [&]() {
    Eigen::LLT<Mat> llt(m);
    const Mat y = llt.matrixL().solve(v.transpose());
    g = y.colwise().squaredNorm().transpose();
  };

  long it = 0;
  for (;; ++it) {
    if (it % 64 == 0) m = v.transpose() * lambda.asDiagonal() * v;
    gauges();
    int j = 0, i = -1;
    for (int q = 0; q < k; ++q) {
      if (g[q] > g[j]) j = q;
      if (lambda[q] > 0.0 && (i < 0 || g[q] < g[i])) i = q;
    }
    const double up = g[j] / n - 1.0;
    const double down = 1.0 - g[i] / n;
    if (up <= eps && down <= eps) break;
    if (it >= kMveeIterationCap)
      throw ConvergenceError("mvee_symmetric: iteration cap reached (gap " + std::to_string(std::max(up, down)) + ")", lambda);

    int idx;
    double tau;
    bool drop = false;
    if (up >= down) {
      idx = j;
      tau = (g[j] / n - 1.0) / (g[j] - 1.0);
    } else {
      idx = i;
      const double floor_tau = -lambda[i] / (1.0 - lambda[i]);
      tau = g[i] > 1.0 ? (g[i] / n - 1.0) / (g[i] - 1.0) : floor_tau;
      if (tau <= floor_tau) {
        tau = floor_tau;
        drop = true;
      }
    }
    lambda *= (1.0 - tau);
    lambda[idx] += tau;
    if (drop || lambda[idx] < 0.0) lambda[idx] = 0.0;
    m = (1.0 - tau) * m + tau * v.row(idx).transpose() * v.row(idx);
  }
  lambda /= lambda.sum();
  m = v.transpose() * lambda.asDiagonal() * v;
  gauges();

  const Mat h = (static_cast<double>(n) * m).inverse();
  double max_gauge = 0.0, min_support = INFINITY;
  for (int q = 0; q < k; ++q) {
    max_gauge = std::max(max_gauge, g[q] / n);
    if (lambda[q] > 0.0) min_support = std::min(min_support, g[q] / n);
  }
  return MveeResult{Ellipsoid(0.5 * (h + h.transpose())), v, lambda, it, max_gauge, min_support};
}

/// Maps the design to the Euclidean ball by H^{1/2} and returns the contact
/// directions with weights c_k = n lambda_k |H^{1/2} v_k|^2. The weights sum to
/// n and the identity sum c_k u_k u_k^T = I holds up to the dropped mass.
inline JohnDecomposition extract_john_decomposition(const Ellipsoid& e, const Mat& points, const Vec& weights, double eps = 1e-8) {
  const int n = e.dim();
  if (points.rows() != weights.size()) throw InvalidArgument("extract_john_decomposition: one weight per point required");
  const Mat root = psd_sqrt(e.shape());
  const double threshold = std::max(eps, 1e-9);
  std::vector<Vec> us;
  std::vector<double> cs;
  for (Eigen::Index q = 0; q < points.rows(); ++q) {
    if (!(weights[q] > threshold)) continue;
    const Vec w = root * points.row(q).transpose();
    const double len2 = w.squaredNorm();
    us.push_back(w / std::sqrt(len2));
    cs.push_back(n * weights[q] * len2);
  }
  if (static_cast<int>(us.size()) < n)
    throw NumericalFailure("extract_john_decomposition: only " + std::to_string(us.size()) +
                           " support points (MVEE did not converge?)");
  JohnDecomposition jd{Mat(static_cast<Eigen::Index>(us.size()), n), Vec(static_cast<Eigen::Index>(us.size()))};
  for (std::size_t q = 0; q < us.size(); ++q) {
    jd.contacts.row(static_cast<Eigen::Index>(q)) = us[q].transpose();
    jd.weights[static_cast<Eigen::Index>(q)] = cs[q];
  }
  Eigen::FullPivLU<Mat> lu(jd.contacts);
  lu.setThreshold(1e-8);
  if (lu.rank() < n) throw NumericalFailure("extract_john_decomposition: contacts do not span R^n");
  return jd;
}

inline JohnDecomposition extract_john_decomposition(const MveeResult& r, double eps = 1e-8) {
  return extract_john_decomposition(r.ellipsoid, r.points, r.weights, eps);
}

struct JohnResidual {
  double frobenius;
  double trace_gap;
  double quadratic_identity;  // max relative error of |x|^2 = sum c_i <u_i, x>^2 at sampled x
};

inline JohnResidual john_residual(const JohnDecomposition& jd, std::uint64_t seed = 0x5eed) {
  const WeightedDirections wd = jd.as_weighted_directions();
  RandomSource rng(seed);
  double quad = 0.0;
  for (int s = 0; s < 20; ++s) {
    Vec x(jd.dim());
    for (int i = 0; i < jd.dim(); ++i) x[i] = rng.normal();
    const double lhs = x.squaredNorm();
    const double rhs = (jd.weights.array() * (jd.contacts * x).array().square()).sum();
    quad = std::max(quad, std::abs(lhs - rhs) / lhs);
  }
  return {wd.frobenius_residual(), wd.trace_gap(), quad};
}

}  // namespace shadows
