#pragma once

// Volume maximization over the family of symmetric polytopes with fixed slab
// directions and a linear budget on the offsets, and the large-shadow body
// built from it.

#include "shadows/kernel.hpp"
#include "shadows/polytope.hpp"
#include "shadows/shadow_position.hpp"
#include "shadows/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace shadows {

inline constexpr double kOffsetFloor = 1e-9;
inline constexpr int kFamilyIterationCap = 5000;

/// K(t) = {x : |<x, u_i>| <= t_i} subject to sum gamma_i t_i = 1.
struct SlabFamilySpec {
  Mat directions;  // unit rows
  Vec gamma;

  int dim() const { return static_cast<int>(directions.cols()); }
  int size() const { return static_cast<int>(directions.rows()); }

  void validate() const {
    if (directions.rows() != gamma.size()) throw InvalidArgument("slab family: one budget weight per direction required");
    if (size() < dim()) throw InvalidArgument("slab family: unbounded body (fewer directions than dimensions)");
    for (int i = 0; i < size(); ++i) {
      if (!is_unit(directions.row(i).transpose(), 1e-9))
        throw InvalidArgument("slab family: direction " + std::to_string(i) + " is not unit");
      if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i]))
        throw InvalidArgument("slab family: budget weight " + std::to_string(i) + " is not positive");
    }
    Eigen::FullPivLU<Mat> lu(directions);
    lu.setThreshold(1e-10);
    if (lu.rank() < dim()) throw InvalidArgument("slab family: unbounded body (directions do not span)");
  }

  SymmetricHPolytope body(const Vec& offsets) const { return SymmetricHPolytope(directions, offsets); }
};

namespace detail {

/// Euclidean projection onto {sum gamma_i t_i = 1, t_i >= floor}.
inline Vec project_budget(const Vec& y, const Vec& gamma, double floor) {
  auto at = [&](double mu) { return (y - mu * gamma).cwiseMax(floor); };
  auto excess = [&](double mu) { return gamma.dot(at(mu)) - 1.0; };
  double lo = -1.0, hi = 1.0;
  while (excess(lo) < 0.0) lo *= 2.0;
  while (excess(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  Vec t = at(0.5 * (lo + hi));
  // exact renormalization of the free coordinates absorbs the bisection residue
  const double gap = 1.0 - gamma.dot(t);
  double free_mass = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    if (t[i] > floor) free_mass += gamma[i] * gamma[i];
  if (free_mass > 0.0)
    for (Eigen::Index i = 0; i < t.size(); ++i)
      if (t[i] > floor) t[i] += gap * gamma[i] / free_mass;
  return t;
}

}  // namespace detail

/// Volume and its gradient dV/dt_i = 2 |F_i| (both faces of slab i move).
struct FamilyPoint {
  Vec offsets;
  double volume;
  Vec gradient;
};

inline FamilyPoint evaluate_family(const SlabFamilySpec& spec, const SlabArrangement& arrangement, const Vec& t) {
  const PolytopeGeometry g(spec.body(t), arrangement);
  Vec grad(spec.size());
  for (int i = 0; i < spec.size(); ++i) grad[i] = 2.0 * g.slab_face_measures()[static_cast<std::size_t>(i)];
  return {t, g.volume(), grad};
}

struct KktReport {
  double multiplier;  // lambda in 2|F_i| = lambda gamma_i; equals n|K| at the optimum
  double max_relative_residual;  // over coordinates above the floor
  double floor_violation;        // max (2|F_i| - lambda gamma_i)_+ / (lambda gamma_i) at the floor
};

inline KktReport kkt_residual(const SlabFamilySpec& spec, const FamilyPoint& p) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < spec.size(); ++i) {
    if (p.offsets[i] <= 2.0 * kOffsetFloor) continue;
    num += p.gradient[i] * spec.gamma[i];
    den += spec.gamma[i] * spec.gamma[i];
  }
  const double lambda = den > 0.0 ? num / den : 0.0;
  KktReport r{lambda, 0.0, 0.0};
  for (int i = 0; i < spec.size(); ++i) {
    const double target = lambda * spec.gamma[i];
    const double rel = (p.gradient[i] - target) / target;
    if (p.offsets[i] <= 2.0 * kOffsetFloor) r.floor_violation = std::max(r.floor_violation, rel);
    else r.max_relative_residual = std::max(r.max_relative_residual, std::abs(rel));
  }
  return r;
}

struct FamilyMaximum {
  SymmetricHPolytope body;
  Vec offsets;
  double volume;
  int iterations;
  double stationarity;  // |2|F| - lambda gamma| at exit, relative to |K|
  KktReport kkt;
};

/// Maximizes |K(t)| over sum gamma_i t_i = 1, t >= floor by projected gradient
/// ascent on log|K| with Barzilai-Borwein steps and Armijo backtracking.
/// |K(t)|^{1/n} is concave, so a stationary point is the global maximum.
/// Stops when the residual of 2|F_i| = lambda gamma_i falls below tol |K|.
inline FamilyMaximum maximize_volume_in_family(const SlabFamilySpec& spec, double tol = 1e-8, const Vec& start = Vec()) {
  spec.validate();
  if (!(tol >= 1e-10 && tol <= 1e-3)) throw InvalidArgument("maximize_volume_in_family: tol must lie in [1e-10, 1e-3]");
  const SlabArrangement arrangement(spec.directions);
  const int m = spec.size();

  Vec t0 = start.size() == m ? start : Vec::Constant(m, 1.0 / spec.gamma.sum());
  t0 = detail::project_budget(t0, spec.gamma, kOffsetFloor);
  FamilyPoint cur = evaluate_family(spec, arrangement, t0);
  if (!(cur.volume > 0.0)) throw NumericalFailure("maximize_volume_in_family: start has zero volume");

  auto stationarity = [&](const FamilyPoint& p) {
    const KktReport k = kkt_residual(spec, p);
    Vec r(m);
    for (int i = 0; i < m; ++i) {
      const double d = p.gradient[i] - k.multiplier * spec.gamma[i];
      r[i] = p.offsets[i] <= 2.0 * kOffsetFloor ? std::max(0.0, d) : d;
    }
    return r.norm();
  };

  double step = 0.1 / std::max(1e-300, (cur.gradient / cur.volume).norm()) * t0.norm();
  Vec prev_t, prev_g;
  int it = 0;
  for (;; ++it) {
    if (stationarity(cur) <= tol * cur.volume) break;
    if (it >= kFamilyIterationCap)
      throw ConvergenceError("maximize_volume_in_family: iteration cap reached", cur.offsets);
    const Vec g = cur.gradient / cur.volume;  // gradient of log|K|
    if (prev_t.size() == m) {
      const Vec s = cur.offsets - prev_t;
      const Vec y = g - prev_g;
      const double sy = s.dot(y);
      if (sy < 0.0) step = s.squaredNorm() / -sy;  // concave objective: curvature is negative
    }
    const double f0 = std::log(cur.volume);
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      const Vec trial = detail::project_budget(cur.offsets + step * g, spec.gamma, kOffsetFloor);
      const Vec move = trial - cur.offsets;
      if (move.norm() <= 1e-16 * cur.offsets.norm()) break;
      FamilyPoint next = evaluate_family(spec, arrangement, trial);
      if (next.volume > 0.0 && std::log(next.volume) >= f0 + 1e-4 * g.dot(move)) {
        prev_t = cur.offsets;
        prev_g = g;
        cur = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at working precision
  }
  const KktReport kkt = kkt_residual(spec, cur);
  SymmetricHPolytope body = spec.body(cur.offsets);
  return {std::move(body), cur.offsets, cur.volume, it, stationarity(cur) / cur.volume, kkt};
}

struct MultistartReport {
  FamilyMaximum best;
  std::vector<double> volumes;
  double volume_spread;  // (max - min) / max over starts
  double offset_spread;  // max |t_sorted - t_best_sorted|
};

/// Solves from the uniform start and from starts - 1 random points of the budget
/// slice; agreement of the optima is the uniqueness check.
inline MultistartReport maximize_volume_multistart(const SlabFamilySpec& spec, RandomSource& rng, int starts = 5,
                                                   double tol = 1e-8) {
  if (starts < 1) throw InvalidArgument("maximize_volume_multistart: need at least one start");
  std::vector<FamilyMaximum> runs;
  for (int s = 0; s < starts; ++s) {
    Vec t0;
    if (s > 0) {
      t0.resize(spec.size());
      for (int i = 0; i < spec.size(); ++i) t0[i] = rng.uniform(0.5, 1.5);
      t0 /= spec.gamma.dot(t0);
    }
    runs.push_back(maximize_volume_in_family(spec, tol, t0));
  }
  std::size_t best = 0;
  double lo = INFINITY, hi = 0.0;
  std::vector<double> vols;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    vols.push_back(runs[s].volume);
    lo = std::min(lo, runs[s].volume);
    hi = std::max(hi, runs[s].volume);
    if (runs[s].volume > runs[best].volume) best = s;
  }
  auto sorted = [](Vec v) {
    std::sort(v.data(), v.data() + v.size());
    return v;
  };
  const Vec ref = sorted(runs[best].offsets);
  double spread = 0.0;
  for (const auto& r : runs) spread = std::max(spread, (sorted(r.offsets) - ref).cwiseAbs().maxCoeff());
  return {runs[best], std::move(vols), (hi - lo) / hi, spread};
}

struct ProjectionIdentityReport {
  double max_relative_error;
  Vec worst_direction;
};

/// At the maximizer |P_theta K| = (n|K|/2) sum gamma_i |<u_i, theta>|.
inline ProjectionIdentityReport verify_projection_identity(const SymmetricHPolytope& k, const SlabFamilySpec& spec, int samples,
                                                           RandomSource& rng) {
  spec.validate();
  if (k.dim() != spec.dim()) throw InvalidArgument("verify_projection_identity: dimension mismatch");
  const PolytopeGeometry g(k);
  const int n = k.dim();
  ProjectionIdentityReport r{0.0, Vec()};
  for (int s = 0; s < samples; ++s) {
    const Vec theta = sample_unit_sphere(n, rng);
    const double shadow = g.shadow_area(theta);
    const double predicted = 0.5 * n * g.volume() * spec.gamma.dot((spec.directions * theta).cwiseAbs());
    const double err = std::abs(shadow - predicted) / shadow;
    if (err > r.max_relative_error || r.worst_direction.size() == 0) r = {err, theta};
  }
  return r;
}

struct DeltaEstimate {
  double delta_hat;  // min_{|x|=1} sum_i |<x, u_i>| / sqrt n
  Vec direction;
  std::string branch;
};

inline DeltaEstimate spread_delta(const Mat& directions, SearchBranch branch = SearchBranch::automatic, int samples = 100000,
                                  std::uint64_t seed = 0x64656c) {
  const Zonotope z(directions);
  if (!z.spans()) throw InvalidArgument("spread_delta: directions do not span");
  const MinShadow ms = min_support_direction(z, samples, seed, branch);
  return {ms.value / std::sqrt(static_cast<double>(z.dim())), ms.direction, ms.branch};
}

struct SectionBoundReport {
  double volume_root;  // |C|^{1/n} for C = {|<x, u_i>| <= 1}
  double bound;        // 2 sqrt(n/m)
  bool holds;
};

inline SectionBoundReport unit_slab_volume_check(const Mat& directions) {
  const int n = static_cast<int>(directions.cols());
  const int m = static_cast<int>(directions.rows());
  const double v = volume(SymmetricHPolytope(directions, Vec::Ones(m)));
  const double root = std::pow(v, 1.0 / n);
  const double bound = 2.0 * std::sqrt(static_cast<double>(n) / m);
  return {root, bound, root >= bound - 1e-9};
}

struct PathologicalReport {
  SymmetricHPolytope body;
  Mat directions;
  double delta_hat;
  std::string delta_branch;
  double volume;
  double volume_root;
  double min_shadow;
  Vec min_direction;
  double ratio;  // min_shadow / volume^{(n-1)/n}
  double floor;  // delta_hat sqrt(n) / (2 sqrt 2)
  KktReport kkt;
};

/// The maximal-volume body for 2n random slab directions with gamma_i = 1/(2n).
/// Every shadow of it is at least delta_hat sqrt(n) / (2 sqrt 2) times
/// volume^{(n-1)/n}; a violation of either floor is a hard failure.
inline PathologicalReport construct_pathological(int n, RandomSource& rng, const Mat& injected = Mat()) {
  if (n < 2 || n > 6) throw InvalidArgument("construct_pathological: n must lie in [2, 6]");
  const int m = 2 * n;
  Mat dirs = injected;
  if (dirs.size() == 0) {
    dirs.resize(m, n);
    for (;;) {
      for (int i = 0; i < m; ++i) dirs.row(i) = sample_unit_sphere(n, rng).transpose();
      Eigen::FullPivLU<Mat> lu(dirs);
      lu.setThreshold(1e-6);
      if (lu.rank() == n) break;
    }
  } else if (dirs.rows() != m || dirs.cols() != n) {
    throw InvalidArgument("construct_pathological: injected directions must be 2n x n");
  }
  const SlabFamilySpec spec{dirs, Vec::Constant(m, 1.0 / m)};
  FamilyMaximum k = maximize_volume_in_family(spec);
  const DeltaEstimate delta = spread_delta(dirs);
  const MinShadow ms = min_shadow_direction(k.body);
  const double root = std::pow(k.volume, 1.0 / n);
  const double ratio = ms.value / std::pow(k.volume, (n - 1.0) / n);
  const double floor = delta.delta_hat * std::sqrt(static_cast<double>(n)) / (2.0 * std::sqrt(2.0));
  PathologicalReport r{std::move(k.body), dirs, delta.delta_hat, delta.branch, k.volume, root,
                       ms.value,          ms.direction, ratio, floor, k.kkt};
  if (!(root >= std::sqrt(2.0) - 1e-9))
    throw NumericalFailure("construct_pathological: volume^{1/n} = " + std::to_string(root) + " below sqrt 2");
  if (!(ratio >= floor - 1e-6))
    throw NumericalFailure("construct_pathological: shadow ratio " + std::to_string(ratio) + " below floor " +
                           std::to_string(floor));
  return r;
}

struct ShephardReport {
  double volume;
  double min_shadow;
  double ball_shadow;        // shadow of the Euclidean ball of the same volume
  double shadow_ratio;       // min_shadow / ball_shadow
  double ball_ratio;         // ball_shadow_ratio(n)
  double arithmetic_gap;     // |ball_shadow - ball_ratio |K|^{(n-1)/n}| / ball_shadow
};

/// Compares the smallest shadow of a body with the shadow of the ball of equal volume.
inline ShephardReport shephard_comparison(const SymmetricHPolytope& k) {
  const int n = k.dim();
  if (n < 2) throw InvalidArgument("shephard_comparison: needs n >= 2");
  const PolytopeGeometry g(k);
  const double vol = g.volume();
  const MinShadow ms = min_shadow_direction(g);
  const double log_r = (std::log(vol) - log_unit_ball_volume(n)) / n;
  const double ball_shadow = std::exp(log_unit_ball_volume(n - 1) + (n - 1) * log_r);
  const double ball_ratio = ball_shadow_ratio(n);
  const double via_ratio = ball_ratio * std::pow(vol, (n - 1.0) / n);
  return {vol, ms.value, ball_shadow, ms.value / ball_shadow, ball_ratio, std::abs(ball_shadow - via_ratio) / ball_shadow};
}

inline ShephardReport shephard_demonstration(int n, RandomSource& rng) {
  return shephard_comparison(construct_pathological(n, rng).body);
}

}  // namespace shadows
