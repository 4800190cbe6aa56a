#pragma once

// Zonotopes Z = sum_j [-w_j, w_j]: support function, exact volume by
// determinant expansion, the shadow-recursion volume formula, projection
// bodies of polytopes and the mixed-volume inequalities built on them.

#include "shadows/kernel.hpp"
#include "shadows/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace shadows {

inline constexpr int kMaxZonotopeDim = 7;
inline constexpr int kMaxZonotopeGenerators = 24;
inline constexpr int kMaxFacetNormalDim = 6;
inline constexpr int kMaxFacetNormalGenerators = 20;
inline constexpr double kMinGeneratorNorm = 1e-12;

class Zonotope {
 public:
  /// One generator per row. Generators shorter than 1e-12 are dropped.
  explicit Zonotope(const Mat& generators) : n_(static_cast<int>(generators.cols())) {
    if (n_ < 1) throw InvalidArgument("zonotope dimension must be >= 1");
    if (!generators.allFinite()) throw InvalidArgument("non-finite generator");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < generators.rows(); ++i)
      if (generators.row(i).norm() >= kMinGeneratorNorm) keep.push_back(i);
    gens_.resize(static_cast<Eigen::Index>(keep.size()), n_);
    for (std::size_t k = 0; k < keep.size(); ++k) gens_.row(static_cast<Eigen::Index>(k)) = generators.row(keep[k]);
  }

  /// Z = sum_i alpha_i [-u_i, u_i].
  static Zonotope from_directions(const Mat& units, const Vec& alphas) {
    if (units.rows() != alphas.size()) throw InvalidArgument("directions/alphas size mismatch");
    return Zonotope(alphas.asDiagonal() * units);
  }

  int dim() const { return n_; }
  int size() const { return static_cast<int>(gens_.rows()); }
  const Mat& generators() const { return gens_; }
  Vec generator(int j) const { return gens_.row(j).transpose(); }
  double alpha(int j) const { return gens_.row(j).norm(); }
  Vec unit(int j) const { return generator(j) / alpha(j); }

  bool spans() const {
    if (size() < n_) return false;
    Eigen::FullPivLU<Mat> lu(gens_);
    lu.setThreshold(1e-10);
    return lu.rank() == n_;
  }

  Zonotope scaled(double lambda) const { return Zonotope(lambda * gens_); }

  /// Minkowski sum this + t * other.
  Zonotope plus(const Zonotope& other, double t = 1.0) const {
    if (other.dim() != n_) throw InvalidArgument("dimension mismatch in Minkowski sum");
    Mat g(size() + other.size(), n_);
    g << gens_, t * other.gens_;
    return Zonotope(g);
  }

  /// Generators expressed in the orthonormal chart of theta-perp.
  Zonotope projected(const Vec& theta) const {
    if (n_ < 2) throw InvalidArgument("cannot project a one-dimensional zonotope");
    return Zonotope(gens_ * orthogonal_complement(theta));
  }

 private:
  int n_;
  Mat gens_;
};

/// Unit directions u_i with positive weights c_i meant to satisfy
/// sum c_i u_i (x) u_i = I_n.
struct WeightedDirections {
  Mat directions;  // rows
  Vec weights;

  int dim() const { return static_cast<int>(directions.cols()); }
  int size() const { return static_cast<int>(directions.rows()); }

  Mat frame_operator() const {
    const int n = dim();
    Mat s = Mat::Zero(n, n);
    for (int i = 0; i < size(); ++i) s += weights[i] * directions.row(i).transpose() * directions.row(i);
    return s;
  }
  double frobenius_residual() const { return (frame_operator() - Mat::Identity(dim(), dim())).norm(); }
  double trace_gap() const { return std::abs(weights.sum() - dim()); }

  /// Throws unless the directions are unit, the weights positive, and the
  /// isotropy identity holds to the given tolerances.
  void validate(double residual_tol = 1e-6, double trace_tol = 1e-8) const {
    if (directions.rows() != weights.size() || size() == 0) throw InvalidArgument("weighted directions: size mismatch");
    for (int i = 0; i < size(); ++i) {
      if (std::abs(directions.row(i).norm() - 1.0) > 1e-9)
        throw InvalidArgument("weighted directions: direction " + std::to_string(i) + " is not unit");
      if (!(weights[i] > 0.0)) throw InvalidArgument("weighted directions: weight " + std::to_string(i) + " is not positive");
    }
    const double r = frobenius_residual();
    if (r > residual_tol)
      throw InvalidArgument("weighted directions: sum c_i u_i u_i^T differs from identity (Frobenius " + std::to_string(r) + ")");
    const double g = trace_gap();
    if (g > trace_tol) throw InvalidArgument("weighted directions: weights sum to " + std::to_string(weights.sum()) + ", not n");
  }
};

/// Random isotropic decomposition: m random vectors mapped by S^{-1/2} where S
/// is their frame operator, then split into unit directions and weights.
inline WeightedDirections random_weighted_directions(int n, int m, RandomSource& rng) {
  if (m < n) throw InvalidArgument("random_weighted_directions: need m >= n");
  Mat x(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = rng.normal();
  const Mat s = x.transpose() * x;
  const Mat s_inv_half = psd_sqrt(s.inverse());
  const Mat y = x * s_inv_half;
  WeightedDirections wd{Mat(m, n), Vec(m)};
  for (int i = 0; i < m; ++i) {
    const double norm = y.row(i).norm();
    wd.weights[i] = norm * norm;
    wd.directions.row(i) = y.row(i) / norm;
  }
  return wd;
}

// ---------------------------------------------------------------------------
// Support and volume
// ---------------------------------------------------------------------------

/// h_Z(theta) = sum_j |<theta, w_j>|.
inline double support(const Zonotope& z, const Vec& theta) { return (z.generators() * theta).cwiseAbs().sum(); }

inline void check_zonotope_guard(const Zonotope& z) {
  if (z.dim() > kMaxZonotopeDim || z.size() > kMaxZonotopeGenerators)
    throw CapacityError("zonotope guard exceeded: n=" + std::to_string(z.dim()) + " (max " + std::to_string(kMaxZonotopeDim) +
                        "), m=" + std::to_string(z.size()) + " (max " + std::to_string(kMaxZonotopeGenerators) + ")");
}

/// |Z| = 2^n sum over n-subsets S of |det W_S|.
inline double volume_exact(const Zonotope& z) {
  check_zonotope_guard(z);
  const int n = z.dim();
  double sum = 0.0;
  Mat sub(n, n);
  for_each_combination(z.size(), n, [&](const std::vector<int>& idx) {
    for (int k = 0; k < n; ++k) sub.row(k) = z.generators().row(idx[k]);
    sum += std::abs(sub.partialPivLu().determinant());
  });
  return std::ldexp(sum, n);
}

/// Volume through the shadow recursion |Z| = (2/n) sum_i alpha_i |P_{u_i} Z|,
/// bottoming out at |Z| = 2 sum_i alpha_i on the line.
inline double volume_recursive(const Zonotope& z) {
  check_zonotope_guard(z);
  const int n = z.dim();
  if (z.size() == 0) return 0.0;
  if (n == 1) return 2.0 * z.generators().cwiseAbs().sum();
  double sum = 0.0;
  for (int i = 0; i < z.size(); ++i) sum += z.alpha(i) * volume_recursive(z.projected(z.unit(i)));
  return 2.0 * sum / n;
}

/// (n-1)-volume of the projection of Z onto theta-perp.
inline double shadow_volume(const Zonotope& z, const Vec& theta) {
  if (!is_unit(theta, 1e-9)) throw InvalidArgument("shadow_volume: direction must be a unit vector");
  return volume_recursive(z.projected(theta));
}

struct VolumeFormulaReport {
  double lhs;  // determinant expansion
  double rhs;  // (2/n) sum alpha_i |P_i Z|
  double relative_gap;
};

inline VolumeFormulaReport volume_formula_check(const Zonotope& z) {
  const int n = z.dim();
  const double lhs = volume_exact(z);
  double rhs = 0.0;
  if (n == 1) {
    rhs = 2.0 * z.generators().cwiseAbs().sum();
  } else {
    for (int i = 0; i < z.size(); ++i) rhs += z.alpha(i) * shadow_volume(z, z.unit(i));
    rhs *= 2.0 / n;
  }
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return {lhs, rhs, scale > 0 ? std::abs(lhs - rhs) / scale : 0.0};
}

struct VolumeLowerBound {
  double volume;
  double bound;  // 2^n prod (alpha_i / c_i)^{c_i}
  double ratio;
};

/// Lower bound on the volume of sum_i alpha_i [-u_i, u_i] for an isotropic
/// decomposition (u_i, c_i).
inline VolumeLowerBound zonotope_volume_lower_bound(const WeightedDirections& wd, const Vec& alphas) {
  wd.validate();
  if (alphas.size() != wd.size()) throw InvalidArgument("zonotope_volume_lower_bound: one alpha per direction required");
  for (Eigen::Index i = 0; i < alphas.size(); ++i)
    if (!(alphas[i] > 0.0)) throw InvalidArgument("zonotope_volume_lower_bound: alphas must be positive");
  const int n = wd.dim();
  const double vol = volume_exact(Zonotope::from_directions(wd.directions, alphas));
  double log_bound = n * std::log(2.0);
  for (int i = 0; i < wd.size(); ++i) log_bound += wd.weights[i] * std::log(alphas[i] / wd.weights[i]);
  const double bound = std::exp(log_bound);
  return {vol, bound, std::exp(std::log(vol) - log_bound)};
}

// ---------------------------------------------------------------------------
// Facet normals and H-representation
// ---------------------------------------------------------------------------

/// Normals of hyperplanes spanned by (n-1)-subsets of generators, one per
/// antipodal pair. These are exactly the facet normals of Z.
inline std::vector<Vec> zonotope_facet_normals(const Zonotope& z) {
  const int n = z.dim();
  const int m = z.size();
  if (n > kMaxFacetNormalDim || m > kMaxFacetNormalGenerators)
    throw CapacityError("facet-normal guard exceeded: n=" + std::to_string(n) + " (max " + std::to_string(kMaxFacetNormalDim) +
                        "), m=" + std::to_string(m) + " (max " + std::to_string(kMaxFacetNormalGenerators) + ")");
  if (n == 1) return {Vec::Ones(1)};
  std::vector<Vec> raw;
  Mat sub(n - 1, n);
  for_each_combination(m, n - 1, [&](const std::vector<int>& idx) {
    for (int k = 0; k < n - 1; ++k) sub.row(k) = z.unit(idx[k]).transpose();
    Eigen::JacobiSVD<Mat> svd(sub, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    if (sv[n - 2] <= 1e-10 * sv[0]) return;
    Vec nu = svd.matrixV().col(n - 1);
    nu.normalize();
    // Canonical sign: first coordinate of significant size is positive.
    for (int i = 0; i < n; ++i) {
      if (std::abs(nu[i]) > 1e-9) {
        if (nu[i] < 0) nu = -nu;
        break;
      }
    }
    raw.push_back(nu);
  });
  std::sort(raw.begin(), raw.end(), [](const Vec& a, const Vec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  });
  std::vector<Vec> kept;
  for (const Vec& v : raw) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (v[0] - (*it)[0] > 1e-9) break;
      if ((v - *it).norm() < 1e-9 || (v + *it).norm() < 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(v);
  }
  return kept;
}

/// The zonotope as an H-polytope {|<x, nu>| <= h_Z(nu)} over its facet normals.
inline SymmetricHPolytope to_polytope(const Zonotope& z) {
  if (!z.spans()) throw InvalidArgument("to_polytope: generators do not span");
  const auto normals = zonotope_facet_normals(z);
  Mat dirs(static_cast<Eigen::Index>(normals.size()), z.dim());
  Vec offs(dirs.rows());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    dirs.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
    offs[static_cast<Eigen::Index>(i)] = support(z, normals[i]);
  }
  return SymmetricHPolytope(dirs, offs);
}

// ---------------------------------------------------------------------------
// Projection body and mixed volumes
// ---------------------------------------------------------------------------

/// Zonotope whose support function equals the shadow function of C:
/// one generator |F| n_F per antipodal pair of facets.
inline Zonotope projection_body(const PolytopeGeometry& g) {
  std::vector<Vec> gens;
  for (const auto& f : g.facets())
    if (f.sign > 0) gens.push_back(f.measure * f.normal);
  Mat w(static_cast<Eigen::Index>(gens.size()), g.dim());
  for (std::size_t i = 0; i < gens.size(); ++i) w.row(static_cast<Eigen::Index>(i)) = gens[i].transpose();
  return Zonotope(w);
}

inline Zonotope projection_body(const SymmetricHPolytope& c) { return projection_body(PolytopeGeometry(c)); }

/// v_{n-1}(C, Z) = (2/n) sum_i alpha_i |P_{u_i} C|.
inline double mixed_volume_vn1(const PolytopeGeometry& c, const Zonotope& z) {
  if (c.dim() != z.dim()) throw InvalidArgument("mixed_volume_vn1: dimension mismatch");
  double sum = 0.0;
  for (int i = 0; i < z.size(); ++i) sum += z.alpha(i) * c.shadow_area(z.unit(i));
  return 2.0 * sum / c.dim();
}

inline double mixed_volume_vn1(const SymmetricHPolytope& c, const Zonotope& z) {
  return mixed_volume_vn1(PolytopeGeometry(c), z);
}

struct MinkowskiInequalityReport {
  double lhs;  // |C|^{(n-1)/n} |Z|^{1/n}
  double rhs;  // v_{n-1}(C, Z)
  double gap;  // (rhs - lhs) / lhs
};

inline MinkowskiInequalityReport minkowski_inequality_check(const PolytopeGeometry& c, const Zonotope& z) {
  const int n = c.dim();
  const double lhs = std::pow(c.volume(), (n - 1.0) / n) * std::pow(volume_exact(z), 1.0 / n);
  const double rhs = mixed_volume_vn1(c, z);
  return {lhs, rhs, lhs > 0 ? (rhs - lhs) / lhs : 0.0};
}

inline MinkowskiInequalityReport minkowski_inequality_check(const SymmetricHPolytope& c, const Zonotope& z) {
  return minkowski_inequality_check(PolytopeGeometry(c), z);
}

/// Z is inside C iff h_Z(u_j) <= t_j for every slab of C (both bodies are
/// symmetric and C is the intersection of its slabs).
inline bool zonotope_inside(const Zonotope& z, const SymmetricHPolytope& c, double rel_tol = 1e-9) {
  for (int j = 0; j < c.slabs(); ++j)
    if (support(z, c.direction(j)) > c.offset(j) * (1.0 + rel_tol)) return false;
  return true;
}

struct DominanceBound {
  double minkowski_bound;  // ((2/n) sum alpha_i s_i)^{n/(n-1)} |Z|^{-1/(n-1)}
  double volume_bound;     // (|C|/|Z|)^{1/(n-1)} |C|
  double bound;            // min of the two
};

/// Upper bound on |D| for a body D whose shadows at Z's directions are
/// `shadows_of_d` (s_i = |P_{u_i} D|), given a zonotope Z inside C and
/// shadows of D dominated by those of C.
inline DominanceBound dominance_volume_bound(const PolytopeGeometry& c, const SymmetricHPolytope& c_body, const Zonotope& z,
                                             const Vec& shadows_of_d) {
  const int n = c.dim();
  if (n < 2) throw InvalidArgument("dominance_volume_bound: needs n >= 2");
  if (shadows_of_d.size() != z.size()) throw InvalidArgument("dominance_volume_bound: one shadow per generator required");
  if (!zonotope_inside(z, c_body)) throw InvalidArgument("dominance_volume_bound: zonotope is not contained in C");
  const double vz = volume_exact(z);
  if (!(vz > 0.0)) throw InvalidArgument("dominance_volume_bound: zonotope has zero volume");
  double weighted = 0.0;
  for (int i = 0; i < z.size(); ++i) weighted += z.alpha(i) * shadows_of_d[i];
  weighted *= 2.0 / n;
  const double e = 1.0 / (n - 1.0);
  const double b1 = std::pow(weighted, n * e) * std::pow(vz, -e);
  const double b2 = std::pow(c.volume() / vz, e) * c.volume();
  return {b1, b2, std::min(b1, b2)};
}

inline DominanceBound dominance_volume_bound(const SymmetricHPolytope& c, const Zonotope& z, const Vec& shadows_of_d) {
  return dominance_volume_bound(PolytopeGeometry(c), c, z, shadows_of_d);
}

}  // namespace shadows
