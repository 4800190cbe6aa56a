#pragma once

// Origin-symmetric H-polytopes {x : |<x, u_i>| <= t_i}: vertex enumeration,
// facet measures, volume, shadows and linear images.

#include "shadows/kernel.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace shadows {

inline constexpr int kMaxPolytopeDim = 7;
inline constexpr int kMaxPolytopeSlabs = 24;
inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kDedupRadius = 1e-8;
inline constexpr double kMinFacetMeasure = 1e-12;

class SymmetricHPolytope {
 public:
  /// `directions` holds one unit direction per row; `offsets` the matching t_i.
  SymmetricHPolytope(Mat directions, Vec offsets) : dirs_(std::move(directions)), offsets_(std::move(offsets)) {
    validate();
  }

  /// Normalizes rows that are within `tol` of unit length; anything further
  /// off is rejected.
  static SymmetricHPolytope from_nearly_unit(Mat directions, Vec offsets, double tol = 1e-6) {
    for (Eigen::Index i = 0; i < directions.rows(); ++i) {
      const double norm = directions.row(i).norm();
      if (std::abs(norm - 1.0) > tol)
        throw InvalidArgument("direction " + std::to_string(i) + " has norm " + std::to_string(norm) + ", not unit");
      directions.row(i) /= norm;
    }
    return SymmetricHPolytope(std::move(directions), std::move(offsets));
  }

  /// Accepts arbitrary nonzero normals a_i with |<x, a_i>| <= b_i and rescales.
  static SymmetricHPolytope from_normals(Mat normals, Vec bounds) {
    if (normals.rows() != bounds.size()) throw InvalidArgument("normals/bounds size mismatch");
    for (Eigen::Index i = 0; i < normals.rows(); ++i) {
      const double norm = normals.row(i).norm();
      if (!(norm > 1e-300)) throw InvalidArgument("zero normal");
      normals.row(i) /= norm;
      bounds[i] /= norm;
    }
    return SymmetricHPolytope(std::move(normals), std::move(bounds));
  }

  static SymmetricHPolytope box(const Vec& half_widths) {
    const Eigen::Index n = half_widths.size();
    return SymmetricHPolytope(Mat::Identity(n, n), half_widths);
  }

  static SymmetricHPolytope cube(int n, double half_width = 1.0) { return box(Vec::Constant(n, half_width)); }

  int dim() const { return static_cast<int>(dirs_.cols()); }
  int slabs() const { return static_cast<int>(dirs_.rows()); }
  const Mat& directions() const { return dirs_; }
  const Vec& offsets() const { return offsets_; }
  Vec direction(int i) const { return dirs_.row(i).transpose(); }
  double offset(int i) const { return offsets_[i]; }

  /// Same directions, new offsets.
  SymmetricHPolytope with_offsets(Vec offsets) const { return SymmetricHPolytope(dirs_, std::move(offsets)); }

  bool contains(const Vec& x, double tol = kFeasibilityTol) const {
    return ((dirs_ * x).cwiseAbs() - offsets_).maxCoeff() <= tol;
  }

 private:
  void validate() const {
    if (dirs_.rows() != offsets_.size()) throw InvalidArgument("directions/offsets size mismatch");
    if (dirs_.cols() < 1) throw InvalidArgument("dimension must be >= 1");
    if (!dirs_.allFinite() || !offsets_.allFinite()) throw InvalidArgument("non-finite polytope data");
    if (dirs_.rows() < dirs_.cols())
      throw InvalidArgument("unbounded body: fewer slabs than dimensions");
    for (Eigen::Index i = 0; i < dirs_.rows(); ++i) {
      if (std::abs(dirs_.row(i).norm() - 1.0) > 1e-12)
        throw InvalidArgument("direction " + std::to_string(i) + " is not a unit vector");
      if (!(offsets_[i] > 0.0)) throw InvalidArgument("offset " + std::to_string(i) + " must be positive");
    }
    Eigen::FullPivLU<Mat> lu(dirs_);
    lu.setThreshold(1e-10);
    if (lu.rank() < dirs_.cols()) throw InvalidArgument("unbounded body: directions do not span R^n");
  }

  Mat dirs_;
  Vec offsets_;
};

struct VertexSet {
  std::vector<Vec> points;
};

struct FacetData {
  Vec normal;       // outward unit normal
  double offset;    // <x, normal> = offset on the facet
  double measure;   // (n-1)-dimensional area
  std::vector<int> vertices;
  int slab;         // index of the generating slab
  int sign;         // +1 or -1
};

// ---------------------------------------------------------------------------
// Vertex enumeration
// ---------------------------------------------------------------------------

/// Precomputed inverses of every invertible n-subset of slab directions. The
/// directions are fixed, so bodies that differ only in offsets reuse this.
class SlabArrangement {
 public:
  explicit SlabArrangement(const Mat& directions) : dirs_(directions) {
    const int m = static_cast<int>(dirs_.rows());
    const int n = static_cast<int>(dirs_.cols());
    if (n > kMaxPolytopeDim || m > kMaxPolytopeSlabs)
      throw CapacityError("vertex enumeration guard exceeded: n=" + std::to_string(n) + " (max " +
                          std::to_string(kMaxPolytopeDim) + "), m=" + std::to_string(m) + " (max " +
                          std::to_string(kMaxPolytopeSlabs) + ")");
    for_each_combination(m, n, [&](const std::vector<int>& idx) {
      Mat sub(n, n);
      for (int k = 0; k < n; ++k) sub.row(k) = dirs_.row(idx[k]);
      Eigen::PartialPivLU<Mat> lu(sub);
      if (std::abs(lu.determinant()) <= 1e-12) return;
      subsets_.push_back(idx);
      inverses_.push_back(lu.inverse());
    });
  }

  const Mat& directions() const { return dirs_; }

  /// All vertices of {|<x,u_i>| <= t_i}, deduplicated and closed under negation.
  VertexSet vertices(const Vec& offsets) const {
    const int n = static_cast<int>(dirs_.cols());
    const int m = static_cast<int>(dirs_.rows());
    std::vector<Vec> raw;
    Vec x(n);
    Mat cols(n, n);
    for (std::size_t s = 0; s < subsets_.size(); ++s) {
      const auto& idx = subsets_[s];
      for (int k = 0; k < n; ++k) cols.col(k) = inverses_[s].col(k) * offsets[idx[k]];
      // Gray-code walk over sign patterns with the first sign fixed to +1.
      x = cols.rowwise().sum();
      const int patterns = 1 << (n - 1);
      std::uint32_t signs = 0;  // bit k set => sign of constraint k+1 is negative
      for (int p = 0; p < patterns; ++p) {
        if (p > 0) {
          const int flip = __builtin_ctz(static_cast<unsigned>(p));
          const std::uint32_t bit = 1u << flip;
          if (signs & bit) x += 2.0 * cols.col(flip + 1);
          else x -= 2.0 * cols.col(flip + 1);
          signs ^= bit;
        }
        bool feasible = true;
        for (int i = 0; i < m && feasible; ++i) {
          const double v = std::abs(dirs_.row(i).dot(x));
          feasible = v <= offsets[i] + kFeasibilityTol * std::max(1.0, offsets[i]);
        }
        if (feasible) {
          raw.push_back(x);
          raw.push_back(-x);
        }
      }
    }
    return VertexSet{dedup(std::move(raw))};
  }

 private:
  static std::vector<Vec> dedup(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
      for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
      return false;
    });
    std::vector<Vec> kept;
    for (const Vec& p : pts) {
      bool dup = false;
      for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
        if (p[0] - (*it)[0] > kDedupRadius) break;
        if ((p - *it).norm() < kDedupRadius) {
          dup = true;
          break;
        }
      }
      if (!dup) kept.push_back(p);
    }
    return kept;
  }

  Mat dirs_;
  std::vector<std::vector<int>> subsets_;
  std::vector<Mat> inverses_;
};

inline VertexSet enumerate_vertices(const SymmetricHPolytope& p) {
  return SlabArrangement(p.directions()).vertices(p.offsets());
}

// ---------------------------------------------------------------------------
// Facets and face measures
// ---------------------------------------------------------------------------

namespace detail {

/// Measures faces of a polytope given its vertices and, per vertex, the mask
/// of tight signed constraints (bit 2j: <x,u_j> = t_j, bit 2j+1: the negative side).
/// A k-face's measure is the cone sum over its (k-1)-faces from the face
/// centroid, evaluated in an orthonormal chart of the face's affine hull.
class FaceMeasurer {
 public:
  FaceMeasurer(const std::vector<Vec>& vertices, const std::vector<std::uint64_t>& masks)
      : verts_(vertices), masks_(masks) {}

  struct Chart {
    Vec centroid;
    Mat basis;  // n x k orthonormal
  };

  Chart chart(const std::vector<int>& face) const {
    const Eigen::Index n = verts_.front().size();
    Vec c = Vec::Zero(n);
    for (int v : face) c += verts_[v];
    c /= static_cast<double>(face.size());
    Mat diffs(n, static_cast<Eigen::Index>(face.size()));
    for (std::size_t i = 0; i < face.size(); ++i) diffs.col(static_cast<Eigen::Index>(i)) = verts_[face[i]] - c;
    return {c, span_basis(diffs, 1e-9)};
  }

  /// Measure of a face whose affine dimension is known to be k.
  double measure(const std::vector<int>& face, int k) {
    if (k == 0) return 1.0;
    auto hit = memo_.find(face);
    if (hit != memo_.end()) return hit->second;
    const Chart ch = chart(face);
    double result = 0.0;
    if (k == 1) {
      const Vec dir = ch.basis.col(0);
      double lo = 0.0, hi = 0.0;
      for (int v : face) {
        const double s = dir.dot(verts_[v] - ch.centroid);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      result = hi - lo;
    } else {
      std::uint64_t all = ~0ULL, any = 0;
      for (int v : face) {
        all &= masks_[v];
        any |= masks_[v];
      }
      std::uint64_t candidates = any & ~all;
      std::vector<std::vector<int>> seen;
      while (candidates) {
        const int bit = __builtin_ctzll(candidates);
        candidates &= candidates - 1;
        std::vector<int> sub;
        for (int v : face)
          if (masks_[v] >> bit & 1ULL) sub.push_back(v);
        if (static_cast<int>(sub.size()) < k) continue;
        if (std::find(seen.begin(), seen.end(), sub) != seen.end()) continue;
        seen.push_back(sub);
        const Chart sc = chart(sub);
        if (sc.basis.cols() != k - 1) continue;
        Vec d = ch.centroid - sc.centroid;
        d -= sc.basis * (sc.basis.transpose() * d);
        result += d.norm() * measure(sub, k - 1);
      }
      result /= k;
    }
    memo_.emplace(face, result);
    return result;
  }

 private:
  const std::vector<Vec>& verts_;
  const std::vector<std::uint64_t>& masks_;
  std::map<std::vector<int>, double> memo_;
};

}  // namespace detail

/// Vertices, facets and derived scalars of one body. Shadow and support
/// queries are cheap once this is built.
class PolytopeGeometry {
 public:
  explicit PolytopeGeometry(const SymmetricHPolytope& p) : PolytopeGeometry(p, SlabArrangement(p.directions())) {}

  PolytopeGeometry(const SymmetricHPolytope& p, const SlabArrangement& arrangement)
      : n_(p.dim()), vertices_(arrangement.vertices(p.offsets())) {
    const int m = p.slabs();
    if (2 * m > 64) throw CapacityError("too many slabs for incidence masks");
    const auto& pts = vertices_.points;
    masks_.assign(pts.size(), 0);
    for (std::size_t v = 0; v < pts.size(); ++v) {
      for (int j = 0; j < m; ++j) {
        const double s = p.directions().row(j).dot(pts[v]);
        const double tol = kFeasibilityTol * std::max(1.0, p.offset(j));
        if (std::abs(s - p.offset(j)) <= tol) masks_[v] |= 1ULL << (2 * j);
        if (std::abs(s + p.offset(j)) <= tol) masks_[v] |= 1ULL << (2 * j + 1);
      }
    }
    detail::FaceMeasurer measurer(pts, masks_);
    slab_face_measure_.assign(m, 0.0);
    std::vector<std::vector<int>> seen;
    for (int j = 0; j < m; ++j) {
      for (int sign : {+1, -1}) {
        const int bit = 2 * j + (sign > 0 ? 0 : 1);
        std::vector<int> face;
        for (std::size_t v = 0; v < pts.size(); ++v)
          if (masks_[v] >> bit & 1ULL) face.push_back(static_cast<int>(v));
        if (static_cast<int>(face.size()) < n_) continue;
        if (measurer.chart(face).basis.cols() != n_ - 1) continue;
        const double mu = measurer.measure(face, n_ - 1);
        if (sign > 0) slab_face_measure_[j] = mu;
        if (mu < kMinFacetMeasure) continue;
        if (std::find(seen.begin(), seen.end(), face) != seen.end()) continue;
        seen.push_back(face);
        facets_.push_back(FacetData{sign * p.direction(j), p.offset(j), mu, face, j, sign});
      }
    }
    volume_ = 0.0;
    surface_ = 0.0;
    for (const auto& f : facets_) {
      volume_ += f.offset * f.measure / n_;
      surface_ += f.measure;
    }
  }

  int dim() const { return n_; }
  const VertexSet& vertices() const { return vertices_; }
  const std::vector<FacetData>& facets() const { return facets_; }
  double volume() const { return volume_; }
  double surface_area() const { return surface_; }

  /// Measure of the face {<x,u_j> = t_j} (zero if it is lower dimensional).
  /// By symmetry the opposite face has the same measure.
  const std::vector<double>& slab_face_measures() const { return slab_face_measure_; }

  /// (n-1)-volume of the orthogonal projection onto theta-perp.
  double shadow_area(const Vec& theta) const {
    if (!is_unit(theta, 1e-9)) throw InvalidArgument("shadow_area: direction must be a unit vector");
    double s = 0.0;
    for (const auto& f : facets_) s += std::abs(theta.dot(f.normal)) * f.measure;
    return 0.5 * s;
  }

  double support(const Vec& theta) const {
    double h = 0.0;
    for (const Vec& v : vertices_.points) h = std::max(h, v.dot(theta));
    return h;
  }

 private:
  int n_;
  VertexSet vertices_;
  std::vector<std::uint64_t> masks_;
  std::vector<FacetData> facets_;
  std::vector<double> slab_face_measure_;
  double volume_ = 0.0;
  double surface_ = 0.0;
};

inline std::vector<FacetData> facet_decomposition(const SymmetricHPolytope& p) { return PolytopeGeometry(p).facets(); }

inline double volume(const SymmetricHPolytope& p) { return PolytopeGeometry(p).volume(); }

inline double shadow_area(const SymmetricHPolytope& p, const Vec& theta) { return PolytopeGeometry(p).shadow_area(theta); }

inline double surface_area(const SymmetricHPolytope& p) { return PolytopeGeometry(p).surface_area(); }

/// {A x : x in P}.
inline SymmetricHPolytope affine_image(const SymmetricHPolytope& p, const Mat& a) {
  const int n = p.dim();
  if (a.rows() != n || a.cols() != n) throw InvalidArgument("affine_image: matrix has wrong shape");
  Eigen::PartialPivLU<Mat> lu(a);
  if (!(std::abs(lu.determinant()) > 1e-12)) throw InvalidArgument("affine_image: matrix is singular");
  // <Ax, v> = <x, A^T v>, so the image constraint direction is A^{-T} u.
  const Mat inv_t = lu.inverse().transpose();
  Mat dirs(p.slabs(), n);
  Vec offs(p.slabs());
  for (int i = 0; i < p.slabs(); ++i) {
    const Vec w = inv_t * p.direction(i);
    const double norm = w.norm();
    dirs.row(i) = (w / norm).transpose();
    offs[i] = p.offset(i) / norm;
  }
  return SymmetricHPolytope(std::move(dirs), std::move(offs));
}

/// Cauchy's surface-area formula, evaluated by averaging shadows over
/// uniformly sampled directions.
struct CauchyReport {
  double surface_area;
  double mean_shadow;
  double cauchy_estimate;  // (n v_n / v_{n-1}) * mean shadow
  double relative_gap;
};

inline CauchyReport cauchy_check(const SymmetricHPolytope& p, int samples, RandomSource& rng) {
  const PolytopeGeometry g(p);
  const int n = p.dim();
  if (n < 2) throw InvalidArgument("cauchy_check: needs n >= 2");
  double sum = 0.0;
  for (int s = 0; s < samples; ++s) sum += g.shadow_area(sample_unit_sphere(n, rng));
  const double mean = sum / samples;
  const double c = n * unit_ball_volume(n) / unit_ball_volume(n - 1);
  const double est = c * mean;
  return {g.surface_area(), mean, est, std::abs(est - g.surface_area()) / g.surface_area()};
}

/// Random body with m uniformly sampled slab directions and offsets drawn
/// uniformly from [lo, hi]. Redraws until the directions span.
inline SymmetricHPolytope random_symmetric_polytope(int n, int m, RandomSource& rng, double lo = 0.5, double hi = 1.5) {
  if (m < n) throw InvalidArgument("random_symmetric_polytope: need m >= n");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat dirs(m, n);
    Vec offs(m);
    for (int i = 0; i < m; ++i) {
      dirs.row(i) = sample_unit_sphere(n, rng).transpose();
      offs[i] = rng.uniform(lo, hi);
    }
    Eigen::FullPivLU<Mat> lu(dirs);
    lu.setThreshold(1e-6);
    if (lu.rank() == n) return SymmetricHPolytope(std::move(dirs), std::move(offs));
  }
  throw Error("random_symmetric_polytope: could not draw spanning directions");
}

}  // namespace shadows
