#pragma once

// Putting a symmetric polytope into shadow position: the linear image whose
// projection-body polar has the Euclidean ball as minimal enclosing
// ellipsoid. Also the minimal-shadow search and the product-of-shadows
// inequality checks that certify the result.

#include "shadows/john.hpp"
#include "shadows/kernel.hpp"
#include "shadows/polytope.hpp"
#include "shadows/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace shadows {

inline constexpr int kExactMinShadowGenerators = 16;
inline constexpr double kShadowPositionTolerance = 1e-4;

// ---------------------------------------------------------------------------
// Polarity
// ---------------------------------------------------------------------------

/// Vertices of the unit ball of the norm x -> h_Z(x), listed with both signs.
struct PolarVertexSet {
  std::vector<Vec> vertices;

  Mat as_rows() const {
    Mat m(static_cast<Eigen::Index>(vertices.size()), vertices.empty() ? 0 : vertices.front().size());
    for (std::size_t i = 0; i < vertices.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = vertices[i].transpose();
    return m;
  }
};

/// Each facet normal nu of Z gives the polar vertex nu / h_Z(nu).
inline PolarVertexSet polar_vertices(const Zonotope& z) {
  if (!z.spans()) throw InvalidArgument("polar_vertices: generators do not span");
  PolarVertexSet out;
  for (const Vec& nu : zonotope_facet_normals(z)) {
    const Vec x = nu / support(z, nu);
    out.vertices.push_back(x);
    out.vertices.push_back(-x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal support / shadow direction
// ---------------------------------------------------------------------------

enum class SearchBranch { automatic, exact, sampling };

struct MinShadow {
  Vec direction;
  double value;
  std::string branch;  // "exact" or "estimate"
};

namespace detail {

inline Vec null_direction(const Mat& rows) {
  const Eigen::Index n = rows.cols();
  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  if (sv.size() > 0 && sv[sv.size() - 1] <= 1e-10 * sv[0]) return Vec();
  return svd.matrixV().col(n - 1).normalized();
}

/// Moves theta to the best nearby vertex of the arrangement {<x, w_j> = 0}:
/// tries hyperplane intersections of the generators closest to orthogonal.
inline void polish_towards_vertex(const Zonotope& z, Vec& theta, double& value) {
  const int n = z.dim();
  const int m = z.size();
  if (n < 2 || m < n - 1) return;
  const int pool = std::min(m, n + 3);
  for (int round = 0; round < 20; ++round) {
    std::vector<std::pair<double, int>> closeness;
    for (int j = 0; j < m; ++j) closeness.emplace_back(std::abs(z.unit(j).dot(theta)), j);
    std::sort(closeness.begin(), closeness.end());
    bool improved = false;
    Mat sub(n - 1, n);
    for_each_combination(pool, n - 1, [&](const std::vector<int>& idx) {
      for (int k = 0; k < n - 1; ++k) sub.row(k) = z.unit(closeness[idx[k]].second).transpose();
      const Vec nu = null_direction(sub);
      if (nu.size() == 0) return;
      const double h = support(z, nu);
      if (h < value * (1.0 - 1e-15)) {
        value = h;
        theta = nu.dot(theta) >= 0 ? nu : Vec(-nu);
        improved = true;
      }
    });
    if (!improved) return;
  }
}

}  // namespace detail

/// Minimum of h_Z over the unit sphere. h_Z is linear on each cell of the
/// arrangement of hyperplanes w_j-perp and geodesically concave there, so the
/// minimum sits at a cell vertex, i.e. at a facet normal of Z. The exact
/// branch evaluates all of them; beyond the generator guard the minimum is
/// estimated from sampled directions polished towards nearby vertices.
inline MinShadow min_support_direction(const Zonotope& z, int samples = 100000, std::uint64_t seed = 0x6d696e,
                                       SearchBranch branch = SearchBranch::automatic) {
  const int n = z.dim();
  if (n == 1) return {Vec::Ones(1), support(z, Vec::Ones(1)), "exact"};
  const bool exact_fits = z.size() <= kExactMinShadowGenerators && n <= kMaxFacetNormalDim;
  if (branch == SearchBranch::exact && !exact_fits)
    throw CapacityError("min_support_direction: exact branch needs m <= " + std::to_string(kExactMinShadowGenerators) +
                        " and n <= " + std::to_string(kMaxFacetNormalDim));
  if (branch == SearchBranch::exact || (branch == SearchBranch::automatic && exact_fits)) {
    MinShadow best{Vec(), INFINITY, "exact"};
    for (const Vec& nu : zonotope_facet_normals(z)) {
      const double h = support(z, nu);
      if (h < best.value) best = {nu, h, "exact"};
    }
    if (best.direction.size() == 0) throw InvalidArgument("min_support_direction: generators do not span");
    return best;
  }
  if (samples < 1) throw InvalidArgument("min_support_direction: need at least one sample");
  RandomSource rng(seed);
  std::vector<std::pair<double, Vec>> top;
  const std::size_t keep = 16;
  for (int s = 0; s < samples; ++s) {
    Vec t = sample_unit_sphere(n, rng);
    const double h = support(z, t);
    if (top.size() < keep || h < top.back().first) {
      top.emplace_back(h, std::move(t));
      std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (top.size() > keep) top.pop_back();
    }
  }
  MinShadow best{Vec(), INFINITY, "estimate"};
  for (auto& [h, t] : top) {
    double value = h;
    Vec theta = t;
    detail::polish_towards_vertex(z, theta, value);
    if (value < best.value) best = {theta, value, "estimate"};
  }
  return best;
}

inline MinShadow min_shadow_direction(const PolytopeGeometry& c, int samples = 100000) {
  return min_support_direction(projection_body(c), samples);
}

inline MinShadow min_shadow_direction(const SymmetricHPolytope& c, int samples = 100000) {
  return min_shadow_direction(PolytopeGeometry(c), samples);
}

// ---------------------------------------------------------------------------
// Inequality verifiers
// ---------------------------------------------------------------------------

struct ProductInequalityReport {
  double lhs;    // |C|^{n-1}
  double rhs;    // prod |P_i C|^{c_i}
  double ratio;  // rhs / lhs
  bool holds;    // rhs >= lhs (1 - 1e-8)
};

/// |C|^{n-1} <= prod_i |P_{u_i} C|^{c_i} for an isotropic decomposition (u_i, c_i).
inline ProductInequalityReport product_of_shadows_check(const PolytopeGeometry& c, const WeightedDirections& wd) {
  wd.validate();
  if (wd.dim() != c.dim()) throw InvalidArgument("product_of_shadows_check: dimension mismatch");
  const int n = c.dim();
  const double log_lhs = (n - 1) * std::log(c.volume());
  double log_rhs = 0.0;
  for (int i = 0; i < wd.size(); ++i) log_rhs += wd.weights[i] * std::log(c.shadow_area(wd.directions.row(i).transpose()));
  const double ratio = std::exp(log_rhs - log_lhs);
  return {std::exp(log_lhs), std::exp(log_rhs), ratio, ratio >= 1.0 - 1e-8};
}

inline ProductInequalityReport product_of_shadows_check(const SymmetricHPolytope& c, const WeightedDirections& wd) {
  return product_of_shadows_check(PolytopeGeometry(c), wd);
}

/// The coordinate case: |C|^{n-1} <= prod_i |P_{e_i} C|.
inline ProductInequalityReport loomis_whitney_check(const PolytopeGeometry& c) {
  const int n = c.dim();
  return product_of_shadows_check(c, WeightedDirections{Mat::Identity(n, n), Vec::Ones(n)});
}

inline ProductInequalityReport loomis_whitney_check(const SymmetricHPolytope& c) { return loomis_whitney_check(PolytopeGeometry(c)); }

/// Shadow of the Euclidean ball divided by volume^{(n-1)/n}: v_{n-1} / v_n^{(n-1)/n}.
inline double ball_shadow_ratio(int n) {
  if (n < 2 || n > 200) throw InvalidArgument("ball_shadow_ratio: n must lie in [2, 200]");
  return std::exp(log_unit_ball_volume(n - 1) - (n - 1.0) / n * log_unit_ball_volume(n));
}

// ---------------------------------------------------------------------------
// Shadow position
// ---------------------------------------------------------------------------

struct ShadowPositionReport {
  Mat transform;  // |det| = 1
  SymmetricHPolytope body;
  double min_shadow;
  Vec min_direction;
  std::string branch;
  double volume;
  double ratio;  // min_shadow / volume^{(n-1)/n}
  JohnDecomposition john;
  double john_frobenius;
  double john_trace_gap;
  double contact_shadow_spread;  // max_i |shadow(u_i) - min_shadow| / min_shadow
  long mvee_iterations;
};

/// Linear image of C, normalized to determinant one, in which every shadow
/// is at least volume^{(n-1)/n}.
///
/// Pipeline: projection body Z of C, vertices of its polar, minimal enclosing
/// ellipsoid {x^T H x <= 1} of those vertices, then T = H^{1/2} scaled to
/// det T = 1. Since the polar of the projection body of TC is a multiple of
/// T applied to the polar for C, the new polar has a ball as its John
/// ellipsoid and the contact points carry the minimal shadow.
///
/// Throws NumericalFailure if the resulting ratio falls below 1 - 1e-4 or the
/// contact shadows disagree with the minimum by more than 1e-4 relative.
inline ShadowPositionReport shadow_position(const SymmetricHPolytope& c, double eps = 1e-8, int samples = 100000) {
  const int n = c.dim();
  if (n < 2) throw InvalidArgument("shadow_position: needs n >= 2");
  const Zonotope pc = projection_body(c);
  const PolarVertexSet polar = polar_vertices(pc);
  const MveeResult mvee = mvee_symmetric(polar.as_rows(), eps);

  Mat t = psd_sqrt(mvee.ellipsoid.shape());
  t /= std::pow(t.determinant(), 1.0 / n);

  SymmetricHPolytope image = affine_image(c, t);
  const PolytopeGeometry g(image);
  const MinShadow ms = min_shadow_direction(g, samples);
  const double vol = g.volume();
  const double ratio = ms.value / std::pow(vol, (n - 1.0) / n);

  // H^{1/2} maps the polar design onto the ball; the contacts are shadow directions of TC.
  JohnDecomposition john = extract_john_decomposition(mvee, eps);
  double spread = 0.0;
  for (int i = 0; i < john.size(); ++i) {
    const double s = g.shadow_area(john.contacts.row(i).transpose());
    spread = std::max(spread, std::abs(s - ms.value) / ms.value);
  }
  const JohnResidual res = john_residual(john);

  ShadowPositionReport report{t,   std::move(image), ms.value,      ms.direction,  ms.branch, vol,
                              ratio, std::move(john), res.frobenius, res.trace_gap, spread,    mvee.iterations};
  if (!(ratio >= 1.0 - kShadowPositionTolerance))
    throw NumericalFailure("shadow_position: ratio " + std::to_string(ratio) + " below 1 - 1e-4 (mvee iterations " +
                           std::to_string(mvee.iterations) + ")");
  if (!(spread <= kShadowPositionTolerance))
    throw NumericalFailure("shadow_position: contact shadows deviate from the minimum by " + std::to_string(spread));
  return report;
}

}  // namespace shadows
