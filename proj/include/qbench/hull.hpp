#pragma once

#include <algorithm>
#include <vector>

#include "qbench/projective.hpp"

namespace qbench {

// Closed polyline from a segmentation mask, pixel coordinates.
struct Contour2D {
  std::vector<Vec2> points;

  Contour2D() = default;
  explicit Contour2D(std::vector<Vec2> pts) : points(std::move(pts)) {
    if (points.size() < 3) throw InvalidParameterError("contour needs at least 3 points");
    for (size_t i = 0; i < points.size(); ++i) {
      const Vec2& a = points[i];
      const Vec2& b = points[(i + 1) % points.size()];
      if ((a - b).norm() < 1e-9) throw InvalidParameterError("contour has duplicate consecutive points");
    }
  }
};

// Strictly convex polygon, counter-clockwise.
struct HullPolygon {
  std::vector<Vec2> vertices;

  HullPolygon() = default;
  explicit HullPolygon(std::vector<Vec2> v) : vertices(std::move(v)) {
    if (vertices.size() < 3) throw DegenerateHullError("hull needs at least 3 vertices");
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
      const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
      if (e0.x() * e1.y() - e0.y() * e1.x() <= 1e-9)
        throw DegenerateHullError("hull is not strictly convex CCW");
    }
  }

  Vec2 centroid() const {
    Vec2 c = Vec2::Zero();
    for (const Vec2& v : vertices) c += v;
    return c / double(vertices.size());
  }

  double area() const {
    double a = 0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2& p = vertices[i];
      const Vec2& q = vertices[(i + 1) % n];
      a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
  }

  double perimeter() const {
    double s = 0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) s += (vertices[(i + 1) % n] - vertices[i]).norm();
    return s;
  }
};

namespace detail {

inline double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) return (p - a).norm();
  const double u = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + u * ab)).norm();
}

inline void quickhull_recurse(const std::vector<Vec2>& pts, const Vec2& a, const Vec2& b,
                              std::vector<Vec2>& out) {
  // pts strictly left of ab; append hull vertices between a and b (exclusive)
  int far = -1;
  double best = 1e-9;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = cross2(a, b, pts[i]);
    if (d > best) {
      best = d;
      far = int(i);
    }
  }
  if (far < 0) return;
  const Vec2 f = pts[size_t(far)];
  std::vector<Vec2> left_af, left_fb;
  for (const Vec2& p : pts) {
    if (cross2(a, f, p) > 1e-9) left_af.push_back(p);
    if (cross2(f, b, p) > 1e-9) left_fb.push_back(p);
  }
  quickhull_recurse(left_af, a, f, out);
  out.push_back(f);
  quickhull_recurse(left_fb, f, b, out);
}

inline std::vector<Vec2> quickhull_points(const std::vector<Vec2>& input) {
  auto lex_less = [](const Vec2& p, const Vec2& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  };
  const Vec2 lo = *std::min_element(input.begin(), input.end(), lex_less);
  const Vec2 hi = *std::max_element(input.begin(), input.end(), lex_less);
  if ((hi - lo).norm() < 1e-12) throw DegenerateHullError("all contour points coincide");
  std::vector<Vec2> above, below;
  for (const Vec2& p : input) {
    const double d = cross2(lo, hi, p);
    if (d > 1e-9) above.push_back(p);
    else if (d < -1e-9) below.push_back(p);
  }
  if (above.empty() && below.empty()) throw DegenerateHullError("all contour points are collinear");
  std::vector<Vec2> out;
  out.push_back(lo);
  quickhull_recurse(above, lo, hi, out);
  out.push_back(hi);
  quickhull_recurse(below, hi, lo, out);
  // drop vertices that ended up within epsilon of collinear
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    for (size_t i = 0; i < out.size(); ++i) {
      const Vec2& a = out[(i + out.size() - 1) % out.size()];
      const Vec2& b = out[i];
      const Vec2& c = out[(i + 1) % out.size()];
      if (cross2(a, b, c) <= 1e-9) {
        out.erase(out.begin() + long(i));
        changed = true;
        break;
      }
    }
  }
  return out;  // CCW
}

// Classic open-polyline Douglas-Peucker, keeps endpoints.
inline void douglas_peucker(const std::vector<Vec2>& chain, size_t lo, size_t hi, double tol,
                            std::vector<char>& keep) {
  if (hi <= lo + 1) return;
  double best = -1;
  size_t far = lo;
  for (size_t i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(chain[i], chain[lo], chain[hi]);
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (best > tol) {
    keep[far] = 1;
    douglas_peucker(chain, lo, far, tol, keep);
    douglas_peucker(chain, far, hi, tol, keep);
  }
}

// DP on a closed polygon: anchor at the diametral vertex pair, simplify the
// two chains independently.
inline std::vector<Vec2> simplify_closed(const std::vector<Vec2>& poly, double tol) {
  const size_t n = poly.size();
  size_t ia = 0, ib = 1;
  double best = -1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double d = (poly[i] - poly[j]).squaredNorm();
      if (d > best) {
        best = d;
        ia = i;
        ib = j;
      }
    }
  std::vector<Vec2> chain_a, chain_b;
  for (size_t i = ia; ; i = (i + 1) % n) {
    chain_a.push_back(poly[i]);
    if (i == ib) break;
  }
  for (size_t i = ib; ; i = (i + 1) % n) {
    chain_b.push_back(poly[i]);
    if (i == ia) break;
  }
  auto run = [tol](const std::vector<Vec2>& chain) {
    std::vector<char> keep(chain.size(), 0);
    keep.front() = keep.back() = 1;
    douglas_peucker(chain, 0, chain.size() - 1, tol, keep);
    std::vector<Vec2> out;
    for (size_t i = 0; i < chain.size(); ++i)
      if (keep[i]) out.push_back(chain[i]);
    return out;
  };
  std::vector<Vec2> sa = run(chain_a), sb = run(chain_b);
  std::vector<Vec2> merged(sa.begin(), sa.end() - 1);
  merged.insert(merged.end(), sb.begin(), sb.end() - 1);
  return merged;
}

}  // namespace detail

// Convex hull of a contour via QuickHull, CCW, collinear points dropped.
inline HullPolygon quickhull(const Contour2D& c) {
  return HullPolygon(detail::quickhull_points(c.points));
}

inline HullPolygon quickhull(const std::vector<Vec2>& pts) {
  if (pts.size() < 3) throw DegenerateHullError("hull needs at least 3 points");
  return HullPolygon(detail::quickhull_points(pts));
}

// Douglas-Peucker simplification of a convex hull; a final hull pass restores
// strict convexity.
inline HullPolygon simplify(const HullPolygon& h, double tol) {
  if (tol < 0) throw InvalidParameterError("simplification tolerance must be non-negative");
  if (tol == 0.0 || h.vertices.size() == 3) return h;
  const std::vector<Vec2> kept = detail::simplify_closed(h.vertices, tol);
  if (kept.size() < 3) throw DegenerateHullError("simplification collapsed the hull");
  return quickhull(kept);
}

// Simplify, then geometrically grow the tolerance until the hull has at most
// max_edges edges.
inline HullPolygon simplify_capped(const HullPolygon& h, double tol, int max_edges) {
  if (max_edges < 3) throw InvalidParameterError("edge cap must be at least 3");
  HullPolygon out = simplify(h, tol);
  double t = std::max(tol, 0.25);
  while (int(out.vertices.size()) > max_edges && t < 1e6) {
    t *= 2.0;
    try {
      out = simplify(h, t);
    } catch (const DegenerateHullError&) {
      break;  // next doubling would collapse the polygon; keep the last valid hull
    }
  }
  return out;
}

// One homogeneous line per hull edge, oriented so the interior evaluates
// positive.
inline std::vector<Line2> hull_edges(const HullPolygon& h) {
  const Vec2 c = h.centroid();
  std::vector<Line2> lines;
  const size_t n = h.vertices.size();
  lines.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = h.vertices[i];
    const Vec2& q = h.vertices[(i + 1) % n];
    Vec3 l = Vec3(p.x(), p.y(), 1.0).cross(Vec3(q.x(), q.y(), 1.0));
    Line2 line(l);
    if (line.eval(c) < 0) line = Line2(-l);
    lines.push_back(line);
  }
  return lines;
}

// Segment lines of a (possibly concave) contour after DP simplification at
// tol; orientation follows the contour centroid. Used by the contour variant
// of the plane constraint.
inline std::vector<Line2> contour_edges(const Contour2D& c, double tol) {
  std::vector<Vec2> pts = tol > 0 ? detail::simplify_closed(c.points, tol) : c.points;
  if (pts.size() < 3) pts = c.points;
  Vec2 centroid = Vec2::Zero();
  for (const Vec2& p : pts) centroid += p;
  centroid /= double(pts.size());
  std::vector<Line2> lines;
  lines.reserve(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % pts.size()];
    if ((p - q).norm() < 1e-9) continue;
    Vec3 l = Vec3(p.x(), p.y(), 1.0).cross(Vec3(q.x(), q.y(), 1.0));
    Line2 line(l);
    if (line.eval(centroid) < 0) line = Line2(-l);
    lines.push_back(line);
  }
  return lines;
}

}  // namespace qbench
