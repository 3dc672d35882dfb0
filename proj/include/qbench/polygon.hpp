#pragma once

#include <vector>

#include "qbench/hull.hpp"

namespace qbench {

// Simple (non-self-intersecting) polygon, CCW, pixel coordinates.
struct Polygon2D {
  std::vector<Vec2> vertices;

  Polygon2D() = default;
  explicit Polygon2D(std::vector<Vec2> v) : vertices(std::move(v)) {}
};

namespace detail {

inline double shoelace(const std::vector<Vec2>& v) {
  double a = 0;
  const size_t n = v.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double d1 = cross2(c, d, a);
  const double d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c);
  const double d4 = cross2(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline bool is_simple_polygon(const std::vector<Vec2>& v) {
  const size_t n = v.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // shared endpoint
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) return false;
    }
  }
  return true;
}

inline bool is_convex_ccw(const std::vector<Vec2>& v) {
  const size_t n = v.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i)
    if (cross2(v[i], v[(i + 1) % n], v[(i + 2) % n]) < -1e-9) return false;
  return true;
}

// Sutherland-Hodgman: clip `subject` against one half-plane (left of a->b).
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& subject, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const size_t n = subject.size();
  out.reserve(n + 2);
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = subject[i];
    const Vec2& q = subject[(i + 1) % n];
    const double dp = cross2(a, b, p);
    const double dq = cross2(a, b, q);
    if (dp >= 0) out.push_back(p);
    if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
      const double u = dp / (dp - dq);
      out.push_back(p + u * (q - p));
    }
  }
  return out;
}

// Intersection of a convex CCW clip polygon with a simple subject polygon.
// No input validation; callers on hot paths use this directly.
inline std::vector<Vec2> clip_convex(const std::vector<Vec2>& convex_clip, const std::vector<Vec2>& subject) {
  std::vector<Vec2> cur = subject;
  const size_t n = convex_clip.size();
  for (size_t i = 0; i < n && !cur.empty(); ++i)
    cur = clip_halfplane(cur, convex_clip[i], convex_clip[(i + 1) % n]);
  return cur;
}

inline double intersection_area(const std::vector<Vec2>& convex_clip, const std::vector<Vec2>& subject) {
  const std::vector<Vec2> inter = clip_convex(convex_clip, subject);
  return inter.size() < 3 ? 0.0 : std::abs(shoelace(inter));
}

}  // namespace detail

inline double polygon_area(const Polygon2D& p) {
  if (p.vertices.size() < 3) throw InvalidPolygonError("polygon needs at least 3 vertices");
  return detail::shoelace(p.vertices);
}

// Intersection region. One operand must be convex; the convex side drives
// half-plane clipping, which is exact in that case.
inline Polygon2D polygon_clip(const Polygon2D& a, const Polygon2D& b) {
  if (a.vertices.size() < 3 || b.vertices.size() < 3)
    throw InvalidPolygonError("polygon needs at least 3 vertices");
  if (!detail::is_simple_polygon(a.vertices) || !detail::is_simple_polygon(b.vertices))
    throw InvalidPolygonError("self-intersecting polygon");
  if (detail::shoelace(a.vertices) <= 0 || detail::shoelace(b.vertices) <= 0)
    throw InvalidPolygonError("polygon must be counter-clockwise");
  const std::vector<Vec2>* clip = nullptr;
  const std::vector<Vec2>* subject = nullptr;
  if (detail::is_convex_ccw(a.vertices)) {
    clip = &a.vertices;
    subject = &b.vertices;
  } else if (detail::is_convex_ccw(b.vertices)) {
    clip = &b.vertices;
    subject = &a.vertices;
  } else {
    throw InvalidPolygonError("polygon_clip requires one convex operand");
  }
  return Polygon2D(detail::clip_convex(*clip, *subject));
}

// Inscribed n-gon of an ellipse, CCW.
inline Polygon2D polygonize_ellipse(const Ellipse2D& e, int n = 64) {
  if (n < 3) throw InvalidParameterError("polygonization needs at least 3 vertices");
  Mat2 rot;
  rot << std::cos(e.angle), -std::sin(e.angle), std::sin(e.angle), std::cos(e.angle);
  std::vector<Vec2> v;
  v.reserve(size_t(n));
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * double(k) / double(n);
    v.push_back(e.center + rot * Vec2(e.axes.x() * std::cos(phi), e.axes.y() * std::sin(phi)));
  }
  return Polygon2D(std::move(v));
}

inline Polygon2D polygonize_conic(const DualConic& c, int n = 64) {
  return polygonize_ellipse(conic_to_ellipse(c), n);
}

// IoU between a convex polygon and a simple polygon, no validation.
inline double iou_convex_simple(const std::vector<Vec2>& convex, const std::vector<Vec2>& subject) {
  const double ai = detail::intersection_area(convex, subject);
  const double aa = std::abs(detail::shoelace(convex));
  const double ab = std::abs(detail::shoelace(subject));
  const double denom = aa + ab - ai;
  return denom <= 0 ? 0.0 : ai / denom;
}

}  // namespace qbench
