#pragma once

#include <Eigen/Eigenvalues>

#include "qbench/core.hpp"

namespace qbench {

// ---------------------------------------------------------------------------
// Homogeneous primitives

struct HomPoint3 {
  Vec4 coords;

  explicit HomPoint3(const Vec4& c) : coords(c) {
    if (coords.norm() < 1e-15) throw InvalidParameterError("homogeneous point is the zero vector");
  }
  static HomPoint3 from_euclidean(const Vec3& p) { return HomPoint3(Vec4(p.x(), p.y(), p.z(), 1.0)); }

  Vec3 euclidean() const {
    if (std::abs(coords.w()) < 1e-15) throw InvalidParameterError("point at infinity has no euclidean form");
    return coords.head<3>() / coords.w();
  }
};

// Plane pi = (a,b,c,d), normalized so the normal (a,b,c) has unit length.
struct Plane3 {
  Vec4 coeffs;

  explicit Plane3(const Vec4& c) : coeffs(c) {
    const double n = coeffs.head<3>().norm();
    if (n < 1e-12) throw InvalidParameterError("plane has zero normal");
    coeffs /= n;
  }

  double eval(const Vec3& p) const { return coeffs.head<3>().dot(p) + coeffs.w(); }
};

// Image line l = (l1,l2,l3) in pixels, normalized so ||(l1,l2)|| = 1.
struct Line2 {
  Vec3 coeffs;

  explicit Line2(const Vec3& c) : coeffs(c) {
    const double n = coeffs.head<2>().norm();
    if (n < 1e-12) throw InvalidLineError("line has zero normal");
    coeffs /= n;
  }

  double eval(const Vec2& p) const { return coeffs.x() * p.x() + coeffs.y() * p.y() + coeffs.z(); }
};

// ---------------------------------------------------------------------------
// Ellipsoid parameterization: center t, Z-Y-X Euler angles theta, semi-axes s.

struct EllipsoidParams {
  Vec3 t = Vec3::Zero();
  Vec3 theta = Vec3::Zero();
  Vec3 s = Vec3::Ones();

  EllipsoidParams() = default;
  EllipsoidParams(const Vec3& t_, const Vec3& theta_, const Vec3& s_) : t(t_), theta(theta_), s(s_) {
    if (!(s.minCoeff() > 0.0)) throw InvalidParameterError("semi-axes must be strictly positive");
  }

  Mat3 rotation() const { return rotation_zyx(theta); }
};

// Dual quadric Q*, stored symmetric. Canonical scale: Q(3,3) = -1 when that
// entry is nonzero, otherwise unit Frobenius norm.
struct DualQuadric {
  Mat4 Q = Mat4::Identity();

  DualQuadric() = default;
  explicit DualQuadric(const Mat4& m) {
    Q = 0.5 * (m + m.transpose());
    normalize();
  }

  void normalize() {
    if (std::abs(Q(3, 3)) > 1e-12) {
      Q /= -Q(3, 3);
    } else {
      Q /= Q.norm();
      // deterministic sign: first entry of largest magnitude made positive
      for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r)
          if (std::abs(Q(r, c)) > 1e-9) {
            if (Q(r, c) < 0) Q = -Q;
            return;
          }
    }
  }
};

// Dual conic C* in pixel coordinates, unit Frobenius norm, C(2,2) >= 0.
struct DualConic {
  Mat3 C = Mat3::Identity();

  DualConic() = default;
  explicit DualConic(const Mat3& m) {
    C = 0.5 * (m + m.transpose());
    const double n = C.norm();
    if (n < 1e-15) throw InvalidParameterError("zero dual conic");
    C /= n;
    if (C(2, 2) < 0) C = -C;
  }
};

// Pinhole camera: intrinsics K, world-to-camera pose.
struct CameraView {
  Mat3 K = Mat3::Identity();
  Pose pose;

  CameraView() = default;
  CameraView(const Mat3& K_, const Pose& pose_) : K(K_), pose(pose_) {
    if (!(K(0, 0) > 0) || !(K(1, 1) > 0) || std::abs(K(2, 2) - 1.0) > 1e-12 ||
        std::abs(K(1, 0)) > 1e-12 || std::abs(K(2, 0)) > 1e-12 || std::abs(K(2, 1)) > 1e-12)
      throw InvalidParameterError("intrinsics must be upper triangular with positive focals and K(2,2)=1");
    if (!is_rotation(pose.R)) throw InvalidParameterError("camera rotation is not in SO(3)");
  }

  // H = K [R|t], world to pixels.
  Mat34 projection() const {
    Mat34 rt;
    rt.leftCols<3>() = pose.R;
    rt.col(3) = pose.t;
    return K * rt;
  }

  Vec3 center() const { return -(pose.R.transpose() * pose.t); }

  double depth_of(const Vec3& p_world) const { return pose.apply(p_world).z(); }

  Vec2 project_point(const Vec3& p_world) const {
    const Vec3 pc = pose.apply(p_world);
    if (pc.z() <= 1e-12) throw BehindCameraError("point at or behind the principal plane");
    const Vec3 px = K * pc;
    return {px.x() / px.z(), px.y() / px.z()};
  }
};

// ---------------------------------------------------------------------------
// Operations

// Q* = Z diag(s1^2, s2^2, s3^2, -1) Z^T with Z = [R(theta) t; 0 1].
inline DualQuadric quadric_from_params(const EllipsoidParams& p) {
  if (!(p.s.minCoeff() > 0.0)) throw InvalidParameterError("semi-axes must be strictly positive");
  const Mat3 R = p.rotation();
  Mat4 Z = Mat4::Identity();
  Z.topLeftCorner<3, 3>() = R;
  Z.topRightCorner<3, 1>() = p.t;
  Mat4 Qc = Mat4::Zero();
  Qc(0, 0) = p.s.x() * p.s.x();
  Qc(1, 1) = p.s.y() * p.s.y();
  Qc(2, 2) = p.s.z() * p.s.z();
  Qc(3, 3) = -1.0;
  return DualQuadric(Z * Qc * Z.transpose());
}

namespace detail {

// Eigendecomposition of the centered block with the tie-break rules:
// descending eigenvalues, lexicographic eigenvector sign fixing, det +1.
inline void sorted_frame(const Mat3& sym, Vec3& evals, Mat3& evecs) {
  Eigen::SelfAdjointEigenSolver<Mat3> eig(sym);
  Vec3 v = eig.eigenvalues();
  Mat3 u = eig.eigenvectors();
  int order[3] = {2, 1, 0};  // SelfAdjoint sorts ascending
  for (int i = 0; i < 3; ++i) {
    evals[i] = v[order[i]];
    evecs.col(i) = u.col(order[i]);
  }
  for (int i = 0; i < 2; ++i) {
    // lexicographic sign: first non-negligible component positive
    for (int r = 0; r < 3; ++r) {
      if (std::abs(evecs(r, i)) > 1e-9) {
        if (evecs(r, i) < 0) evecs.col(i) = -evecs.col(i);
        break;
      }
    }
  }
  if (evecs.determinant() < 0) evecs.col(2) = -evecs.col(2);
}

}  // namespace detail

// Inverse of quadric_from_params. The centroid is Q[0:3,3]/Q(3,3); the
// centered block Q33*(R S^2 R^T) comes out of the translation conjugation.
inline EllipsoidParams params_from_quadric(const DualQuadric& q) {
  const Mat4& Q = q.Q;
  if (std::abs(Q(3, 3)) < 1e-12) throw DegenerateQuadricError("dual quadric with vanishing (4,4) entry");
  const Mat4 Qn = Q / -Q(3, 3);  // canonical (3,3) = -1
  const Vec3 t = Qn.topRightCorner<3, 1>() / Qn(3, 3);
  const Mat3 centered = Qn.topLeftCorner<3, 3>() + t * t.transpose();
  Vec3 evals;
  Mat3 R;
  detail::sorted_frame(centered, evals, R);
  if (!(evals.minCoeff() > 1e-12)) throw DegenerateQuadricError("quadric is not a closed ellipsoid");
  EllipsoidParams p;
  p.t = t;
  p.s = evals.cwiseSqrt();
  p.theta = euler_zyx_from_rotation(R);
  return p;
}

inline Vec3 quadric_center(const DualQuadric& q) {
  if (std::abs(q.Q(3, 3)) < 1e-12) throw DegenerateQuadricError("dual quadric with vanishing (4,4) entry");
  return q.Q.topRightCorner<3, 1>() / q.Q(3, 3);
}

// C* = H Q* H^T.
inline DualConic project_quadric(const DualQuadric& q, const CameraView& cam) {
  if (cam.depth_of(quadric_center(q)) <= 1e-12)
    throw BehindCameraError("quadric centroid at or behind the principal plane");
  const Mat34 H = cam.projection();
  return DualConic(H * q.Q * H.transpose());
}

// pi = H^T l. The result contains the camera center for every l.
inline Plane3 backproject_line(const Line2& l, const CameraView& cam) {
  return Plane3(cam.projection().transpose() * l.coeffs);
}

struct Ellipse2D {
  Vec2 center = Vec2::Zero();
  Vec2 axes = Vec2::Ones();  // semi-axes, major first
  double angle = 0.0;        // radians, major axis vs +x
};

// Center/axes/angle of an ellipse-type dual conic. The dual form of an
// ellipse with semi-axes (a,b) is [[R D R^T - c c^T, -c], [-c^T, -1]] up to
// scale, with D = diag(a^2, b^2).
inline Ellipse2D conic_to_ellipse(const DualConic& c) {
  const Mat3& C = c.C;
  if (std::abs(C(2, 2)) < 1e-12) throw NonEllipseError("parabola-type conic");
  const Mat3 Cn = C / -C(2, 2);
  const Vec2 center = Cn.topRightCorner<2, 1>() / Cn(2, 2);
  const Mat2 M = Cn.topLeftCorner<2, 2>() + center * center.transpose();
  Eigen::SelfAdjointEigenSolver<Mat2> eig(M);
  const Vec2 ev = eig.eigenvalues();  // ascending
  if (!(ev.minCoeff() > 1e-14)) throw NonEllipseError("hyperbola-type conic");
  Ellipse2D e;
  e.center = center;
  e.axes = Vec2(std::sqrt(ev[1]), std::sqrt(ev[0]));
  const Vec2 major = eig.eigenvectors().col(1);
  e.angle = std::atan2(major.y(), major.x());
  return e;
}

inline bool is_ellipse(const DualConic& c) {
  if (std::abs(c.C(2, 2)) < 1e-12) return false;
  const Mat3 Cn = c.C / -c.C(2, 2);
  const Vec2 center = Cn.topRightCorner<2, 1>() / Cn(2, 2);
  const Mat2 M = Cn.topLeftCorner<2, 2>() + center * center.transpose();
  Eigen::SelfAdjointEigenSolver<Mat2> eig(M);
  return eig.eigenvalues().minCoeff() > 1e-14;
}

// Dual conic of an explicit ellipse; inverse of conic_to_ellipse.
inline DualConic ellipse_to_conic(const Ellipse2D& e) {
  if (!(e.axes.minCoeff() > 0)) throw InvalidParameterError("ellipse semi-axes must be positive");
  Mat2 rot;
  rot << std::cos(e.angle), -std::sin(e.angle), std::sin(e.angle), std::cos(e.angle);
  const Mat2 D = rot * Vec2(e.axes.x() * e.axes.x(), e.axes.y() * e.axes.y()).asDiagonal() * rot.transpose();
  Mat3 C;
  C.topLeftCorner<2, 2>() = D - e.center * e.center.transpose();
  C.topRightCorner<2, 1>() = -e.center;
  C.bottomLeftCorner<1, 2>() = -e.center.transpose();
  C(2, 2) = -1.0;
  return DualConic(C);
}

}  // namespace qbench
