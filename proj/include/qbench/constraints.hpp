#pragma once

#include <optional>

#include "qbench/polygon.hpp"

namespace qbench {

// ---------------------------------------------------------------------------
// Optimization-side quadric parameterization: center, rotation kept as a
// matrix with so(3) increments, log semi-axes. 9 local degrees of freedom
// ordered [dt(3), dphi(3), dlog_s(3)].

struct QuadricState {
  Vec3 t = Vec3::Zero();
  Mat3 R = Mat3::Identity();
  Vec3 log_s = Vec3::Zero();

  static QuadricState from_params(const EllipsoidParams& p) {
    return {p.t, p.rotation(), p.s.array().log()};
  }
  static QuadricState from_quadric(const DualQuadric& q) {
    return from_params(params_from_quadric(q));
  }

  Vec3 semi_axes() const { return log_s.array().exp(); }

  EllipsoidParams params() const {
    return EllipsoidParams(t, euler_zyx_from_rotation(R), semi_axes());
  }

  // Q* with the canonical (3,3) = -1 scale, built without re-normalization.
  Mat4 quadric_matrix() const {
    const Vec3 s2 = (2.0 * log_s).array().exp();
    const Mat3 core = R * s2.asDiagonal() * R.transpose();
    Mat4 Q;
    Q.topLeftCorner<3, 3>() = core - t * t.transpose();
    Q.topRightCorner<3, 1>() = -t;
    Q.bottomLeftCorner<1, 3>() = -t.transpose();
    Q(3, 3) = -1.0;
    return Q;
  }

  DualQuadric quadric() const { return DualQuadric(quadric_matrix()); }

  QuadricState retract(const Eigen::Matrix<double, 9, 1>& d) const {
    return {t + d.segment<3>(0), R * so3_exp(d.segment<3>(3)), log_s + d.segment<3>(6)};
  }
};

// ---------------------------------------------------------------------------

enum class ResidualKind { plane_algebraic, overlap, distribution, point_algebraic, point_reprojection, point_depth };

inline const char* to_string(ResidualKind k) {
  switch (k) {
    case ResidualKind::plane_algebraic: return "plane_algebraic";
    case ResidualKind::overlap: return "overlap";
    case ResidualKind::distribution: return "distribution";
    case ResidualKind::point_algebraic: return "point_algebraic";
    case ResidualKind::point_reprojection: return "point_reprojection";
    case ResidualKind::point_depth: return "point_depth";
  }
  return "?";
}

// One error term: residual vector plus Jacobians with respect to the quadric
// (9), the camera pose (6, right increment [drho, dphi] on the world-to-camera
// transform) and, for reprojection terms, the 3D point.
struct ResidualBlock {
  ResidualKind kind = ResidualKind::plane_algebraic;
  VecX values;
  MatX jacobian_quadric;
  MatX jacobian_pose;
  MatX jacobian_point;

  void validate() const {
    if (!values.allFinite() || !jacobian_quadric.allFinite() || !jacobian_pose.allFinite() ||
        !jacobian_point.allFinite())
      throw InvalidParameterError("residual block contains non-finite values");
    if (jacobian_quadric.size() > 0 && jacobian_quadric.cols() != 9)
      throw InvalidParameterError("quadric jacobian must have 9 columns");
    if (jacobian_pose.size() > 0 && jacobian_pose.cols() != 6)
      throw InvalidParameterError("pose jacobian must have 6 columns");
    if (jacobian_point.size() > 0 && jacobian_point.cols() != 3)
      throw InvalidParameterError("point jacobian must have 3 columns");
  }
};

struct JacobianRequest {
  bool quadric = true;
  bool pose = true;
};

namespace detail {

// dQ*/d(local param k) for the QuadricState parameterization.
inline Mat4 dquadric_dparam(const QuadricState& qs, int k) {
  Mat4 dQ = Mat4::Zero();
  if (k < 3) {
    Vec3 e = Vec3::Zero();
    e[k] = 1.0;
    dQ.topLeftCorner<3, 3>() = -(e * qs.t.transpose() + qs.t * e.transpose());
    dQ.topRightCorner<3, 1>() = -e;
    dQ.bottomLeftCorner<1, 3>() = -e.transpose();
  } else if (k < 6) {
    Vec3 e = Vec3::Zero();
    e[k - 3] = 1.0;
    const Vec3 s2 = (2.0 * qs.log_s).array().exp();
    const Mat3 W = qs.R * skew(e) * s2.asDiagonal() * qs.R.transpose();
    dQ.topLeftCorner<3, 3>() = W + W.transpose();
  } else {
    const int i = k - 6;
    const double s2 = std::exp(2.0 * qs.log_s[i]);
    dQ.topLeftCorner<3, 3>() = 2.0 * s2 * qs.R.col(i) * qs.R.col(i).transpose();
  }
  return dQ;
}

// dH/d(pose increment k), right increment on the world-to-camera pose.
inline Mat34 dprojection_dpose(const CameraView& cam, int k) {
  Mat34 dRt = Mat34::Zero();
  if (k < 3) {
    Vec3 e = Vec3::Zero();
    e[k] = 1.0;
    dRt.col(3) = cam.pose.R * e;
  } else {
    Vec3 e = Vec3::Zero();
    e[k - 3] = 1.0;
    dRt.leftCols<3>() = cam.pose.R * skew(e);
  }
  return cam.K * dRt;
}

inline void require_in_front(const QuadricState& qs, const CameraView& cam) {
  if (cam.depth_of(qs.t) <= 1e-12)
    throw BehindCameraError("quadric centroid at or behind the principal plane");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Plane-algebraic constraint: r_i = pi_i^T Q* pi_i with pi_i = H^T l_i,
// planes normalized to unit normal, Q* with (3,3) = -1. The residual keeps
// its sign; the loss takes |.|.

inline ResidualBlock plane_algebraic_residual(const QuadricState& qs, const CameraView& cam,
                                              const std::vector<Line2>& lines,
                                              const JacobianRequest& req = {}) {
  detail::require_in_front(qs, cam);
  const int n = int(lines.size());
  const Mat4 Q = qs.quadric_matrix();
  const Mat34 H = cam.projection();

  ResidualBlock block;
  block.kind = ResidualKind::plane_algebraic;
  block.values.resize(n);
  if (req.quadric) block.jacobian_quadric.setZero(n, 9);
  if (req.pose) block.jacobian_pose.setZero(n, 6);

  const Vec3 s2 = (2.0 * qs.log_s).array().exp();
  for (int i = 0; i < n; ++i) {
    const Vec4 rho = H.transpose() * lines[size_t(i)].coeffs;
    const double nn = rho.head<3>().norm();
    if (nn < 1e-15) throw InvalidLineError("backprojected plane has zero normal");
    const Vec4 pi = rho / nn;
    const Vec3 a = pi.head<3>();
    const double d = pi.w();
    block.values[i] = pi.dot(Q * pi);

    if (req.quadric) {
      // d/dt (a^T(RS2R^T - tt^T)a - 2 d t^T a - d^2) = -2(a^T t + d) a
      block.jacobian_quadric.row(i).segment<3>(0) = (-2.0 * (a.dot(qs.t) + d)) * a;
      const Vec3 b = qs.R.transpose() * a;
      block.jacobian_quadric.row(i).segment<3>(3) = 2.0 * (s2.asDiagonal() * b).cross(b);
      for (int j = 0; j < 3; ++j) {
        const double proj = qs.R.col(j).dot(a);
        block.jacobian_quadric(i, 6 + j) = 2.0 * s2[j] * proj * proj;
      }
    }
    if (req.pose) {
      // r = f/g with f = rho^T Q rho, g = ||rho_{1:3}||^2
      const Vec3 g_vec = rho.head<3>();
      const double g = g_vec.squaredNorm();
      const double f = rho.dot(Q * rho);
      const Vec4 df_drho = 2.0 * (Q * rho);
      Vec4 dg_drho = Vec4::Zero();
      dg_drho.head<3>() = 2.0 * g_vec;
      // rho_{1:3} = R^T m, rho_4 = t^T m with m = K^T l
      // d rho_{1:3} / d dphi = [R^T m]_x ; d rho_4 / d drho = (R^T m)^T
      const Vec3 rtm = g_vec;  // R^T m
      Eigen::Matrix<double, 4, 6> drho_dxi = Eigen::Matrix<double, 4, 6>::Zero();
      drho_dxi.block<3, 3>(0, 3) = skew(rtm);
      drho_dxi.block<1, 3>(3, 0) = rtm.transpose();
      const Eigen::Matrix<double, 1, 4> dr_drho =
          (df_drho.transpose() * g - f * dg_drho.transpose()) / (g * g);
      block.jacobian_pose.row(i) = dr_drho * drho_dxi;
    }
  }
  block.validate();
  return block;
}

inline ResidualBlock plane_algebraic_residual(const QuadricState& qs, const CameraView& cam,
                                              const HullPolygon& hull,
                                              const JacobianRequest& req = {}) {
  return plane_algebraic_residual(qs, cam, hull_edges(hull), req);
}

inline ResidualBlock plane_algebraic_residual(const DualQuadric& q, const CameraView& cam,
                                              const HullPolygon& hull,
                                              const JacobianRequest& req = {}) {
  return plane_algebraic_residual(QuadricState::from_quadric(q), cam, hull, req);
}

// ---------------------------------------------------------------------------
// Point-algebraic constraint (contour points vs the primal conic of the
// projected quadric): r_j = x_j^T Chat x_j with Chat the adjugate of
// C* = H Q* H^T, scaled to unit Frobenius norm, sign fixed so the ellipse
// exterior is positive.

namespace detail {

inline std::vector<Vec2> subsample(const std::vector<Vec2>& pts, size_t max_count) {
  if (pts.size() <= max_count) return pts;
  std::vector<Vec2> out;
  out.reserve(max_count);
  for (size_t j = 0; j < max_count; ++j) out.push_back(pts[j * pts.size() / max_count]);
  return out;
}

}  // namespace detail

inline ResidualBlock point_algebraic_residual(const QuadricState& qs, const CameraView& cam,
                                              const Contour2D& contour,
                                              const JacobianRequest& req = {},
                                              size_t max_points = 64) {
  detail::require_in_front(qs, cam);
  const Mat4 Q = qs.quadric_matrix();
  const Mat34 H = cam.projection();
  const Mat3 A = H * Q * H.transpose();
  if (std::abs(A.determinant()) < 1e-18) throw DegenerateQuadricError("projected dual conic is singular");
  const Mat3 Ainv = A.inverse();
  const Mat3 B = A.determinant() * Ainv;  // adjugate
  const double sigma = B.topLeftCorner<2, 2>().trace() > 0 ? 1.0 : -1.0;
  const double nB = B.norm();

  const std::vector<Vec2> pts = detail::subsample(contour.points, max_points);
  const int n = int(pts.size());

  ResidualBlock block;
  block.kind = ResidualKind::point_algebraic;
  block.values.resize(n);
  std::vector<Vec3> xs(size_t(n));
  for (int j = 0; j < n; ++j) {
    xs[size_t(j)] = Vec3(pts[size_t(j)].x(), pts[size_t(j)].y(), 1.0);
    block.values[j] = sigma * xs[size_t(j)].dot(B * xs[size_t(j)]) / nB;
  }

  const int nq = req.quadric ? 9 : 0;
  const int np = req.pose ? 6 : 0;
  if (nq) block.jacobian_quadric.setZero(n, 9);
  if (np) block.jacobian_pose.setZero(n, 6);
  for (int k = 0; k < nq + np; ++k) {
    Mat3 Adot;
    if (k < nq) {
      Adot = H * detail::dquadric_dparam(qs, k) * H.transpose();
    } else {
      const Mat34 Hdot = detail::dprojection_dpose(cam, k - nq);
      const Mat3 HdotQHt = Hdot * Q * H.transpose();
      Adot = HdotQHt + HdotQHt.transpose();
    }
    // d adj(A) = tr(A^-1 Adot) adj(A) - adj(A) Adot A^-1
    const Mat3 Bdot = (Ainv * Adot).trace() * B - B * Adot * Ainv;
    const double ndot = (B.transpose() * Bdot).trace() / nB;
    for (int j = 0; j < n; ++j) {
      const double s = xs[size_t(j)].dot(B * xs[size_t(j)]);
      const double sdot = xs[size_t(j)].dot(Bdot * xs[size_t(j)]);
      const double dr = sigma * (sdot * nB - s * ndot) / (nB * nB);
      if (k < nq) block.jacobian_quadric(j, k) = dr;
      else block.jacobian_pose(j, k - nq) = dr;
    }
  }
  block.validate();
  return block;
}

inline ResidualBlock point_algebraic_residual(const DualQuadric& q, const CameraView& cam,
                                              const Contour2D& contour,
                                              const JacobianRequest& req = {}) {
  return point_algebraic_residual(QuadricState::from_quadric(q), cam, contour, req);
}

// ---------------------------------------------------------------------------
// Overlap constraint: scalar 1 - IoU between the polygonized projected conic
// and an observed primitive polygon. Jacobians by central finite differences;
// the scalar overlap has no useful closed form.

inline double overlap_error_value(const QuadricState& qs, const CameraView& cam,
                                  const std::vector<Vec2>& primitive, int polygon_n = 64) {
  detail::require_in_front(qs, cam);
  const DualConic conic = project_quadric(qs.quadric(), cam);
  if (!is_ellipse(conic)) throw NonEllipseError("projected conic is not an ellipse");
  const Polygon2D proj = polygonize_conic(conic, polygon_n);
  return 1.0 - iou_convex_simple(proj.vertices, primitive);
}

inline ResidualBlock overlap_residual(const QuadricState& qs, const CameraView& cam,
                                      const std::vector<Vec2>& primitive,
                                      const JacobianRequest& req = {}, double fd_step = 1e-6) {
  ResidualBlock block;
  block.kind = ResidualKind::overlap;
  block.values.resize(1);
  block.values[0] = overlap_error_value(qs, cam, primitive);
  if (req.quadric) {
    block.jacobian_quadric.setZero(1, 9);
    for (int k = 0; k < 9; ++k) {
      Eigen::Matrix<double, 9, 1> d = Eigen::Matrix<double, 9, 1>::Zero();
      d[k] = fd_step;
      const double up = overlap_error_value(qs.retract(d), cam, primitive);
      d[k] = -fd_step;
      const double dn = overlap_error_value(qs.retract(d), cam, primitive);
      block.jacobian_quadric(0, k) = (up - dn) / (2.0 * fd_step);
    }
  }
  if (req.pose) {
    block.jacobian_pose.setZero(1, 6);
    for (int k = 0; k < 6; ++k) {
      Vec3 rho = Vec3::Zero(), phi = Vec3::Zero();
      (k < 3 ? rho[k] : phi[k - 3]) = fd_step;
      CameraView up_cam(cam.K, cam.pose.retract(rho, phi));
      const double up = overlap_error_value(qs, up_cam, primitive);
      (k < 3 ? rho[k] : phi[k - 3]) = -fd_step;
      CameraView dn_cam(cam.K, cam.pose.retract(rho, phi));
      const double dn = overlap_error_value(qs, dn_cam, primitive);
      block.jacobian_pose(0, k) = (up - dn) / (2.0 * fd_step);
    }
  }
  block.validate();
  return block;
}

// ---------------------------------------------------------------------------
// Distribution constraint: squared 2-Wasserstein distance between the
// Gaussians of the observed and projected ellipses.

namespace detail {

inline Mat2 ellipse_covariance(const Ellipse2D& e) {
  Mat2 rot;
  rot << std::cos(e.angle), -std::sin(e.angle), std::sin(e.angle), std::cos(e.angle);
  return rot * Vec2(e.axes.x() * e.axes.x(), e.axes.y() * e.axes.y()).asDiagonal() * rot.transpose();
}

inline Mat2 sqrt_psd2(const Mat2& m) {
  const double det = std::max(m.determinant(), 0.0);
  const double s = std::sqrt(det);
  const double tr = m.trace() + 2.0 * s;
  if (tr <= 0) return Mat2::Zero();
  return (m + s * Mat2::Identity()) / std::sqrt(tr);
}

}  // namespace detail

inline double wasserstein2_gaussians(const Vec2& mu_a, const Mat2& S_a, const Vec2& mu_b, const Mat2& S_b) {
  const Mat2 ra = detail::sqrt_psd2(S_a);
  const Mat2 cross = detail::sqrt_psd2(ra * S_b * ra);
  return (mu_a - mu_b).squaredNorm() + (S_a + S_b - 2.0 * cross).trace();
}

inline double distribution_error_value(const QuadricState& qs, const CameraView& cam, const Ellipse2D& obs) {
  detail::require_in_front(qs, cam);
  const Ellipse2D pred = conic_to_ellipse(project_quadric(qs.quadric(), cam));
  return wasserstein2_gaussians(obs.center, detail::ellipse_covariance(obs), pred.center,
                                detail::ellipse_covariance(pred));
}

inline ResidualBlock distribution_residual(const QuadricState& qs, const CameraView& cam,
                                           const Ellipse2D& obs_ellipse,
                                           const JacobianRequest& req = {}, double fd_step = 1e-6) {
  ResidualBlock block;
  block.kind = ResidualKind::distribution;
  block.values.resize(1);
  block.values[0] = distribution_error_value(qs, cam, obs_ellipse);
  if (req.quadric) {
    block.jacobian_quadric.setZero(1, 9);
    for (int k = 0; k < 9; ++k) {
      Eigen::Matrix<double, 9, 1> d = Eigen::Matrix<double, 9, 1>::Zero();
      d[k] = fd_step;
      const double up = distribution_error_value(qs.retract(d), cam, obs_ellipse);
      d[k] = -fd_step;
      const double dn = distribution_error_value(qs.retract(d), cam, obs_ellipse);
      block.jacobian_quadric(0, k) = (up - dn) / (2.0 * fd_step);
    }
  }
  if (req.pose) {
    block.jacobian_pose.setZero(1, 6);
    for (int k = 0; k < 6; ++k) {
      Vec3 rho = Vec3::Zero(), phi = Vec3::Zero();
      (k < 3 ? rho[k] : phi[k - 3]) = fd_step;
      const double up = distribution_error_value(qs, CameraView(cam.K, cam.pose.retract(rho, phi)), obs_ellipse);
      (k < 3 ? rho[k] : phi[k - 3]) = -fd_step;
      const double dn = distribution_error_value(qs, CameraView(cam.K, cam.pose.retract(rho, phi)), obs_ellipse);
      block.jacobian_pose(0, k) = (up - dn) / (2.0 * fd_step);
    }
  }
  block.validate();
  return block;
}

// ---------------------------------------------------------------------------
// Feature point reprojection, analytic in pose and point.

inline ResidualBlock point_reprojection_residual(const Vec3& world_point, const CameraView& cam,
                                                 const Vec2& pixel) {
  const Vec3 pc = cam.pose.apply(world_point);
  if (pc.z() <= 1e-12) throw BehindCameraError("point at or behind the principal plane");
  const double fx = cam.K(0, 0), fy = cam.K(1, 1);
  const double iz = 1.0 / pc.z();

  ResidualBlock block;
  block.kind = ResidualKind::point_reprojection;
  block.values.resize(2);
  block.values[0] = fx * pc.x() * iz + cam.K(0, 2) - pixel.x();
  block.values[1] = fy * pc.y() * iz + cam.K(1, 2) - pixel.y();

  Eigen::Matrix<double, 2, 3> dproj;
  dproj << fx * iz, 0, -fx * pc.x() * iz * iz, 0, fy * iz, -fy * pc.y() * iz * iz;
  block.jacobian_pose.resize(2, 6);
  block.jacobian_pose.leftCols<3>() = dproj * cam.pose.R;
  block.jacobian_pose.rightCols<3>() = dproj * (-cam.pose.R * skew(world_point));
  block.jacobian_point = dproj * cam.pose.R;
  block.validate();
  return block;
}

// Depth measurement residual for RGB-D style observations; pins the scale
// gauge of joint optimization.
inline ResidualBlock point_depth_residual(const Vec3& world_point, const CameraView& cam,
                                          double measured_depth) {
  const Vec3 pc = cam.pose.apply(world_point);
  if (pc.z() <= 1e-12) throw BehindCameraError("point at or behind the principal plane");
  ResidualBlock block;
  block.kind = ResidualKind::point_depth;
  block.values.resize(1);
  block.values[0] = pc.z() - measured_depth;
  block.jacobian_pose.resize(1, 6);
  block.jacobian_pose.leftCols<3>() = cam.pose.R.row(2);
  block.jacobian_pose.rightCols<3>() = -cam.pose.R.row(2) * skew(world_point);
  block.jacobian_point = cam.pose.R.row(2);
  block.validate();
  return block;
}

// ---------------------------------------------------------------------------
// Direct least-squares ellipse fit (Halir-Flusser formulation) on contour
// points; supplies the conic primitive and the observed distribution ellipse.

inline Ellipse2D fit_ellipse_direct(const std::vector<Vec2>& pts) {
  if (pts.size() < 5) throw NonEllipseError("ellipse fit needs at least 5 points");
  Vec2 mean = Vec2::Zero();
  for (const Vec2& p : pts) mean += p;
  mean /= double(pts.size());
  double scale = 0;
  for (const Vec2& p : pts) scale += (p - mean).norm();
  scale = scale / double(pts.size());
  if (scale < 1e-12) throw NonEllipseError("degenerate point set");

  const size_t n = pts.size();
  MatX D1(n, 3), D2(n, 3);
  for (size_t i = 0; i < n; ++i) {
    const Vec2 q = (pts[i] - mean) / scale;
    D1(long(i), 0) = q.x() * q.x();
    D1(long(i), 1) = q.x() * q.y();
    D1(long(i), 2) = q.y() * q.y();
    D2(long(i), 0) = q.x();
    D2(long(i), 1) = q.y();
    D2(long(i), 2) = 1.0;
  }
  const Mat3 S1 = D1.transpose() * D1;
  const Mat3 S2 = D1.transpose() * D2;
  const Mat3 S3 = D2.transpose() * D2;
  if (std::abs(S3.determinant()) < 1e-14) throw NonEllipseError("degenerate scatter in ellipse fit");
  const Mat3 T = -S3.inverse() * S2.transpose();
  const Mat3 M = S1 + S2 * T;
  Mat3 M2;
  M2.row(0) = M.row(2) / 2.0;
  M2.row(1) = -M.row(1);
  M2.row(2) = M.row(0) / 2.0;
  Eigen::EigenSolver<Mat3> eig(M2);
  Vec3 a1 = Vec3::Zero();
  bool found = false;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(eig.eigenvalues()[i].imag()) > 1e-9) continue;
    const Vec3 v = eig.eigenvectors().col(i).real();
    const double cond = 4.0 * v[0] * v[2] - v[1] * v[1];
    if (cond > 0) {
      a1 = v;
      found = true;
      break;
    }
  }
  if (!found) throw NonEllipseError("direct fit produced no ellipse solution");
  const Vec3 a2 = T * a1;

  // conic in normalized frame -> pixel frame via x_norm = (x - mean)/scale
  Mat3 Cn;
  Cn << a1[0], a1[1] / 2, a2[0] / 2, a1[1] / 2, a1[2], a2[1] / 2, a2[0] / 2, a2[1] / 2, a2[2];
  Mat3 Tn = Mat3::Identity();
  Tn(0, 0) = Tn(1, 1) = 1.0 / scale;
  Tn.col(2) = Vec3(-mean.x() / scale, -mean.y() / scale, 1.0);
  const Mat3 C = Tn.transpose() * Cn * Tn;
  if (std::abs(C.determinant()) < 1e-20) throw NonEllipseError("singular fitted conic");
  return conic_to_ellipse(DualConic(C.determinant() * C.inverse()));
}

inline Ellipse2D fit_ellipse_direct(const Contour2D& contour) { return fit_ellipse_direct(contour.points); }

// Largest ellipse inscribed in an axis-aligned bbox (x_min,y_min,x_max,y_max).
inline Ellipse2D bbox_inscribed_ellipse(const Vec4& bbox) {
  const double w = bbox[2] - bbox[0], h = bbox[3] - bbox[1];
  if (w <= 0 || h <= 0) throw InvalidParameterError("empty bbox");
  Ellipse2D e;
  e.center = Vec2(0.5 * (bbox[0] + bbox[2]), 0.5 * (bbox[1] + bbox[3]));
  e.axes = Vec2(0.5 * w, 0.5 * h);
  e.angle = 0.0;
  if (e.axes.x() < e.axes.y()) {
    std::swap(e.axes.x(), e.axes.y());
    e.angle = M_PI / 2.0;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Per-frame, per-object detection record.

struct Observation {
  int frame_id = 0;
  int object_id = -1;  // association slot; -1 while unassigned
  Vec4 bbox = Vec4::Zero();
  Contour2D contour;
  HullPolygon hull;
  std::optional<DualConic> fitted_conic;

  std::vector<Vec2> bbox_polygon() const {
    return {Vec2(bbox[0], bbox[1]), Vec2(bbox[2], bbox[1]), Vec2(bbox[2], bbox[3]), Vec2(bbox[0], bbox[3])};
  }
};

// Builds the derived fields from a raw contour: bbox, simplified hull and the
// least-squares conic (absent when the fit degenerates).
inline Observation make_observation(int frame_id, Contour2D contour, double simplify_tol = 0.0,
                                    int max_edges = 16) {
  Observation obs;
  obs.frame_id = frame_id;
  obs.hull = simplify_capped(quickhull(contour), simplify_tol, max_edges);
  Vec2 lo = contour.points[0], hi = contour.points[0];
  for (const Vec2& p : contour.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  obs.bbox = Vec4(lo.x(), lo.y(), hi.x(), hi.y());
  try {
    obs.fitted_conic = ellipse_to_conic(fit_ellipse_direct(contour));
  } catch (const Error&) {
    obs.fitted_conic.reset();
  }
  obs.contour = std::move(contour);
  return obs;
}

}  // namespace qbench
