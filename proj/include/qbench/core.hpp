#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qbench {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using VecX = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using MatX = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameterError : Error { using Error::Error; };
struct DegenerateQuadricError : Error { using Error::Error; };
struct BehindCameraError : Error { using Error::Error; };
struct NonEllipseError : Error { using Error::Error; };
struct InvalidLineError : Error { using Error::Error; };
struct DegenerateHullError : Error { using Error::Error; };
struct InvalidPolygonError : Error { using Error::Error; };
struct InsufficientObservationsError : Error { using Error::Error; };
struct UnderconstrainedError : Error { using Error::Error; };
struct GaugeError : Error { using Error::Error; };
struct SingularSystemError : Error { using Error::Error; };
struct NotVisibleError : Error { using Error::Error; };
struct UndefinedMetricError : Error { using Error::Error; };
struct InsufficientMatchesError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// SO(3)

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

inline Mat3 so3_exp(const Vec3& w) {
  const double th = w.norm();
  if (th < 1e-12) {
    return Mat3::Identity() + skew(w);
  }
  const Mat3 k = skew(w / th);
  return Mat3::Identity() + std::sin(th) * k + (1.0 - std::cos(th)) * k * k;
}

inline Vec3 so3_log(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double th = std::acos(c);
  if (th < 1e-10) {
    return 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  }
  if (th > M_PI - 1e-6) {
    // near pi the off-diagonal formula degenerates; use the symmetric part
    Mat3 a = 0.5 * (r + Mat3::Identity());
    Vec3 axis = a.diagonal().cwiseMax(0.0).cwiseSqrt();
    int k;
    a.diagonal().maxCoeff(&k);
    if (axis[k] > 1e-12) {
      for (int i = 0; i < 3; ++i)
        if (i != k) axis[i] = a(k, i) / axis[k] * (axis[i] < 0 ? -1.0 : 1.0);
    }
    axis.normalize();
    // fix the axis sign from the skew part when it is not exactly pi
    Vec3 s(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
    if (axis.dot(s) < 0) axis = -axis;
    return th * axis;
  }
  Vec3 w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return w * (th / (2.0 * std::sin(th)));
}

// Z-Y-X Euler composition: R = Rz(e.z) * Ry(e.y) * Rx(e.x).
inline Mat3 rotation_zyx(const Vec3& e) {
  const double cx = std::cos(e.x()), sx = std::sin(e.x());
  const double cy = std::cos(e.y()), sy = std::sin(e.y());
  const double cz = std::cos(e.z()), sz = std::sin(e.z());
  Mat3 rx, ry, rz;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  return rz * ry * rx;
}

inline Vec3 euler_zyx_from_rotation(const Mat3& r) {
  const double sy = -r(2, 0);
  if (std::abs(sy) > 1.0 - 1e-10) {
    // gimbal lock: fold yaw into roll
    const double sign = sy > 0 ? 1.0 : -1.0;
    return {sign * std::atan2(r(0, 1) * sign, r(1, 1)), sign * M_PI / 2.0, 0.0};
  }
  return {std::atan2(r(2, 1), r(2, 2)), std::asin(sy), std::atan2(r(1, 0), r(0, 0))};
}

inline bool is_rotation(const Mat3& r, double tol = 1e-10) {
  return (r.transpose() * r - Mat3::Identity()).norm() < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

// ---------------------------------------------------------------------------
// Rigid transform y = R x + t.

struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return R * p + t; }

  Pose inverse() const { return {R.transpose(), -(R.transpose() * t)}; }

  Pose compose(const Pose& rhs) const { return {R * rhs.R, R * rhs.t + t}; }

  Mat4 matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = R;
    m.topRightCorner<3, 1>() = t;
    return m;
  }

  // Right-multiplicative increment: T * exp([rho, phi]).
  Pose retract(const Vec3& rho, const Vec3& phi) const {
    return {R * so3_exp(phi), t + R * rho};
  }
};

// ---------------------------------------------------------------------------
// Deterministic seed derivation for independent random streams.

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(mix_seed(seed, stream));
}

}  // namespace qbench
