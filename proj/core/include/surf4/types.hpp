#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace surf4 {

using Vector4 = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

// Error taxonomy mirrors the CLI exit-code contract:
// InputError -> 2, ToleranceError -> 3, NumericError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown names, bad parameters, out-of-domain points,
/// unreadable or schema-violating files.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A requested tolerance or threshold was not met.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: degenerate jets, minimal/flat points where a
/// construction is undefined, singular systems.
class NumericError : public Error {
 public:
  using Error::Error;
};

struct ParamPoint {
  double u = 0.0;
  double v = 0.0;
};

/// Closed parameter rectangle [u0,u1] x [v0,v1]. A direction may be marked
/// periodic, in which case membership is unrestricted along it and
/// evaluation wraps modulo the period (u1 - u0).
struct DomainRect {
  double u0 = 0.0, u1 = 1.0;
  double v0 = 0.0, v1 = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;

  double extent_u() const { return u1 - u0; }
  double extent_v() const { return v1 - v0; }
  double scale() const { return std::max(extent_u(), extent_v()); }

  bool contains(const ParamPoint& p) const {
    const bool in_u = periodic_u || (p.u >= u0 && p.u <= u1);
    const bool in_v = periodic_v || (p.v >= v0 && p.v <= v1);
    return in_u && in_v;
  }
};

inline double det4(const Vector4& a, const Vector4& b, const Vector4& c,
                   const Vector4& d) {
  Matrix4 m;
  m.row(0) = a;
  m.row(1) = b;
  m.row(2) = c;
  m.row(3) = d;
  return m.determinant();
}

/// Vector orthogonal to a, b, c with det(a, b, c, cross4(a,b,c)) >= 0.
/// Built from the cofactors of the last row, the 4D analogue of the
/// 3D cross product.
inline Vector4 cross4(const Vector4& a, const Vector4& b, const Vector4& c) {
  Vector4 out;
  Eigen::Matrix3d minor;
  for (int i = 0; i < 4; ++i) {
    int col = 0;
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      minor(0, col) = a[j];
      minor(1, col) = b[j];
      minor(2, col) = c[j];
      ++col;
    }
    const double sign = ((3 + i) % 2 == 0) ? 1.0 : -1.0;
    out[i] = sign * minor.determinant();
  }
  return out;
}

}  // namespace surf4
