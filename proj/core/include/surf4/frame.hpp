#pragma once

#include "surf4/invariants.hpp"
#include "surf4/surface.hpp"

namespace surf4 {

/// The geometrically determined orthonormal frame {x, y, b, l} together
/// with the eight invariant functions of its Frenet-type derivative
/// formulas. x, y are unit principal directions, b is the unit normal
/// collinear with sigma(x,x), l completes the positive orientation.
struct GeometricFrame {
  Vector4 x = Vector4::Zero();
  Vector4 y = Vector4::Zero();
  Vector4 b = Vector4::Zero();
  Vector4 l = Vector4::Zero();

  double nu1 = 0, nu2 = 0;     // sigma(x,x) = nu1 b, sigma(y,y) = nu2 b
  double lambda = 0, mu = 0;   // sigma(x,y) = lambda b + mu l
  double gamma1 = 0, gamma2 = 0;
  double beta1 = 0, beta2 = 0;

  /// (lambda, mu)-components of x and y in the (z_u, z_v) basis; used to
  /// step along the principal directions in parameter space.
  TangentDirection x_dir, y_dir;

  /// Set when sigma(x,x) was too small to define b and sigma(y,y) was used
  /// instead.
  bool b_from_sigma_yy = false;

  Matrix4 as_matrix() const {
    Matrix4 m;
    m.row(0) = x;
    m.row(1) = y;
    m.row(2) = b;
    m.row(3) = l;
    return m;
  }
};

/// Computes the frame and its eight invariants at p. Requires a non-flat
/// point with kappa^2 - k > 0 (throws NumericError near minimal points,
/// guard: kappa^2 - k < 1e-10 (kappa^2 + |k| + 1)). The derivative
/// invariants gamma1, gamma2, beta1, beta2 come from central differences
/// of the frame field along the principal directions.
GeometricFrame geometric_frame(const SurfaceModel& model, ParamPoint p);

/// Same, with the gauge (assignment and signs of x, y, b) aligned to a
/// reference frame instead of the pointwise deterministic convention;
/// used for continuation across a grid.
GeometricFrame geometric_frame(const SurfaceModel& model, ParamPoint p,
                               const GeometricFrame& ref);

/// Frame without the derivative invariants (gamma/beta left zero); cheap
/// building block shared with the finite-difference path.
GeometricFrame algebraic_frame(const SurfaceJet& jet,
                               const GeometricFrame* ref = nullptr);

/// Allied mean curvature vector a(H) = ((nu1+nu2)/2) lambda mu l; vanishes
/// exactly on the (non-minimal) Chen surfaces, i.e. when lambda = 0.
Vector4 allied_mean_curvature(const GeometricFrame& frame);

}  // namespace surf4
