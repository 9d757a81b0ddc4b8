#pragma once

#include "surf4/net.hpp"
#include "surf4/types.hpp"

namespace surf4 {

/// Coefficient matrices of the frame system Z_u = A Z, Z_v = B Z, where the
/// rows of Z are the frame vectors x, y, b, l. Skew-symmetric by
/// construction.
struct FrameMatrixPair {
  Matrix4 A = Matrix4::Zero();
  Matrix4 B = Matrix4::Zero();
};

FrameMatrixPair frame_matrices(double sqrtE, double sqrtG, double gamma1,
                               double gamma2, double nu1, double nu2,
                               double lambda, double mu, double beta1,
                               double beta2);

FrameMatrixPair frame_matrices_at(const InvariantFieldGrid& grid, int i,
                                  int j);

enum class PathPolicy { USpineThenV, VSpineThenU };

enum class FrameStepper {
  /// Exponential of the midpoint-sampled coefficient matrix, augmented so
  /// the position integrates inside the same one-step map; orthogonal by
  /// construction and exact on constant-coefficient grids.
  MagnusMidpoint,
  /// Classical RK4 on the frame system with per-step re-orthonormalization
  /// and trapezoid position quadrature; cross-check fallback.
  Rk4Projected
};

struct ReconstructOptions {
  double residual_threshold = 1e-3;  // max residual of the six equations
  PathPolicy path = PathPolicy::USpineThenV;
  FrameStepper stepper = FrameStepper::MagnusMidpoint;
  bool check_compatibility = true;
};

struct ReconstructedPatch {
  Field2D<Vector4> positions;
  Field2D<Matrix4> frames;  // rows x, y, b, l
  /// Max interior norm of the commutator defect dA/dv - dB/du + AB - BA.
  double compatibility_residual = 0;
  /// Max deviation of the frame Gram matrix from the identity over nodes.
  double orthonormality_drift = 0;
};

/// Integrates the frame and position systems over the grid from an
/// orthonormal, positively oriented initial frame (rows x, y, b, l) at the
/// (0,0) node. Deterministic; throws ToleranceError when the grid violates
/// the residual threshold and InputError on bad initial data.
ReconstructedPatch reconstruct(const InvariantFieldGrid& grid,
                               const Matrix4& initial_frame,
                               const Vector4& initial_point,
                               const ReconstructOptions& options = {});

/// Fills sqrtE, sqrtG from the invariant fields:
///   sqrtE = mu_u / (2 mu gamma2 + nu1 beta2 - lambda beta1),
///   sqrtG = mu_v / (2 mu gamma1 - lambda beta2 + nu2 beta1).
/// Requires the general class (both mu-derivatives nonzero) and positive
/// quotients; throws NumericError otherwise.
InvariantFieldGrid derive_metric_from_invariants(InvariantFieldGrid grid);

struct RigidAlignment {
  Matrix4 rotation = Matrix4::Identity();
  Vector4 translation = Vector4::Zero();
  double rms = 0;
};

/// Proper-rotation Procrustes in dimension 4: the motion minimizing the
/// RMS distance from rotation*candidate + translation to reference.
/// Throws NumericError when the centered point set has rank < 3.
RigidAlignment rigid_align(const Field2D<Vector4>& candidate,
                           const Field2D<Vector4>& reference);

}  // namespace surf4
