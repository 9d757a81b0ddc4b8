#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "surf4/surface.hpp"
#include "surf4/types.hpp"

namespace surf4 {

/// Scalar function together with its first three derivatives.
using SmoothFn = std::function<std::array<double, 4>(double)>;
/// Scalar function with its first derivative.
using CurvatureFn = std::function<std::array<double, 2>(double)>;

/// Meridian surface data: z(u,v) = f(u) l(v) + g(u) e4 with a unit-speed
/// profile (f' ^2 + g'^2 = 1, f > 0) and the spherical curvature of the
/// directing curve c on S^2(1).
struct MeridianSpec {
  SmoothFn f;
  SmoothFn g;
  CurvatureFn kappa_c;
  double u0 = 0, u1 = 1;
  double v0 = 0, v1 = 1;
  bool v_periodic = false;  // set for constant kappa_c (the circle closes)
  std::string label = "meridian";

  /// Curvature of the meridian curve, kappa_m = f' g'' - g' f''.
  double kappa_m(double u) const {
    const auto fd = f(u);
    const auto gd = g(u);
    return fd[1] * gd[2] - gd[1] * fd[2];
  }
};

/// Orthonormal Frenet triple of a unit-speed curve on S^2(1); the fourth
/// coordinate is identically zero.
struct FrenetTriple {
  Vector4 l = Vector4::Zero();
  Vector4 t = Vector4::Zero();
  Vector4 n = Vector4::Zero();
};

/// Dense-output integration of the spherical Frenet system
///   l' = t,  t' = kappa n - l,  n' = -kappa t
/// by an orthogonality-preserving Lie-group stepper (4th-order Magnus with
/// the closed-form rotation exponential).
class SphericalCurve {
 public:
  SphericalCurve(CurvatureFn kappa, double v0, double v1,
                 const FrenetTriple& initial);

  FrenetTriple at(double v) const;
  double v0() const { return v0_; }
  double v1() const { return v1_; }
  const std::vector<FrenetTriple>& samples() const { return samples_; }
  double sample_step() const { return step_; }

 private:
  CurvatureFn kappa_;
  double v0_, v1_, step_;
  std::vector<FrenetTriple> samples_;
};

/// Builds the SurfaceModel of a meridian surface; jets are assembled from
/// the profile derivatives and the integrated spherical curve.
SurfaceModel meridian_surface(const MeridianSpec& spec);

/// The closed-form profile of constant Gauss curvature K != 0:
/// f = alpha cos(sqrt(K) u) + beta sin(sqrt(K) u) (trig for K > 0,
/// hyperbolic for K < 0); g by quadrature of sqrt(1 - f'^2). The u-range is
/// the largest admissible interval (f > 0, |f'| bounded away from 1).
/// kappa_c is the constant 1 unless given.
MeridianSpec constant_K_profile(double K, double alpha, double beta,
                                double kappa_c = 1.0);

/// Constant-mean-curvature profile ||H|| = |a|: kappa_c = b and f' = y(f)
/// with the closed-form y of the first-order reduction; also usable to
/// check the defining second-order equation
///   (1 - f'^2 - f f'')^2 = (1 - f'^2)(4 a^2 f^2 - b^2).
MeridianSpec cmc_profile(double a, double b, double C);

/// Constant-invariant profile k = -a^2: kappa_c = b and
/// f'' = -+ (a/b) f sqrt(1 - f'^2); plus_branch selects the sign.
MeridianSpec constant_k_profile(double a, double b, double C,
                                bool plus_branch = true);

/// Closed-form y(t) of the first-order reductions, with derivatives
/// (value, y', y''); exposed for residual checks of the defining ODEs.
std::array<double, 3> cmc_profile_y(double a, double b, double C, double t);
std::array<double, 3> constant_k_profile_y(double a, double b, double C,
                                           bool plus_branch, double t);

enum class MeridianClass { PlanarCurveClass, DevelopableRuled, General };

/// I: kappa_c = 0 (great circle, planar surface); II: kappa_m = 0
/// (straight meridian, developable ruled); III: general, k < 0.
MeridianClass meridian_class(const MeridianSpec& spec);

}  // namespace surf4
