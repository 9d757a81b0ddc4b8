#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "surf4/surface.hpp"
#include "surf4/types.hpp"

namespace surf4 {

struct FirstFundamental {
  double E = 0, F = 0, G = 0;
  double W = 0;  // sqrt(EG - F^2)

  double I(double lambda, double mu) const {
    return E * lambda * lambda + 2 * F * lambda * mu + G * mu * mu;
  }
};

/// Orthonormal normal pair {e1, e2}, orthogonal to the tangent plane, with
/// det(z_u, z_v, e1, e2) > 0.
struct NormalFrame {
  Vector4 e1 = Vector4::Zero();
  Vector4 e2 = Vector4::Zero();
};

/// c(r, k): row r in {uu, uv, vv}, column k in {e1, e2}; the oriented areas
/// Delta_1..3 of the parallelograms of second-fundamental-form vectors, and
/// the scaled coefficients L = 2*Delta1/W, M = Delta2/W, N = 2*Delta3/W.
struct SecondFundamentalData {
  Eigen::Matrix<double, 3, 2> c = Eigen::Matrix<double, 3, 2>::Zero();
  double Delta1 = 0, Delta2 = 0, Delta3 = 0;
  double L = 0, M = 0, N = 0;

  Vector4 sigma_uu(const NormalFrame& f) const {
    return c(0, 0) * f.e1 + c(0, 1) * f.e2;
  }
  Vector4 sigma_uv(const NormalFrame& f) const {
    return c(1, 0) * f.e1 + c(1, 1) * f.e2;
  }
  Vector4 sigma_vv(const NormalFrame& f) const {
    return c(2, 0) * f.e1 + c(2, 1) * f.e2;
  }

  double II(double lambda, double mu) const {
    return L * lambda * lambda + 2 * M * lambda * mu + N * mu * mu;
  }
};

enum class PointClass { Flat, Elliptic, Parabolic, Hyperbolic };

const char* to_string(PointClass c);

struct InvariantRecord {
  FirstFundamental first;
  SecondFundamentalData second;
  NormalFrame normal;
  Matrix2 gamma_matrix = Matrix2::Zero();  // rows: gamma(z_u), gamma(z_v)
  double k = 0;
  double kappa = 0;
  double K = 0;  // Gauss curvature
  Vector4 H = Vector4::Zero();
  double H_norm = 0;
  double nu_prime = 0;
  double nu_doubleprime = 0;
  PointClass point_class = PointClass::Flat;

  /// Scaled tolerance used for the flat / parabolic classification.
  double class_tolerance = 0;
};

/// Tangent direction lambda * z_u + mu * z_v. (These lambda/mu are direction
/// components, unrelated to the frame invariants of the canonical frame.)
struct TangentDirection {
  double lambda = 0;
  double mu = 0;
};

struct PrincipalDirections {
  bool all_principal = false;  // every tangent principal (kappa^2 - k = 0)
  TangentDirection first;      // unit, ordered by angle; carries nu'
  TangentDirection second;     // unit; carries nu''
};

/// Deterministic orthonormal normal frame: the two ambient basis vectors
/// with smallest tangential component are projected onto the normal space
/// and orthonormalized; e2 is flipped if the orientation is negative.
NormalFrame normal_frame(const SurfaceJet& jet);

std::pair<FirstFundamental, SecondFundamentalData> fundamental_data(
    const SurfaceJet& jet, const NormalFrame& frame);

InvariantRecord invariant_record(const SurfaceJet& jet);

/// Conjugacy invariant of two tangents:
///   zeta = II(l1,m1; l2,m2) / (sqrt(I(l1,m1)) sqrt(I(l2,m2))).
/// Zero iff the tangents are conjugate.
double zeta(const SurfaceJet& jet, const TangentDirection& g1,
            const TangentDirection& g2);

/// nu_g = II/I; zero iff g is asymptotic.
double normal_curvature(const SurfaceJet& jet, const TangentDirection& g);

/// alpha_g = [l^2(EM-FL) + l*m(EN-GL) + m^2(FN-GM)] / (W * I); zero iff g is
/// principal.
double geodesic_torsion(const SurfaceJet& jet, const TangentDirection& g);

PrincipalDirections principal_directions(const SurfaceJet& jet);

/// Real roots of L*l^2 + 2M*l*m + N*m^2 = 0, unit-normalized; 0, 1 or 2
/// directions for k >, =, < 0.
std::vector<TangentDirection> asymptotic_directions(const SurfaceJet& jet);

/// nu', nu'' — normal curvatures of the two principal tangents, in the
/// deterministic order of principal_directions. Equal values at points
/// where every tangent is principal.
std::pair<double, double> principal_normal_curvatures(const SurfaceJet& jet);

/// kappa extracted from the commutator of the two shape operators
/// (A2 A1 - A1 A2)(x) = kappa * y; the normal-connection-curvature route.
double normal_connection_commutator(const SurfaceJet& jet);

/// Orthonormal tangent pair from Gram-Schmidt on (z_u, z_v); preserves the
/// tangent orientation.
std::pair<Vector4, Vector4> orthonormal_tangents(const SurfaceJet& jet);

/// Second fundamental tensor on arbitrary tangent vectors given by their
/// (z_u, z_v) components.
Vector4 sigma_of(const SurfaceJet& jet, const NormalFrame& frame,
                 const TangentDirection& a, const TangentDirection& b);

}  // namespace surf4
