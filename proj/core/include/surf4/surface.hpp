#pragma once

#include <functional>
#include <string>

#include "surf4/types.hpp"

namespace surf4 {

/// Position and partial derivatives of a parametric surface z(u,v) in R^4
/// at one parameter point. Third-order entries are populated only when
/// order == 3.
struct SurfaceJet {
  Vector4 z = Vector4::Zero();
  Vector4 z_u = Vector4::Zero();
  Vector4 z_v = Vector4::Zero();
  Vector4 z_uu = Vector4::Zero();
  Vector4 z_uv = Vector4::Zero();
  Vector4 z_vv = Vector4::Zero();
  Vector4 z_uuu = Vector4::Zero();
  Vector4 z_uuv = Vector4::Zero();
  Vector4 z_uvv = Vector4::Zero();
  Vector4 z_vvv = Vector4::Zero();
  int order = 2;

  double E() const { return z_u.dot(z_u); }
  double F() const { return z_u.dot(z_v); }
  double G() const { return z_v.dot(z_v); }

  /// Scale used by the relative tolerances: max squared norm over the
  /// populated derivative vectors.
  double scale_sq() const;
};

struct SurfaceModel {
  std::function<SurfaceJet(ParamPoint, int order)> evaluator;
  std::function<Vector4(ParamPoint)> position;  // fast path, optional
  DomainRect domain;
  std::string label;

  Vector4 position_at(const ParamPoint& p) const {
    return position ? position(p) : evaluator(p, 2).z;
  }
};

// Scale-invariant immersion test: EG - F^2 > 1e-12 * max(E,G)^2.
bool immersion_ok(const SurfaceJet& jet);

/// Evaluates the analytic jet at p. Throws InputError if p is outside the
/// domain and NumericError if the jet is degenerate (immersion failure).
SurfaceJet evaluate_jet(const SurfaceModel& model, ParamPoint p, int order);

/// Central-difference jet of the same derivatives, O(h^2) accurate; the
/// oracle for analytic evaluators. Throws InputError when h <= 0 or the
/// stencil of width 2h (4h for third order) exits the domain.
SurfaceJet finite_difference_jet(const SurfaceModel& model, ParamPoint p,
                                 double h, int order = 2);

/// Default step for finite_difference_jet: eps^(1/4) scaled by domain size,
/// balancing truncation and roundoff for second derivatives.
double default_fd_step(const SurfaceModel& model);

}  // namespace surf4
