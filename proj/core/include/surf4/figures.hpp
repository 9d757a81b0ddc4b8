#pragma once

#include <optional>

#include "surf4/frame.hpp"
#include "surf4/invariants.hpp"

namespace surf4 {

enum class IndicatrixKind {
  Circle,
  Ellipse,
  RectangularHyperbola,
  Hyperbola,
  ParallelLines,
  Undefined
};

const char* to_string(IndicatrixKind k);

/// Classification of the tangent indicatrix nu' X^2 + nu'' Y^2 = +-1.
/// Axes are collinear with the principal directions; semi-axes are
/// 1/sqrt(|nu'|), 1/sqrt(|nu''|) (zero where the normal curvature
/// vanishes and the axis degenerates).
struct IndicatrixClass {
  IndicatrixKind kind = IndicatrixKind::Undefined;
  double semi_axis_1 = 0;
  double semi_axis_2 = 0;
};

IndicatrixClass indicatrix(const InvariantRecord& rec);

/// Ellipse of normal curvature: image of the unit tangent circle under
/// v -> sigma(v,v), centered at H with conjugate half-diameters
/// (sigma(x,x)-sigma(y,y))/2 and sigma(x,y).
struct CurvatureEllipse {
  Vector4 center = Vector4::Zero();
  Vector4 half_diameter_1 = Vector4::Zero();
  Vector4 half_diameter_2 = Vector4::Zero();
  double area = 0;
  bool degenerate_segment = false;
  /// Max distance from the center, d = sqrt(||H||^2 - K); for a degenerate
  /// ellipse this is the segment length in the paper's convention.
  double segment_length = 0;
  /// Flags the K = 0 subclass (equivalently d = ||H||).
  bool gauss_flat = false;
};

CurvatureEllipse curvature_ellipse(const SurfaceJet& jet);

struct ClassPredicates {
  bool minimal = false;                // kappa^2 - k = 0
  bool flat_normal_connection = false; // kappa = 0
  bool super_conformal = false;        // circular curvature ellipse
  bool wintgen_ideal = false;          // equality in K + |kappa| <= ||H||^2
  std::optional<bool> chen_nontrivial; // lambda = 0; needs the frame
  double wintgen_slack = 0;            // ||H||^2 - K - |kappa|
};

/// The frame argument is needed only for chen_nontrivial; without it the
/// predicate is reported unavailable (nullopt).
ClassPredicates class_predicates(const InvariantRecord& rec,
                                 const CurvatureEllipse& ellipse,
                                 const GeometricFrame* frame = nullptr);

}  // namespace surf4
