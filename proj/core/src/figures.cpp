#include "surf4/figures.hpp"

#include <cmath>

namespace surf4 {

const char* to_string(IndicatrixKind k) {
  switch (k) {
    case IndicatrixKind::Circle: return "circle";
    case IndicatrixKind::Ellipse: return "ellipse";
    case IndicatrixKind::RectangularHyperbola: return "rectangular_hyperbola";
    case IndicatrixKind::Hyperbola: return "hyperbola";
    case IndicatrixKind::ParallelLines: return "parallel_lines";
    case IndicatrixKind::Undefined: return "undefined";
  }
  return "?";
}

namespace {

// Relative equality of two nonnegative lengths.
bool near_lengths(double a, double b) {
  return std::abs(a - b) < 1e-8 * (a + b + 1.0);
}

}  // namespace

IndicatrixClass indicatrix(const InvariantRecord& rec) {
  IndicatrixClass out;
  const double np = rec.nu_prime, nd = rec.nu_doubleprime;
  out.semi_axis_1 = std::abs(np) > 0 ? 1.0 / std::sqrt(std::abs(np)) : 0.0;
  out.semi_axis_2 = std::abs(nd) > 0 ? 1.0 / std::sqrt(std::abs(nd)) : 0.0;

  switch (rec.point_class) {
    case PointClass::Flat:
      out.kind = IndicatrixKind::Undefined;
      out.semi_axis_1 = out.semi_axis_2 = 0.0;
      break;
    case PointClass::Parabolic:
      out.kind = IndicatrixKind::ParallelLines;
      break;
    case PointClass::Elliptic:
      out.kind = near_lengths(std::abs(np), std::abs(nd))
                     ? IndicatrixKind::Circle
                     : IndicatrixKind::Ellipse;
      break;
    case PointClass::Hyperbolic:
      out.kind = near_lengths(std::abs(np), std::abs(nd))
                     ? IndicatrixKind::RectangularHyperbola
                     : IndicatrixKind::Hyperbola;
      break;
  }
  return out;
}

CurvatureEllipse curvature_ellipse(const SurfaceJet& jet) {
  const NormalFrame nf = normal_frame(jet);
  const double E = jet.E(), F = jet.F();
  const double W = std::sqrt(E * jet.G() - F * F);
  const double sE = std::sqrt(E);
  const TangentDirection x{1.0 / sE, 0.0};
  const TangentDirection y{-F / (sE * W), sE / W};

  const Vector4 sxx = sigma_of(jet, nf, x, x);
  const Vector4 syy = sigma_of(jet, nf, y, y);
  const Vector4 sxy = sigma_of(jet, nf, x, y);

  CurvatureEllipse out;
  out.center = 0.5 * (sxx + syy);
  out.half_diameter_1 = 0.5 * (sxx - syy);
  out.half_diameter_2 = sxy;

  // Oriented area of the half-diameter parallelogram in the (e1, e2)
  // normal basis; the ellipse area is pi times its absolute value.
  const double s0 =
      out.half_diameter_1.dot(nf.e1) * out.half_diameter_2.dot(nf.e2) -
      out.half_diameter_1.dot(nf.e2) * out.half_diameter_2.dot(nf.e1);
  out.area = M_PI * std::abs(s0);

  const double n1 = out.half_diameter_1.norm();
  const double n2 = out.half_diameter_2.norm();
  const double gram = n1 * n1 * n2 * n2 -
                      std::pow(out.half_diameter_1.dot(out.half_diameter_2), 2);
  // Rank test against 1e-10 times the norm product; a half-diameter that is
  // pure roundoff noise has no reliable direction, so it degenerates too.
  const double sigma_scale = out.center.norm() + n1 + n2;
  out.degenerate_segment = n1 <= 1e-12 * sigma_scale ||
                           n2 <= 1e-12 * sigma_scale ||
                           gram <= 1e-10 * n1 * n1 * n2 * n2;
  out.segment_length = std::sqrt(n1 * n1 + n2 * n2);
  out.gauss_flat = near_lengths(out.segment_length, out.center.norm());
  return out;
}

ClassPredicates class_predicates(const InvariantRecord& rec,
                                 const CurvatureEllipse& ellipse,
                                 const GeometricFrame* frame) {
  ClassPredicates out;
  const double nu_scale =
      std::abs(rec.nu_prime) + std::abs(rec.nu_doubleprime) + 1.0;

  const double umbilic_gap = std::sqrt(std::max(rec.kappa * rec.kappa - rec.k, 0.0));
  out.minimal = umbilic_gap < 1e-8 * nu_scale;
  out.flat_normal_connection = std::abs(rec.kappa) < 1e-8 * nu_scale;

  const double h1 = ellipse.half_diameter_1.norm();
  const double h2 = ellipse.half_diameter_2.norm();
  out.super_conformal =
      near_lengths(h1, h2) &&
      std::abs(ellipse.half_diameter_1.dot(ellipse.half_diameter_2)) <
          1e-8 * (h1 * h2 + 1.0);

  out.wintgen_slack = rec.H_norm * rec.H_norm - rec.K - std::abs(rec.kappa);
  out.wintgen_ideal =
      std::abs(out.wintgen_slack) <
      1e-8 * (rec.H_norm * rec.H_norm + std::abs(rec.K) + std::abs(rec.kappa) + 1.0);

  if (frame) {
    const double lam_scale =
        std::abs(frame->nu1) + std::abs(frame->nu2) + std::abs(frame->mu) + 1.0;
    out.chen_nontrivial =
        !out.minimal && std::abs(frame->lambda) < 1e-8 * lam_scale;
  }
  return out;
}

}  // namespace surf4
