#include "surf4/frame.hpp"

#include <cmath>
#include <limits>

namespace surf4 {

namespace {

Vector4 realize(const SurfaceJet& jet, const TangentDirection& d) {
  return d.lambda * jet.z_u + d.mu * jet.z_v;
}

}  // namespace

GeometricFrame algebraic_frame(const SurfaceJet& jet,
                               const GeometricFrame* ref) {
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  const double denom = I.E * I.G - I.F * I.F;
  const double k = (II.L * II.N - II.M * II.M) / denom;
  const double kappa =
      (I.E * II.N + I.G * II.L - 2 * I.F * II.M) / (2 * denom);
  if (kappa * kappa - k < 1e-10 * (kappa * kappa + std::abs(k) + 1.0))
    throw NumericError(
        "geometric_frame: kappa^2 - k vanishes (minimal or flat point), "
        "frame undefined");

  const PrincipalDirections dirs = principal_directions(jet);
  if (dirs.all_principal)
    throw NumericError("geometric_frame: every tangent principal");

  GeometricFrame fr;
  fr.x_dir = dirs.first;
  fr.y_dir = dirs.second;
  if (ref) {
    // Continuation gauge: keep the assignment and signs closest to ref.
    const Vector4 c1 = realize(jet, dirs.first);
    const Vector4 c2 = realize(jet, dirs.second);
    if (std::abs(c1.dot(ref->x)) < std::abs(c2.dot(ref->x)))
      std::swap(fr.x_dir, fr.y_dir);
    if (realize(jet, fr.x_dir).dot(ref->x) < 0) {
      fr.x_dir.lambda = -fr.x_dir.lambda;
      fr.x_dir.mu = -fr.x_dir.mu;
    }
    if (realize(jet, fr.y_dir).dot(ref->y) < 0) {
      fr.y_dir.lambda = -fr.y_dir.lambda;
      fr.y_dir.mu = -fr.y_dir.mu;
    }
  }
  fr.x = realize(jet, fr.x_dir).normalized();
  fr.y = realize(jet, fr.y_dir).normalized();

  const NormalFrame nf = normal_frame(jet);
  const Vector4 sxx = sigma_of(jet, nf, fr.x_dir, fr.x_dir);
  const Vector4 syy = sigma_of(jet, nf, fr.y_dir, fr.y_dir);
  const Vector4 sxy = sigma_of(jet, nf, fr.x_dir, fr.y_dir);

  const double b_tol = 1e-10 * std::sqrt(1.0 + jet.scale_sq());
  if (sxx.norm() > b_tol) {
    fr.b = sxx.normalized();
  } else if (syy.norm() > b_tol) {
    fr.b = syy.normalized();
    fr.b_from_sigma_yy = true;
  } else {
    throw NumericError("geometric_frame: sigma(x,x) and sigma(y,y) vanish");
  }

  // Sign convention for b: along H when nu1+nu2 != 0, else nu1 >= nu2.
  // A reference frame overrides it to keep the field continuous.
  if (ref) {
    if (fr.b.dot(ref->b) < 0) fr.b = -fr.b;
  } else {
    const Vector4 H = 0.5 * (sxx + syy);
    const double bh = fr.b.dot(H);
    if (std::abs(bh) > 1e-12 * (1.0 + H.norm())) {
      if (bh < 0) fr.b = -fr.b;
    } else if (sxx.dot(fr.b) < syy.dot(fr.b)) {
      fr.b = -fr.b;
    }
  }

  fr.l = cross4(fr.x, fr.y, fr.b).normalized();
  fr.nu1 = sxx.dot(fr.b);
  fr.nu2 = syy.dot(fr.b);
  fr.lambda = sxy.dot(fr.b);
  fr.mu = sxy.dot(fr.l);
  return fr;
}

namespace {

// Largest step h' <= h so that p +- h' * d stays inside a non-periodic
// domain direction.
double fit_step(const DomainRect& dom, ParamPoint p, const TangentDirection& a,
                const TangentDirection& b, double h) {
  auto room = [](double pos, double lo, double hi, double rate) {
    if (rate == 0.0) return std::numeric_limits<double>::infinity();
    return std::min((hi - pos) / std::abs(rate), (pos - lo) / std::abs(rate));
  };
  double limit = h;
  if (!dom.periodic_u) {
    limit = std::min(limit, room(p.u, dom.u0, dom.u1, a.lambda));
    limit = std::min(limit, room(p.u, dom.u0, dom.u1, b.lambda));
  }
  if (!dom.periodic_v) {
    limit = std::min(limit, room(p.v, dom.v0, dom.v1, a.mu));
    limit = std::min(limit, room(p.v, dom.v0, dom.v1, b.mu));
  }
  return limit;
}

}  // namespace

GeometricFrame geometric_frame(const SurfaceModel& model, ParamPoint p,
                               const GeometricFrame* ref) {
  const SurfaceJet jet = evaluate_jet(model, p, 2);
  GeometricFrame fr = algebraic_frame(jet, ref);

  // gamma/beta by central differences of the frame field along the
  // principal directions; parameter step 1e-4 of the domain scale.
  double h = 1e-4 * model.domain.scale();
  h = fit_step(model.domain, p, fr.x_dir, fr.y_dir, h);
  if (h < 1e-10 * model.domain.scale())
    throw NumericError("geometric_frame: no room for derivative stencil");

  auto frame_at = [&](double su, double sv) {
    const ParamPoint q{p.u + su, p.v + sv};
    return algebraic_frame(evaluate_jet(model, q, 2), &fr);
  };

  const GeometricFrame xp = frame_at(h * fr.x_dir.lambda, h * fr.x_dir.mu);
  const GeometricFrame xm = frame_at(-h * fr.x_dir.lambda, -h * fr.x_dir.mu);
  const GeometricFrame yp = frame_at(h * fr.y_dir.lambda, h * fr.y_dir.mu);
  const GeometricFrame ym = frame_at(-h * fr.y_dir.lambda, -h * fr.y_dir.mu);

  const Vector4 dx_x = (xp.x - xm.x) / (2 * h);  // nabla'_x of the x field
  const Vector4 dx_b = (xp.b - xm.b) / (2 * h);
  const Vector4 dy_y = (yp.y - ym.y) / (2 * h);
  const Vector4 dy_b = (yp.b - ym.b) / (2 * h);

  fr.gamma1 = dx_x.dot(fr.y);
  fr.gamma2 = dy_y.dot(fr.x);
  fr.beta1 = dx_b.dot(fr.l);
  fr.beta2 = dy_b.dot(fr.l);
  return fr;
}

GeometricFrame geometric_frame(const SurfaceModel& model, ParamPoint p) {
  return geometric_frame(model, p, nullptr);
}

GeometricFrame geometric_frame(const SurfaceModel& model, ParamPoint p,
                               const GeometricFrame& ref) {
  return geometric_frame(model, p, &ref);
}

Vector4 allied_mean_curvature(const GeometricFrame& fr) {
  return 0.5 * (fr.nu1 + fr.nu2) * fr.lambda * fr.mu * fr.l;
}

}  // namespace surf4
