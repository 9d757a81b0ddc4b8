#include "surf4/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace surf4 {

double SurfaceJet::scale_sq() const {
  double s = 0.0;
  for (const Vector4* d : {&z_u, &z_v, &z_uu, &z_uv, &z_vv})
    s = std::max(s, d->squaredNorm());
  return s;
}

bool immersion_ok(const SurfaceJet& jet) {
  const double E = jet.E(), F = jet.F(), G = jet.G();
  const double m = std::max(E, G);
  return E * G - F * F > 1e-12 * m * m;
}

namespace {

ParamPoint wrap_into_domain(const DomainRect& d, ParamPoint p) {
  if (d.periodic_u) {
    const double period = d.extent_u();
    p.u = d.u0 + std::fmod(std::fmod(p.u - d.u0, period) + period, period);
  }
  if (d.periodic_v) {
    const double period = d.extent_v();
    p.v = d.v0 + std::fmod(std::fmod(p.v - d.v0, period) + period, period);
  }
  return p;
}

}  // namespace

SurfaceJet evaluate_jet(const SurfaceModel& model, ParamPoint p, int order) {
  if (order != 2 && order != 3)
    throw InputError("evaluate_jet: order must be 2 or 3");
  if (!model.domain.contains(p))
    throw InputError("evaluate_jet: parameter point outside domain of '" +
                     model.label + "'");
  SurfaceJet jet = model.evaluator(wrap_into_domain(model.domain, p), order);
  jet.order = order;
  if (!immersion_ok(jet))
    throw NumericError("evaluate_jet: degenerate jet (immersion failure) on '" +
                       model.label + "'");
  return jet;
}

SurfaceJet finite_difference_jet(const SurfaceModel& model, ParamPoint p,
                                 double h, int order) {
  if (h <= 0.0) throw InputError("finite_difference_jet: step h must be > 0");
  if (order != 2 && order != 3)
    throw InputError("finite_difference_jet: order must be 2 or 3");
  const double reach = (order == 3) ? 2.0 * h : h;
  const DomainRect& d = model.domain;
  const bool fits_u =
      d.periodic_u || (p.u - reach >= d.u0 && p.u + reach <= d.u1);
  const bool fits_v =
      d.periodic_v || (p.v - reach >= d.v0 && p.v + reach <= d.v1);
  if (!fits_u || !fits_v)
    throw InputError("finite_difference_jet: stencil exits domain");

  auto at = [&](double du, double dv) {
    return model.position_at({p.u + du, p.v + dv});
  };

  SurfaceJet jet;
  jet.order = order;
  const Vector4 c = at(0, 0);
  const Vector4 pu = at(h, 0), mu = at(-h, 0);
  const Vector4 pv = at(0, h), mv = at(0, -h);
  jet.z = c;
  jet.z_u = (pu - mu) / (2 * h);
  jet.z_v = (pv - mv) / (2 * h);
  jet.z_uu = (pu - 2 * c + mu) / (h * h);
  jet.z_vv = (pv - 2 * c + mv) / (h * h);
  jet.z_uv = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);

  if (order == 3) {
    jet.z_uuu = (at(2 * h, 0) - 2 * pu + 2 * mu - at(-2 * h, 0)) /
                (2 * h * h * h);
    jet.z_vvv = (at(0, 2 * h) - 2 * pv + 2 * mv - at(0, -2 * h)) /
                (2 * h * h * h);
    // d/dv of the second u-difference, and symmetrically.
    auto second_u = [&](double dv) {
      return (at(h, dv) - 2 * at(0, dv) + at(-h, dv)) / (h * h);
    };
    auto second_v = [&](double du) {
      return (at(du, h) - 2 * at(du, 0) + at(du, -h)) / (h * h);
    };
    jet.z_uuv = (second_u(h) - second_u(-h)) / (2 * h);
    jet.z_uvv = (second_v(h) - second_v(-h)) / (2 * h);
  }
  return jet;
}

double default_fd_step(const SurfaceModel& model) {
  const double eps4 =
      std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  return eps4 * model.domain.scale();
}

}  // namespace surf4
