#pragma once

#include <array>
#include <string>
#include <vector>

#include "surf4/surface.hpp"
#include "surf4/taylor.hpp"

namespace surf4 {

/// Builds a SurfaceModel from a coordinate formula given as a generic
/// callable array<T,4>(T u, T v); jets come from truncated-Taylor
/// evaluation of the formula, so user-supplied analytic surfaces plug in
/// directly.
template <class Coords>
SurfaceModel make_analytic_model(std::string label, DomainRect domain,
                                 Coords coords) {
  SurfaceModel m;
  m.label = std::move(label);
  m.domain = domain;
  m.evaluator = [coords](ParamPoint p, int order) {
    SurfaceJet jet;
    jet.order = order;
    auto fill = [&jet](const auto& comps) {
      for (int i = 0; i < 4; ++i) {
        const auto& t = comps[static_cast<size_t>(i)];
        jet.z[i] = t.value();
        jet.z_u[i] = t.du();
        jet.z_v[i] = t.dv();
        jet.z_uu[i] = t.duu();
        jet.z_uv[i] = t.duv();
        jet.z_vv[i] = t.dvv();
        jet.z_uuu[i] = t.duuu();
        jet.z_uuv[i] = t.duuv();
        jet.z_uvv[i] = t.duvv();
        jet.z_vvv[i] = t.dvvv();
      }
    };
    if (order == 3)
      fill(coords(Taylor3::variable_u(p.u), Taylor3::variable_v(p.v)));
    else
      fill(coords(Taylor2::variable_u(p.u), Taylor2::variable_v(p.v)));
    return jet;
  };
  m.position = [coords](ParamPoint p) {
    const auto c = coords(p.u, p.v);
    return Vector4(c[0], c[1], c[2], c[3]);
  };
  return m;
}

/// Named analytic surfaces:
///   clifford_torus [a=1]        (a cos u, a sin u, a cos v, a sin v)
///   flat_torus [a=1, b=1]       (a cos u, a sin u, b cos v, b sin v)
///   holomorphic_graph [c3=0]    graph of zeta^2 + c3 zeta^3 over C
///   sphere3 [r=1]               round sphere inside the x4 = 0 hyperplane
///   generic_graph [s=1]         polynomial graph with generic curvature
///   meridian_sphere [b=1]       meridian surface with f = sin u on S^3
SurfaceModel catalog(const std::string& name,
                     const std::vector<double>& params = {});

std::vector<std::string> catalog_names();

}  // namespace surf4
