#include "surf4/catalog.hpp"

#include <cmath>

#include "surf4/meridian.hpp"

namespace surf4 {

namespace {

void expect_params(const std::string& name, const std::vector<double>& p,
                   size_t min_count, size_t max_count) {
  if (p.size() < min_count || p.size() > max_count)
    throw InputError("catalog: '" + name + "' takes " +
                     std::to_string(min_count) +
                     (max_count > min_count
                          ? ".." + std::to_string(max_count)
                          : "") +
                     " parameters, got " + std::to_string(p.size()));
}

double param_or(const std::vector<double>& p, size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

}  // namespace

SurfaceModel catalog(const std::string& name,
                     const std::vector<double>& params) {
  if (name == "clifford_torus") {
    expect_params(name, params, 0, 1);
    const double a = param_or(params, 0, 1.0);
    if (a <= 0) throw InputError("catalog: clifford_torus radius must be > 0");
    return make_analytic_model(
        "clifford_torus", {0, 2 * M_PI, 0, 2 * M_PI, true, true},
        [a](auto u, auto v) {
          using T = decltype(u);
          return std::array<T, 4>{a * cos(u), a * sin(u), a * cos(v),
                                  a * sin(v)};
        });
  }
  if (name == "flat_torus") {
    expect_params(name, params, 0, 2);
    const double a = param_or(params, 0, 1.0);
    const double b = param_or(params, 1, 1.0);
    if (a <= 0 || b <= 0) throw InputError("catalog: flat_torus radii must be > 0");
    return make_analytic_model(
        "flat_torus", {0, 2 * M_PI, 0, 2 * M_PI, true, true},
        [a, b](auto u, auto v) {
          using T = decltype(u);
          return std::array<T, 4>{a * cos(u), a * sin(u), b * cos(v),
                                  b * sin(v)};
        });
  }
  if (name == "holomorphic_graph") {
    expect_params(name, params, 0, 1);
    const double c3 = param_or(params, 0, 0.0);
    // Graph of the holomorphic map zeta^2 + c3 zeta^3, zeta = u + iv.
    return make_analytic_model(
        "holomorphic_graph", {-0.8, 0.8, -0.8, 0.8},
        [c3](auto u, auto v) {
          using T = decltype(u);
          const T re2 = u * u - v * v;
          const T im2 = 2.0 * (u * v);
          const T re3 = u * u * u - 3.0 * (u * (v * v));
          const T im3 = 3.0 * ((u * u) * v) - v * v * v;
          return std::array<T, 4>{u, v, re2 + c3 * re3, im2 + c3 * im3};
        });
  }
  if (name == "sphere3") {
    expect_params(name, params, 0, 1);
    const double r = param_or(params, 0, 1.0);
    if (r <= 0) throw InputError("catalog: sphere3 radius must be > 0");
    return make_analytic_model(
        "sphere3", {-1.2, 1.2, 0, 2 * M_PI, false, true},
        [r](auto u, auto v) {
          using T = decltype(u);
          return std::array<T, 4>{r * (cos(u) * cos(v)), r * (cos(u) * sin(v)),
                                  r * sin(u), T(0.0)};
        });
  }
  if (name == "generic_graph") {
    expect_params(name, params, 0, 1);
    const double s = param_or(params, 0, 1.0);
    return make_analytic_model(
        "generic_graph", {-0.7, 0.7, -0.7, 0.7},
        [s](auto u, auto v) {
          using T = decltype(u);
          const T phi = 0.5 * (u * u) + 0.3 * (u * v) - 0.4 * (v * v) +
                        0.1 * (u * u * u) - 0.05 * (u * (v * v));
          const T psi = 0.25 * (u * u) - 0.35 * (v * v) + 0.2 * (u * v) +
                        0.15 * ((u * u) * v);
          return std::array<T, 4>{u, v, s * phi, s * psi};
        });
  }
  if (name == "meridian_sphere") {
    expect_params(name, params, 0, 1);
    const double b = param_or(params, 0, 1.0);
    MeridianSpec spec;
    spec.label = "meridian_sphere";
    spec.f = [](double u) {
      return std::array<double, 4>{std::sin(u), std::cos(u), -std::sin(u),
                                   -std::cos(u)};
    };
    spec.g = [](double u) {
      return std::array<double, 4>{-std::cos(u), std::sin(u), std::cos(u),
                                   -std::sin(u)};
    };
    spec.kappa_c = [b](double) { return std::array<double, 2>{b, 0.0}; };
    spec.u0 = 0.3;
    spec.u1 = M_PI - 0.3;
    spec.v0 = 0.0;
    spec.v1 = 2 * M_PI / std::sqrt(1.0 + b * b);
    spec.v_periodic = true;
    return meridian_surface(spec);
  }
  throw InputError("catalog: unknown surface '" + name + "'");
}

std::vector<std::string> catalog_names() {
  return {"clifford_torus", "flat_torus",    "holomorphic_graph",
          "sphere3",        "generic_graph", "meridian_sphere"};
}

}  // namespace surf4
