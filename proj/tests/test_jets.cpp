#include <doctest.h>

#include <cmath>
#include <random>

#include "surf4/catalog.hpp"
#include "surf4/surface.hpp"
#include "surf4/taylor.hpp"

using namespace surf4;

namespace {

// Scalar finite-difference oracle for the Taylor arithmetic.
double fd_scalar(const std::function<double(double, double)>& f, double u,
                 double v, int iu, int iv, double h = 1e-4) {
  if (iu == 0 && iv == 0) return f(u, v);
  if (iu > 0)
    return (fd_scalar(f, u + h, v, iu - 1, iv) -
            fd_scalar(f, u - h, v, iu - 1, iv)) /
           (2 * h);
  return (fd_scalar(f, u, v + h, iu, iv - 1) -
          fd_scalar(f, u, v - h, iu, iv - 1)) /
         (2 * h);
}

}  // namespace

TEST_CASE("taylor arithmetic matches hand-differentiated polynomials") {
  // p(u,v) = u^3 v + 2 u v^2 - v + 5 at (u0,v0) = (1.5, -0.5)
  const double u0 = 1.5, v0 = -0.5;
  const Taylor3 u = Taylor3::variable_u(u0);
  const Taylor3 v = Taylor3::variable_v(v0);
  const Taylor3 p = u * u * u * v + 2.0 * (u * (v * v)) - v + 5.0;

  CHECK(p.value() == doctest::Approx(u0 * u0 * u0 * v0 + 2 * u0 * v0 * v0 -
                                     v0 + 5).epsilon(1e-14));
  CHECK(p.du() == doctest::Approx(3 * u0 * u0 * v0 + 2 * v0 * v0));
  CHECK(p.dv() == doctest::Approx(u0 * u0 * u0 + 4 * u0 * v0 - 1));
  CHECK(p.duu() == doctest::Approx(6 * u0 * v0));
  CHECK(p.duv() == doctest::Approx(3 * u0 * u0 + 4 * v0));
  CHECK(p.dvv() == doctest::Approx(4 * u0));
  CHECK(p.duuu() == doctest::Approx(6 * v0));
  CHECK(p.duuv() == doctest::Approx(6 * u0));
  CHECK(p.duvv() == doctest::Approx(4.0));
  CHECK(p.dvvv() == doctest::Approx(0.0));
}

TEST_CASE("taylor elementary functions against finite differences") {
  auto f = [](double u, double v) {
    return std::sin(u) * std::exp(0.3 * v) +
           std::sqrt(2.0 + u * v) * std::cos(v) + std::log(2.0 + u);
  };
  const double u0 = 0.7, v0 = -0.4;
  const Taylor3 u = Taylor3::variable_u(u0);
  const Taylor3 v = Taylor3::variable_v(v0);
  const Taylor3 t =
      sin(u) * exp(0.3 * v) + sqrt(2.0 + u * v) * cos(v) + log(2.0 + u);

  CHECK(t.value() == doctest::Approx(f(u0, v0)).epsilon(1e-14));
  CHECK(t.du() == doctest::Approx(fd_scalar(f, u0, v0, 1, 0)).epsilon(1e-6));
  CHECK(t.dv() == doctest::Approx(fd_scalar(f, u0, v0, 0, 1)).epsilon(1e-6));
  CHECK(t.duu() == doctest::Approx(fd_scalar(f, u0, v0, 2, 0)).epsilon(1e-5));
  CHECK(t.duv() == doctest::Approx(fd_scalar(f, u0, v0, 1, 1)).epsilon(1e-5));
  CHECK(t.dvv() == doctest::Approx(fd_scalar(f, u0, v0, 0, 2)).epsilon(1e-5));
  CHECK(t.duuv() ==
        doctest::Approx(fd_scalar(f, u0, v0, 2, 1, 1e-3)).epsilon(1e-3));
  CHECK(t.duvv() ==
        doctest::Approx(fd_scalar(f, u0, v0, 1, 2, 1e-3)).epsilon(1e-3));
}

TEST_CASE("division and recip") {
  const Taylor2 u = Taylor2::variable_u(2.0);
  const Taylor2 v = Taylor2::variable_v(3.0);
  const Taylor2 q = (u * u) / (1.0 + v);
  CHECK(q.value() == doctest::Approx(1.0));
  CHECK(q.du() == doctest::Approx(2 * 2.0 / 4.0));
  CHECK(q.dv() == doctest::Approx(-4.0 / 16.0));
  CHECK(q.dvv() == doctest::Approx(2 * 4.0 / 64.0));
}

TEST_CASE("clifford torus jet at the origin") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const SurfaceJet jet = evaluate_jet(torus, {0, 0}, 2);
  CHECK(jet.z.isApprox(Vector4(1, 0, 1, 0), 1e-15));
  CHECK(jet.z_u.isApprox(Vector4(0, 1, 0, 0), 1e-15));
  CHECK(jet.z_v.isApprox(Vector4(0, 0, 0, 1), 1e-15));
  CHECK(jet.z_uu.isApprox(Vector4(-1, 0, 0, 0), 1e-15));
  CHECK(jet.z_uv.norm() == doctest::Approx(0.0));
  CHECK(jet.z_vv.isApprox(Vector4(0, 0, -1, 0), 1e-15));
}

TEST_CASE("holomorphic graph jet at the origin") {
  const SurfaceModel g = catalog("holomorphic_graph");
  const SurfaceJet jet = evaluate_jet(g, {0, 0}, 2);
  CHECK(jet.z_u.isApprox(Vector4(1, 0, 0, 0), 1e-15));
  CHECK(jet.z_v.isApprox(Vector4(0, 1, 0, 0), 1e-15));
  CHECK(jet.z_uu.isApprox(Vector4(0, 0, 2, 0), 1e-15));
  CHECK(jet.z_uv.isApprox(Vector4(0, 0, 0, 2), 1e-15));
  CHECK(jet.z_vv.isApprox(Vector4(0, 0, -2, 0), 1e-15));
}

TEST_CASE("sphere-in-hyperplane jets have zero fourth component") {
  const SurfaceModel s = catalog("sphere3", {1.0});
  const SurfaceJet jet = evaluate_jet(s, {0.3, 1.1}, 3);
  for (const Vector4* d :
       {&jet.z, &jet.z_u, &jet.z_v, &jet.z_uu, &jet.z_uv, &jet.z_vv,
        &jet.z_uuu, &jet.z_uuv, &jet.z_uvv, &jet.z_vvv})
    CHECK((*d)[3] == 0.0);
}

TEST_CASE("finite differences agree with analytic jets") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const SurfaceJet a = evaluate_jet(torus, {0.3, 0.7}, 3);
  const SurfaceJet fd = finite_difference_jet(torus, {0.3, 0.7}, 1e-3, 3);
  CHECK((a.z_u - fd.z_u).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((a.z_v - fd.z_v).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((a.z_uu - fd.z_uu).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((a.z_uv - fd.z_uv).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((a.z_vv - fd.z_vv).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((a.z_uuu - fd.z_uuu).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((a.z_vvv - fd.z_vvv).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("central differences are exact on quadratic coordinates") {
  const SurfaceModel g = catalog("holomorphic_graph");
  const SurfaceJet a = evaluate_jet(g, {0.2, -0.1}, 2);
  const SurfaceJet fd = finite_difference_jet(g, {0.2, -0.1}, 1e-2, 2);
  CHECK((a.z_uu - fd.z_uu).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.z_uv - fd.z_uv).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.z_vv - fd.z_vv).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.z_u - fd.z_u).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("finite_difference_jet rejects bad steps") {
  const SurfaceModel g = catalog("holomorphic_graph");
  CHECK_THROWS_AS(finite_difference_jet(g, {0, 0}, 0.0), InputError);
  CHECK_THROWS_AS(finite_difference_jet(g, {0.79, 0}, 0.1), InputError);
}

TEST_CASE("evaluate_jet domain and order checks") {
  const SurfaceModel s = catalog("sphere3", {1.0});
  CHECK_THROWS_AS(evaluate_jet(s, {2.0, 0.0}, 2), InputError);
  CHECK_THROWS_AS(evaluate_jet(s, {0.0, 0.0}, 4), InputError);
  // Periodic direction wraps instead of throwing.
  CHECK_NOTHROW(evaluate_jet(s, {0.0, 9.0}, 2));
}

TEST_CASE("catalog rejects unknown names and bad parameter counts") {
  CHECK_THROWS_AS(catalog("moebius"), InputError);
  CHECK_THROWS_AS(catalog("clifford_torus", {1.0, 2.0}), InputError);
}

TEST_CASE("FD-vs-analytic residual drops at second order") {
  std::mt19937 rng(42);
  for (const char* name : {"clifford_torus", "generic_graph"}) {
    const SurfaceModel m = catalog(name);
    std::uniform_real_distribution<double> uu(m.domain.u0 + 0.15,
                                              m.domain.u1 - 0.15);
    std::uniform_real_distribution<double> vv(m.domain.v0 + 0.15,
                                              m.domain.v1 - 0.15);
    for (int trial = 0; trial < 25; ++trial) {
      const ParamPoint p{uu(rng), vv(rng)};
      const SurfaceJet a = evaluate_jet(m, p, 2);
      auto err = [&](double h) {
        const SurfaceJet fd = finite_difference_jet(m, p, h, 2);
        double e = 0;
        e = std::max(e, (a.z_uu - fd.z_uu).cwiseAbs().maxCoeff());
        e = std::max(e, (a.z_uv - fd.z_uv).cwiseAbs().maxCoeff());
        e = std::max(e, (a.z_vv - fd.z_vv).cwiseAbs().maxCoeff());
        return e;
      };
      const double e1 = err(2e-3), e2 = err(1e-3);
      if (e1 > 1e-9)  // above roundoff the ratio should be ~4
        CHECK(e1 / e2 > 2.5);
    }
  }
}

TEST_CASE("default FD step balances truncation and roundoff") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const double h = default_fd_step(torus);
  CHECK(h == doctest::Approx(std::pow(std::numeric_limits<double>::epsilon(),
                                      0.25) *
                             2 * M_PI));
  const SurfaceJet a = evaluate_jet(torus, {1.1, 0.4}, 2);
  const SurfaceJet fd = finite_difference_jet(torus, {1.1, 0.4}, h, 2);
  CHECK((a.z_uu - fd.z_uu).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((a.z_u - fd.z_u).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("immersion holds across catalog domains") {
  std::mt19937 rng(7);
  for (const auto& name : catalog_names()) {
    const SurfaceModel m = catalog(name);
    std::uniform_real_distribution<double> uu(m.domain.u0, m.domain.u1);
    std::uniform_real_distribution<double> vv(m.domain.v0, m.domain.v1);
    for (int trial = 0; trial < 100; ++trial) {
      const SurfaceJet jet = evaluate_jet(m, {uu(rng), vv(rng)}, 2);
      CHECK(immersion_ok(jet));
    }
  }
}
