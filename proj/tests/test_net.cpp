#include <doctest.h>

#include <cmath>

#include "surf4/catalog.hpp"
#include "surf4/invariants.hpp"
#include "surf4/net.hpp"

using namespace surf4;

TEST_CASE("torus net: constant fields of the diagonal principal net") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const InvariantFieldGrid g = build_net(torus, {0, 0}, 21, 21, 0.1, 0.1);
  const double s = 1.0 / std::sqrt(2.0);

  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      CHECK(g.nu1.at(i, j) == doctest::Approx(s).epsilon(1e-9));
      CHECK(g.nu2.at(i, j) == doctest::Approx(s).epsilon(1e-9));
      CHECK(std::abs(g.lambda.at(i, j)) < 1e-9);
      CHECK(std::abs(g.mu.at(i, j)) == doctest::Approx(s).epsilon(1e-9));
      CHECK(std::abs(g.gamma1.at(i, j)) < 1e-9);
      CHECK(std::abs(g.gamma2.at(i, j)) < 1e-9);
      CHECK(std::abs(g.beta1.at(i, j)) < 1e-9);
      CHECK(std::abs(g.beta2.at(i, j)) < 1e-9);
      CHECK(g.sqrtE.at(i, j) == doctest::Approx(1.0).epsilon(1e-5));
      CHECK(g.sqrtG.at(i, j) == doctest::Approx(1.0).epsilon(1e-5));
    }
  CHECK(g.holonomy_defect < 1e-12);

  // The net is the diagonal reparameterization of the torus.
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const double uu = (i * 0.1 - j * 0.1) * s;
      const double vv = (i * 0.1 + j * 0.1) * s;
      const Vector4 want(std::cos(uu), std::sin(uu), std::cos(vv),
                         std::sin(vv));
      CHECK((g.positions.at(i, j) - want).norm() < 1e-12);
    }
}

TEST_CASE("net coordinates are principal: measured F and M vanish") {
  const SurfaceModel mer = catalog("meridian_sphere", {1.0});
  const InvariantFieldGrid g = build_net(mer, {1.0, 0.4}, 33, 33, 0.02, 0.02);
  for (int j = 2; j < g.nv - 2; j += 3)
    for (int i = 2; i < g.nu - 2; i += 3) {
      const SurfaceJet jet =
          measured_net_jet_o4(g.positions, i, j, g.du, g.dv);
      CHECK(std::abs(jet.F()) < 1e-6);
      const auto [I, II] = fundamental_data(jet, normal_frame(jet));
      (void)I;
      CHECK(std::abs(II.M) <
            1e-6 * (std::abs(II.L) + std::abs(II.N) + 1.0));
    }
}

TEST_CASE("meridian net principal directions bisect the parametric axes") {
  // With L = N = 0 the principal equation gives lambda/mu = +-sqrt(G/E),
  // i.e. +-f in the (z_u, z_v) basis.
  const SurfaceModel mer = catalog("meridian_sphere", {1.0});
  const ParamPoint p{1.1, 0.6};
  const SurfaceJet jet = evaluate_jet(mer, p, 2);
  const PrincipalDirections pd = principal_directions(jet);
  const double f = std::sin(p.u);
  CHECK(std::abs(pd.first.lambda / pd.first.mu) ==
        doctest::Approx(f).epsilon(1e-9));
  CHECK(std::abs(pd.second.lambda / pd.second.mu) ==
        doctest::Approx(f).epsilon(1e-9));
  CHECK(pd.first.lambda / pd.first.mu * pd.second.lambda / pd.second.mu < 0);
}

TEST_CASE("net construction rejects flat and minimal seeds") {
  const SurfaceModel s = catalog("sphere3", {1.0});
  CHECK_THROWS_AS(build_net(s, {0.2, 1.0}, 5, 5, 0.05, 0.05), NumericError);
  const SurfaceModel g = catalog("holomorphic_graph");
  CHECK_THROWS_AS(build_net(g, {0, 0}, 5, 5, 0.05, 0.05), NumericError);
}

TEST_CASE("net reports leaving the domain") {
  const SurfaceModel mer = catalog("meridian_sphere", {1.0});
  CHECK_THROWS_AS(build_net(mer, {0.4, 0.2}, 21, 21, 0.12, 0.12), InputError);
}

TEST_CASE("integrability residuals vanish on the torus constant grid") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const InvariantFieldGrid g = build_net(torus, {0, 0}, 11, 11, 0.1, 0.1);
  const IntegrabilityReport rep = check_integrability(g);
  for (int e = 0; e < 6; ++e) CHECK(rep.max_abs[e] < 1e-4);
  // All fields constant: the torus net is not in the general class.
  CHECK(!rep.general_class);
}

TEST_CASE("integrability residuals converge at second order") {
  const SurfaceModel mer = catalog("meridian_sphere", {1.0});
  const ParamPoint seed{1.0, 0.4};
  const double extent = 0.64;
  std::vector<double> res;
  for (int lvl = 0; lvl < 3; ++lvl) {
    const int n = 8 * (1 << lvl) + 1;
    const double h = extent / (n - 1);
    const InvariantFieldGrid g = build_net(mer, seed, n, n, h, h);
    res.push_back(check_integrability(g).max_residual);
  }
  CHECK(std::log2(res[0] / res[1]) > 1.8);
  CHECK(std::log2(res[1] / res[2]) > 1.8);
}

TEST_CASE("general class detection and metric recovery on a meridian net") {
  const SurfaceModel mer = catalog("meridian_sphere", {1.0});
  const InvariantFieldGrid g = build_net(mer, {1.0, 0.4}, 17, 17, 0.02, 0.02);
  const IntegrabilityReport rep = check_integrability(g);
  CHECK(rep.general_class);
  CHECK(rep.condition_4_3);

  // sqrtE, sqrtG recovered from the invariants match the measured metric.
  const Field2D<double> mu_u = d_du_o4(g.mu, g.du);
  const Field2D<double> mu_v = d_dv_o4(g.mu, g.dv);
  for (int j = 1; j < g.nv - 1; ++j)
    for (int i = 1; i < g.nu - 1; ++i) {
      const double denE = 2 * g.mu.at(i, j) * g.gamma2.at(i, j) +
                          g.nu1.at(i, j) * g.beta2.at(i, j) -
                          g.lambda.at(i, j) * g.beta1.at(i, j);
      const double denG = 2 * g.mu.at(i, j) * g.gamma1.at(i, j) -
                          g.lambda.at(i, j) * g.beta2.at(i, j) +
                          g.nu2.at(i, j) * g.beta1.at(i, j);
      CHECK(mu_u.at(i, j) / denE ==
            doctest::Approx(g.sqrtE.at(i, j)).epsilon(1e-4));
      CHECK(mu_v.at(i, j) / denG ==
            doctest::Approx(g.sqrtG.at(i, j)).epsilon(1e-4));
    }
}

TEST_CASE("perturbing a field node produces a localized residual") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  InvariantFieldGrid g = build_net(torus, {0, 0}, 11, 11, 0.1, 0.1);
  const double base = check_integrability(g).max_residual;
  g.nu1.at(5, 5) += 0.01;
  const IntegrabilityReport rep = check_integrability(g);
  CHECK(rep.max_residual > 100 * (base + 1e-12));
  CHECK(std::abs(rep.argmax_i - 5) <= 1);
  CHECK(std::abs(rep.argmax_j - 5) <= 1);
  // The bumped nu1 enters equations 3, 4 and 6.
  CHECK(rep.max_abs[2] > 1e-4);
  CHECK(rep.max_abs[3] > 1e-4);
  CHECK(rep.max_abs[5] > 1e-4);
}

TEST_CASE("check_integrability validates grid shape") {
  InvariantFieldGrid g;
  g.nu = 2;
  g.nv = 2;
  CHECK_THROWS_AS(check_integrability(g), InputError);
}

TEST_CASE("build_net argument validation") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  CHECK_THROWS_AS(build_net(torus, {0, 0}, 2, 5, 0.1, 0.1), InputError);
  CHECK_THROWS_AS(build_net(torus, {0, 0}, 5, 5, -0.1, 0.1), InputError);
}
