#include <doctest.h>

#include <cmath>
#include <random>

#include "surf4/catalog.hpp"
#include "surf4/invariants.hpp"

using namespace surf4;

namespace {

std::vector<ParamPoint> random_points(const SurfaceModel& m, int n,
                                      unsigned seed) {
  std::mt19937 rng(seed);
  const double inset_u = m.domain.periodic_u ? 0.0 : 0.1 * m.domain.extent_u();
  const double inset_v = m.domain.periodic_v ? 0.0 : 0.1 * m.domain.extent_v();
  std::uniform_real_distribution<double> uu(m.domain.u0 + inset_u,
                                            m.domain.u1 - inset_u);
  std::uniform_real_distribution<double> vv(m.domain.v0 + inset_v,
                                            m.domain.v1 - inset_v);
  std::vector<ParamPoint> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back({uu(rng), vv(rng)});
  return pts;
}

NormalFrame rotate_frame(const NormalFrame& f, double theta) {
  NormalFrame out;
  out.e1 = std::cos(theta) * f.e1 + std::sin(theta) * f.e2;
  out.e2 = -std::sin(theta) * f.e1 + std::cos(theta) * f.e2;
  return out;
}

}  // namespace

TEST_CASE("clifford torus fundamental data") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  for (const ParamPoint p : random_points(torus, 20, 11)) {
    const SurfaceJet jet = evaluate_jet(torus, p, 2);
    const auto [I, II] = fundamental_data(jet, normal_frame(jet));
    CHECK(I.E == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(I.F == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(I.G == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(I.W == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(II.L == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(II.M == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(II.N == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  }
}

TEST_CASE("holomorphic graph at origin: L=8, M=0, N=8") {
  const SurfaceModel g = catalog("holomorphic_graph");
  const SurfaceJet jet = evaluate_jet(g, {0, 0}, 2);
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  CHECK(I.W == doctest::Approx(1.0));
  CHECK(II.Delta1 == doctest::Approx(4.0));
  CHECK(II.Delta2 == doctest::Approx(0.0).scale(1));
  CHECK(II.Delta3 == doctest::Approx(4.0));
  CHECK(II.L == doctest::Approx(8.0));
  CHECK(II.M == doctest::Approx(0.0).scale(1));
  CHECK(II.N == doctest::Approx(8.0));
}

TEST_CASE("sphere-in-hyperplane is flat everywhere") {
  const SurfaceModel s = catalog("sphere3", {1.0});
  for (const ParamPoint p : random_points(s, 30, 5)) {
    const InvariantRecord rec = invariant_record(evaluate_jet(s, p, 2));
    CHECK(rec.point_class == PointClass::Flat);
    CHECK(std::abs(rec.second.L) < 1e-12);
    CHECK(std::abs(rec.second.M) < 1e-12);
    CHECK(std::abs(rec.second.N) < 1e-12);
    CHECK(rec.k == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    CHECK(rec.kappa == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  }
}

TEST_CASE("golden invariants: clifford torus") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const InvariantRecord rec =
      invariant_record(evaluate_jet(torus, {1.0, 2.0}, 2));
  CHECK(rec.k == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rec.kappa == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(rec.K == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(rec.H_norm == doctest::Approx(1.0 / std::sqrt(2)).epsilon(1e-12));
  CHECK(rec.point_class == PointClass::Hyperbolic);
  CHECK(rec.nu_prime == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rec.nu_doubleprime == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("golden invariants: holomorphic graph at origin") {
  const SurfaceModel g = catalog("holomorphic_graph");
  const InvariantRecord rec = invariant_record(evaluate_jet(g, {0, 0}, 2));
  CHECK(rec.k == doctest::Approx(64.0).epsilon(1e-12));
  CHECK(std::abs(rec.kappa) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(rec.K == doctest::Approx(-8.0).epsilon(1e-12));
  CHECK(rec.H_norm == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(rec.point_class == PointClass::Elliptic);
  CHECK(rec.kappa * rec.kappa - rec.k ==
        doctest::Approx(0.0).scale(64).epsilon(1e-12));
  CHECK(rec.nu_prime == doctest::Approx(8.0));
  CHECK(rec.nu_doubleprime == doctest::Approx(8.0));
}

TEST_CASE("flat torus invariants from the product structure") {
  const double a = 1.3, b = 0.7;
  const SurfaceModel torus = catalog("flat_torus", {a, b});
  const InvariantRecord rec =
      invariant_record(evaluate_jet(torus, {0.4, 5.1}, 2));
  CHECK(rec.k == doctest::Approx(-1.0 / (a * a * b * b)).epsilon(1e-12));
  CHECK(rec.kappa == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(rec.K == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  // ||H|| = (1/2) |sigma(xhat,xhat) + sigma(yhat,yhat)| = (1/2)(1/a^2+1/b^2)*..
  const Vector4 h_expected_len =
      Vector4::Zero();  // magnitude checked via formula below
  (void)h_expected_len;
  CHECK(rec.H_norm ==
        doctest::Approx(0.5 * std::sqrt(1.0 / (a * a) + 1.0 / (b * b)))
            .epsilon(1e-12));
}

TEST_CASE("normal frame determinism, orthonormality, orientation") {
  for (const auto& name : catalog_names()) {
    const SurfaceModel m = catalog(name);
    for (const ParamPoint p : random_points(m, 25, 17)) {
      const SurfaceJet jet = evaluate_jet(m, p, 2);
      const NormalFrame f = normal_frame(jet);
      CHECK(f.e1.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(f.e2.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(f.e1.dot(f.e2)) < 1e-12);
      CHECK(std::abs(f.e1.dot(jet.z_u)) < 1e-12 * jet.z_u.norm());
      CHECK(std::abs(f.e1.dot(jet.z_v)) < 1e-12 * jet.z_v.norm());
      CHECK(std::abs(f.e2.dot(jet.z_u)) < 1e-12 * jet.z_u.norm());
      CHECK(std::abs(f.e2.dot(jet.z_v)) < 1e-12 * jet.z_v.norm());
      CHECK(det4(jet.z_u, jet.z_v, f.e1, f.e2) > 0);
    }
  }
}

TEST_CASE("L, M, N and derived invariants are normal-frame independent") {
  const SurfaceModel m = catalog("generic_graph");
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  for (const ParamPoint p : random_points(m, 10, 29)) {
    const SurfaceJet jet = evaluate_jet(m, p, 2);
    const NormalFrame base = normal_frame(jet);
    const auto [I0, II0] = fundamental_data(jet, base);

    // K and H from sigma in a given frame, for the invariance check.
    auto gauss_and_mean = [&](const NormalFrame& f) {
      const double E = I0.E, F = I0.F, W = I0.W;
      const double sE = std::sqrt(E);
      const TangentDirection x{1.0 / sE, 0.0};
      const TangentDirection y{-F / (sE * W), sE / W};
      const Vector4 sxx = sigma_of(jet, f, x, x);
      const Vector4 syy = sigma_of(jet, f, y, y);
      const Vector4 sxy = sigma_of(jet, f, x, y);
      return std::pair<double, double>(sxx.dot(syy) - sxy.dot(sxy),
                                       0.5 * (sxx + syy).norm());
    };
    const auto [K0, H0] = gauss_and_mean(base);
    const double denom = I0.E * I0.G - I0.F * I0.F;
    const double k0 = (II0.L * II0.N - II0.M * II0.M) / denom;
    const double kap0 =
        (I0.E * II0.N + I0.G * II0.L - 2 * I0.F * II0.M) / (2 * denom);

    for (int trial = 0; trial < 50; ++trial) {
      const NormalFrame rot = rotate_frame(base, angle(rng));
      const auto [I, II] = fundamental_data(jet, rot);
      (void)I;
      const double scale =
          std::abs(II0.L) + std::abs(II0.M) + std::abs(II0.N) + 1.0;
      CHECK(std::abs(II.L - II0.L) < 1e-9 * scale);
      CHECK(std::abs(II.M - II0.M) < 1e-9 * scale);
      CHECK(std::abs(II.N - II0.N) < 1e-9 * scale);
      const double k = (II.L * II.N - II.M * II.M) / denom;
      const double kap =
          (I0.E * II.N + I0.G * II.L - 2 * I0.F * II.M) / (2 * denom);
      CHECK(std::abs(k - k0) < 1e-9 * (std::abs(k0) + 1));
      CHECK(std::abs(kap - kap0) < 1e-9 * (std::abs(kap0) + 1));
      const auto [K, H] = gauss_and_mean(rot);
      CHECK(std::abs(K - K0) < 1e-9 * (std::abs(K0) + 1));
      CHECK(std::abs(H - H0) < 1e-9 * (H0 + 1));
    }
  }
}

TEST_CASE("identity suite at random points of all catalog surfaces") {
  for (const auto& name : catalog_names()) {
    const SurfaceModel m = catalog(name);
    for (const ParamPoint p : random_points(m, 40, 31)) {
      const SurfaceJet jet = evaluate_jet(m, p, 2);
      const InvariantRecord rec = invariant_record(jet);
      const double scale = std::abs(rec.k) + rec.kappa * rec.kappa + 1.0;

      // k = nu' nu'' and kappa = (nu' + nu'')/2
      CHECK(std::abs(rec.k - rec.nu_prime * rec.nu_doubleprime) <
            1e-9 * scale);
      CHECK(std::abs(rec.kappa - 0.5 * (rec.nu_prime + rec.nu_doubleprime)) <
            1e-9 * scale);
      CHECK(rec.kappa * rec.kappa - rec.k >= -1e-12 * scale);

      // gamma-map consistency: -g(gamma(X), X) = II(lambda, mu) on unit X,
      // and trace/determinant identities.
      std::mt19937 rng(unsigned(p.u * 1e4) ^ unsigned(p.v * 1e3));
      std::uniform_real_distribution<double> comp(-1.0, 1.0);
      const TangentDirection X{comp(rng), 1.0};
      const double Inorm = rec.first.I(X.lambda, X.mu);
      const Vector2 gX = rec.gamma_matrix.transpose() * Vector2(X.lambda, X.mu);
      const double g_of =
          rec.first.E * gX[0] * X.lambda +
          rec.first.F * (gX[0] * X.mu + gX[1] * X.lambda) +
          rec.first.G * gX[1] * X.mu;
      CHECK(-g_of / Inorm ==
            doctest::Approx(rec.second.II(X.lambda, X.mu) / Inorm)
                .scale(scale)
                .epsilon(1e-9));
      CHECK(rec.gamma_matrix.determinant() ==
            doctest::Approx(rec.k).scale(scale).epsilon(1e-9));
      CHECK(-0.5 * rec.gamma_matrix.trace() ==
            doctest::Approx(rec.kappa).scale(scale).epsilon(1e-9));

      // Commutator route for kappa (normal-connection curvature).
      CHECK(normal_connection_commutator(jet) ==
            doctest::Approx(rec.kappa).scale(scale).epsilon(1e-9));
    }
  }
}

TEST_CASE("zeta: conjugacy and special directions on the torus") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const SurfaceJet jet = evaluate_jet(torus, {0.9, 0.2}, 2);
  CHECK(zeta(jet, {1, 0}, {0, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(zeta(jet, {1, 1}, {1, 1}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(normal_curvature(jet, {1, 0}) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(geodesic_torsion(jet, {1, 1}) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK_THROWS_AS(zeta(jet, {0, 0}, {1, 0}), InputError);
}

TEST_CASE("zeta properties at random points and directions") {
  const SurfaceModel m = catalog("generic_graph");
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> comp(-2.0, 2.0);
  for (const ParamPoint p : random_points(m, 25, 41)) {
    const SurfaceJet jet = evaluate_jet(m, p, 2);
    const TangentDirection g1{comp(rng), comp(rng)};
    const TangentDirection g2{comp(rng), comp(rng)};
    if (std::hypot(g1.lambda, g1.mu) < 0.2 ||
        std::hypot(g2.lambda, g2.mu) < 0.2)
      continue;
    const double scale = std::abs(zeta(jet, g1, g1)) +
                         std::abs(zeta(jet, g2, g2)) + 1.0;
    CHECK(zeta(jet, g1, g2) ==
          doctest::Approx(zeta(jet, g2, g1)).scale(scale).epsilon(1e-12));
    CHECK(zeta(jet, g1, g1) ==
          doctest::Approx(normal_curvature(jet, g1)).scale(scale).epsilon(
              1e-12));

    // alpha_g = zeta(g, g-perp) with the I-orthogonal direction.
    const double E = jet.E(), F = jet.F(), G = jet.G();
    // perp satisfies I(g, perp) = 0: components from the metric.
    const TangentDirection perp{-(F * g1.lambda + G * g1.mu),
                                E * g1.lambda + F * g1.mu};
    const double alpha = geodesic_torsion(jet, g1);
    CHECK(std::abs(std::abs(zeta(jet, g1, perp)) - std::abs(alpha)) <
          1e-9 * (std::abs(alpha) + scale));
  }
}

TEST_CASE("principal and asymptotic directions on the torus") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const SurfaceJet jet = evaluate_jet(torus, {0.5, 1.7}, 2);

  const PrincipalDirections pd = principal_directions(jet);
  CHECK(!pd.all_principal);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(pd.first.lambda == doctest::Approx(s).epsilon(1e-12));
  CHECK(pd.first.mu == doctest::Approx(s).epsilon(1e-12));
  CHECK(std::abs(pd.second.lambda) == doctest::Approx(s).epsilon(1e-12));
  CHECK(std::abs(pd.second.mu) == doctest::Approx(s).epsilon(1e-12));
  CHECK(pd.second.lambda * pd.second.mu < 0);  // the (1,-1) line

  const auto asym = asymptotic_directions(jet);
  REQUIRE(asym.size() == 2);
  // Coordinate directions, as unit vectors.
  CHECK(std::abs(asym[0].lambda * asym[0].mu) < 1e-12);
  CHECK(std::abs(asym[1].lambda * asym[1].mu) < 1e-12);
}

TEST_CASE("all directions principal on a minimal surface") {
  const SurfaceModel g = catalog("holomorphic_graph");
  const SurfaceJet jet = evaluate_jet(g, {0, 0}, 2);
  CHECK(principal_directions(jet).all_principal);
  CHECK(asymptotic_directions(jet).empty());  // k = 64 > 0
  // alpha_g vanishes identically at an umbilical point.
  for (double t : {0.0, 0.4, 1.1, 2.0})
    CHECK(std::abs(geodesic_torsion(jet, {std::cos(t), std::sin(t)})) < 1e-12);
}

TEST_CASE("asymptotic direction count follows the sign of k") {
  const SurfaceModel m = catalog("generic_graph");
  for (const ParamPoint p : random_points(m, 40, 53)) {
    const SurfaceJet jet = evaluate_jet(m, p, 2);
    const InvariantRecord rec = invariant_record(jet);
    const auto asym = asymptotic_directions(jet);
    if (rec.point_class == PointClass::Elliptic) CHECK(asym.empty());
    if (rec.point_class == PointClass::Hyperbolic) CHECK(asym.size() == 2);
    for (const auto& g : asym)
      CHECK(std::abs(normal_curvature(jet, g)) <
            1e-9 * (std::abs(rec.nu_prime) + std::abs(rec.nu_doubleprime) + 1));
  }
}

TEST_CASE("single asymptotic direction at a synthetic parabolic point") {
  // c11 = (1,0), c12 = (0,1/2), c22 = (0,0) on a unit metric gives
  // Delta = (1/2, 0, 0), so L = 1, M = 0, N = 0 and the asymptotic
  // equation is lambda^2 = 0: the double root (0,1).
  SurfaceJet jet;
  jet.z_u = Vector4(1, 0, 0, 0);
  jet.z_v = Vector4(0, 1, 0, 0);
  jet.z_uu = Vector4(0, 0, 1, 0);
  jet.z_uv = Vector4(0, 0, 0, 0.5);
  jet.z_vv = Vector4::Zero();

  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  (void)I;
  CHECK(II.L == doctest::Approx(1.0));
  CHECK(II.M == doctest::Approx(0.0).scale(1));
  CHECK(II.N == doctest::Approx(0.0).scale(1));

  const auto asym = asymptotic_directions(jet);
  REQUIRE(asym.size() == 1);
  CHECK(std::abs(asym[0].lambda) < 1e-14);
  CHECK(std::abs(asym[0].mu) == doctest::Approx(1.0));
}
