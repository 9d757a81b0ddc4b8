#include <doctest.h>

#include <cmath>
#include <random>

#include "surf4/catalog.hpp"
#include "surf4/frame.hpp"

using namespace surf4;

namespace {

std::vector<ParamPoint> sample_points(const SurfaceModel& m, int n,
                                      unsigned seed) {
  std::mt19937 rng(seed);
  const double iu = m.domain.periodic_u ? 0.0 : 0.12 * m.domain.extent_u();
  const double iv = m.domain.periodic_v ? 0.0 : 0.12 * m.domain.extent_v();
  std::uniform_real_distribution<double> uu(m.domain.u0 + iu, m.domain.u1 - iu);
  std::uniform_real_distribution<double> vv(m.domain.v0 + iv, m.domain.v1 - iv);
  std::vector<ParamPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back({uu(rng), vv(rng)});
  return pts;
}

bool frame_orthonormal(const GeometricFrame& fr, double tol = 1e-9) {
  const Matrix4 Z = fr.as_matrix();
  return (Z * Z.transpose() - Matrix4::Identity()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

TEST_CASE("torus frame: constant invariants of the diagonal net") {
  const SurfaceModel torus = catalog("clifford_torus", {1.0});
  const GeometricFrame fr = geometric_frame(torus, {0.7, 1.9});

  CHECK(frame_orthonormal(fr));
  CHECK(det4(fr.x, fr.y, fr.b, fr.l) > 0);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(fr.nu1 == doctest::Approx(s).epsilon(1e-9));
  CHECK(fr.nu2 == doctest::Approx(s).epsilon(1e-9));
  CHECK(fr.lambda == doctest::Approx(0.0).scale(1).epsilon(1e-9));
  CHECK(std::abs(fr.mu) == doctest::Approx(s).epsilon(1e-9));
  CHECK(fr.gamma1 == doctest::Approx(0.0).scale(1).epsilon(1e-7));
  CHECK(fr.gamma2 == doctest::Approx(0.0).scale(1).epsilon(1e-7));
  CHECK(fr.beta1 == doctest::Approx(0.0).scale(1).epsilon(1e-7));
  CHECK(fr.beta2 == doctest::Approx(0.0).scale(1).epsilon(1e-7));

  // The frame-invariant identities at the torus values give k=-1,
  // kappa=0, K=0.
  CHECK(-4 * fr.nu1 * fr.nu2 * fr.mu * fr.mu ==
        doctest::Approx(-1.0).epsilon(1e-9));
  CHECK((fr.nu1 - fr.nu2) * fr.mu == doctest::Approx(0.0).scale(1).epsilon(1e-9));
  CHECK(fr.nu1 * fr.nu2 - (fr.lambda * fr.lambda + fr.mu * fr.mu) ==
        doctest::Approx(0.0).scale(1).epsilon(1e-9));

  // Allied mean curvature vanishes (lambda = 0): the Chen property.
  CHECK(allied_mean_curvature(fr).norm() < 1e-9);
}

TEST_CASE("frame invariants reproduce k, kappa, K and ||H||") {
  for (const char* name :
       {"clifford_torus", "flat_torus", "meridian_sphere", "generic_graph"}) {
    const SurfaceModel m = catalog(name);
    for (const ParamPoint p : sample_points(m, 30, 113)) {
      const SurfaceJet jet = evaluate_jet(m, p, 2);
      const InvariantRecord rec = invariant_record(jet);
      if (rec.point_class == PointClass::Flat) continue;
      const double gap = rec.kappa * rec.kappa - rec.k;
      if (gap < 1e-6 * (rec.kappa * rec.kappa + std::abs(rec.k) + 1)) continue;

      const GeometricFrame fr = geometric_frame(m, p);
      CHECK(frame_orthonormal(fr));
      const double scale = std::abs(rec.k) + rec.kappa * rec.kappa + 1.0;
      CHECK(std::abs(-4 * fr.nu1 * fr.nu2 * fr.mu * fr.mu - rec.k) <
            1e-6 * scale);
      CHECK(std::abs((fr.nu1 - fr.nu2) * fr.mu - rec.kappa) < 1e-6 * scale);
      CHECK(std::abs(fr.nu1 * fr.nu2 - fr.lambda * fr.lambda -
                     fr.mu * fr.mu - rec.K) < 1e-6 * scale);
      CHECK(std::abs(std::sqrt(gap) / (2 * std::abs(fr.mu)) - rec.H_norm) <
            1e-6 * (rec.H_norm + 1));

      // sigma(x,x) and sigma(y,y) collinear with b; H along b.
      CHECK(fr.b.dot(rec.H) > 0);
      CHECK((rec.H - rec.H.dot(fr.b) * fr.b).norm() < 1e-8 * (1 + rec.H_norm));

      // a(H) = (sqrt(kappa^2-k)/2) lambda l, up to the orientation sign.
      const Vector4 aH = allied_mean_curvature(fr);
      CHECK(aH.norm() == doctest::Approx(0.5 * std::sqrt(gap) *
                                         std::abs(fr.lambda))
                             .scale(scale)
                             .epsilon(1e-6));
      if (aH.norm() > 1e-9)
        CHECK(std::abs(aH.normalized().dot(fr.l)) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("allied mean curvature arithmetic example") {
  GeometricFrame fr;
  fr.nu1 = 2;
  fr.nu2 = 0;
  fr.mu = 1;
  fr.lambda = 3;
  fr.l = Vector4(0, 0, 0, 1);
  // kappa = (nu1-nu2) mu = 2, k = -4 nu1 nu2 mu^2 = 0, so
  // a(H) = (sqrt(4-0)/2) * 3 * l = 3 l.
  CHECK(allied_mean_curvature(fr).isApprox(Vector4(0, 0, 0, 3), 1e-15));
}

TEST_CASE("frame refused at minimal and flat points") {
  const SurfaceModel g = catalog("holomorphic_graph");
  CHECK_THROWS_AS(geometric_frame(g, {0, 0}), NumericError);
  const SurfaceModel s = catalog("sphere3", {1.0});
  CHECK_THROWS_AS(geometric_frame(s, {0.1, 0.7}), NumericError);
}

TEST_CASE("sign coherence under a (b,l) flip") {
  const SurfaceModel m = catalog("meridian_sphere", {1.0});
  const ParamPoint p{1.1, 0.8};
  const SurfaceJet jet = evaluate_jet(m, p, 2);
  const GeometricFrame fr = geometric_frame(m, p);

  // Flipping (b,l) is the other admissible gauge: read the invariants off
  // sigma directly in the flipped frame.
  const NormalFrame nf = normal_frame(jet);
  const Vector4 sxx = sigma_of(jet, nf, fr.x_dir, fr.x_dir);
  const Vector4 syy = sigma_of(jet, nf, fr.y_dir, fr.y_dir);
  const Vector4 sxy = sigma_of(jet, nf, fr.x_dir, fr.y_dir);
  const Vector4 bf = -fr.b, lf = -fr.l;
  const double nu1_f = sxx.dot(bf), nu2_f = syy.dot(bf);
  const double la_f = sxy.dot(bf), mu_f = sxy.dot(lf);

  CHECK(nu1_f == doctest::Approx(-fr.nu1).epsilon(1e-12));
  CHECK(nu2_f == doctest::Approx(-fr.nu2).epsilon(1e-12));
  CHECK(la_f == doctest::Approx(-fr.lambda).scale(1).epsilon(1e-12));
  CHECK(mu_f == doctest::Approx(-fr.mu).epsilon(1e-12));

  // k, K, |kappa| unchanged.
  CHECK(-4 * nu1_f * nu2_f * mu_f * mu_f ==
        doctest::Approx(-4 * fr.nu1 * fr.nu2 * fr.mu * fr.mu).epsilon(1e-12));
  CHECK(std::abs((nu1_f - nu2_f) * mu_f) ==
        doctest::Approx(std::abs((fr.nu1 - fr.nu2) * fr.mu))
            .scale(1)
            .epsilon(1e-12));
  CHECK(nu1_f * nu2_f - la_f * la_f - mu_f * mu_f ==
        doctest::Approx(fr.nu1 * fr.nu2 - fr.lambda * fr.lambda -
                        fr.mu * fr.mu)
            .epsilon(1e-12));
  // det(x,y,-b,-l) stays positive: the flipped gauge is admissible.
  CHECK(det4(fr.x, fr.y, bf, lf) > 0);
}

TEST_CASE("frenet closure: derivative formulas hold at second order") {
  const SurfaceModel m = catalog("meridian_sphere", {0.8});
  const ParamPoint p{1.9, 0.7};
  const GeometricFrame fr = geometric_frame(m, p);

  auto frame_shifted = [&](const TangentDirection& d, double h) {
    const ParamPoint q{p.u + h * d.lambda, p.v + h * d.mu};
    return algebraic_frame(evaluate_jet(m, q, 2), &fr);
  };

  auto closure_residual = [&](double h) {
    const GeometricFrame xp = frame_shifted(fr.x_dir, h);
    const GeometricFrame xm = frame_shifted(fr.x_dir, -h);
    const GeometricFrame yp = frame_shifted(fr.y_dir, h);
    const GeometricFrame ym = frame_shifted(fr.y_dir, -h);
    auto d_dx = [&](auto get) { return ((get(xp) - get(xm)) / (2 * h)).eval(); };
    auto d_dy = [&](auto get) { return ((get(yp) - get(ym)) / (2 * h)).eval(); };

    double r = 0;
    auto upd = [&r](const Vector4& got, const Vector4& want) {
      r = std::max(r, (got - want).cwiseAbs().maxCoeff());
    };
    // The eight Frenet-type equations.
    upd(d_dx([](const GeometricFrame& f) { return f.x; }),
        fr.gamma1 * fr.y + fr.nu1 * fr.b);
    upd(d_dx([](const GeometricFrame& f) { return f.y; }),
        -fr.gamma1 * fr.x + fr.lambda * fr.b + fr.mu * fr.l);
    upd(d_dy([](const GeometricFrame& f) { return f.x; }),
        -fr.gamma2 * fr.y + fr.lambda * fr.b + fr.mu * fr.l);
    upd(d_dy([](const GeometricFrame& f) { return f.y; }),
        fr.gamma2 * fr.x + fr.nu2 * fr.b);
    upd(d_dx([](const GeometricFrame& f) { return f.b; }),
        -fr.nu1 * fr.x - fr.lambda * fr.y + fr.beta1 * fr.l);
    upd(d_dy([](const GeometricFrame& f) { return f.b; }),
        -fr.lambda * fr.x - fr.nu2 * fr.y + fr.beta2 * fr.l);
    upd(d_dx([](const GeometricFrame& f) { return f.l; }),
        -fr.mu * fr.y - fr.beta1 * fr.b);
    upd(d_dy([](const GeometricFrame& f) { return f.l; }),
        -fr.mu * fr.x - fr.beta2 * fr.b);
    return r;
  };

  const double r1 = closure_residual(8e-3);
  const double r2 = closure_residual(4e-3);
  const double r3 = closure_residual(2e-3);
  CHECK(r1 < 1e-3);
  CHECK(r1 / r2 > 3.0);  // O(h^2)
  CHECK(r2 / r3 > 3.0);
  CHECK(r3 < 3e-6);
}

TEST_CASE("continuation gauge follows a reference frame") {
  const SurfaceModel m = catalog("generic_graph");
  ParamPoint p{0.1, 0.05};
  GeometricFrame prev = geometric_frame(m, p);
  for (int step = 0; step < 20; ++step) {
    p.u += 0.01;
    p.v += 0.008;
    const GeometricFrame fr = geometric_frame(m, p, prev);
    CHECK(fr.x.dot(prev.x) > 0.9);
    CHECK(fr.y.dot(prev.y) > 0.9);
    CHECK(fr.b.dot(prev.b) > 0.9);
    CHECK(frame_orthonormal(fr));
    prev = fr;
  }
}
