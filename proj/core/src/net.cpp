#include "surf4/net.hpp"

#include <cmath>
#include <string>

namespace surf4 {

namespace {

struct DirSample {
  Vector2 d;       // unit (in the metric) direction in parameter space
  Vector4 world;   // its realization lambda z_u + mu z_v
};

// Principal direction field: the root of the principal equation whose
// realization best aligns with ref (sign-matched); follow = 0 picks the
// first family at a seed, follow = 1 the second.
DirSample principal_field(const SurfaceModel& model, ParamPoint q,
                          const Vector4& ref) {
  const SurfaceJet jet = evaluate_jet(model, q, 2);
  const PrincipalDirections pd = principal_directions(jet);
  if (pd.all_principal)
    throw NumericError("build_net: minimal point reached, net undefined");
  auto realize = [&](const TangentDirection& t) {
    return Vector4(t.lambda * jet.z_u + t.mu * jet.z_v);
  };
  Vector4 w1 = realize(pd.first);
  Vector4 w2 = realize(pd.second);
  TangentDirection cand = pd.first;
  Vector4 w = w1;
  if (std::abs(w2.dot(ref)) > std::abs(w1.dot(ref))) {
    cand = pd.second;
    w = w2;
  }
  if (w.dot(ref) < 0) {
    cand.lambda = -cand.lambda;
    cand.mu = -cand.mu;
    w = -w;
  }
  return {Vector2(cand.lambda, cand.mu), w};
}

// Arc-length flow along a principal family by classical RK4 with
// per-stage sign continuation.  Returns the endpoint and the (aligned)
// direction there.
struct FlowResult {
  ParamPoint q;
  Vector4 dir;
};

FlowResult flow_principal(const SurfaceModel& model, ParamPoint q0,
                          Vector4 ref, double arc) {
  const double sgn = arc < 0 ? -1.0 : 1.0;
  const double len = std::abs(arc);
  const int n = std::max(2, static_cast<int>(std::ceil(len / 0.02)));
  const double h = sgn * len / n;

  ParamPoint q = q0;
  for (int s = 0; s < n; ++s) {
    const DirSample k1 = principal_field(model, q, ref);
    const DirSample k2 = principal_field(
        model, {q.u + h / 2 * k1.d[0], q.v + h / 2 * k1.d[1]}, k1.world);
    const DirSample k3 = principal_field(
        model, {q.u + h / 2 * k2.d[0], q.v + h / 2 * k2.d[1]}, k2.world);
    const DirSample k4 = principal_field(
        model, {q.u + h * k3.d[0], q.v + h * k3.d[1]}, k3.world);
    q.u += h / 6 * (k1.d[0] + 2 * k2.d[0] + 2 * k3.d[0] + k4.d[0]);
    q.v += h / 6 * (k1.d[1] + 2 * k2.d[1] + 2 * k3.d[1] + k4.d[1]);
    ref = k4.world;
    if (!model.domain.contains(q))
      throw InputError("build_net: principal curve left the surface domain");
  }
  const DirSample end = principal_field(model, q, ref);
  return {q, end.world};
}

// Node P solving  flow1(from_a, s) = flow2(from_b, t): the intersection of
// the first-family leaf through from_a with the second-family leaf through
// from_b. Newton in (s, t) with finite-difference-free Jacobian (the flow
// derivative is the field itself).
ParamPoint intersect_leaves(const SurfaceModel& model, ParamPoint from_a,
                            const Vector4& dir_a, ParamPoint from_b,
                            const Vector4& dir_b, double s0, double t0,
                            double tol) {
  double s = s0, t = t0;
  for (int iter = 0; iter < 30; ++iter) {
    const FlowResult fa = flow_principal(model, from_a, dir_a, s);
    const FlowResult fb = flow_principal(model, from_b, dir_b, t);
    const Vector2 gap(fa.q.u - fb.q.u, fa.q.v - fb.q.v);
    if (gap.norm() < tol) return fa.q;

    const DirSample da = principal_field(model, fa.q, fa.dir);
    const DirSample db = principal_field(model, fb.q, fb.dir);
    Matrix2 J;
    J.col(0) = da.d;
    J.col(1) = -db.d;
    const Vector2 delta = J.colPivHouseholderQr().solve(gap);
    s -= delta[0];
    t -= delta[1];
    if (!(std::isfinite(s) && std::isfinite(t)))
      throw NumericError("build_net: leaf intersection diverged");
  }
  throw NumericError("build_net: leaf intersection did not converge");
}

// Marches the whole net in parameter space. swap_families transposes the
// roles of the two principal families (used for the holonomy measurement).
Field2D<ParamPoint> march_params(const SurfaceModel& model, ParamPoint seed,
                                 int nu, int nv, double du, double dv,
                                 double tol, bool swap_families) {
  const SurfaceJet jet0 = evaluate_jet(model, seed, 2);
  const PrincipalDirections pd0 = principal_directions(jet0);
  if (pd0.all_principal)
    throw NumericError("build_net: seed is a minimal/flat point");
  auto realize0 = [&](const TangentDirection& t) {
    return Vector4(t.lambda * jet0.z_u + t.mu * jet0.z_v);
  };
  Vector4 fam1 = realize0(pd0.first);
  Vector4 fam2 = realize0(pd0.second);
  if (swap_families) std::swap(fam1, fam2);

  Field2D<ParamPoint> P(nu, nv);
  Field2D<Vector4> ref1(nu, nv);  // first-family direction at each node
  Field2D<Vector4> ref2(nu, nv);
  P.at(0, 0) = seed;
  ref1.at(0, 0) = fam1;
  ref2.at(0, 0) = fam2;

  for (int i = 1; i < nu; ++i) {
    const FlowResult r =
        flow_principal(model, P.at(i - 1, 0), ref1.at(i - 1, 0), du);
    P.at(i, 0) = r.q;
    ref1.at(i, 0) = r.dir;
    ref2.at(i, 0) =
        principal_field(model, r.q, ref2.at(i - 1, 0)).world;
  }
  for (int j = 1; j < nv; ++j) {
    const FlowResult r =
        flow_principal(model, P.at(0, j - 1), ref2.at(0, j - 1), dv);
    P.at(0, j) = r.q;
    ref2.at(0, j) = r.dir;
    ref1.at(0, j) = principal_field(model, r.q, ref1.at(0, j - 1)).world;
  }

  for (int j = 1; j < nv; ++j) {
    for (int i = 1; i < nu; ++i) {
      // Arc-length guesses from the local metric of the already-built net.
      const double s0 = du, t0 = dv;
      const ParamPoint q = intersect_leaves(
          model, P.at(i - 1, j), ref1.at(i - 1, j), P.at(i, j - 1),
          ref2.at(i, j - 1), s0, t0, tol);
      P.at(i, j) = q;
      ref1.at(i, j) = principal_field(model, q, ref1.at(i - 1, j)).world;
      ref2.at(i, j) = principal_field(model, q, ref2.at(i, j - 1)).world;
    }
  }
  return P;
}

}  // namespace

namespace {

// Fourth-order five-point first-derivative weights for stencil offset
// s in 0..4; divide by 12 h.
constexpr double kD1w[5][5] = {{-25, 48, -36, 16, -3},
                               {-3, -10, 18, -6, 1},
                               {1, -8, 0, 8, -1},
                               {-1, 6, -18, 10, 3},
                               {3, -16, 36, -48, 25}};

}  // namespace

Field2D<double> d_du_o4(const Field2D<double>& f, double du) {
  Field2D<double> out(f.nu, f.nv);
  for (int j = 0; j < f.nv; ++j)
    for (int i = 0; i < f.nu; ++i) {
      const int base = std::clamp(i - 2, 0, f.nu - 5);
      double acc = 0;
      for (int m = 0; m < 5; ++m) acc += kD1w[i - base][m] * f.at(base + m, j);
      out.at(i, j) = acc / (12 * du);
    }
  return out;
}

Field2D<double> d_dv_o4(const Field2D<double>& f, double dv) {
  Field2D<double> out(f.nu, f.nv);
  for (int j = 0; j < f.nv; ++j)
    for (int i = 0; i < f.nu; ++i) {
      const int base = std::clamp(j - 2, 0, f.nv - 5);
      double acc = 0;
      for (int m = 0; m < 5; ++m) acc += kD1w[j - base][m] * f.at(i, base + m);
      out.at(i, j) = acc / (12 * dv);
    }
  return out;
}

Field2D<double> d_du(const Field2D<double>& f, double du) {
  Field2D<double> out(f.nu, f.nv);
  for (int j = 0; j < f.nv; ++j)
    for (int i = 0; i < f.nu; ++i) {
      double v;
      if (i == 0)
        v = (-3 * f.at(0, j) + 4 * f.at(1, j) - f.at(2, j)) / (2 * du);
      else if (i == f.nu - 1)
        v = (3 * f.at(i, j) - 4 * f.at(i - 1, j) + f.at(i - 2, j)) / (2 * du);
      else
        v = (f.at(i + 1, j) - f.at(i - 1, j)) / (2 * du);
      out.at(i, j) = v;
    }
  return out;
}

Field2D<double> d_dv(const Field2D<double>& f, double dv) {
  Field2D<double> out(f.nu, f.nv);
  for (int j = 0; j < f.nv; ++j)
    for (int i = 0; i < f.nu; ++i) {
      double v;
      if (j == 0)
        v = (-3 * f.at(i, 0) + 4 * f.at(i, 1) - f.at(i, 2)) / (2 * dv);
      else if (j == f.nv - 1)
        v = (3 * f.at(i, j) - 4 * f.at(i, j - 1) + f.at(i, j - 2)) / (2 * dv);
      else
        v = (f.at(i, j + 1) - f.at(i, j - 1)) / (2 * dv);
      out.at(i, j) = v;
    }
  return out;
}

namespace {

// The chord-shortening bias of second-order differences is visible in the
// measured metric, so the metric uses fourth-order stencils.
Vector4 position_derivative_u(const Field2D<Vector4>& z, int i, int j,
                              double du) {
  const int base = std::clamp(i - 2, 0, z.nu - 5);
  const int s = i - base;
  Vector4 d = Vector4::Zero();
  for (int m = 0; m < 5; ++m) d += kD1w[s][m] * z.at(base + m, j);
  return d / (12 * du);
}

Vector4 position_derivative_v(const Field2D<Vector4>& z, int i, int j,
                              double dv) {
  const int base = std::clamp(j - 2, 0, z.nv - 5);
  const int s = j - base;
  Vector4 d = Vector4::Zero();
  for (int m = 0; m < 5; ++m) d += kD1w[s][m] * z.at(i, base + m);
  return d / (12 * dv);
}

}  // namespace

SurfaceJet measured_net_jet(const Field2D<Vector4>& z, int i, int j,
                            double du, double dv) {
  if (i < 1 || j < 1 || i > z.nu - 2 || j > z.nv - 2)
    throw InputError("measured_net_jet: interior nodes only");
  SurfaceJet jet;
  jet.order = 2;
  jet.z = z.at(i, j);
  jet.z_u = (z.at(i + 1, j) - z.at(i - 1, j)) / (2 * du);
  jet.z_v = (z.at(i, j + 1) - z.at(i, j - 1)) / (2 * dv);
  jet.z_uu = (z.at(i + 1, j) - 2 * z.at(i, j) + z.at(i - 1, j)) / (du * du);
  jet.z_vv = (z.at(i, j + 1) - 2 * z.at(i, j) + z.at(i, j - 1)) / (dv * dv);
  jet.z_uv = (z.at(i + 1, j + 1) - z.at(i + 1, j - 1) - z.at(i - 1, j + 1) +
              z.at(i - 1, j - 1)) /
             (4 * du * dv);
  return jet;
}

SurfaceJet measured_net_jet_o4(const Field2D<Vector4>& z, int i, int j,
                               double du, double dv) {
  if (i < 2 || j < 2 || i > z.nu - 3 || j > z.nv - 3)
    throw InputError("measured_net_jet_o4: needs two interior rings");
  SurfaceJet jet;
  jet.order = 2;
  jet.z = z.at(i, j);
  auto row = [&](int m) { return z.at(i + m, j); };
  auto col = [&](int m) { return z.at(i, j + m); };
  jet.z_u = (-row(2) + 8 * row(1) - 8 * row(-1) + row(-2)) / (12 * du);
  jet.z_v = (-col(2) + 8 * col(1) - 8 * col(-1) + col(-2)) / (12 * dv);
  jet.z_uu = (-row(2) + 16 * row(1) - 30 * row(0) + 16 * row(-1) - row(-2)) /
             (12 * du * du);
  jet.z_vv = (-col(2) + 16 * col(1) - 30 * col(0) + 16 * col(-1) - col(-2)) /
             (12 * dv * dv);
  // Tensor product of the fourth-order first-derivative weights.
  const double w[5] = {1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12};
  Vector4 uv = Vector4::Zero();
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      if (w[a + 2] != 0 && w[b + 2] != 0)
        uv += w[a + 2] * w[b + 2] * z.at(i + a, j + b);
  jet.z_uv = uv / (du * dv);
  return jet;
}

InvariantFieldGrid build_net(const SurfaceModel& model, ParamPoint seed,
                             int nu, int nv, double du, double dv,
                             const NetOptions& options) {
  if (nu < 3 || nv < 3)
    throw InputError("build_net: need at least a 3x3 net");
  if (du <= 0 || dv <= 0) throw InputError("build_net: steps must be > 0");

  const Field2D<ParamPoint> P = march_params(
      model, seed, nu, nv, du, dv, options.intersect_tol * std::min(du, dv),
      false);

  InvariantFieldGrid grid;
  grid.nu = nu;
  grid.nv = nv;
  grid.du = du;
  grid.dv = dv;
  grid.source_uv = P;
  grid.positions = Field2D<Vector4>(nu, nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i)
      grid.positions.at(i, j) = model.position_at(P.at(i, j));

  // Measured net metric.
  grid.sqrtE = Field2D<double>(nu, nv);
  grid.sqrtG = Field2D<double>(nu, nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      grid.sqrtE.at(i, j) =
          position_derivative_u(grid.positions, i, j, du).norm();
      grid.sqrtG.at(i, j) =
          position_derivative_v(grid.positions, i, j, dv).norm();
    }

  if (options.with_frames) {
    grid.frames = Field2D<Matrix4>(nu, nv);
    for (auto* f : {&grid.gamma1, &grid.gamma2, &grid.nu1, &grid.nu2,
                    &grid.lambda, &grid.mu, &grid.beta1, &grid.beta2})
      *f = Field2D<double>(nu, nv);

    Field2D<GeometricFrame> frames(nu, nv);
    for (int j = 0; j < nv; ++j)
      for (int i = 0; i < nu; ++i) {
        const GeometricFrame* ref = nullptr;
        if (i > 0)
          ref = &frames.at(i - 1, j);
        else if (j > 0)
          ref = &frames.at(0, j - 1);
        GeometricFrame fr;
        try {
          fr = ref ? geometric_frame(model, P.at(i, j), *ref)
                   : geometric_frame(model, P.at(i, j));
        } catch (const NumericError& e) {
          throw NumericError("build_net: node (" + std::to_string(i) + "," +
                             std::to_string(j) + "): " + e.what());
        }
        frames.at(i, j) = fr;
        grid.frames.at(i, j) = fr.as_matrix();
        grid.gamma1.at(i, j) = fr.gamma1;
        grid.gamma2.at(i, j) = fr.gamma2;
        grid.nu1.at(i, j) = fr.nu1;
        grid.nu2.at(i, j) = fr.nu2;
        grid.lambda.at(i, j) = fr.lambda;
        grid.mu.at(i, j) = fr.mu;
        grid.beta1.at(i, j) = fr.beta1;
        grid.beta2.at(i, j) = fr.beta2;
      }
  }

  if (options.measure_holonomy) {
    // Transposed marching must land on the same far corner; the mismatch
    // quantifies the order-of-integration (holonomy) defect of the net.
    const Field2D<ParamPoint> Q = march_params(
        model, seed, nv, nu, dv, du, options.intersect_tol * std::min(du, dv),
        true);
    const Vector4 far1 = grid.positions.at(nu - 1, nv - 1);
    const Vector4 far2 = model.position_at(Q.at(nv - 1, nu - 1));
    grid.holonomy_defect = (far1 - far2).norm();

    double diameter = 0;
    const Vector4 corners[4] = {grid.positions.at(0, 0),
                                grid.positions.at(nu - 1, 0),
                                grid.positions.at(0, nv - 1), far1};
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        diameter = std::max(diameter, (corners[a] - corners[b]).norm());
    if (grid.holonomy_defect > options.holonomy_threshold * diameter)
      throw ToleranceError("build_net: holonomy defect " +
                           std::to_string(grid.holonomy_defect) +
                           " exceeds threshold");
  }
  return grid;
}

IntegrabilityReport check_integrability(const InvariantFieldGrid& g) {
  if (g.nu < 3 || g.nv < 3)
    throw InputError("check_integrability: need at least a 3x3 grid");

  IntegrabilityReport rep;
  const auto sE_v = d_dv(g.sqrtE, g.dv);
  const auto sG_u = d_du(g.sqrtG, g.du);
  const auto g2_u = d_du(g.gamma2, g.du);
  const auto g1_v = d_dv(g.gamma1, g.dv);
  const auto la_u = d_du(g.lambda, g.du);
  const auto la_v = d_dv(g.lambda, g.dv);
  const auto n1_v = d_dv(g.nu1, g.dv);
  const auto n2_u = d_du(g.nu2, g.du);
  const auto b1_v = d_dv(g.beta1, g.dv);
  const auto b2_u = d_du(g.beta2, g.du);
  const auto mu_u = d_du(g.mu, g.du);
  const auto mu_v = d_dv(g.mu, g.dv);

  for (auto& r : rep.residuals) r = Field2D<double>(g.nu, g.nv);

  double mu_max = 0;
  for (double m : g.mu.data) mu_max = std::max(mu_max, std::abs(m));

  bool general = true;
  bool cond43 = true;
  for (int j = 0; j < g.nv; ++j)
    for (int i = 0; i < g.nu; ++i) {
      const double sE = g.sqrtE.at(i, j), sG = g.sqrtG.at(i, j);
      const double g1 = g.gamma1.at(i, j), g2 = g.gamma2.at(i, j);
      const double n1 = g.nu1.at(i, j), n2 = g.nu2.at(i, j);
      const double la = g.lambda.at(i, j), mu = g.mu.at(i, j);
      const double b1 = g.beta1.at(i, j), b2 = g.beta2.at(i, j);

      rep.residuals[0].at(i, j) = sE_v.at(i, j) + g1 * sE * sG;
      rep.residuals[1].at(i, j) = sG_u.at(i, j) + g2 * sE * sG;
      rep.residuals[2].at(i, j) =
          n1 * n2 - (la * la + mu * mu) -
          (g2_u.at(i, j) / sE + g1_v.at(i, j) / sG - (g1 * g1 + g2 * g2));
      rep.residuals[3].at(i, j) =
          2 * la * g2 + mu * b1 - (n1 - n2) * g1 -
          (la_u.at(i, j) / sE - n1_v.at(i, j) / sG);
      rep.residuals[4].at(i, j) =
          2 * la * g1 + mu * b2 + (n1 - n2) * g2 -
          (-n2_u.at(i, j) / sE + la_v.at(i, j) / sG);
      rep.residuals[5].at(i, j) =
          g1 * b1 - g2 * b2 + (n1 - n2) * mu -
          (-b2_u.at(i, j) / sE + b1_v.at(i, j) / sG);

      const double mu_tol = 1e-6 * (1.0 + mu_max);
      if (std::abs(mu_u.at(i, j)) < mu_tol ||
          std::abs(mu_v.at(i, j)) < mu_tol)
        general = false;

      const double denE = 2 * mu * g2 + n1 * b2 - la * b1;
      const double denG = 2 * mu * g1 - la * b2 + n2 * b1;
      if (std::abs(denE) > 1e-12 && mu_u.at(i, j) / denE <= 0) cond43 = false;
      if (std::abs(denG) > 1e-12 && mu_v.at(i, j) / denG <= 0) cond43 = false;
    }

  for (int e = 0; e < 6; ++e) {
    double sum2 = 0;
    for (int j = 0; j < g.nv; ++j)
      for (int i = 0; i < g.nu; ++i) {
        const double r = std::abs(rep.residuals[e].at(i, j));
        sum2 += r * r;
        if (r > rep.max_abs[e]) rep.max_abs[e] = r;
        if (r > rep.max_residual) {
          rep.max_residual = r;
          rep.argmax_eq = e;
          rep.argmax_i = i;
          rep.argmax_j = j;
        }
      }
    rep.rms[e] = std::sqrt(sum2 / (g.nu * g.nv));
  }
  rep.general_class = general;
  rep.condition_4_3 = cond43;
  return rep;
}

}  // namespace surf4
