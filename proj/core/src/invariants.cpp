#include "surf4/invariants.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace surf4 {

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Flat: return "flat";
    case PointClass::Elliptic: return "elliptic";
    case PointClass::Parabolic: return "parabolic";
    case PointClass::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

std::pair<Vector4, Vector4> orthonormal_tangents(const SurfaceJet& jet) {
  const Vector4 t1 = jet.z_u.normalized();
  Vector4 t2 = jet.z_v - jet.z_v.dot(t1) * t1;
  t2.normalize();
  return {t1, t2};
}

NormalFrame normal_frame(const SurfaceJet& jet) {
  const auto [t1, t2] = orthonormal_tangents(jet);

  // Rank the ambient basis vectors by tangential component; ties break by
  // index, which keeps the choice deterministic.
  std::array<int, 4> idx = {0, 1, 2, 3};
  std::array<double, 4> tang{};
  for (int i = 0; i < 4; ++i) {
    Vector4 e = Vector4::Zero();
    e[i] = 1.0;
    tang[i] = e.dot(t1) * e.dot(t1) + e.dot(t2) * e.dot(t2);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return tang[a] < tang[b]; });

  auto project_normal = [&](int i) {
    Vector4 e = Vector4::Zero();
    e[i] = 1.0;
    return Vector4(e - e.dot(t1) * t1 - e.dot(t2) * t2);
  };

  NormalFrame f;
  f.e1 = project_normal(idx[0]).normalized();
  Vector4 e2 = project_normal(idx[1]);
  e2 -= e2.dot(f.e1) * f.e1;
  f.e2 = e2.normalized();
  if (det4(jet.z_u, jet.z_v, f.e1, f.e2) < 0) f.e2 = -f.e2;
  return f;
}

std::pair<FirstFundamental, SecondFundamentalData> fundamental_data(
    const SurfaceJet& jet, const NormalFrame& frame) {
  FirstFundamental I;
  I.E = jet.E();
  I.F = jet.F();
  I.G = jet.G();
  I.W = std::sqrt(I.E * I.G - I.F * I.F);

  SecondFundamentalData II;
  const Vector4* d2[3] = {&jet.z_uu, &jet.z_uv, &jet.z_vv};
  for (int r = 0; r < 3; ++r) {
    II.c(r, 0) = d2[r]->dot(frame.e1);
    II.c(r, 1) = d2[r]->dot(frame.e2);
  }
  II.Delta1 = II.c(0, 0) * II.c(1, 1) - II.c(0, 1) * II.c(1, 0);
  II.Delta2 = II.c(0, 0) * II.c(2, 1) - II.c(0, 1) * II.c(2, 0);
  II.Delta3 = II.c(1, 0) * II.c(2, 1) - II.c(1, 1) * II.c(2, 0);
  II.L = 2.0 * II.Delta1 / I.W;
  II.M = II.Delta2 / I.W;
  II.N = 2.0 * II.Delta3 / I.W;
  return {I, II};
}

Vector4 sigma_of(const SurfaceJet& jet, const NormalFrame& frame,
                 const TangentDirection& a, const TangentDirection& b) {
  const auto [I, II] = fundamental_data(jet, frame);
  (void)I;
  return a.lambda * b.lambda * II.sigma_uu(frame) +
         (a.lambda * b.mu + a.mu * b.lambda) * II.sigma_uv(frame) +
         a.mu * b.mu * II.sigma_vv(frame);
}

namespace {

// Roots of a*t^2 + b*t + c = 0 in homogeneous (lambda : mu) form for the
// quadratic a*l^2 + b*l*m + c*m^2; numerically stable variant with the
// discriminant clamped to zero when negative within tolerance.
struct HomogeneousRoots {
  int count = 0;
  TangentDirection r1, r2;
};

HomogeneousRoots solve_homogeneous_quadratic(double a, double b, double c) {
  HomogeneousRoots out;
  const double scale = std::abs(a) + std::abs(b) + std::abs(c);
  if (scale == 0.0) return out;  // identically zero: caller handles
  if (std::abs(a) <= 1e-14 * scale) {
    // b*l*m + c*m^2 = 0 -> m = 0 or b*l + c*m = 0.
    if (std::abs(b) <= 1e-14 * scale) {
      // c*m^2 = 0: double root m = 0.
      out.count = 1;
      out.r1 = {1, 0};
      return out;
    }
    out.count = 2;
    out.r1 = {1, 0};
    out.r2 = {-c, b};
    return out;
  }
  double disc = b * b - 4 * a * c;
  if (disc < 0 && disc > -1e-12 * (b * b + std::abs(4 * a * c) + scale * scale))
    disc = 0;
  if (disc < 0) return out;
  if (disc == 0) {
    out.count = 1;
    out.r1 = {-b / (2 * a), 1};
    return out;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  out.count = 2;
  // roots t = q/a and c/q of a t^2 + b t + c (t = lambda/mu)
  out.r1 = {q, a};
  if (q != 0.0)
    out.r2 = {c, q};
  else
    out.r2 = {0, 1};
  return out;
}

// Angle of a tangent direction in the orthonormalized (z_u, z_v) basis,
// reduced to [0, pi) since a direction has no preferred sign.
double direction_angle(const SurfaceJet& jet, const TangentDirection& g) {
  const double E = jet.E(), F = jet.F(), G = jet.G();
  const double W = std::sqrt(E * G - F * F);
  // components along xhat = z_u/sqrt(E), yhat = (z_v - F/E z_u) sqrt(E)/W
  const double cx = g.lambda * std::sqrt(E) + g.mu * F / std::sqrt(E);
  const double cy = g.mu * W / std::sqrt(E);
  double theta = std::atan2(cy, cx);
  if (theta < 0) theta += M_PI;
  if (theta >= M_PI) theta -= M_PI;
  return theta;
}

TangentDirection normalize_unit(const SurfaceJet& jet, TangentDirection g) {
  const double E = jet.E(), F = jet.F(), G = jet.G();
  const double n = std::sqrt(E * g.lambda * g.lambda +
                             2 * F * g.lambda * g.mu + G * g.mu * g.mu);
  g.lambda /= n;
  g.mu /= n;
  // Canonical sign: representative with angle in [0, pi).
  const double W = std::sqrt(E * G - F * F);
  const double cy = g.mu * W / std::sqrt(E);
  const double cx = g.lambda * std::sqrt(E) + g.mu * F / std::sqrt(E);
  if (cy < 0 || (cy == 0 && cx < 0)) {
    g.lambda = -g.lambda;
    g.mu = -g.mu;
  }
  return g;
}

}  // namespace

InvariantRecord invariant_record(const SurfaceJet& jet) {
  InvariantRecord rec;
  rec.normal = normal_frame(jet);
  std::tie(rec.first, rec.second) = fundamental_data(jet, rec.normal);
  const double E = rec.first.E, F = rec.first.F, G = rec.first.G;
  const double L = rec.second.L, M = rec.second.M, N = rec.second.N;
  const double denom = E * G - F * F;

  rec.gamma_matrix(0, 0) = (F * M - G * L) / denom;
  rec.gamma_matrix(0, 1) = (F * L - E * M) / denom;
  rec.gamma_matrix(1, 0) = (F * N - G * M) / denom;
  rec.gamma_matrix(1, 1) = (F * M - E * N) / denom;

  rec.k = (L * N - M * M) / denom;
  rec.kappa = (E * N + G * L - 2 * F * M) / (2 * denom);

  // Gauss equation on an orthonormal tangent pair.
  const double sE = std::sqrt(E);
  const TangentDirection x{1.0 / sE, 0.0};
  const TangentDirection y{-F / (sE * rec.first.W), sE / rec.first.W};
  const Vector4 sxx = sigma_of(jet, rec.normal, x, x);
  const Vector4 syy = sigma_of(jet, rec.normal, y, y);
  const Vector4 sxy = sigma_of(jet, rec.normal, x, y);
  rec.K = sxx.dot(syy) - sxy.dot(sxy);
  rec.H = 0.5 * (sxx + syy);
  rec.H_norm = rec.H.norm();

  rec.class_tolerance = 1e-10 * (1.0 + jet.scale_sq());
  const double lmn = std::max({std::abs(L), std::abs(M), std::abs(N)});
  if (lmn < rec.class_tolerance) {
    rec.point_class = PointClass::Flat;
    rec.nu_prime = rec.nu_doubleprime = 0.0;
    return rec;
  }
  if (std::abs(rec.k) < rec.class_tolerance)
    rec.point_class = PointClass::Parabolic;
  else
    rec.point_class = rec.k > 0 ? PointClass::Elliptic : PointClass::Hyperbolic;

  std::tie(rec.nu_prime, rec.nu_doubleprime) =
      principal_normal_curvatures(jet);
  return rec;
}

double zeta(const SurfaceJet& jet, const TangentDirection& g1,
            const TangentDirection& g2) {
  if ((g1.lambda == 0 && g1.mu == 0) || (g2.lambda == 0 && g2.mu == 0))
    throw InputError("zeta: zero tangent direction");
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  const double bilinear = II.L * g1.lambda * g2.lambda +
                          II.M * (g1.lambda * g2.mu + g1.mu * g2.lambda) +
                          II.N * g1.mu * g2.mu;
  return bilinear /
         (std::sqrt(I.I(g1.lambda, g1.mu)) * std::sqrt(I.I(g2.lambda, g2.mu)));
}

double normal_curvature(const SurfaceJet& jet, const TangentDirection& g) {
  if (g.lambda == 0 && g.mu == 0)
    throw InputError("normal_curvature: zero tangent direction");
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  return II.II(g.lambda, g.mu) / I.I(g.lambda, g.mu);
}

double geodesic_torsion(const SurfaceJet& jet, const TangentDirection& g) {
  if (g.lambda == 0 && g.mu == 0)
    throw InputError("geodesic_torsion: zero tangent direction");
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  const double E = I.E, F = I.F, G = I.G;
  const double L = II.L, M = II.M, N = II.N;
  const double num = g.lambda * g.lambda * (E * M - F * L) +
                     g.lambda * g.mu * (E * N - G * L) +
                     g.mu * g.mu * (F * N - G * M);
  return num / (I.W * I.I(g.lambda, g.mu));
}

PrincipalDirections principal_directions(const SurfaceJet& jet) {
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  const double E = I.E, F = I.F, G = I.G;
  const double L = II.L, M = II.M, N = II.N;
  const double a = E * M - F * L;
  const double b = E * N - G * L;
  const double c = F * N - G * M;

  PrincipalDirections out;
  const double coeff_scale = std::abs(a) + std::abs(b) + std::abs(c);
  const double form_scale =
      (std::abs(E) + std::abs(F) + std::abs(G)) *
      (std::abs(L) + std::abs(M) + std::abs(N));
  if (coeff_scale <= 1e-13 * (form_scale + 1e-300)) {
    out.all_principal = true;
    out.first = normalize_unit(jet, {1, 0});
    out.second = normalize_unit(jet, {0, 1});
    return out;
  }

  auto roots = solve_homogeneous_quadratic(a, b, c);
  if (roots.count < 2)
    throw NumericError("principal_directions: degenerate principal equation");
  TangentDirection g1 = normalize_unit(jet, roots.r1);
  TangentDirection g2 = normalize_unit(jet, roots.r2);
  if (direction_angle(jet, g2) < direction_angle(jet, g1)) std::swap(g1, g2);
  out.first = g1;
  out.second = g2;
  return out;
}

std::vector<TangentDirection> asymptotic_directions(const SurfaceJet& jet) {
  const auto [I, II] = fundamental_data(jet, normal_frame(jet));
  (void)I;
  std::vector<TangentDirection> out;
  const double scale =
      std::abs(II.L) + std::abs(II.M) + std::abs(II.N);
  if (scale < 1e-14 * (1.0 + jet.scale_sq())) return out;  // flat point
  const auto roots = solve_homogeneous_quadratic(II.L, 2 * II.M, II.N);
  if (roots.count >= 1) out.push_back(normalize_unit(jet, roots.r1));
  if (roots.count >= 2) out.push_back(normalize_unit(jet, roots.r2));
  return out;
}

std::pair<double, double> principal_normal_curvatures(const SurfaceJet& jet) {
  const auto dirs = principal_directions(jet);
  if (dirs.all_principal) {
    const double nu = normal_curvature(jet, dirs.first);
    return {nu, nu};
  }
  return {normal_curvature(jet, dirs.first),
          normal_curvature(jet, dirs.second)};
}

double normal_connection_commutator(const SurfaceJet& jet) {
  const NormalFrame nf = normal_frame(jet);
  // Components of the orthonormal tangent pair in the (z_u, z_v) basis.
  const double E = jet.E(), F = jet.F(), W2 = E * jet.G() - F * F;
  const double sE = std::sqrt(E), W = std::sqrt(W2);
  const TangentDirection x{1.0 / sE, 0.0};
  const TangentDirection y{-F / (sE * W), sE / W};

  auto shape = [&](const Vector4& normal) {
    Matrix2 A;
    const Vector4 sxx = sigma_of(jet, nf, x, x);
    const Vector4 sxy = sigma_of(jet, nf, x, y);
    const Vector4 syy = sigma_of(jet, nf, y, y);
    A(0, 0) = sxx.dot(normal);
    A(0, 1) = sxy.dot(normal);
    A(1, 0) = sxy.dot(normal);
    A(1, 1) = syy.dot(normal);
    return A;
  };
  const Matrix2 A1 = shape(nf.e1);
  const Matrix2 A2 = shape(nf.e2);
  const Matrix2 C = A2 * A1 - A1 * A2;
  // C is skew; (A2 A1 - A1 A2)(x) = kappa * y reads off as C(1,0).
  return C(1, 0);
}

}  // namespace surf4
