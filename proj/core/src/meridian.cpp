#include "surf4/meridian.hpp"

#include <algorithm>
#include <cmath>

namespace surf4 {

namespace {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

Matrix3 skew_of(double k) {
  Matrix3 m;
  m << 0, 1, 0,
      -1, 0, k,
       0, -k, 0;
  return m;
}

// Closed-form exponential of a 3x3 skew matrix (Rodrigues), with the
// small-angle series so the step is smooth through theta -> 0.
Matrix3 exp_skew3(const Matrix3& s) {
  const Vector3 w(s(2, 1), s(0, 2), s(1, 0));
  const double theta = w.norm();
  double c1, c2;  // sin(t)/t and (1-cos t)/t^2
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Matrix3::Identity() + c1 * s + c2 * (s * s);
}

// One 4th-order Magnus step (two-point Gauss collocation) of R' = Omega(v) R.
Matrix3 magnus4_step(const CurvatureFn& kappa, double v, double h,
                     const Matrix3& R) {
  const double c = std::sqrt(3.0) / 6.0;
  const Matrix3 O1 = skew_of(kappa(v + (0.5 - c) * h)[0]);
  const Matrix3 O2 = skew_of(kappa(v + (0.5 + c) * h)[0]);
  const Matrix3 sigma =
      (h / 2.0) * (O1 + O2) +
      (std::sqrt(3.0) / 12.0) * h * h * (O2 * O1 - O1 * O2);
  return exp_skew3(sigma) * R;
}

Matrix3 triple_to_matrix(const FrenetTriple& f) {
  Matrix3 m;
  m.row(0) = f.l.head<3>();
  m.row(1) = f.t.head<3>();
  m.row(2) = f.n.head<3>();
  return m;
}

FrenetTriple matrix_to_triple(const Matrix3& m) {
  FrenetTriple f;
  f.l.head<3>() = m.row(0);
  f.t.head<3>() = m.row(1);
  f.n.head<3>() = m.row(2);
  return f;
}

}  // namespace

SphericalCurve::SphericalCurve(CurvatureFn kappa, double v0, double v1,
                               const FrenetTriple& initial)
    : kappa_(std::move(kappa)), v0_(v0), v1_(v1) {
  Matrix3 R = triple_to_matrix(initial);
  if ((R * R.transpose() - Matrix3::Identity()).cwiseAbs().maxCoeff() > 1e-9)
    throw InputError("spherical_curve: initial triple not orthonormal");

  const int n = std::max(64, static_cast<int>(std::ceil((v1 - v0) / 0.004)));
  step_ = (v1 - v0) / n;
  samples_.reserve(n + 1);
  samples_.push_back(matrix_to_triple(R));
  for (int i = 0; i < n; ++i) {
    R = magnus4_step(kappa_, v0 + i * step_, step_, R);
    samples_.push_back(matrix_to_triple(R));
  }
}

FrenetTriple SphericalCurve::at(double v) const {
  double s = (v - v0_) / step_;
  int k = static_cast<int>(std::floor(s));
  k = std::clamp(k, 0, static_cast<int>(samples_.size()) - 1);
  const double rest = v - (v0_ + k * step_);
  Matrix3 R = triple_to_matrix(samples_[static_cast<size_t>(k)]);
  if (rest != 0.0) R = magnus4_step(kappa_, v0_ + k * step_, rest, R);
  return matrix_to_triple(R);
}

SurfaceModel meridian_surface(const MeridianSpec& spec) {
  auto curve = std::make_shared<SphericalCurve>(
      spec.kappa_c, spec.v0, spec.v1,
      FrenetTriple{Vector4(1, 0, 0, 0), Vector4(0, 1, 0, 0),
                   Vector4(0, 0, 1, 0)});
  const SmoothFn f = spec.f;
  const SmoothFn g = spec.g;
  const CurvatureFn kap = spec.kappa_c;

  SurfaceModel m;
  m.label = spec.label;
  m.domain = {spec.u0, spec.u1, spec.v0, spec.v1, false, spec.v_periodic};
  m.evaluator = [curve, f, g, kap](ParamPoint p, int order) {
    const auto fd = f(p.u);
    const auto gd = g(p.u);
    if (fd[0] <= 0.0)
      throw NumericError("meridian_surface: profile f must stay positive");
    const FrenetTriple fr = curve->at(p.v);
    const auto kd = kap(p.v);
    const double k = kd[0], kprime = kd[1];
    const Vector4 e4(0, 0, 0, 1);

    SurfaceJet jet;
    jet.order = order;
    jet.z = fd[0] * fr.l + gd[0] * e4;
    jet.z_u = fd[1] * fr.l + gd[1] * e4;
    jet.z_v = fd[0] * fr.t;
    jet.z_uu = fd[2] * fr.l + gd[2] * e4;
    jet.z_uv = fd[1] * fr.t;
    jet.z_vv = fd[0] * (k * fr.n - fr.l);
    if (order == 3) {
      jet.z_uuu = fd[3] * fr.l + gd[3] * e4;
      jet.z_uuv = fd[2] * fr.t;
      jet.z_uvv = fd[1] * (k * fr.n - fr.l);
      jet.z_vvv = fd[0] * (kprime * fr.n - (1.0 + k * k) * fr.t);
    }
    return jet;
  };
  m.position = [curve, f, g](ParamPoint p) {
    const Vector4 e4(0, 0, 0, 1);
    return Vector4(f(p.u)[0] * curve->at(p.v).l + g(p.u)[0] * e4);
  };
  return m;
}

namespace {

// g-derivatives from the unit-speed relation g' = sqrt(1 - f'^2).
std::array<double, 3> g_derivatives(double f1, double f2, double f3) {
  const double w = std::sqrt(std::max(1.0 - f1 * f1, 0.0));
  const double g2 = -f1 * f2 / w;
  const double g3 = -((f2 * f2 + f1 * f3) * w - f1 * f2 * g2) / (w * w);
  return {w, g2, g3};
}

// Cumulative quadrature of g' = w(u) on a uniform checkpoint grid (RK4).
struct DenseQuadrature {
  double u_lo, step;
  std::vector<double> vals;

  static DenseQuadrature build(const std::function<double(double)>& w,
                               double u_lo, double u_hi, int n) {
    DenseQuadrature q;
    q.u_lo = u_lo;
    q.step = (u_hi - u_lo) / n;
    q.vals.reserve(n + 1);
    double g = 0.0;
    q.vals.push_back(g);
    for (int i = 0; i < n; ++i) {
      g += rk4_increment(w, u_lo + i * q.step, q.step);
      q.vals.push_back(g);
    }
    return q;
  }

  double at(const std::function<double(double)>& w, double u) const {
    double s = (u - u_lo) / step;
    int k = std::clamp(static_cast<int>(std::floor(s)), 0,
                       static_cast<int>(vals.size()) - 1);
    const double u_k = u_lo + k * step;
    return vals[static_cast<size_t>(k)] + rk4_increment(w, u_k, u - u_k);
  }

 private:
  static double rk4_increment(const std::function<double(double)>& w,
                              double u, double h) {
    if (h == 0.0) return 0.0;
    const double k1 = w(u);
    const double k2 = w(u + h / 2);
    const double k4 = w(u + h);
    return h * (k1 + 4 * k2 + k4) / 6.0;  // Simpson; exact order for g'=w(u)
  }
};

struct Interval {
  double lo = 0, hi = 0;
  bool empty() const { return !(hi > lo); }
};

// Largest connected subinterval of [lo, hi] where pred holds, on a fine scan.
Interval largest_admissible(double lo, double hi,
                            const std::function<bool(double)>& pred,
                            int samples = 20000) {
  const double h = (hi - lo) / samples;
  Interval best, cur;
  bool open = false;
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + i * h;
    if (pred(t)) {
      if (!open) {
        cur.lo = t;
        open = true;
      }
      cur.hi = t;
    } else if (open) {
      if (cur.hi - cur.lo > best.hi - best.lo) best = cur;
      open = false;
    }
  }
  if (open && cur.hi - cur.lo > best.hi - best.lo) best = cur;
  return best;
}

constexpr double kProfileMargin = 0.05;  // keeps y away from 0 and 1

// Dense solution of the autonomous profile ODE f' = y(f), g' = sqrt(1-y^2),
// integrated forward and backward from f(0) = seed until f leaves
// [t_lo, t_hi]. Checkpoints at uniform u-steps.
struct DenseProfile {
  using YFn = std::function<std::array<double, 3>(double)>;

  YFn y;
  double u_min = 0, u_max = 0, step = 0;
  std::vector<std::array<double, 2>> vals;  // (f, g) from u_min

  std::array<double, 2> rhs(const std::array<double, 2>& s) const {
    const double yv = y(s[0])[0];
    return {yv, std::sqrt(std::max(1.0 - yv * yv, 0.0))};
  }

  std::array<double, 2> rk4(std::array<double, 2> s, double h) const {
    const auto k1 = rhs(s);
    const auto k2 = rhs({s[0] + h / 2 * k1[0], s[1] + h / 2 * k1[1]});
    const auto k3 = rhs({s[0] + h / 2 * k2[0], s[1] + h / 2 * k2[1]});
    const auto k4 = rhs({s[0] + h * k3[0], s[1] + h * k3[1]});
    s[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    s[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    return s;
  }

  static DenseProfile build(const YFn& y, double seed, double t_lo,
                            double t_hi) {
    DenseProfile d;
    d.y = y;
    d.step = std::min(0.002, (t_hi - t_lo) / 400.0);

    std::vector<std::array<double, 2>> fwd, bwd;
    std::array<double, 2> s{seed, 0.0};
    fwd.push_back(s);
    const int cap = 400000;
    for (int i = 0; i < cap; ++i) {
      auto nxt = d.rk4(s, d.step);
      if (nxt[0] < t_lo || nxt[0] > t_hi) break;
      s = nxt;
      fwd.push_back(s);
    }
    s = {seed, 0.0};
    for (int i = 0; i < cap; ++i) {
      auto nxt = d.rk4(s, -d.step);
      if (nxt[0] < t_lo || nxt[0] > t_hi) break;
      s = nxt;
      bwd.push_back(s);
    }
    d.u_min = -d.step * static_cast<double>(bwd.size());
    d.u_max = d.step * static_cast<double>(fwd.size() - 1);
    d.vals.assign(bwd.rbegin(), bwd.rend());
    d.vals.insert(d.vals.end(), fwd.begin(), fwd.end());
    return d;
  }

  std::array<double, 2> at(double u) const {
    const double sidx = (u - u_min) / step;
    const int k = std::clamp(static_cast<int>(std::floor(sidx)), 0,
                             static_cast<int>(vals.size()) - 1);
    return rk4(vals[static_cast<size_t>(k)], u - (u_min + k * step));
  }
};

MeridianSpec spec_from_profile_ode(const DenseProfile::YFn& y, double seed,
                                   double t_lo, double t_hi, double kappa_c,
                                   const std::string& label) {
  auto dense = std::make_shared<DenseProfile>(
      DenseProfile::build(y, seed, t_lo, t_hi));
  if (dense->u_max - dense->u_min <= 4 * dense->step)
    throw InputError(label + ": admissible profile interval is empty");

  MeridianSpec spec;
  spec.label = label;
  // Trim the ends one checkpoint inward of the event boundaries.
  spec.u0 = dense->u_min + dense->step;
  spec.u1 = dense->u_max - dense->step;
  spec.f = [dense, y](double u) {
    const auto s = dense->at(u);
    const auto yv = y(s[0]);
    const double f1 = yv[0];
    const double f2 = yv[1] * yv[0];
    const double f3 = (yv[2] * yv[0] + yv[1] * yv[1]) * yv[0];
    return std::array<double, 4>{s[0], f1, f2, f3};
  };
  spec.g = [dense, y](double u) {
    const auto s = dense->at(u);
    const auto yv = y(s[0]);
    const double f1 = yv[0];
    const double f2 = yv[1] * yv[0];
    const double f3 = (yv[2] * yv[0] + yv[1] * yv[1]) * yv[0];
    const auto gd = g_derivatives(f1, f2, f3);
    return std::array<double, 4>{s[1], gd[0], gd[1], gd[2]};
  };
  const double b = kappa_c;
  spec.kappa_c = [b](double) { return std::array<double, 2>{b, 0.0}; };
  spec.v0 = 0.0;
  spec.v1 = 2.0 * M_PI / std::sqrt(1.0 + b * b);
  spec.v_periodic = true;
  return spec;
}

}  // namespace

std::array<double, 3> cmc_profile_y(double a, double b, double C, double t) {
  const double R = 4 * a * a * t * t - b * b;
  const double sR = std::sqrt(R);
  const double P =
      C + 0.5 * t * sR - (b * b / (4 * a)) * std::log(std::abs(2 * a * t + sR));
  const double Pp = sR;
  const double Ppp = 4 * a * a * t / sR;

  const double S = 1.0 - P * P / (t * t);
  const double Sp = -2 * P * Pp / (t * t) + 2 * P * P / (t * t * t);
  const double Spp = -2 * (Pp * Pp + P * Ppp) / (t * t) +
                     8 * P * Pp / (t * t * t) -
                     6 * P * P / (t * t * t * t);
  const double y = std::sqrt(S);
  const double yp = Sp / (2 * y);
  const double ypp = Spp / (2 * y) - Sp * Sp / (4 * y * y * y);
  return {y, yp, ypp};
}

std::array<double, 3> constant_k_profile_y(double a, double b, double C,
                                           bool plus_branch, double t) {
  const double s = plus_branch ? 1.0 : -1.0;
  const double Q = C + s * (a / b) * t * t / 2.0;
  const double Qp = s * (a / b) * t;
  const double Qpp = s * (a / b);
  const double y = std::sqrt(1.0 - Q * Q);
  const double yp = -Q * Qp / y;
  const double ypp = -(Qp * Qp + Q * Qpp) / y + Q * Qp * yp / (y * y);
  return {y, yp, ypp};
}

MeridianSpec cmc_profile(double a, double b, double C) {
  if (a == 0.0 || b == 0.0)
    throw InputError("cmc_profile: a and b must be nonzero");
  const double t_star = std::abs(b) / (2 * std::abs(a));
  const double span = 20.0 * std::max(1.0, t_star);
  auto admissible = [&](double t) {
    if (t <= 0) return false;
    const double R = 4 * a * a * t * t - b * b;
    if (R < 1e-2 * (4 * a * a * t * t + b * b)) return false;
    const auto y = cmc_profile_y(a, b, C, t);
    return y[0] > kProfileMargin &&
           y[0] < std::sqrt(1.0 - kProfileMargin * kProfileMargin);
  };
  const Interval iv = largest_admissible(t_star, t_star + span, admissible);
  if (iv.empty()) throw InputError("cmc_profile: empty admissible t-interval");
  auto y = [a, b, C](double t) { return cmc_profile_y(a, b, C, t); };
  return spec_from_profile_ode(y, 0.5 * (iv.lo + iv.hi), iv.lo, iv.hi, b,
                               "cmc_meridian");
}

MeridianSpec constant_k_profile(double a, double b, double C,
                                bool plus_branch) {
  if (a == 0.0 || b == 0.0)
    throw InputError("constant_k_profile: a and b must be nonzero");
  const double t_cap = std::sqrt(2.0 * std::abs(b / a) * (std::abs(C) + 2.0));
  auto admissible = [&](double t) {
    if (t <= 1e-6) return false;
    const double s = plus_branch ? 1.0 : -1.0;
    const double Q = C + s * (a / b) * t * t / 2.0;
    const double q = std::abs(Q);
    return q > kProfileMargin &&
           q < std::sqrt(1.0 - kProfileMargin * kProfileMargin);
  };
  const Interval iv = largest_admissible(1e-6, t_cap, admissible);
  if (iv.empty())
    throw InputError("constant_k_profile: empty admissible t-interval");
  auto y = [a, b, C, plus_branch](double t) {
    return constant_k_profile_y(a, b, C, plus_branch, t);
  };
  return spec_from_profile_ode(y, 0.5 * (iv.lo + iv.hi), iv.lo, iv.hi, b,
                               "constant_k_meridian");
}

MeridianSpec constant_K_profile(double K, double alpha, double beta,
                                double kappa_c) {
  if (K == 0.0) throw InputError("constant_K_profile: K must be nonzero");

  const double s = std::sqrt(std::abs(K));
  auto fd = [K, s, alpha, beta](double u) {
    std::array<double, 4> d;
    if (K > 0) {
      const double c = std::cos(s * u), sn = std::sin(s * u);
      d[0] = alpha * c + beta * sn;
      d[1] = s * (-alpha * sn + beta * c);
      d[2] = -K * d[0];
      d[3] = -K * d[1];
    } else {
      const double ch = std::cosh(s * u), sh = std::sinh(s * u);
      d[0] = alpha * ch + beta * sh;
      d[1] = s * (alpha * sh + beta * ch);
      d[2] = -K * d[0];
      d[3] = -K * d[1];
    }
    return d;
  };

  // Admissible u: f positive and |f'| bounded away from 1.
  const double window = (K > 0) ? 2 * M_PI / s : 20.0 / s;
  const double f_floor = 1e-2 * std::hypot(alpha, beta);
  auto admissible = [&](double u) {
    const auto d = fd(u);
    return d[0] > f_floor &&
           d[1] * d[1] < 1.0 - kProfileMargin * kProfileMargin;
  };
  const Interval iv = largest_admissible(-window, window, admissible);
  if (iv.empty())
    throw InputError("constant_K_profile: |f'| <= 1 nowhere on the window");

  auto wfun = [fd](double u) {
    const double f1 = fd(u)[1];
    return std::sqrt(std::max(1.0 - f1 * f1, 0.0));
  };
  auto quad = std::make_shared<DenseQuadrature>(
      DenseQuadrature::build(wfun, iv.lo, iv.hi, 4096));

  MeridianSpec spec;
  spec.label = "constant_K_meridian";
  spec.u0 = iv.lo;
  spec.u1 = iv.hi;
  spec.f = [fd](double u) { return fd(u); };
  spec.g = [fd, quad, wfun](double u) {
    const auto d = fd(u);
    const auto gd = g_derivatives(d[1], d[2], d[3]);
    return std::array<double, 4>{quad->at(wfun, u), gd[0], gd[1], gd[2]};
  };
  const double b = kappa_c;
  spec.kappa_c = [b](double) { return std::array<double, 2>{b, 0.0}; };
  spec.v0 = 0.0;
  spec.v1 = 2.0 * M_PI / std::sqrt(1.0 + b * b);
  spec.v_periodic = true;
  return spec;
}

MeridianClass meridian_class(const MeridianSpec& spec) {
  double max_kappa = 0, max_km = 0, scale_m = 0;
  for (int i = 0; i <= 64; ++i) {
    const double v = spec.v0 + (spec.v1 - spec.v0) * i / 64.0;
    max_kappa = std::max(max_kappa, std::abs(spec.kappa_c(v)[0]));
    const double u = spec.u0 + (spec.u1 - spec.u0) * i / 64.0;
    max_km = std::max(max_km, std::abs(spec.kappa_m(u)));
    const auto fdu = spec.f(u);
    scale_m = std::max({scale_m, std::abs(fdu[1]), std::abs(fdu[2])});
  }
  if (max_kappa < 1e-10) return MeridianClass::PlanarCurveClass;
  if (max_km < 1e-10 * (1.0 + scale_m)) return MeridianClass::DevelopableRuled;
  return MeridianClass::General;
}

}  // namespace surf4
