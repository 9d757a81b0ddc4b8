#include "surf4/reconstruct.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace surf4 {

FrameMatrixPair frame_matrices(double sE, double sG, double g1, double g2,
                               double n1, double n2, double la, double mu,
                               double b1, double b2) {
  FrameMatrixPair out;
  out.A << 0, g1, n1, 0,
          -g1, 0, la, mu,
          -n1, -la, 0, b1,
           0, -mu, -b1, 0;
  out.A *= sE;
  out.B << 0, -g2, la, mu,
           g2, 0, n2, 0,
          -la, -n2, 0, b2,
          -mu, 0, -b2, 0;
  out.B *= sG;
  return out;
}

FrameMatrixPair frame_matrices_at(const InvariantFieldGrid& g, int i, int j) {
  return frame_matrices(g.sqrtE.at(i, j), g.sqrtG.at(i, j), g.gamma1.at(i, j),
                        g.gamma2.at(i, j), g.nu1.at(i, j), g.nu2.at(i, j),
                        g.lambda.at(i, j), g.mu.at(i, j), g.beta1.at(i, j),
                        g.beta2.at(i, j));
}

namespace {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using State = Eigen::Matrix<double, 5, 4>;  // rows x, y, b, l, z

// One step of the augmented exponential map: the 5x5 matrix
//   [ C      0 ]
//   [ s e_r^T 0 ]
// drives both the frame rows and the position row (z' = s * row_r of Z).
State exp_step(const State& S, const Matrix4& C, double s, int row,
               double h) {
  Matrix5 aug = Matrix5::Zero();
  aug.topLeftCorner<4, 4>() = C;
  aug(4, row) = s;
  return (h * aug).exp() * S;
}

State rk4_projected_step(const State& S0, const Matrix4& C0, const Matrix4& C1,
                         double s0, double s1, int row, double h) {
  // Frame by classical RK4 with linearly interpolated coefficients.
  auto coeff = [&](double t) { return Matrix4(C0 + t * (C1 - C0)); };
  const Matrix4 Z0 = S0.topRows<4>();
  const Matrix4 k1 = coeff(0.0) * Z0;
  const Matrix4 k2 = coeff(0.5) * (Z0 + h / 2 * k1);
  const Matrix4 k3 = coeff(0.5) * (Z0 + h / 2 * k2);
  const Matrix4 k4 = coeff(1.0) * (Z0 + h * k3);
  Matrix4 Z1 = Z0 + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  // Row-wise Gram-Schmidt re-orthonormalization.
  for (int r = 0; r < 4; ++r) {
    Vector4 v = Z1.row(r);
    for (int q = 0; q < r; ++q) v -= v.dot(Vector4(Z1.row(q))) * Vector4(Z1.row(q));
    Z1.row(r) = v.normalized();
  }
  State S1 = S0;
  S1.topRows<4>() = Z1;
  // Trapezoid position quadrature along the integrated frames.
  S1.row(4) = S0.row(4) + h / 2 * (s0 * Z0.row(row) + s1 * Z1.row(row));
  return S1;
}

struct StepCoeffs {
  Matrix4 C0, C1;
  double s0, s1;
};

// Coefficients for a u-step (axis 0) or v-step (axis 1) from node (i,j).
StepCoeffs step_coeffs(const InvariantFieldGrid& g, int i, int j, int axis) {
  StepCoeffs c;
  const FrameMatrixPair m0 = frame_matrices_at(g, i, j);
  const FrameMatrixPair m1 = axis == 0 ? frame_matrices_at(g, i + 1, j)
                                       : frame_matrices_at(g, i, j + 1);
  if (axis == 0) {
    c.C0 = m0.A;
    c.C1 = m1.A;
    c.s0 = g.sqrtE.at(i, j);
    c.s1 = g.sqrtE.at(i + 1, j);
  } else {
    c.C0 = m0.B;
    c.C1 = m1.B;
    c.s0 = g.sqrtG.at(i, j);
    c.s1 = g.sqrtG.at(i, j + 1);
  }
  return c;
}

State advance(const State& S, const StepCoeffs& c, int row, double h,
              FrameStepper stepper) {
  if (stepper == FrameStepper::MagnusMidpoint)
    return exp_step(S, 0.5 * (c.C0 + c.C1), 0.5 * (c.s0 + c.s1), row, h);
  return rk4_projected_step(S, c.C0, c.C1, c.s0, c.s1, row, h);
}

double compatibility_defect(const InvariantFieldGrid& g) {
  double worst = 0;
  for (int j = 1; j < g.nv - 1; ++j)
    for (int i = 1; i < g.nu - 1; ++i) {
      const Matrix4 Av =
          (frame_matrices_at(g, i, j + 1).A - frame_matrices_at(g, i, j - 1).A) /
          (2 * g.dv);
      const Matrix4 Bu =
          (frame_matrices_at(g, i + 1, j).B - frame_matrices_at(g, i - 1, j).B) /
          (2 * g.du);
      const FrameMatrixPair m = frame_matrices_at(g, i, j);
      const Matrix4 defect = Av - Bu + m.A * m.B - m.B * m.A;
      worst = std::max(worst, defect.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

ReconstructedPatch reconstruct(const InvariantFieldGrid& grid,
                               const Matrix4& initial_frame,
                               const Vector4& initial_point,
                               const ReconstructOptions& options) {
  if (grid.nu < 3 || grid.nv < 3)
    throw InputError("reconstruct: need at least a 3x3 grid");
  const Matrix4 gram = initial_frame * initial_frame.transpose();
  if ((gram - Matrix4::Identity()).cwiseAbs().maxCoeff() > 1e-8)
    throw InputError("reconstruct: initial frame is not orthonormal");
  if (initial_frame.determinant() < 0)
    throw InputError("reconstruct: initial frame is not positively oriented");

  if (options.check_compatibility) {
    const IntegrabilityReport rep = check_integrability(grid);
    if (rep.max_residual > options.residual_threshold)
      throw ToleranceError(
          "reconstruct: integrability residual " +
          std::to_string(rep.max_residual) + " exceeds threshold " +
          std::to_string(options.residual_threshold) + " (worst at equation " +
          std::to_string(rep.argmax_eq + 1) + ", node " +
          std::to_string(rep.argmax_i) + "," + std::to_string(rep.argmax_j) +
          ")");
  }

  Field2D<State> states(grid.nu, grid.nv);
  State seed;
  seed.topRows<4>() = initial_frame;
  seed.row(4) = initial_point;
  states.at(0, 0) = seed;

  const bool u_first = options.path == PathPolicy::USpineThenV;
  if (u_first) {
    for (int i = 1; i < grid.nu; ++i)
      states.at(i, 0) = advance(states.at(i - 1, 0),
                                step_coeffs(grid, i - 1, 0, 0), 0, grid.du,
                                options.stepper);
    for (int i = 0; i < grid.nu; ++i)
      for (int j = 1; j < grid.nv; ++j)
        states.at(i, j) = advance(states.at(i, j - 1),
                                  step_coeffs(grid, i, j - 1, 1), 1, grid.dv,
                                  options.stepper);
  } else {
    for (int j = 1; j < grid.nv; ++j)
      states.at(0, j) = advance(states.at(0, j - 1),
                                step_coeffs(grid, 0, j - 1, 1), 1, grid.dv,
                                options.stepper);
    for (int j = 0; j < grid.nv; ++j)
      for (int i = 1; i < grid.nu; ++i)
        states.at(i, j) = advance(states.at(i - 1, j),
                                  step_coeffs(grid, i - 1, j, 0), 0, grid.du,
                                  options.stepper);
  }

  ReconstructedPatch patch;
  patch.positions = Field2D<Vector4>(grid.nu, grid.nv);
  patch.frames = Field2D<Matrix4>(grid.nu, grid.nv);
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const State& S = states.at(i, j);
      patch.positions.at(i, j) = S.row(4);
      const Matrix4 Z = S.topRows<4>();
      patch.frames.at(i, j) = Z;
      patch.orthonormality_drift = std::max(
          patch.orthonormality_drift,
          (Z * Z.transpose() - Matrix4::Identity()).cwiseAbs().maxCoeff());
    }
  patch.compatibility_residual = compatibility_defect(grid);
  return patch;
}

InvariantFieldGrid derive_metric_from_invariants(InvariantFieldGrid grid) {
  if (grid.nu < 5 || grid.nv < 5)
    throw InputError("derive_metric_from_invariants: need a 5x5 grid");
  const Field2D<double> mu_u = d_du_o4(grid.mu, grid.du);
  const Field2D<double> mu_v = d_dv_o4(grid.mu, grid.dv);
  double mu_max = 0;
  for (double m : grid.mu.data) mu_max = std::max(mu_max, std::abs(m));
  const double tol = 1e-10 * (1.0 + mu_max);

  grid.sqrtE = Field2D<double>(grid.nu, grid.nv);
  grid.sqrtG = Field2D<double>(grid.nu, grid.nv);
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      const double den_E = 2 * grid.mu.at(i, j) * grid.gamma2.at(i, j) +
                           grid.nu1.at(i, j) * grid.beta2.at(i, j) -
                           grid.lambda.at(i, j) * grid.beta1.at(i, j);
      const double den_G = 2 * grid.mu.at(i, j) * grid.gamma1.at(i, j) -
                           grid.lambda.at(i, j) * grid.beta2.at(i, j) +
                           grid.nu2.at(i, j) * grid.beta1.at(i, j);
      if (std::abs(mu_u.at(i, j)) < tol || std::abs(mu_v.at(i, j)) < tol)
        throw NumericError(
            "derive_metric_from_invariants: mu-derivative vanishes at node " +
            std::to_string(i) + "," + std::to_string(j) +
            " (grid not in the general class)");
      if (std::abs(den_E) < tol || std::abs(den_G) < tol)
        throw NumericError(
            "derive_metric_from_invariants: zero denominator at node " +
            std::to_string(i) + "," + std::to_string(j));
      const double sE = mu_u.at(i, j) / den_E;
      const double sG = mu_v.at(i, j) / den_G;
      if (sE <= 0 || sG <= 0)
        throw NumericError(
            "derive_metric_from_invariants: nonpositive metric quotient at "
            "node " +
            std::to_string(i) + "," + std::to_string(j));
      grid.sqrtE.at(i, j) = sE;
      grid.sqrtG.at(i, j) = sG;
    }
  return grid;
}

RigidAlignment rigid_align(const Field2D<Vector4>& candidate,
                           const Field2D<Vector4>& reference) {
  if (candidate.nu != reference.nu || candidate.nv != reference.nv)
    throw InputError("rigid_align: grid shapes differ");
  const size_t n = candidate.data.size();
  if (n < 4) throw InputError("rigid_align: need at least 4 points");

  Vector4 pbar = Vector4::Zero(), qbar = Vector4::Zero();
  for (size_t k = 0; k < n; ++k) {
    pbar += candidate.data[k];
    qbar += reference.data[k];
  }
  pbar /= double(n);
  qbar /= double(n);

  Matrix4 cov = Matrix4::Zero();
  for (size_t k = 0; k < n; ++k)
    cov += (reference.data[k] - qbar) * (candidate.data[k] - pbar).transpose();

  Eigen::JacobiSVD<Matrix4> svd(cov,
                                Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv[2] < 1e-12 * (sv[0] + 1e-300))
    throw NumericError("rigid_align: degenerate point set (rank < 3)");

  Matrix4 D = Matrix4::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0)
    D(3, 3) = -1;
  RigidAlignment out;
  out.rotation = svd.matrixU() * D * svd.matrixV().transpose();
  out.translation = qbar - out.rotation * pbar;

  double sum2 = 0;
  for (size_t k = 0; k < n; ++k)
    sum2 += (out.rotation * candidate.data[k] + out.translation -
             reference.data[k])
                .squaredNorm();
  out.rms = std::sqrt(sum2 / double(n));
  return out;
}

}  // namespace surf4
