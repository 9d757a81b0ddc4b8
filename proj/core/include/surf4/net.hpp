#pragma once

#include <array>
#include <vector>

#include "surf4/frame.hpp"
#include "surf4/surface.hpp"

namespace surf4 {

template <class T>
struct Field2D {
  int nu = 0, nv = 0;
  std::vector<T> data;

  Field2D() = default;
  Field2D(int nu_, int nv_) : nu(nu_), nv(nv_), data(size_t(nu_) * nv_) {}

  T& at(int i, int j) { return data[size_t(j) * nu + i]; }
  const T& at(int i, int j) const { return data[size_t(j) * nu + i]; }
  bool empty() const { return data.empty(); }
};

/// Gridded fields over a principal-coordinate rectangle: the net metric
/// sqrtE, sqrtG and the eight invariant functions, plus optional surface
/// positions, frames and source parameters.
struct InvariantFieldGrid {
  int nu = 0, nv = 0;
  double du = 0, dv = 0;

  Field2D<double> sqrtE, sqrtG;
  Field2D<double> gamma1, gamma2, nu1, nu2, lambda, mu, beta1, beta2;

  Field2D<Vector4> positions;       // optional
  Field2D<Matrix4> frames;          // optional; rows x, y, b, l
  Field2D<ParamPoint> source_uv;    // optional; diagnostics

  bool has_positions() const { return !positions.empty(); }
  bool has_frames() const { return !frames.empty(); }

  double holonomy_defect = 0;  // far-corner marching-order mismatch
};

struct NetOptions {
  /// Abort threshold for the holonomy defect, relative to patch diameter.
  double holonomy_threshold = 1e-3;
  /// Newton tolerance for leaf intersections, relative to the step size.
  double intersect_tol = 1e-12;
  bool with_frames = true;
  bool measure_holonomy = true;
};

/// Builds a principal-coordinate net of nu x nv nodes from the seed:
/// row 0 follows the first principal field with arc parameter i*du,
/// column 0 the second with j*dv, and interior nodes are intersections of
/// the two families of curvature lines, so net coordinates are principal
/// (F = 0, M = 0 up to integration error). Fields are evaluated by
/// geometric_frame with grid-continuation gauge; sqrtE, sqrtG are the
/// measured net metric.
InvariantFieldGrid build_net(const SurfaceModel& model, ParamPoint seed,
                             int nu, int nv, double du, double dv,
                             const NetOptions& options = {});

/// Residual report for the six integrability equations relating the eight
/// invariant fields and the net metric; derivatives use second-order
/// stencils (central interior, one-sided at the boundary).
struct IntegrabilityReport {
  std::array<Field2D<double>, 6> residuals;
  std::array<double, 6> max_abs{};
  std::array<double, 6> rms{};
  double max_residual = 0;
  int argmax_eq = 0, argmax_i = 0, argmax_j = 0;
  bool general_class = false;   // mu_u and mu_v nonzero at every node
  bool condition_4_3 = false;   // both metric quotients positive
};

IntegrabilityReport check_integrability(const InvariantFieldGrid& grid);

/// Partial derivatives of a scalar field with respect to the net
/// parameters. The second-order forms feed the residual report; the
/// fourth-order forms (five-point stencils, nu/nv >= 5) feed the metric
/// derivation where second-order bias would dominate the comparison.
Field2D<double> d_du(const Field2D<double>& f, double du);
Field2D<double> d_dv(const Field2D<double>& f, double dv);
Field2D<double> d_du_o4(const Field2D<double>& f, double du);
Field2D<double> d_dv_o4(const Field2D<double>& f, double dv);

/// Finite-difference jet of the net parameterization at an interior node,
/// built from the stored positions; the "measured in net coordinates" view
/// used to test F = 0, M = 0 and to analyze reconstructed patches.
SurfaceJet measured_net_jet(const Field2D<Vector4>& positions, int i, int j,
                            double du, double dv);

/// Fourth-order variant (two interior rings required); used where the
/// second-order chord bias would mask the quantity under test.
SurfaceJet measured_net_jet_o4(const Field2D<Vector4>& positions, int i,
                               int j, double du, double dv);

}  // namespace surf4
