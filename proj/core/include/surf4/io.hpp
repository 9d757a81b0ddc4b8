#pragma once

#include <string>

#include <json.hpp>

#include "surf4/net.hpp"
#include "surf4/surface.hpp"

namespace surf4 {

// Text formats use '#'-prefixed header lines and 17-significant-digit
// reals, so files round-trip bit-compatibly and diff cleanly.

void write_grid(const InvariantFieldGrid& grid, const std::string& path);
InvariantFieldGrid read_grid(const std::string& path);

/// Uniform parameter grid of surface samples: columns u v x1 x2 x3 x4.
struct SampledGrid {
  int nu = 0, nv = 0;
  double u0 = 0, v0 = 0, du = 0, dv = 0;
  Field2D<Vector4> positions;
};

void write_csv4d(const SampledGrid& grid, const std::string& path);
SampledGrid read_csv4d(const std::string& path);

/// OBJ export: vertex positions carry the first three coordinates, the
/// texture channel carries the fourth; quads triangulated.
void write_obj(const Field2D<Vector4>& positions, const std::string& path);

/// Sample a surface over its domain (2% inset on non-periodic directions).
SampledGrid sample_surface(const SurfaceModel& model, int nu, int nv);

/// SurfaceModel over a sampled grid via local bicubic Lagrange
/// interpolation; provides order-2 jets.
SurfaceModel sampled_surface_model(const SampledGrid& grid,
                                   const std::string& label = "sampled");

struct AnalyzeOptions {
  int order = 2;
  /// When > 0, jets come from central differences with this step instead of
  /// the analytic evaluator.
  double fd_step = 0;
};

/// Per-point invariant/figure/predicate records plus patch-level summaries.
nlohmann::json analyze_report(const SurfaceModel& model, int nu, int nv,
                              const AnalyzeOptions& options = {});

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace surf4
