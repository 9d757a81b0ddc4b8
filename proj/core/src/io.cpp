#include "surf4/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "surf4/figures.hpp"
#include "surf4/frame.hpp"
#include "surf4/invariants.hpp"

namespace surf4 {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, const std::string& context) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw InputError(context + ": bad real '" + tok + "'");
  }
  if (pos != tok.size()) throw InputError(context + ": bad real '" + tok + "'");
  if (!std::isfinite(v)) throw InputError(context + ": non-finite value");
  return v;
}

const std::vector<std::string> kInvariantFields = {
    "gamma1", "gamma2", "nu1", "nu2", "lambda", "mu", "beta1", "beta2"};

std::vector<Field2D<double>*> invariant_field_ptrs(InvariantFieldGrid& g) {
  return {&g.gamma1, &g.gamma2, &g.nu1,   &g.nu2,
          &g.lambda, &g.mu,     &g.beta1, &g.beta2};
}

std::vector<const Field2D<double>*> invariant_field_ptrs(
    const InvariantFieldGrid& g) {
  return {&g.gamma1, &g.gamma2, &g.nu1,   &g.nu2,
          &g.lambda, &g.mu,     &g.beta1, &g.beta2};
}

}  // namespace

void write_grid(const InvariantFieldGrid& grid, const std::string& path) {
  const bool with_metric = !grid.sqrtE.empty() && !grid.sqrtG.empty();
  auto out = open_out(path);
  out << "# surf4-grid v1\n";
  out << "# nu " << grid.nu << " nv " << grid.nv << " du " << fmt17(grid.du)
      << " dv " << fmt17(grid.dv) << "\n";
  out << "# columns i j";
  if (with_metric) out << " sqrtE sqrtG";
  for (const auto& f : kInvariantFields) out << " " << f;
  if (grid.has_positions()) out << " x1 x2 x3 x4";
  out << "\n";
  const auto fields = invariant_field_ptrs(grid);
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      out << i << " " << j;
      if (with_metric)
        out << " " << fmt17(grid.sqrtE.at(i, j)) << " "
            << fmt17(grid.sqrtG.at(i, j));
      for (const auto* f : fields) out << " " << fmt17(f->at(i, j));
      if (grid.has_positions())
        for (int c = 0; c < 4; ++c)
          out << " " << fmt17(grid.positions.at(i, j)[c]);
      out << "\n";
    }
}

InvariantFieldGrid read_grid(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "# surf4-grid v1")
    throw InputError("read_grid: '" + path + "' is not a surf4-grid v1 file");
  if (!std::getline(in, line))
    throw InputError("read_grid: missing size header");
  auto size_tokens = split_ws(line);
  if (size_tokens.size() != 9 || size_tokens[0] != "#" ||
      size_tokens[1] != "nu" || size_tokens[3] != "nv" ||
      size_tokens[5] != "du" || size_tokens[7] != "dv")
    throw InputError("read_grid: malformed size header");

  InvariantFieldGrid g;
  g.nu = static_cast<int>(parse_real(size_tokens[2], "read_grid nu"));
  g.nv = static_cast<int>(parse_real(size_tokens[4], "read_grid nv"));
  g.du = parse_real(size_tokens[6], "read_grid du");
  g.dv = parse_real(size_tokens[8], "read_grid dv");
  if (g.nu < 1 || g.nv < 1 || g.du <= 0 || g.dv <= 0)
    throw InputError("read_grid: invalid grid dimensions");

  if (!std::getline(in, line))
    throw InputError("read_grid: missing column header");
  const auto cols = split_ws(line);

  // Accepted column sets: i j [sqrtE sqrtG] <eight invariants> [x1..x4].
  auto column_set = [&](bool metric, bool positions) {
    std::vector<std::string> expected = {"#", "columns", "i", "j"};
    if (metric) expected.insert(expected.end(), {"sqrtE", "sqrtG"});
    expected.insert(expected.end(), kInvariantFields.begin(),
                    kInvariantFields.end());
    if (positions) expected.insert(expected.end(), {"x1", "x2", "x3", "x4"});
    return expected;
  };
  bool with_metric = false, with_positions = false, matched = false;
  for (bool m : {false, true})
    for (bool p : {false, true})
      if (cols == column_set(m, p)) {
        with_metric = m;
        with_positions = p;
        matched = true;
      }
  if (!matched)
    throw InputError("read_grid: column set does not match schema");

  if (with_metric) {
    g.sqrtE = Field2D<double>(g.nu, g.nv);
    g.sqrtG = Field2D<double>(g.nu, g.nv);
  }
  for (auto* f : invariant_field_ptrs(g)) *f = Field2D<double>(g.nu, g.nv);
  if (with_positions) g.positions = Field2D<Vector4>(g.nu, g.nv);

  std::vector<bool> seen(size_t(g.nu) * g.nv, false);
  size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto toks = split_ws(line);
    const size_t want = 2 + (with_metric ? 2 : 0) + kInvariantFields.size() +
                        (with_positions ? 4 : 0);
    if (toks.size() != want)
      throw InputError("read_grid: row with wrong column count");
    const int i = static_cast<int>(parse_real(toks[0], "read_grid i"));
    const int j = static_cast<int>(parse_real(toks[1], "read_grid j"));
    if (i < 0 || i >= g.nu || j < 0 || j >= g.nv)
      throw InputError("read_grid: node index out of range");
    if (seen[size_t(j) * g.nu + i])
      throw InputError("read_grid: duplicate node " + std::to_string(i) + "," +
                       std::to_string(j));
    seen[size_t(j) * g.nu + i] = true;
    size_t col = 2;
    if (with_metric) {
      g.sqrtE.at(i, j) = parse_real(toks[col++], "read_grid sqrtE");
      g.sqrtG.at(i, j) = parse_real(toks[col++], "read_grid sqrtG");
    }
    for (auto* f : invariant_field_ptrs(g))
      f->at(i, j) = parse_real(toks[col++], "read_grid field");
    if (with_positions)
      for (int c = 0; c < 4; ++c)
        g.positions.at(i, j)[c] = parse_real(toks[col++], "read_grid x");
    ++rows;
  }
  if (rows != size_t(g.nu) * g.nv)
    throw InputError("read_grid: expected " +
                     std::to_string(size_t(g.nu) * g.nv) + " rows, got " +
                     std::to_string(rows));
  return g;
}

void write_csv4d(const SampledGrid& grid, const std::string& path) {
  auto out = open_out(path);
  out << "# surf4-csv4d v1\n";
  out << "# nu " << grid.nu << " nv " << grid.nv << " u0 " << fmt17(grid.u0)
      << " v0 " << fmt17(grid.v0) << " du " << fmt17(grid.du) << " dv "
      << fmt17(grid.dv) << "\n";
  out << "# columns u v x1 x2 x3 x4\n";
  for (int j = 0; j < grid.nv; ++j)
    for (int i = 0; i < grid.nu; ++i) {
      out << fmt17(grid.u0 + i * grid.du) << " " << fmt17(grid.v0 + j * grid.dv);
      for (int c = 0; c < 4; ++c)
        out << " " << fmt17(grid.positions.at(i, j)[c]);
      out << "\n";
    }
}

SampledGrid read_csv4d(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "# surf4-csv4d v1")
    throw InputError("read_csv4d: '" + path + "' is not a surf4-csv4d v1 file");
  if (!std::getline(in, line))
    throw InputError("read_csv4d: missing size header");
  auto t = split_ws(line);
  if (t.size() != 13 || t[0] != "#" || t[1] != "nu" || t[3] != "nv" ||
      t[5] != "u0" || t[7] != "v0" || t[9] != "du" || t[11] != "dv")
    throw InputError("read_csv4d: malformed size header");

  SampledGrid g;
  g.nu = static_cast<int>(parse_real(t[2], "read_csv4d nu"));
  g.nv = static_cast<int>(parse_real(t[4], "read_csv4d nv"));
  g.u0 = parse_real(t[6], "read_csv4d u0");
  g.v0 = parse_real(t[8], "read_csv4d v0");
  g.du = parse_real(t[10], "read_csv4d du");
  g.dv = parse_real(t[12], "read_csv4d dv");
  if (g.nu < 2 || g.nv < 2 || g.du <= 0 || g.dv <= 0)
    throw InputError("read_csv4d: invalid grid dimensions");

  if (!std::getline(in, line) || line != "# columns u v x1 x2 x3 x4")
    throw InputError("read_csv4d: column set does not match schema");

  g.positions = Field2D<Vector4>(g.nu, g.nv);
  size_t row = 0;
  const size_t total = size_t(g.nu) * g.nv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= total) throw InputError("read_csv4d: too many rows");
    auto toks = split_ws(line);
    if (toks.size() != 6) throw InputError("read_csv4d: row needs 6 columns");
    const int i = static_cast<int>(row % size_t(g.nu));
    const int j = static_cast<int>(row / size_t(g.nu));
    for (int c = 0; c < 4; ++c)
      g.positions.at(i, j)[c] =
          parse_real(toks[size_t(2 + c)], "read_csv4d x");
    ++row;
  }
  if (row != total)
    throw InputError("read_csv4d: expected " + std::to_string(total) +
                     " rows, got " + std::to_string(row));
  return g;
}

void write_obj(const Field2D<Vector4>& z, const std::string& path) {
  auto out = open_out(path);
  out << "# surf4 mesh export: x4 stored in the texture channel\n";
  for (int j = 0; j < z.nv; ++j)
    for (int i = 0; i < z.nu; ++i) {
      const Vector4& p = z.at(i, j);
      out << "v " << fmt17(p[0]) << " " << fmt17(p[1]) << " " << fmt17(p[2])
          << "\n";
      out << "vt " << fmt17(p[3]) << " 0\n";
    }
  auto id = [&](int i, int j) { return j * z.nu + i + 1; };  // 1-based
  for (int j = 0; j + 1 < z.nv; ++j)
    for (int i = 0; i + 1 < z.nu; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1),
                d = id(i, j + 1);
      out << "f " << a << "/" << a << " " << b << "/" << b << " " << c << "/"
          << c << "\n";
      out << "f " << a << "/" << a << " " << c << "/" << c << " " << d << "/"
          << d << "\n";
    }
}

SampledGrid sample_surface(const SurfaceModel& model, int nu, int nv) {
  if (nu < 2 || nv < 2) throw InputError("sample_surface: need >= 2x2 samples");
  const DomainRect& d = model.domain;
  SampledGrid g;
  g.nu = nu;
  g.nv = nv;
  const double mu_ = d.periodic_u ? 0.0 : 0.02 * d.extent_u();
  const double mv_ = d.periodic_v ? 0.0 : 0.02 * d.extent_v();
  g.u0 = d.u0 + mu_;
  g.v0 = d.v0 + mv_;
  g.du = (d.extent_u() - 2 * mu_) / (d.periodic_u ? nu : nu - 1);
  g.dv = (d.extent_v() - 2 * mv_) / (d.periodic_v ? nv : nv - 1);
  g.positions = Field2D<Vector4>(nu, nv);
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i)
      g.positions.at(i, j) =
          model.position_at({g.u0 + i * g.du, g.v0 + j * g.dv});
  return g;
}

namespace {

// Cubic Lagrange basis on nodes s = 0,1,2,3: values, first and second
// derivatives with respect to s.
struct CubicWeights {
  double w[4], dw[4], ddw[4];
};

CubicWeights cubic_weights(double s) {
  CubicWeights c;
  c.w[0] = -(s - 1) * (s - 2) * (s - 3) / 6.0;
  c.w[1] = s * (s - 2) * (s - 3) / 2.0;
  c.w[2] = -s * (s - 1) * (s - 3) / 2.0;
  c.w[3] = s * (s - 1) * (s - 2) / 6.0;
  c.dw[0] = -(3 * s * s - 12 * s + 11) / 6.0;
  c.dw[1] = (3 * s * s - 10 * s + 6) / 2.0;
  c.dw[2] = -(3 * s * s - 8 * s + 3) / 2.0;
  c.dw[3] = (3 * s * s - 6 * s + 2) / 6.0;
  c.ddw[0] = -(s - 2);
  c.ddw[1] = 3 * s - 5;
  c.ddw[2] = -(3 * s - 4);
  c.ddw[3] = s - 1;
  return c;
}

}  // namespace

SurfaceModel sampled_surface_model(const SampledGrid& grid,
                                   const std::string& label) {
  if (grid.nu < 4 || grid.nv < 4)
    throw InputError("sampled_surface_model: need >= 4x4 samples");
  auto data = std::make_shared<SampledGrid>(grid);

  SurfaceModel m;
  m.label = label;
  m.domain = {grid.u0, grid.u0 + (grid.nu - 1) * grid.du, grid.v0,
              grid.v0 + (grid.nv - 1) * grid.dv};
  m.evaluator = [data](ParamPoint p, int order) {
    if (order != 2)
      throw InputError("sampled surfaces provide order-2 jets only");
    const double su = (p.u - data->u0) / data->du;
    const double sv = (p.v - data->v0) / data->dv;
    const int ib = std::clamp(int(std::floor(su)) - 1, 0, data->nu - 4);
    const int jb = std::clamp(int(std::floor(sv)) - 1, 0, data->nv - 4);
    const CubicWeights cu = cubic_weights(su - ib);
    const CubicWeights cv = cubic_weights(sv - jb);

    SurfaceJet jet;
    jet.order = 2;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const Vector4& P = data->positions.at(ib + a, jb + b);
        jet.z += cu.w[a] * cv.w[b] * P;
        jet.z_u += cu.dw[a] * cv.w[b] * P;
        jet.z_v += cu.w[a] * cv.dw[b] * P;
        jet.z_uu += cu.ddw[a] * cv.w[b] * P;
        jet.z_uv += cu.dw[a] * cv.dw[b] * P;
        jet.z_vv += cu.w[a] * cv.ddw[b] * P;
      }
    jet.z_u /= data->du;
    jet.z_v /= data->dv;
    jet.z_uu /= data->du * data->du;
    jet.z_uv /= data->du * data->dv;
    jet.z_vv /= data->dv * data->dv;
    return jet;
  };
  return m;
}

namespace {

nlohmann::json vec4_json(const Vector4& v) {
  return nlohmann::json::array({v[0], v[1], v[2], v[3]});
}

}  // namespace

nlohmann::json analyze_report(const SurfaceModel& model, int nu, int nv,
                              const AnalyzeOptions& options) {
  if (nu < 1 || nv < 1) throw InputError("analyze_report: empty grid");
  using nlohmann::json;
  json rep;
  rep["schema"] = "surf4-report";
  rep["version"] = 1;
  rep["surface"] = model.label;
  rep["grid"] = {{"nu", nu}, {"nv", nv}};
  rep["tolerance_regimes"] = {
      {"point_class", "flat when max(|L|,|M|,|N|) < 1e-10 (1+|jet|^2)"},
      {"figure_equality", "lengths equal when |a-b| < 1e-8 (a+b+1)"},
      {"segment_rank", "degenerate when Gram det < 1e-10 (|d1||d2|)^2"},
      {"predicates", "zero when |value| < 1e-8 * scale"},
      {"frame_guard", "refused when kappa^2-k < 1e-10 (kappa^2+|k|+1)"}};

  const DomainRect& d = model.domain;
  const double mu_ = d.periodic_u ? 0.0 : 0.02 * d.extent_u();
  const double mv_ = d.periodic_v ? 0.0 : 0.02 * d.extent_v();
  const double du = (d.extent_u() - 2 * mu_) / (d.periodic_u ? nu : std::max(nu - 1, 1));
  const double dv = (d.extent_v() - 2 * mv_) / (d.periodic_v ? nv : std::max(nv - 1, 1));

  std::map<std::string, int> class_counts;
  std::map<std::string, int> predicate_counts;
  double max_k_identity = 0, max_kappa_identity = 0, max_commutator = 0,
         max_area_identity = 0, min_wintgen_slack =
                                    std::numeric_limits<double>::infinity();

  json points = json::array();
  for (int j = 0; j < nv; ++j)
    for (int i = 0; i < nu; ++i) {
      const ParamPoint p{d.u0 + mu_ + i * du, d.v0 + mv_ + j * dv};
      SurfaceJet jet;
      if (options.fd_step > 0)
        jet = finite_difference_jet(model, p, options.fd_step, options.order);
      else
        jet = evaluate_jet(model, p, options.order);

      const InvariantRecord rec = invariant_record(jet);
      const IndicatrixClass chi = indicatrix(rec);
      const CurvatureEllipse ell = curvature_ellipse(jet);

      // The frame is defined away from minimal and flat points.
      const GeometricFrame* frame_ptr = nullptr;
      GeometricFrame frame;
      if (options.fd_step <= 0 &&
          rec.point_class != PointClass::Flat &&
          rec.kappa * rec.kappa - rec.k >
              1e-9 * (rec.kappa * rec.kappa + std::abs(rec.k) + 1.0)) {
        try {
          frame = geometric_frame(model, p);
          frame_ptr = &frame;
        } catch (const Error&) {
          frame_ptr = nullptr;
        }
      }
      const ClassPredicates pred = class_predicates(rec, ell, frame_ptr);

      json pt;
      pt["u"] = p.u;
      pt["v"] = p.v;
      pt["E"] = rec.first.E;
      pt["F"] = rec.first.F;
      pt["G"] = rec.first.G;
      pt["W"] = rec.first.W;
      pt["L"] = rec.second.L;
      pt["M"] = rec.second.M;
      pt["N"] = rec.second.N;
      pt["k"] = rec.k;
      pt["kappa"] = rec.kappa;
      pt["K"] = rec.K;
      pt["H"] = vec4_json(rec.H);
      pt["H_norm"] = rec.H_norm;
      pt["nu_prime"] = rec.nu_prime;
      pt["nu_doubleprime"] = rec.nu_doubleprime;
      pt["point_class"] = to_string(rec.point_class);
      pt["indicatrix"] = {{"kind", to_string(chi.kind)},
                          {"semi_axis_1", chi.semi_axis_1},
                          {"semi_axis_2", chi.semi_axis_2}};
      pt["curvature_ellipse"] = {{"area", ell.area},
                                 {"degenerate_segment", ell.degenerate_segment},
                                 {"segment_length", ell.segment_length},
                                 {"gauss_flat", ell.gauss_flat}};
      json pj = {{"minimal", pred.minimal},
                 {"flat_normal_connection", pred.flat_normal_connection},
                 {"super_conformal", pred.super_conformal},
                 {"wintgen_ideal", pred.wintgen_ideal},
                 {"wintgen_slack", pred.wintgen_slack}};
      if (pred.chen_nontrivial.has_value())
        pj["chen_nontrivial"] = *pred.chen_nontrivial;
      else
        pj["chen_nontrivial"] = nullptr;
      pt["predicates"] = pj;
      if (frame_ptr) {
        pt["frame"] = {{"nu1", frame.nu1},     {"nu2", frame.nu2},
                       {"lambda", frame.lambda}, {"mu", frame.mu},
                       {"gamma1", frame.gamma1}, {"gamma2", frame.gamma2},
                       {"beta1", frame.beta1},   {"beta2", frame.beta2}};
      }
      points.push_back(pt);

      class_counts[to_string(rec.point_class)]++;
      if (pred.minimal) predicate_counts["minimal"]++;
      if (pred.flat_normal_connection)
        predicate_counts["flat_normal_connection"]++;
      if (pred.super_conformal) predicate_counts["super_conformal"]++;
      if (pred.wintgen_ideal) predicate_counts["wintgen_ideal"]++;
      if (pred.chen_nontrivial.value_or(false))
        predicate_counts["chen_nontrivial"]++;

      max_k_identity = std::max(
          max_k_identity,
          std::abs(rec.k - rec.nu_prime * rec.nu_doubleprime));
      max_kappa_identity = std::max(
          max_kappa_identity,
          std::abs(rec.kappa - 0.5 * (rec.nu_prime + rec.nu_doubleprime)));
      max_commutator =
          std::max(max_commutator,
                   std::abs(normal_connection_commutator(jet) - rec.kappa));
      max_area_identity = std::max(
          max_area_identity,
          std::abs(ell.area - 0.5 * M_PI * std::abs(rec.kappa)));
      min_wintgen_slack = std::min(min_wintgen_slack, pred.wintgen_slack);
    }

  rep["points"] = points;
  rep["summary"] = {
      {"point_class_counts", class_counts},
      {"predicate_counts", predicate_counts},
      {"residual_norms",
       {{"max_abs_k_minus_nu_product", max_k_identity},
        {"max_abs_kappa_minus_nu_mean", max_kappa_identity},
        {"max_abs_commutator_minus_kappa", max_commutator},
        {"max_abs_area_minus_half_pi_kappa", max_area_identity},
        {"min_wintgen_slack", min_wintgen_slack}}}};
  return rep;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace surf4
