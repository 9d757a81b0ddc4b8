// Command-line front end: invariant sweeps, curvature-line nets,
// integrability checks, reconstruction, rigid alignment, meridian-surface
// generation and mesh export.
//
// Exit codes: 0 success, 2 input error, 3 tolerance/threshold failure,
// 4 numerical breakdown.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "surf4/catalog.hpp"
#include "surf4/io.hpp"
#include "surf4/meridian.hpp"
#include "surf4/net.hpp"
#include "surf4/reconstruct.hpp"

namespace {

using namespace surf4;

std::vector<double> parse_params(const std::string& csv) {
  std::vector<double> out;
  if (csv.empty()) return out;
  size_t pos = 0;
  while (pos <= csv.size()) {
    const size_t comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? csv.size() - pos
                                                   : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InputError("bad --params entry '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const size_t x = s.find('x');
  if (x == std::string::npos)
    throw InputError("--grid expects NUxNV, got '" + s + "'");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw InputError("--grid expects NUxNV, got '" + s + "'");
  }
}

std::pair<double, double> parse_pair(const std::string& s, char sep,
                                     const std::string& flag) {
  const size_t p = s.find(sep);
  if (p == std::string::npos)
    throw InputError(flag + " expects two values separated by '" +
                     std::string(1, sep) + "', got '" + s + "'");
  try {
    return {std::stod(s.substr(0, p)), std::stod(s.substr(p + 1))};
  } catch (const std::exception&) {
    throw InputError(flag + ": bad value in '" + s + "'");
  }
}

SurfaceModel resolve_surface(const std::string& selector,
                             const std::string& params_csv) {
  if (selector.rfind("file:", 0) == 0)
    return sampled_surface_model(read_csv4d(selector.substr(5)),
                                 selector.substr(5));
  return catalog(selector, parse_params(params_csv));
}

int cmd_analyze(const std::string& selector, const std::string& params,
                const std::string& grid, int order, double h,
                const std::string& out_path) {
  const SurfaceModel model = resolve_surface(selector, params);
  const auto [nu, nv] = parse_grid(grid);
  AnalyzeOptions opts;
  opts.order = order;
  opts.fd_step = h;
  const nlohmann::json rep = analyze_report(model, nu, nv, opts);
  write_json(rep, out_path);
  std::cout << "analyze: " << model.label << " " << nu << "x" << nv
            << " -> " << out_path << "\n";
  const auto& counts = rep["summary"]["point_class_counts"];
  for (auto it = counts.begin(); it != counts.end(); ++it)
    std::cout << "  " << it.key() << ": " << it.value() << "\n";
  return 0;
}

int cmd_net(const std::string& selector, const std::string& params,
            const std::string& seed_s, const std::string& grid,
            const std::string& steps, double threshold,
            const std::string& out_path) {
  const SurfaceModel model = resolve_surface(selector, params);
  const auto [nu, nv] = parse_grid(grid);
  const auto [du, dv] = parse_pair(steps, 'x', "--steps");
  const auto [su, sv] = parse_pair(seed_s, ',', "--seed");
  NetOptions opts;
  if (threshold > 0) opts.holonomy_threshold = threshold;
  const InvariantFieldGrid g =
      build_net(model, {su, sv}, nu, nv, du, dv, opts);
  write_grid(g, out_path);
  std::printf("net: %dx%d du=%g dv=%g holonomy=%.3e -> %s\n", nu, nv, du, dv,
              g.holonomy_defect, out_path.c_str());
  return 0;
}

int cmd_check(const std::string& in_path, double threshold,
              const std::string& out_path) {
  const InvariantFieldGrid g = read_grid(in_path);
  const IntegrabilityReport rep = check_integrability(g);
  nlohmann::json j;
  j["schema"] = "surf4-check";
  j["version"] = 1;
  for (int e = 0; e < 6; ++e) {
    j["equations"][e] = {{"max_abs", rep.max_abs[e]}, {"rms", rep.rms[e]}};
  }
  j["max_residual"] = rep.max_residual;
  j["argmax"] = {{"equation", rep.argmax_eq + 1},
                 {"i", rep.argmax_i},
                 {"j", rep.argmax_j}};
  j["general_class"] = rep.general_class;
  j["condition_4_3"] = rep.condition_4_3;
  j["threshold"] = threshold;
  if (!out_path.empty()) write_json(j, out_path);

  for (int e = 0; e < 6; ++e)
    std::printf("check: equation %d  max|r|=%.6e  rms=%.6e\n", e + 1,
                rep.max_abs[e], rep.rms[e]);
  std::printf("check: general_class=%s condition_4_3=%s\n",
              rep.general_class ? "yes" : "no",
              rep.condition_4_3 ? "yes" : "no");
  if (rep.max_residual > threshold) {
    std::printf(
        "check: FAIL max residual %.6e > threshold %.3e at equation %d, "
        "node (%d,%d)\n",
        rep.max_residual, threshold, rep.argmax_eq + 1, rep.argmax_i,
        rep.argmax_j);
    throw ToleranceError("integrability residual above threshold");
  }
  std::printf("check: OK max residual %.6e <= threshold %.3e\n",
              rep.max_residual, threshold);
  return 0;
}

int cmd_reconstruct(const std::string& in_path, double threshold,
                    const std::string& out_path) {
  InvariantFieldGrid g = read_grid(in_path);
  if (g.sqrtE.empty()) g = derive_metric_from_invariants(g);
  ReconstructOptions opts;
  if (threshold > 0) opts.residual_threshold = threshold;
  // Theorem-style initial data: the standard frame at the origin; any other
  // choice differs by the motion that `align` recovers.
  const ReconstructedPatch patch =
      reconstruct(g, Matrix4::Identity(), Vector4::Zero(), opts);

  SampledGrid out;
  out.nu = g.nu;
  out.nv = g.nv;
  out.u0 = 0;
  out.v0 = 0;
  out.du = g.du;
  out.dv = g.dv;
  out.positions = patch.positions;
  write_csv4d(out, out_path);
  std::printf("reconstruct: %dx%d drift=%.3e compat=%.3e -> %s\n", g.nu, g.nv,
              patch.orthonormality_drift, patch.compatibility_residual,
              out_path.c_str());
  if (g.has_positions()) {
    const RigidAlignment al = rigid_align(patch.positions, g.positions);
    std::printf("reconstruct: rms vs grid positions after alignment = %.6e\n",
                al.rms);
  }
  return 0;
}

int cmd_align(const std::string& cand_path, const std::string& ref_path) {
  const SampledGrid cand = read_csv4d(cand_path);
  const SampledGrid ref = read_csv4d(ref_path);
  const RigidAlignment al = rigid_align(cand.positions, ref.positions);
  std::printf("align: rms = %.12e\n", al.rms);
  std::printf("align: rotation =\n");
  for (int r = 0; r < 4; ++r)
    std::printf("  % .12f % .12f % .12f % .12f\n", al.rotation(r, 0),
                al.rotation(r, 1), al.rotation(r, 2), al.rotation(r, 3));
  std::printf("align: translation = % .12f % .12f % .12f % .12f\n",
              al.translation[0], al.translation[1], al.translation[2],
              al.translation[3]);
  return 0;
}

int cmd_meridian(const std::string& family, double a, double b, double C,
                 double K, double alpha, double beta, bool minus_branch,
                 const std::string& grid, const std::string& out_path,
                 const std::string& export_obj,
                 const std::string& export_csv) {
  MeridianSpec spec;
  if (family == "constant_K") {
    spec = constant_K_profile(K, alpha, beta);
  } else if (family == "cmc") {
    spec = cmc_profile(a, b, C);
  } else if (family == "constant_k") {
    spec = constant_k_profile(a, b, C, !minus_branch);
  } else if (family == "custom") {
    // The sin-profile meridian on the unit 3-sphere with kappa_c = b.
    spec.label = "custom_meridian";
    spec.f = [](double u) {
      return std::array<double, 4>{std::sin(u), std::cos(u), -std::sin(u),
                                   -std::cos(u)};
    };
    spec.g = [](double u) {
      return std::array<double, 4>{-std::cos(u), std::sin(u), std::cos(u),
                                   -std::sin(u)};
    };
    spec.kappa_c = [b](double) { return std::array<double, 2>{b, 0.0}; };
    spec.u0 = 0.3;
    spec.u1 = M_PI - 0.3;
    spec.v0 = 0;
    spec.v1 = 2 * M_PI / std::sqrt(1 + b * b);
    spec.v_periodic = true;
  } else {
    throw InputError("meridian: unknown family '" + family + "'");
  }

  const SurfaceModel model = meridian_surface(spec);
  const auto [nu, nv] = parse_grid(grid);
  nlohmann::json rep = analyze_report(model, nu, nv);

  const char* cls = meridian_class(spec) == MeridianClass::General
                        ? "III (general)"
                        : (meridian_class(spec) == MeridianClass::DevelopableRuled
                               ? "II (developable ruled)"
                               : "I (planar)");
  rep["meridian"] = {{"family", family}, {"class", cls}};

  // The family's defining constancy, measured over the sweep.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::string field;
  double target = 0, tol = 0;
  if (family == "constant_K") {
    field = "K";
    target = K;
    tol = 1e-6;
  } else if (family == "cmc") {
    field = "H_norm";
    target = std::abs(a);
    tol = 1e-5;
  } else if (family == "constant_k") {
    field = "k";
    target = -a * a;
    tol = 1e-5;
  }
  if (!field.empty()) {
    for (const auto& pt : rep["points"]) {
      const double v = pt[field].get<double>();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    rep["meridian"]["constancy"] = {{"field", field},
                                    {"target", target},
                                    {"min", lo},
                                    {"max", hi},
                                    {"tolerance", tol}};
  }
  // kappa = 0 across the sweep for every class-III meridian surface.
  double worst_kappa = 0;
  for (const auto& pt : rep["points"])
    worst_kappa =
        std::max(worst_kappa, std::abs(pt["kappa"].get<double>()));
  rep["meridian"]["max_abs_kappa"] = worst_kappa;

  write_json(rep, out_path);
  std::printf("meridian %s: class %s, %dx%d sweep -> %s\n", family.c_str(),
              cls, nu, nv, out_path.c_str());
  if (!export_obj.empty())
    write_obj(sample_surface(model, nu, nv).positions, export_obj);
  if (!export_csv.empty())
    write_csv4d(sample_surface(model, nu, nv), export_csv);

  if (!field.empty()) {
    std::printf("meridian: %s in [%.10g, %.10g], target %.10g (tol %g)\n",
                field.c_str(), lo, hi, target, tol);
    if (std::abs(lo - target) > tol * (1 + std::abs(target)) ||
        std::abs(hi - target) > tol * (1 + std::abs(target)))
      throw ToleranceError("meridian: defining invariant is not constant at "
                           "the required tolerance");
  }
  if (worst_kappa > 1e-9)
    throw ToleranceError("meridian: kappa does not vanish");
  return 0;
}

int cmd_export(const std::string& selector, const std::string& params,
               const std::string& grid, const std::string& format,
               const std::string& out_path) {
  const SurfaceModel model = resolve_surface(selector, params);
  const auto [nu, nv] = parse_grid(grid);
  const SampledGrid samples = sample_surface(model, nu, nv);
  if (format == "obj")
    write_obj(samples.positions, out_path);
  else if (format == "csv4d")
    write_csv4d(samples, out_path);
  else
    throw InputError("export: unknown format '" + format + "'");
  std::printf("export: %s %dx%d as %s -> %s\n", model.label.c_str(), nu, nv,
              format.c_str(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"surf4: invariants, curvature-line nets and reconstruction "
               "of surfaces in R^4"};
  app.require_subcommand(1);
  // --h is the finite-difference step flag, so help stays long-form only.
  app.set_help_flag("--help", "print help");

  std::string surface = "clifford_torus", params, grid = "16x16";
  std::string steps = "0.1x0.1", seed = "0,0";
  std::string in_path, out_path, candidate, reference, format = "csv4d";
  std::string family = "cmc";
  std::string export_obj, export_csv;
  int order = 2;
  double h = 0, threshold = 0, check_threshold = 1e-3;
  double a = 1, b = 1, C = 0, K = 1, alpha = 0, beta = 1;
  bool minus_branch = false;

  auto* analyze = app.add_subcommand("analyze", "pointwise invariant sweep");
  analyze->set_help_flag("--help", "print help");
  analyze->add_option("--surface", surface, "catalog name or file:PATH.csv4d");
  analyze->add_option("--params", params, "comma-separated surface parameters");
  analyze->add_option("--grid", grid, "sample grid NUxNV");
  analyze->add_option("--order", order, "jet order (2 or 3)");
  analyze->add_option("--h", h, "use finite-difference jets with this step");
  analyze->add_option("--out", out_path, "report path (JSON)")->required();

  auto* net = app.add_subcommand("net", "build a curvature-line net");
  net->add_option("--surface", surface);
  net->add_option("--params", params);
  net->add_option("--seed", seed, "net seed point U,V");
  net->add_option("--grid", grid, "net size NUxNV");
  net->add_option("--steps", steps, "net steps DUxDV");
  net->add_option("--threshold", threshold, "holonomy abort threshold");
  net->add_option("--out", out_path)->required();

  auto* check = app.add_subcommand("check", "integrability residuals of a grid");
  check->add_option("--in", in_path)->required();
  check->add_option("--threshold", check_threshold, "max residual allowed");
  check->add_option("--out", out_path, "residual report path (JSON)");

  auto* rec = app.add_subcommand("reconstruct", "integrate a surface from a grid");
  rec->add_option("--in", in_path)->required();
  rec->add_option("--threshold", threshold, "integrability threshold");
  rec->add_option("--out", out_path)->required();

  auto* align = app.add_subcommand("align", "optimal rigid motion between patches");
  align->add_option("--candidate", candidate)->required();
  align->add_option("--reference", reference)->required();

  auto* meridian = app.add_subcommand("meridian", "generate a meridian surface");
  meridian->add_option("--family", family,
                       "constant_K | cmc | constant_k | custom");
  meridian->add_option("--a", a);
  meridian->add_option("--b", b);
  meridian->add_option("--C", C, "integration constant of the closed form");
  meridian->add_option("--K", K, "target Gauss curvature (constant_K)");
  meridian->add_option("--alpha", alpha);
  meridian->add_option("--beta", beta);
  meridian->add_flag("--minus-branch", minus_branch, "other ODE sign branch");
  meridian->add_option("--grid", grid);
  meridian->add_option("--out", out_path)->required();
  meridian->add_option("--export-obj", export_obj);
  meridian->add_option("--export-csv4d", export_csv);

  auto* exp = app.add_subcommand("export", "sample a surface to obj/csv4d");
  exp->add_option("--surface", surface);
  exp->add_option("--params", params);
  exp->add_option("--grid", grid);
  exp->add_option("--format", format, "obj | csv4d");
  exp->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed())
      return cmd_analyze(surface, params, grid, order, h, out_path);
    if (net->parsed())
      return cmd_net(surface, params, seed, grid, steps, threshold, out_path);
    if (check->parsed()) return cmd_check(in_path, check_threshold, out_path);
    if (rec->parsed()) return cmd_reconstruct(in_path, threshold, out_path);
    if (align->parsed()) return cmd_align(candidate, reference);
    if (meridian->parsed())
      return cmd_meridian(family, a, b, C, K, alpha, beta, minus_branch, grid,
                          out_path, export_obj, export_csv);
    if (exp->parsed())
      return cmd_export(surface, params, grid, format, out_path);
  } catch (const InputError& e) {
    std::cerr << "error (input): " << e.what() << "\n";
    return 2;
  } catch (const ToleranceError& e) {
    std::cerr << "error (tolerance): " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
