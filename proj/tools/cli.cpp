#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ntsurf/classify.hpp"
#include "ntsurf/errors.hpp"
#include "ntsurf/mesh.hpp"

namespace ntsurf::cli {

namespace {

struct Options {
  std::string surface;
  std::vector<std::string> params;
  std::string grid;
  std::vector<std::string> range;
  std::string offsets;
  double tol = 0.0;
  bool tol_set = false;
  std::string project = "drop:4";
  std::string out;
  std::string frame = "default";
  std::string mode;
  std::string theorem;
  std::uint64_t seed = TheoremConfig{}.seed;
  int samples = TheoremConfig{}.samples;
};

double parse_number(std::string_view text, std::string_view what) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(fmt::format("invalid {} '{}'", what, text));
  return x;
}

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError(fmt::format("--param expects k=v, got '{}'", item));
    const std::string key = item.substr(0, eq);
    if (out.count(key)) throw ConfigError(fmt::format("parameter '{}' given twice", key));
    out[key] = parse_number(std::string_view(item).substr(eq + 1), "parameter value");
  }
  return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw ConfigError(fmt::format("--grid expects NUxNV, got '{}'", text));
  auto to_int = [&](std::string_view s) {
    int n = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(fmt::format("--grid expects NUxNV, got '{}'", text));
    return n;
  };
  const std::string_view view(text);
  const int nu = to_int(view.substr(0, x)), nv = to_int(view.substr(x + 1));
  if (nu < 2 || nv < 2) throw ConfigError("grid must be at least 2x2");
  return {nu, nv};
}

Domain apply_range(Domain box, const std::vector<std::string>& items) {
  for (const auto& item : items) {
    const auto colon = item.find(':');
    const auto comma = item.find(',');
    if (colon != 1 || comma == std::string::npos || (item[0] != 'u' && item[0] != 'v'))
      throw ConfigError(fmt::format("--range expects u:a,b or v:a,b, got '{}'", item));
    const std::string_view view(item);
    const double a = parse_number(view.substr(2, comma - 2), "range bound");
    const double b = parse_number(view.substr(comma + 1), "range bound");
    if (item[0] == 'u') {
      box.u_min = a;
      box.u_max = b;
    } else {
      box.v_min = a;
      box.v_max = b;
    }
  }
  box.validate();
  return box;
}

bool is_catalog(const std::string& id) {
  const auto names = catalog_names();
  return std::find(names.begin(), names.end(), id) != names.end();
}

// Surface from a catalog id or a JSON file. Parameters the catalog surface
// accepts go to it; the rest are returned for offset expressions.
std::pair<SurfacePatch, ParamMap> resolve_surface(const std::string& id, const ParamMap& params) {
  ParamMap surface_params, extra;
  if (is_catalog(id)) {
    const auto accepted = catalog_param_names(id);
    for (const auto& [k, v] : params)
      (std::find(accepted.begin(), accepted.end(), k) != accepted.end() ? surface_params : extra)[k] = v;
    return {make_catalog_surface(id, surface_params), extra};
  }
  if (std::filesystem::exists(id)) return {load_surface_file(id), params};
  throw ConfigError(fmt::format("unknown surface '{}' (not a catalog id or an existing file)", id));
}

FrameProvider choose_frame(const std::string& kind, const SurfacePatch& s, const GridSpec& grid) {
  if (kind == "default") return default_frame(s);
  if (kind == "gram-schmidt") return gram_schmidt_provider(s);
  if (kind == "parallel") return parallelize_frame(s, grid).provider();
  throw ConfigError(fmt::format("unknown frame '{}' (expected default, gram-schmidt or parallel)", kind));
}

void check_unused(const ParamMap& extra, const std::string& offsets) {
  if (!extra.empty() && offsets.rfind("custom:", 0) != 0)
    throw ConfigError(fmt::format("unknown parameter '{}'", extra.begin()->first));
}

struct Setup {
  SurfacePatch surface;
  ParamMap extra;
  GridSpec grid;
};

Setup common_setup(const Options& o, const std::string& default_grid) {
  if (o.surface.empty()) throw ConfigError("--surface is required");
  auto [s, extra] = resolve_surface(o.surface, parse_params(o.params));
  if (!o.range.empty()) s = s.with_domain(apply_range(s.domain(), o.range));
  const auto [nu, nv] = parse_grid(o.grid.empty() ? default_grid : o.grid);
  return {s, extra, GridSpec(nu, nv, s.domain())};
}

// Writes through `fn` to --out or to `out`.
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
  fn(f);
  if (!f) throw ConfigError(fmt::format("failed writing '{}'", path));
}

int cmd_list(std::ostream& out) {
  out << "surfaces:\n";
  for (const auto& name : catalog_names()) {
    const Domain d = catalog_domain(name);
    std::string params;
    for (const auto& p : catalog_param_names(name)) params += (params.empty() ? "" : ",") + p;
    out << fmt::format("  {:<22} params: {:<10} domain: u [{:.6g}, {:.6g}] v [{:.6g}, {:.6g}]\n", name, params,
                       d.u_min, d.u_max, d.v_min, d.v_max);
  }
  out << "offsets:\n  constant:f1,f2  htype  ktype  evolute  custom:<expr1>;<expr2>\n";
  out << "classify modes:\n  parallel  evolute  hparallel  chen\n";
  out << "theorems:\n";
  for (const auto& id : theorem_ids())
    out << fmt::format("  {:<4} {}\n", id, theorem_summary(id));
  return kExitOk;
}

int cmd_invariants(const Options& o, std::ostream& out) {
  const Setup st = common_setup(o, "32x32");
  check_unused(st.extra, "");
  const FrameProvider frames = choose_frame(o.frame, st.surface, st.grid);
  const auto rows = invariant_grid(st.surface, frames, st.grid);
  emit(o.out, out, [&](std::ostream& os) { write_invariants_csv(os, rows); });
  return kExitOk;
}

int cmd_transport(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.offsets.empty()) throw ConfigError("--offsets is required");
  const Setup st = common_setup(o, "32x32");
  check_unused(st.extra, o.offsets);
  const Projection proj = Projection::parse(o.project);
  const FrameProvider frames = choose_frame(o.frame, st.surface, st.grid);
  const TransportSurface ts(st.surface, frames, parse_offset_spec(o.offsets, st.surface, frames, st.extra));

  const TriangleMesh mesh = grid_mesh(st.grid, [&ts](double u, double v) { return ts.position(u, v); }, proj);
  const RegularityReport reg = regularity_report(ts, st.grid);
  const std::string mesh_path = o.out.empty() ? "transport.obj" : o.out;
  emit(mesh_path, out, [&](std::ostream& os) { write_obj(os, mesh); });
  const std::string report_path = mesh_path + ".regularity.json";
  emit(report_path, out, [&](std::ostream& os) { os << to_json(reg).dump(2) << '\n'; });
  out << fmt::format("mesh: {} ({} vertices, {} faces)\nregularity: {} ({} of {} nodes degenerate)\n", mesh_path,
                     mesh.vertices.size(), mesh.faces.size(), report_path, reg.degenerate_count, reg.nodes.size());
  if (reg.any_degenerate()) {
    err << fmt::format("degenerate transport: {:.1f}% of nodes have Gram determinant <= {:g}\n",
                       100.0 * reg.degenerate_fraction(), kDegenerateGram);
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const Setup st = common_setup(o, "32x32");
  const double tol = o.tol_set ? o.tol : 1e-5;
  const FrameProvider frames = choose_frame(o.frame, st.surface, st.grid);
  ClassificationReport r;
  if (o.mode == "parallel" || o.mode == "evolute") {
    if (o.offsets.empty()) throw ConfigError(fmt::format("{} mode needs --offsets", o.mode));
    check_unused(st.extra, o.offsets);
    const TransportSurface ts(st.surface, frames, parse_offset_spec(o.offsets, st.surface, frames, st.extra));
    r = o.mode == "parallel" ? check_parallel(ts, st.grid, tol) : check_evolute(ts, st.grid, tol);
  } else if (o.mode == "hparallel" || o.mode == "chen") {
    check_unused(st.extra, "");
    r = o.mode == "hparallel" ? check_H_parallel(st.surface, frames, st.grid, tol)
                              : chen_dichotomy(st.surface, frames, st.grid, tol);
  } else {
    throw ConfigError(fmt::format("unknown classify mode '{}'", o.mode));
  }
  emit(o.out, out, [&](std::ostream& os) { os << to_json(r).dump(2) << '\n'; });
  return r.pass ? kExitOk : kExitClassificationFail;
}

int cmd_verify(const Options& o, std::ostream& out) {
  theorem_summary(o.theorem);  // rejects unknown ids
  TheoremConfig c;
  const std::string id = o.surface.empty() ? theorem_default_surface(o.theorem) : o.surface;
  auto [s, extra] = resolve_surface(id, parse_params(o.params));
  if (!o.surface.empty() || !o.params.empty()) c.surface = s;
  c.offset_params = extra;
  if (!o.offsets.empty()) c.offsets = o.offsets;
  check_unused(extra, o.offsets);
  if (!o.range.empty()) c.domain = apply_range(s.domain(), o.range);
  if (!o.grid.empty()) std::tie(c.nu, c.nv) = parse_grid(o.grid);
  if (o.tol_set) c.tolerance = o.tol;
  c.seed = o.seed;
  c.samples = o.samples;
  const ClassificationReport r = verify_theorem(o.theorem, c);
  emit(o.out, out, [&](std::ostream& os) { os << to_json(r).dump(2) << '\n'; });
  return r.pass ? kExitOk : kExitClassificationFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential invariants and normal transport surfaces in E^4", "ntsurf"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool offsets) {
    sub->add_option("--surface", o.surface, "catalog id or surface JSON file");
    sub->add_option("--param", o.params, "surface or offset parameter k=v (repeatable)")->allow_extra_args(false);
    sub->add_option("--grid", o.grid, "grid size NUxNV");
    sub->add_option("--range", o.range, "parameter range u:a,b and/or v:a,b")->expected(1, 2);
    sub->add_option("--frame", o.frame, "normal frame: default, gram-schmidt or parallel");
    sub->add_option("--out", o.out, "output path");
    if (offsets) sub->add_option("--offsets", o.offsets, "offset spec");
  };
  auto tolerance = [&o](CLI::App* sub) {
    sub->add_option_function<double>("--tol", [&o](double t) {
      o.tol = t;
      o.tol_set = true;
    }, "tolerance override");
  };

  CLI::App* list = app.add_subcommand("list", "catalog surfaces, offset kinds and theorem scenarios");
  CLI::App* inv = app.add_subcommand("invariants", "invariants CSV over a grid");
  common(inv, false);
  CLI::App* tr = app.add_subcommand("transport", "transport mesh (OBJ) and regularity report");
  common(tr, true);
  tr->add_option("--project", o.project, "projection to 3D: drop:k or stereo");
  CLI::App* cl = app.add_subcommand("classify", "parallel, evolute, hparallel or chen classification");
  cl->add_option("mode", o.mode, "parallel|evolute|hparallel|chen")->required();
  common(cl, true);
  tolerance(cl);
  CLI::App* ve = app.add_subcommand("verify", "run a theorem scenario");
  ve->add_option("id", o.theorem, "scenario id (see list)")->required();
  common(ve, true);
  tolerance(ve);
  ve->add_option("--seed", o.seed, "random seed for sampled scenarios");
  ve->add_option("--samples", o.samples, "sample count for sampled scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*list) return cmd_list(out);
    if (*inv) return cmd_invariants(o, out);
    if (*tr) return cmd_transport(o, out, err);
    if (*cl) return cmd_classify(o, out);
    if (*ve) return cmd_verify(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitConfig;
}

}  // namespace ntsurf::cli
