#include "evo_cli/cli.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "evo/classify2d.hpp"
#include "evo/classify3d.hpp"
#include "evo/dynamics.hpp"
#include "evo/io.hpp"
#include "evo/iso.hpp"

namespace evo::cli {

namespace {

using nlohmann::json;

// A printed witness that does not re-verify is an internal tolerance bug.
struct ToleranceViolation : Error {
  using Error::Error;
};

json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;
}

json vec(const Vector& x) {
  json out = json::array();
  for (int i = 0; i < x.size(); ++i) out.push_back(num(x(i)));
  return out;
}

json mat(const Matrix& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(vec(m.row(i).transpose()));
  return out;
}

json params_json(const Class2& c) {
  json out = json::array();
  for (double p : c.params) out.push_back(num(p));
  return out;
}

json tolerances_json(const Tolerances& tol) {
  return {{"eps_det", tol.eps_det}, {"eps_rank", tol.eps_rank}, {"eps_residual", tol.eps_residual},
          {"eps_sign", tol.eps_sign}};
}

void recheck(const EvolutionAlgebra& a, const EvolutionAlgebra& target, const BasisChange& w, const Tolerances& tol) {
  const IsoCheck check = verify_iso(a, target, w, tol);
  if (!check.ok) {
    throw ToleranceViolation("witness failed re-verification (residual " + std::to_string(check.residual) + ")");
  }
}

json classification_json(const EvolutionAlgebra& a, const Classification2& c, const Tolerances& tol) {
  recheck(a, canonical2(c.cls), c.witness, tol);
  return {{"label", to_string(c.cls.label)}, {"params", params_json(c.cls)}, {"residual", num(c.residual)},
          {"verified", c.verified}, {"witness", mat(c.witness.rows())}};
}

json classification_json(const EvolutionAlgebra& a, const Classification3& c, const Tolerances& tol) {
  recheck(a, canonical3(c.label), c.witness, tol);
  return {{"label", to_string(c.label)}, {"residual", num(c.residual)}, {"verified", c.verified},
          {"trace", c.trace}, {"witness", mat(c.witness.rows())}};
}

// Classification of a Jacobian algebra where one is defined; null otherwise.
json classify_any(const EvolutionAlgebra& a, const Tolerances& tol, std::string& note) {
  try {
    if (a.dim() == 2) return classification_json(a, classify2(a, tol), tol);
    if (derived_dim(a, tol) != 1) {
      note = "3D classification needs dim(E^2) = 1";
      return nullptr;
    }
    return classification_json(a, classify3(a, tol), tol);
  } catch (const ClassificationFailed& e) {
    note = e.what();
    return nullptr;
  }
}

Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::logic_error&) {
      throw InvalidParams("bad coordinate '" + token + "' in --point");
    }
    if (token.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidParams("bad coordinate '" + token + "' in --point");
    }
    values.push_back(v);
  }
  Vector x(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) x(static_cast<Eigen::Index>(i)) = values[i];
  return x;
}

json report_points(const FixedPointReport& r) {
  json points = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    points.push_back({{"point", vec(r.points[i])}, {"residual", num(r.residuals[i])}});
  }
  return {{"points", points}, {"complete", r.complete}, {"method", to_string(r.method)}, {"notes", r.notes}};
}

void render_text(const json& j, std::ostream& out, int indent);

bool is_matrix(const json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array()) return false;
    for (const auto& v : row) {
      if (!v.is_number() && !v.is_null()) return false;
    }
  }
  return true;
}

std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) {
    std::ostringstream os;
    os.precision(12);
    os << j.get<double>();
    return os.str();
  }
  return j.dump();
}

bool is_flat(const json& j) {
  if (!j.is_array()) return false;
  for (const auto& v : j) {
    if (v.is_structured()) return false;
  }
  return true;
}

std::string flat_text(const json& j) {
  std::string s = "(";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + scalar_text(j[i]);
  return s + ")";
}

void render_text(const json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (is_matrix(value)) {
        out << pad << key << ":\n";
        for (const auto& row : value) out << pad << "  " << flat_text(row) << "\n";
      } else if (is_flat(value)) {
        out << pad << key << ": " << flat_text(value) << "\n";
      } else if (value.is_structured()) {
        out << pad << key << ":\n";
        render_text(value, out, indent + 2);
      } else {
        out << pad << key << ": " << scalar_text(value) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& item : j) {
      if (item.is_structured() && !is_flat(item)) {
        out << pad << "-\n";
        render_text(item, out, indent + 2);
      } else {
        out << pad << "- " << (is_flat(item) ? flat_text(item) : scalar_text(item)) << "\n";
      }
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

struct Flags {
  std::string format = "json";
  std::string input;
  std::optional<double> tol;
  bool witness = false;
  int restarts = -1;
  std::uint64_t seed = 0;
  std::optional<double> radius;
  std::string point;
  bool all = false;
  std::string a_path;
  std::string b_path;
  bool require_found = false;
  std::string label;
  std::optional<double> a2;
  std::optional<double> a3;
  std::optional<double> a4;
  int dim = 0;
};

Class2 class2_from_flags(const Flags& f) {
  const Label2 l = parse_label2(f.label);
  if (l == Label2::E6) {
    if (!f.a2 || !f.a3 || f.a4) throw InvalidParams("E6 takes --a2 and --a3");
    return Class2::e6(*f.a2, *f.a3);
  }
  if (l == Label2::E7) {
    if (!f.a4 || f.a2 || f.a3) throw InvalidParams("E7 takes --a4");
    return Class2::e7(*f.a4);
  }
  if (f.a2 || f.a3 || f.a4) throw InvalidParams(f.label + " takes no parameters");
  return Class2::plain(l);
}

json cmd_classify(const Flags& f, json& inputs, Tolerances& tol, int& code) {
  if (f.tol) tol.eps_residual = *f.tol;
  tol.validate();
  const EvolutionAlgebra a = load_algebra(f.input);
  inputs = {{"input", f.input}, {"matrix", mat(a.matrix())}, {"witness", f.witness}};
  json out;
  try {
    out = a.dim() == 2 ? classification_json(a, classify2(a, tol), tol)
                       : classification_json(a, classify3(a, tol), tol);
  } catch (const ClassificationFailed& e) {
    code = kExitNotFound;
    return {{"dim", a.dim()}, {"error", e.what()}, {"trace", e.trace()}};
  }
  if (!f.witness) out.erase("witness");
  out["dim"] = a.dim();
  return out;
}

SolverOptions solver_from_flags(const Flags& f) {
  SolverOptions opts;
  if (f.restarts >= 0) opts.restarts = f.restarts;
  if (f.radius) opts.radius = *f.radius;
  opts.seed = f.seed;
  opts.validate();
  return opts;
}

json cmd_fixed_points(const Flags& f, json& inputs, const Tolerances& tol) {
  const SolverOptions opts = solver_from_flags(f);
  const EvolutionAlgebra a = load_algebra(f.input);
  inputs = {{"input", f.input}, {"matrix", mat(a.matrix())}, {"radius", opts.radius}, {"restarts", opts.restarts}};
  return report_points(fixed_points(a, opts, tol));
}

json linearization_json(const EvolutionAlgebra& a, const Vector& x, const Tolerances& tol) {
  const EvolutionAlgebra j = jacobian_algebra(a, x);
  std::string note;
  json cls = classify_any(j, tol, note);
  json row = {{"point", vec(x)},
              {"fixed_point_residual", num(fixed_point_residual(a, x))},
              {"jacobian_matrix", mat(j.matrix())},
              {"classification", cls}};
  if (!note.empty()) row["note"] = note;
  return row;
}

json cmd_linearize(const Flags& f, json& inputs, const Tolerances& tol) {
  const EvolutionAlgebra a = load_algebra(f.input);
  inputs = {{"input", f.input}, {"matrix", mat(a.matrix())}};
  json rows = json::array();
  if (f.all) {
    inputs["all"] = true;
    const SolverOptions opts;
    const FixedPointReport r = fixed_points(a, opts, tol);
    for (const Vector& x : r.points) rows.push_back(linearization_json(a, x, tol));
    return {{"linearizations", rows}, {"complete", r.complete}, {"notes", r.notes}};
  }
  const Vector x = parse_point(f.point);
  if (x.size() != a.dim()) throw DimensionError("--point needs " + std::to_string(a.dim()) + " coordinates");
  inputs["point"] = vec(x);
  rows.push_back(linearization_json(a, x, tol));
  return {{"linearizations", rows}};
}

json cmd_iso(const Flags& f, json& inputs, const Tolerances& tol, int& code) {
  IsoOptions opts;
  if (f.restarts >= 0) opts.restarts = f.restarts;
  opts.seed = f.seed;
  opts.validate();
  const EvolutionAlgebra a = load_algebra(f.a_path);
  const EvolutionAlgebra b = load_algebra(f.b_path);
  inputs = {{"a", f.a_path}, {"b", f.b_path}, {"matrix_a", mat(a.matrix())}, {"matrix_b", mat(b.matrix())},
            {"restarts", opts.restarts}, {"require_found", f.require_found}};
  if (a.dim() != b.dim()) throw DimensionError("iso needs algebras of equal dimension");
  const IsoResult r = iso_search(a, b, opts, tol);
  json out = {{"found", r.found}, {"stage", to_string(r.stage)}, {"residual", num(r.residual)}, {"witness", nullptr}};
  if (r.found) {
    recheck(a, b, *r.witness, tol);
    out["witness"] = mat(r.witness->rows());
  } else {
    out["note"] = "search budget exhausted; this is not a proof of non-isomorphism";
    if (f.require_found) code = kExitNotFound;
  }
  return out;
}

json cmd_table2d(const Flags& f, json& inputs, const Tolerances& tol) {
  const Class2 c = class2_from_flags(f);
  c.validate(tol);
  inputs = {{"class", to_string(c.label)}, {"params", params_json(c)}};
  const EvolutionAlgebra a = canonical2(c);
  const TableRow row = table2d(c, SolverOptions{}, tol);
  json rows = json::array();
  for (const TableEntry& e : row.entries) {
    json r = {{"fixed_point", vec(e.fixed_point)},
              {"fixed_point_residual", num(e.residual)},
              {"jacobian_matrix", mat(e.jacobian.matrix())},
              {"classified_as", nullptr},
              {"classified_params", nullptr},
              {"prediction", nullptr},
              {"prediction_params", nullptr},
              {"matches_prediction", e.matches_prediction}};
    if (e.classification) {
      recheck(e.jacobian, canonical2(e.classification->cls), e.classification->witness, tol);
      r["classified_as"] = to_string(e.classification->cls.label);
      r["classified_params"] = params_json(e.classification->cls);
      r["witness"] = mat(e.classification->witness.rows());
    }
    if (e.prediction) {
      r["prediction"] = to_string(e.prediction->label);
      r["prediction_params"] = params_json(*e.prediction);
    }
    if (!e.error.empty()) r["note"] = e.error;
    rows.push_back(std::move(r));
  }
  return {{"class", to_string(c.label)}, {"params", params_json(c)}, {"matrix", mat(a.matrix())},
          {"rows", rows},                {"complete", row.complete}, {"notes", row.notes}};
}

json cmd_table3d(json& inputs, const Tolerances& tol) {
  inputs = json::object();
  json forms = json::array();
  for (Label3 l : kAllLabels3) {
    const EvolutionAlgebra a = canonical3(l);
    const FixedPointReport r = fixed_points(a, SolverOptions{}, tol);
    json rows = json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const EvolutionAlgebra j = jacobian_algebra(a, r.points[i]);
      std::string note;
      json cls = classify_any(j, tol, note);
      json row = {{"fixed_point", vec(r.points[i])},
                  {"fixed_point_residual", num(r.residuals[i])},
                  {"jacobian_matrix", mat(j.matrix())},
                  {"classified_as", cls.is_null() ? json(nullptr) : cls["label"]},
                  {"classification", cls}};
      if (!note.empty()) row["note"] = note;
      rows.push_back(std::move(row));
    }
    forms.push_back({{"label", to_string(l)}, {"matrix", mat(a.matrix())}, {"complete", r.complete},
                     {"method", to_string(r.method)}, {"rows", rows}});
  }
  return {{"forms", forms}};
}

json cmd_canonical(const Flags& f, json& inputs) {
  inputs = {{"dim", f.dim}, {"label", f.label}};
  if (f.dim == 2) {
    const Class2 c = class2_from_flags(f);
    inputs["params"] = params_json(c);
    return {{"dim", 2}, {"label", to_string(c.label)}, {"params", params_json(c)},
            {"matrix", mat(canonical2(c).matrix())}};
  }
  if (f.dim != 3) throw DimensionError("--dim must be 2 or 3");
  if (f.a2 || f.a3 || f.a4) throw InvalidParams("3D canonical forms take no parameters");
  const Label3 l = parse_label3(f.label);
  return {{"dim", 3}, {"label", to_string(l)}, {"matrix", mat(canonical3(l).matrix())}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Real evolution algebras of dimension 2 and 3", "evo"};
  app.require_subcommand(1);

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };

  auto* classify = app.add_subcommand("classify", "Classify an algebra into its canonical form");
  classify->add_option("--input", f.input, "Matrix file")->required();
  classify->add_option("--tol", f.tol, "Residual tolerance for witness verification");
  classify->add_flag("--witness", f.witness, "Include the basis-change witness");
  add_format(classify);

  auto* fixed = app.add_subcommand("fixed-points", "Non-zero fixed points of the evolution operator");
  fixed->add_option("--input", f.input, "Matrix file")->required();
  fixed->add_option("--restarts", f.restarts, "Newton restarts");
  fixed->add_option("--seed", f.seed, "Seed for the start sequence");
  fixed->add_option("--radius", f.radius, "Half-width of the start box");
  add_format(fixed);

  auto* linearize = app.add_subcommand("linearize", "Jacobian algebra at a point or at every fixed point");
  linearize->add_option("--input", f.input, "Matrix file")->required();
  auto* point = linearize->add_option("--point", f.point, "Comma-separated coordinates");
  auto* all = linearize->add_flag("--all", f.all, "Use every non-zero fixed point");
  point->excludes(all);
  add_format(linearize);

  auto* iso = app.add_subcommand("iso", "Search for a natural isomorphism between two algebras");
  iso->add_option("--a", f.a_path, "First matrix file")->required();
  iso->add_option("--b", f.b_path, "Second matrix file")->required();
  iso->add_option("--restarts", f.restarts, "Least-squares restarts");
  iso->add_option("--seed", f.seed, "Seed for the restarts");
  iso->add_flag("--require-found", f.require_found, "Exit 1 when no witness is found");
  add_format(iso);

  auto* t2 = app.add_subcommand("table2d", "Fixed points and Jacobian algebras of a 2D canonical form");
  t2->add_option("--class", f.label, "E1..E7")->required();
  t2->add_option("--a2", f.a2, "E6 parameter a2");
  t2->add_option("--a3", f.a3, "E6 parameter a3");
  t2->add_option("--a4", f.a4, "E7 parameter a4");
  add_format(t2);

  auto* t3 = app.add_subcommand("table3d", "Fixed points and Jacobian algebras of the 3D canonical forms");
  add_format(t3);

  auto* canon = app.add_subcommand("canonical", "Print a canonical representative");
  canon->add_option("--dim", f.dim, "2 or 3")->required();
  canon->add_option("--label", f.label, "Class label")->required();
  canon->add_option("--a2", f.a2, "E6 parameter a2");
  canon->add_option("--a3", f.a3, "E6 parameter a3");
  canon->add_option("--a4", f.a4, "E7 parameter a4");
  add_format(canon);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitBadInput;
  }
  if (linearize->parsed() && f.point.empty() && !f.all) {
    err << "linearize: one of --point or --all is required\n";
    return kExitBadInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  Tolerances tol;
  json inputs;
  json results;
  int code = kExitOk;
  try {
    if (sub == classify) {
      results = cmd_classify(f, inputs, tol, code);
    } else if (sub == fixed) {
      results = cmd_fixed_points(f, inputs, tol);
    } else if (sub == linearize) {
      results = cmd_linearize(f, inputs, tol);
    } else if (sub == iso) {
      results = cmd_iso(f, inputs, tol, code);
    } else if (sub == t2) {
      results = cmd_table2d(f, inputs, tol);
    } else if (sub == t3) {
      results = cmd_table3d(inputs, tol);
    } else {
      results = cmd_canonical(f, inputs);
    }
  } catch (const ToleranceViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const ClassificationFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotFound;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  const json report = {{"command", sub->get_name()}, {"inputs", inputs},      {"results", results},
                       {"seed", f.seed},             {"tolerances", tolerances_json(tol)}, {"version", EVO_VERSION}};
  if (f.format == "text") {
    render_text(report, out, 0);
  } else {
    out << report.dump(2) << "\n";
  }
  if (code == kExitNotFound) err << "error: " << results.value("error", std::string("no isomorphism found")) << "\n";
  return code;
}

}  // namespace evo::cli
