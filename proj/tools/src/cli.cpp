#include "vortlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "schema.hpp"
#include "vortlab/equivalence_maps.hpp"
#include "vortlab/exact_solutions.hpp"
#include "vortlab/expr_json.hpp"
#include "vortlab/integrate.hpp"
#include "vortlab/lie_algebra.hpp"
#include "vortlab/reduction.hpp"

namespace vortlab::cli {

namespace {

using nlohmann::json;

/// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string status(bool pass) { return pass ? "PASS" : "FAIL"; }

// ---------------------------------------------------------------------------
// Truncations and models

struct TruncationSpec {
  std::string kind = "eight_mode";
  double k = 1.0;
  double l = 2.0;
  int n = 1;

  TruncationPtr build() const {
    if (kind == "eight_mode") return std::make_shared<const Truncation>(Truncation::eight_mode(k, l));
    return std::make_shared<const Truncation>(Truncation::box(n, k, l));
  }
  json to_json() const {
    json j{{"kind", kind}, {"k", k}, {"l", l}};
    if (kind == "box") j["n"] = n;
    return j;
  }
};

void read_truncation(Section& s, TruncationSpec& t) {
  t.k = s.number("k", t.k);
  t.l = s.number("l", t.l);
  t.kind = s.string("truncation", t.kind);
  if (t.kind != "eight_mode" && t.kind != "box") {
    throw SchemaError(s.key_path("truncation"), "expected \"eight_mode\" or \"box\"");
  }
  if (s.has("n")) t.n = static_cast<int>(s.count("n", 1));
}

Subgroup parse_subgroup(const std::string& word, const std::string& key) {
  try {
    return Subgroup::from_word(word);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(key, e.what());
  }
}

struct ModelSpec {
  std::string kind = "lorenz1960";
  std::string subgroup;
  TruncationSpec truncation;

  OdeModel build() const {
    if (kind == "lorenz1960") return OdeModel::reduced(lorenz1960(truncation.k, truncation.l));
    if (kind == "reduced") {
      return OdeModel::reduced(reduce_model(parse_subgroup(subgroup, "model.subgroup"),
                                            truncation.build()));
    }
    return OdeModel::spectral(truncation.build());
  }
};

ModelSpec read_model(Section& s) {
  ModelSpec m;
  m.kind = s.string("kind");
  if (m.kind != "lorenz1960" && m.kind != "reduced" && m.kind != "spectral") {
    throw SchemaError(s.key_path("kind"), "unknown model kind '" + m.kind + "'");
  }
  if (m.kind == "reduced") m.subgroup = s.string("subgroup");
  read_truncation(s, m.truncation);
  s.finish();
  return m;
}

// ---------------------------------------------------------------------------
// list-subgroups

struct ListOptions {
  double k = 1.0;
  double l = 2.0;
  std::string format = "table";
  std::string output;
};

int list_subgroups(const ListOptions& o, std::ostream& out) {
  const auto trunc = std::make_shared<const Truncation>(Truncation::eight_mode(o.k, o.l));
  const auto all = enumerate_subgroups();
  std::ostringstream text;
  if (o.format == "json") {
    json rows = json::array();
    for (const auto& s : all) {
      const auto f = fixed_subspace(s, trunc);
      json elements = json::array();
      for (auto e : s.elements()) elements.push_back(element_name(e));
      rows.push_back({{"word", s.word()},
                      {"order", s.order()},
                      {"elements", elements},
                      {"dimension", f.dimension()},
                      {"constraints", f.constraints}});
    }
    text << dump({{"truncation", {{"kind", "eight_mode"}, {"k", o.k}, {"l", o.l}}},
                  {"subgroups", rows}});
  } else if (o.format == "csv") {
    text << "word,order,dimension\r\n";
    for (const auto& s : all) {
      text << '"' << s.word() << "\"," << s.order() << ',' << fixed_subspace(s, trunc).dimension()
           << "\r\n";
    }
  } else {
    text << std::left << std::setw(22) << "word" << std::right << std::setw(6) << "order"
         << std::setw(11) << "dimension" << "\n";
    for (const auto& s : all) {
      text << std::left << std::setw(22) << s.word() << std::right << std::setw(6) << s.order()
           << std::setw(11) << fixed_subspace(s, trunc).dimension() << "\n";
    }
  }
  emit(text.str(), o.output, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reduce / lorenz1960

struct ReduceOptions {
  std::string config;
  std::string subgroup;
  TruncationSpec truncation;
  std::string output;
};

int reduce(ReduceOptions o, std::ostream& out) {
  if (!o.config.empty()) {
    const json doc = read_json_file(o.config);
    Section s(doc, "");
    o.subgroup = s.string("subgroup");
    read_truncation(s, o.truncation);
    o.output = s.string("output", o.output);
    s.finish();
  }
  const auto model = reduce_model(parse_subgroup(o.subgroup, "subgroup"), o.truncation.build());
  emit(dump(to_json(model)), o.output, out);
  return kExitOk;
}

int lorenz(double k, double l, const std::string& output, std::ostream& out) {
  emit(dump(to_json(lorenz1960(k, l))), output, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// integrate

struct IntegrateRun {
  ModelSpec model;
  std::vector<double> initial;
  json initial_by_name;  // object form, resolved against the model coordinates
  IntegratorConfig config;
  std::string csv;
  std::string drift;
  std::string path;  // config path of the run, for messages
};

IntegrateRun read_run(Section& s) {
  IntegrateRun r;
  r.path = s.path();
  Section m = s.object("model");
  r.model = read_model(m);
  const auto& init = s.raw("initial");
  if (init.is_object()) {
    r.initial_by_name = init;
  } else {
    r.initial = s.numbers("initial");
  }
  r.config.dt = s.number("dt", r.config.dt);
  r.config.t_end = s.number("t_end", r.config.t_end);
  r.config.stride = s.count("stride", 1);
  r.csv = s.string("csv", "");
  r.drift = s.string("drift", "");
  s.finish();
  try {
    r.config.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(s.key_path("dt"), e.what());
  }
  return r;
}

Eigen::VectorXd resolve_initial(const IntegrateRun& r, const OdeModel& model) {
  const auto& names = model.coordinates();
  const std::string key = r.path.empty() ? "initial" : r.path + ".initial";
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(names.size()));
  if (!r.initial_by_name.is_null()) {
    for (const auto& [name, value] : r.initial_by_name.items()) {
      const auto it = std::find(names.begin(), names.end(), name);
      if (it == names.end()) throw SchemaError(key + "." + name, "not a coordinate of the model");
      if (!value.is_number()) throw SchemaError(key + "." + name, "expected a number");
      x(it - names.begin()) = value.get<double>();
    }
    return x;
  }
  if (r.initial.size() != names.size()) {
    throw SchemaError(key, "expected " + std::to_string(names.size()) + " values, got " +
                               std::to_string(r.initial.size()));
  }
  for (std::size_t i = 0; i < names.size(); ++i) x(static_cast<Eigen::Index>(i)) = r.initial[i];
  return x;
}

struct RunResult {
  json summary;
  bool ok = true;
};

RunResult execute(const IntegrateRun& r, const OdeModel& model, const Eigen::VectorXd& x0) {
  RunResult res;
  res.summary = {{"model", model.name()}, {"steps", r.config.steps()}, {"dt", r.config.dt},
                 {"t_end", r.config.t_end}};
  if (!r.csv.empty()) res.summary["csv"] = r.csv;
  if (!r.drift.empty()) res.summary["drift_path"] = r.drift;
  try {
    const Trajectory traj = integrate(model, x0, r.config);
    const json drift = to_json(invariant_drift(traj, model));
    if (!r.csv.empty()) {
      std::ostringstream csv;
      traj.write_csv(csv);
      emit(csv.str(), r.csv, std::cout);
    }
    if (!r.drift.empty()) emit(dump(drift), r.drift, std::cout);
    res.summary["drift"] = drift;
    res.summary["status"] = "ok";
  } catch (const BlowUpError& e) {
    res.ok = false;
    res.summary["status"] = "blow-up";
    res.summary["time"] = e.time();
  }
  return res;
}

struct IntegrateOptions {
  std::string config;
  ModelSpec model;
  std::vector<double> initial;
  IntegratorConfig integrator;
  std::string csv;
  std::string drift;
  std::size_t jobs = 1;
};

int integrate_command(const IntegrateOptions& o, std::ostream& out) {
  std::vector<IntegrateRun> runs;
  if (!o.config.empty()) {
    const json doc = read_json_file(o.config);
    if (doc.is_object() && doc.contains("runs")) {
      Section top(doc, "");
      const auto& list = top.raw("runs");
      if (!list.is_array() || list.empty()) throw SchemaError("runs", "expected a nonempty array");
      top.finish();
      for (std::size_t i = 0; i < list.size(); ++i) {
        Section s(list[i], "runs[" + std::to_string(i) + "]");
        runs.push_back(read_run(s));
      }
    } else {
      Section s(doc, "");
      runs.push_back(read_run(s));
    }
  } else {
    IntegrateRun r;
    r.model = o.model;
    if (r.model.kind == "reduced" && r.model.subgroup.empty()) {
      throw SchemaError("subgroup", "required for --model reduced");
    }
    r.initial = o.initial;
    r.config = o.integrator;
    r.csv = o.csv;
    r.drift = o.drift;
    try {
      r.config.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError("dt", e.what());
    }
    runs.push_back(r);
  }

  // Validate every run before executing any of them.
  std::vector<OdeModel> models;
  std::vector<Eigen::VectorXd> starts;
  for (const auto& r : runs) {
    models.push_back(r.model.build());
    starts.push_back(resolve_initial(r, models.back()));
  }

  std::vector<RunResult> results(runs.size());
  const std::size_t workers = std::clamp<std::size_t>(o.jobs, 1, runs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(runs.size());
  auto work = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        results[i] = execute(runs[i], models[i], starts[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  json summary = json::array();
  bool ok = true;
  for (const auto& r : results) {
    summary.push_back(r.summary);
    ok = ok && r.ok;
  }
  out << dump({{"runs", summary}});
  return ok ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// verify-solution

struct VerifyOptions {
  std::string config;
  std::string family;
  double amplitude = 1.0;
  double k = 1.0;
  double l = 1.0;
  double beta = 1.0;
  double alpha = 1.0;
  std::vector<double> f_poly{0.0};
  std::vector<double> h_poly;
  double tolerance = kResidualTolerance;
  std::string output;
};

struct Candidate {
  AnalyticField field;
  EquationParams equation;
  json parameters;
};

Candidate rossby_candidate(double A, double k, double l, double beta) {
  return {rossby_wave(A, k, l, beta), EquationParams::cartesian(beta),
          {{"A", A}, {"k", k}, {"l", l}, {"beta", beta}, {"sigma", rossby_frequency(k, l, beta)}}};
}

Candidate from_config(Section& s, const std::string& family) {
  if (family == "rossby") {
    const double A = s.number("A", 1.0);
    const double k = s.number("k");
    const double l = s.number("l");
    return rossby_candidate(A, k, l, s.number("beta"));
  }
  if (family == "klein-gordon") {
    const double beta = s.number("beta");
    const auto f = time_function_at(s, "f");
    const auto h = s.has("h") ? time_function_at(s, "h") : nullptr;
    Section sol = s.object("solution");
    const std::string kind = sol.string("kind");
    KGSolutionSpec spec;
    json params{{"beta", beta}, {"f", s.raw("f")}, {"solution", s.raw("solution")}};
    if (h) params["h"] = s.raw("h");
    if (kind == "harmonic") {
      const double A = sol.number("A", 1.0);
      spec = KGSolutionSpec::harmonic(A, sol.number("alpha"));
    } else if (kind == "custom") {
      spec = KGSolutionSpec::custom(expr_at(sol, "field"));
    } else {
      throw SchemaError(sol.key_path("kind"), "expected \"harmonic\" or \"custom\"");
    }
    sol.finish();
    return {klein_gordon_lift(f, h, beta, spec), EquationParams::cartesian(beta), params};
  }
  if (family == "partial") {
    const double beta = s.number("beta");
    const std::string c = s.string("case");
    json params{{"beta", beta}, {"case", c}};
    if (c == "eta_constant") {
      const Expr harmonic = expr_at(s, "harmonic");
      const double eta = s.number("eta", 0.0);
      params["harmonic"] = to_json(harmonic);
      params["eta"] = eta;
      return {partially_invariant(PartialInvariantSpec::eta_constant(harmonic, eta), beta),
              EquationParams::cartesian(beta), params};
    }
    if (c == "eta_general") {
      auto spec = PartialInvariantSpec::eta_general(
          expr_at(s, "profile"), time_function_at(s, "g1"), time_function_at(s, "g0"),
          s.has("f1") ? time_function_at(s, "f1") : nullptr,
          s.has("f0") ? time_function_at(s, "f0") : nullptr);
      if (s.has("window")) {
        const auto w = s.numbers("window");
        if (w.size() != 2 || !(w[0] < w[1])) {
          throw SchemaError(s.key_path("window"), "expected [begin, end] with begin < end");
        }
        spec.window_begin = w[0];
        spec.window_end = w[1];
      }
      for (auto key : {"profile", "g1", "g0", "f1", "f0", "window"}) {
        if (s.has(key)) params[key] = s.raw(key);
      }
      return {partially_invariant(spec, beta), EquationParams::cartesian(beta), params};
    }
    throw SchemaError(s.key_path("case"), "expected \"eta_constant\" or \"eta_general\"");
  }
  if (family == "field") {
    const auto registry = registry_at(s, "time_functions");
    const EquationParams eq = equation_at(s, "equation");
    const Expr e = expr_at(s, "field", registry);
    try {
      return {AnalyticField(e, eq.frame()), eq, json::object()};
    } catch (const std::invalid_argument& ex) {
      throw SchemaError(s.key_path("field"), ex.what());
    }
  }
  throw SchemaError(s.key_path("family"),
                    "expected \"rossby\", \"klein-gordon\", \"partial\" or \"field\"");
}

int verify_solution(VerifyOptions o, std::ostream& out) {
  std::optional<Candidate> c;
  if (!o.config.empty()) {
    const json doc = read_json_file(o.config);
    Section s(doc, "");
    o.family = s.string("family");
    o.tolerance = s.number("tolerance", o.tolerance);
    o.output = s.string("output", o.output);
    c = from_config(s, o.family);
    s.finish();
  } else if (o.family == "rossby") {
    c = rossby_candidate(o.amplitude, o.k, o.l, o.beta);
  } else if (o.family == "klein-gordon") {
    const auto f = share(TimeFunction::polynomial("f", o.f_poly));
    const auto h = o.h_poly.empty() ? nullptr : share(TimeFunction::polynomial("h", o.h_poly));
    json params{{"beta", o.beta}, {"A", o.amplitude}, {"alpha", o.alpha}, {"f_poly", o.f_poly}};
    if (h) params["h_poly"] = o.h_poly;
    c = Candidate{klein_gordon_lift(f, h, o.beta, KGSolutionSpec::harmonic(o.amplitude, o.alpha)),
                  EquationParams::cartesian(o.beta), params};
  } else if (o.family.empty()) {
    throw CLI::RequiredError("family or --config");
  } else {
    throw CLI::ValidationError("family '" + o.family + "' requires --config");
  }
  const auto report = residual(c->field, c->equation, Grid::default_for(c->field.frame()));
  const bool pass = report.passes(o.tolerance);
  const json result{{"family", o.family},
                    {"equation", to_json(c->equation)},
                    {"parameters", c->parameters},
                    {"field", to_json(c->field.expr())},
                    {"residual", to_json(report)},
                    {"tolerance", o.tolerance},
                    {"status", status(pass)}};
  emit(dump(result), o.output, out);
  return pass ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
  std::string config;
  std::string map;
  MapParams params;
  std::string field;
  std::string direction = "inverse";
  double tolerance = 1e-10;
  std::string output;
};

MapKind parse_map_kind(const std::string& name, const std::string& key) {
  if (name == "spherical_derotation" || name == "spherical-derotation") {
    return MapKind::SphericalDerotation;
  }
  if (name == "potential_translation" || name == "potential-translation") {
    return MapKind::PotentialTranslation;
  }
  throw SchemaError(key, "unknown map kind '" + name + "'");
}

json map_json(MapKind kind, const MapParams& p) {
  if (kind == MapKind::SphericalDerotation) {
    return {{"kind", "spherical_derotation"}, {"omega", p.omega}, {"radius", p.radius}};
  }
  return {{"kind", "potential_translation"}, {"beta", p.beta}, {"F", p.deformation}};
}

int transform(TransformOptions o, std::ostream& out) {
  MapKind kind{};
  Expr input;
  if (!o.config.empty()) {
    const json doc = read_json_file(o.config);
    Section s(doc, "");
    Section m = s.object("map");
    kind = parse_map_kind(m.string("kind"), m.key_path("kind"));
    if (kind == MapKind::SphericalDerotation) {
      o.params.omega = m.number("omega");
      o.params.radius = m.number("radius", 1.0);
    } else {
      o.params.beta = m.number("beta");
      o.params.deformation = m.number("F");
    }
    m.finish();
    const auto registry = registry_at(s, "time_functions");
    input = expr_at(s, "field", registry);
    o.direction = s.string("direction", o.direction);
    o.tolerance = s.number("tolerance", o.tolerance);
    o.output = s.string("output", o.output);
    s.finish();
  } else {
    kind = parse_map_kind(o.map, "map");
    json j;
    try {
      j = json::parse(o.field);
    } catch (const json::parse_error& e) {
      throw SchemaError("field", e.what());
    }
    try {
      input = expr_from_json(j);
    } catch (const std::invalid_argument& e) {
      throw SchemaError("field", e.what());
    }
  }
  if (o.direction != "inverse" && o.direction != "forward") {
    throw SchemaError("direction", "expected \"inverse\" or \"forward\"");
  }
  PointTransformation T = PointTransformation::identity(Frame::Cartesian);
  try {
    T = build_map(kind, o.params);
  } catch (const std::invalid_argument& e) {
    throw SchemaError("map", e.what());
  }
  EquationParams rotating, nonrotating;
  if (kind == MapKind::SphericalDerotation) {
    rotating = EquationParams::spherical(o.params.omega, o.params.radius);
    nonrotating = EquationParams::spherical(0.0, o.params.radius);
  } else {
    rotating = EquationParams::potential(o.params.beta, o.params.deformation);
    nonrotating = EquationParams::potential(0.0, o.params.deformation);
  }
  AnalyticField field = [&] {
    try {
      return AnalyticField(input, T.frame());
    } catch (const std::invalid_argument& e) {
      throw SchemaError("field", e.what());
    }
  }();
  // The report is always phrased for the non-rotating member of the pair.
  AnalyticField nonrot = o.direction == "inverse"
                             ? field
                             : transport_solution(T, field, Direction::Forward);
  const auto transported = o.direction == "inverse"
                               ? transport_solution(T, field, Direction::Inverse)
                               : nonrot;
  const auto rep = verify_equivalence(T, nonrot, rotating, nonrotating,
                                      Grid::default_for(T.frame()), o.tolerance);
  const json result{{"map", map_json(kind, o.params)},
                    {"direction", o.direction},
                    {"input", to_json(input)},
                    {"transported", to_json(transported.expr())},
                    {"rotating", {{"equation", to_json(rotating)}, {"residual", to_json(rep.rotating)}}},
                    {"nonrotating",
                     {{"equation", to_json(nonrotating)}, {"residual", to_json(rep.nonrotating)}}},
                    {"tolerance", o.tolerance},
                    {"status", status(rep.passed)}};
  emit(dump(result), o.output, out);
  return rep.passed ? kExitOk : kExitFail;
}

// ---------------------------------------------------------------------------
// bracket-table

struct BracketOptions {
  std::string frame = "cartesian";
  double omega = 0.0;
  double radius = 1.0;
  std::vector<double> f_poly{0.0, 0.0, 1.0};
  std::vector<double> g_poly{0.0, 1.0};
  std::string output;
};

int bracket_table(const BracketOptions& o, std::ostream& out) {
  if (o.frame != "cartesian" && o.frame != "spherical") {
    throw CLI::ValidationError("--frame", "expected cartesian or spherical");
  }
  CatalogParameters p;
  p.omega = o.omega;
  p.radius = o.radius;
  p.f = share(TimeFunction::polynomial("f", o.f_poly));
  p.g = share(TimeFunction::polynomial("g", o.g_poly));
  const auto gens = catalog(o.frame == "cartesian" ? Frame::Cartesian : Frame::Spherical, p);
  json members = json::array();
  for (const auto& g : gens) members.push_back(to_json(g));
  json table = json::array();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      table.push_back({{"i", i},
                       {"j", j},
                       {"left", gens[i].label()},
                       {"right", gens[j].label()},
                       {"bracket", to_json(lie_bracket(gens[i], gens[j]))}});
    }
  }
  const json result{{"frame", o.frame},
                    {"time_functions",
                     {{{"name", "f"}, {"kind", "polynomial"}, {"coefficients", o.f_poly}},
                      {{"name", "g"}, {"kind", "polynomial"}, {"coefficients", o.g_poly}}}},
                    {"generators", members},
                    {"brackets", table}};
  emit(dump(result), o.output, out);
  return kExitOk;
}

void add_truncation_options(CLI::App* sub, TruncationSpec& t) {
  sub->add_option("--k", t.k, "Zonal wavenumber scale")->capture_default_str();
  sub->add_option("--l", t.l, "Meridional wavenumber scale")->capture_default_str();
  sub->add_option("--truncation", t.kind, "eight_mode or box")
      ->check(CLI::IsMember({"eight_mode", "box"}))
      ->capture_default_str();
  sub->add_option("--n", t.n, "Box half-width for --truncation box")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetry and low-order modelling laboratory for the barotropic vorticity equation",
               "vortlab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  ListOptions list;
  auto* list_cmd = app.add_subcommand("list-subgroups", "Subgroups and fixed-subspace dimensions");
  list_cmd->add_option("--k", list.k)->capture_default_str();
  list_cmd->add_option("--l", list.l)->capture_default_str();
  list_cmd->add_option("--format", list.format)
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  list_cmd->add_option("--output,-o", list.output, "Output file (default: stdout)");

  ReduceOptions red;
  auto* red_cmd = app.add_subcommand("reduce", "Reduced model of a subgroup as JSON");
  auto* red_cfg = red_cmd->add_option("--config", red.config, "JSON config")->check(CLI::ExistingFile);
  auto* red_sub = red_cmd->add_option("--subgroup,-s", red.subgroup, "Generator words, e.g. pqe1,pqe2");
  add_truncation_options(red_cmd, red.truncation);
  red_cmd->add_option("--output,-o", red.output);
  red_cfg->excludes(red_sub);

  double lk = 1.0, ll = 2.0;
  std::string lout;
  auto* lor_cmd = app.add_subcommand("lorenz1960", "Three-component model of Lorenz (1960)");
  lor_cmd->add_option("--k", lk)->required();
  lor_cmd->add_option("--l", ll)->required();
  lor_cmd->add_option("--output,-o", lout);

  IntegrateOptions integ;
  auto* int_cmd = app.add_subcommand("integrate", "RK4 trajectory with invariant drift");
  auto* int_cfg = int_cmd->add_option("--config", integ.config, "JSON config")->check(CLI::ExistingFile);
  auto* int_model = int_cmd->add_option("--model", integ.model.kind)
                        ->check(CLI::IsMember({"lorenz1960", "reduced", "spectral"}))
                        ->capture_default_str();
  auto* int_sub = int_cmd->add_option("--subgroup,-s", integ.model.subgroup);
  add_truncation_options(int_cmd, integ.model.truncation);
  auto* int_init = int_cmd->add_option("--initial", integ.initial, "Comma-separated state")
                       ->delimiter(',');
  auto* int_dt = int_cmd->add_option("--dt", integ.integrator.dt)->capture_default_str();
  auto* int_end = int_cmd->add_option("--t-end", integ.integrator.t_end)->capture_default_str();
  auto* int_stride = int_cmd->add_option("--stride", integ.integrator.stride)->capture_default_str();
  auto* int_csv = int_cmd->add_option("--csv", integ.csv, "Trajectory CSV path");
  auto* int_drift = int_cmd->add_option("--drift", integ.drift, "Drift JSON path");
  int_cmd->add_option("--jobs,-j", integ.jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  for (auto* opt : {int_model, int_sub, int_init, int_dt, int_end, int_stride, int_csv, int_drift}) {
    int_cfg->excludes(opt);
  }

  VerifyOptions ver;
  auto* ver_cmd = app.add_subcommand("verify-solution", "Residual report for an exact solution");
  auto* ver_cfg = ver_cmd->add_option("--config", ver.config, "JSON config")->check(CLI::ExistingFile);
  auto* ver_fam = ver_cmd->add_option("family", ver.family, "rossby or klein-gordon")
                      ->check(CLI::IsMember({"rossby", "klein-gordon", "partial", "field"}));
  ver_cmd->add_option("--A", ver.amplitude)->capture_default_str();
  ver_cmd->add_option("--k", ver.k)->capture_default_str();
  ver_cmd->add_option("--l", ver.l)->capture_default_str();
  ver_cmd->add_option("--beta", ver.beta)->capture_default_str();
  ver_cmd->add_option("--alpha", ver.alpha)->capture_default_str();
  ver_cmd->add_option("--f-poly", ver.f_poly, "Polynomial coefficients of f")->delimiter(',');
  ver_cmd->add_option("--h-poly", ver.h_poly, "Polynomial coefficients of h")->delimiter(',');
  ver_cmd->add_option("--tol", ver.tolerance)->capture_default_str();
  ver_cmd->add_option("--output,-o", ver.output);
  ver_cfg->excludes(ver_fam);

  TransformOptions tr;
  auto* tr_cmd = app.add_subcommand("transform", "Transport a field through an equivalence map");
  auto* tr_cfg = tr_cmd->add_option("--config", tr.config, "JSON config")->check(CLI::ExistingFile);
  auto* tr_map = tr_cmd->add_option("--map", tr.map, "spherical-derotation or potential-translation");
  tr_cmd->add_option("--omega", tr.params.omega)->capture_default_str();
  tr_cmd->add_option("--radius", tr.params.radius)->capture_default_str();
  tr_cmd->add_option("--beta", tr.params.beta)->capture_default_str();
  tr_cmd->add_option("--F", tr.params.deformation)->capture_default_str();
  auto* tr_field = tr_cmd->add_option("--field", tr.field, "Field as an s-expression");
  tr_cmd->add_option("--direction", tr.direction)
      ->check(CLI::IsMember({"inverse", "forward"}))
      ->capture_default_str();
  tr_cmd->add_option("--tol", tr.tolerance)->capture_default_str();
  tr_cmd->add_option("--output,-o", tr.output);
  tr_cfg->excludes(tr_map);
  tr_cfg->excludes(tr_field);

  BracketOptions br;
  auto* br_cmd = app.add_subcommand("bracket-table", "Commutator table of a symmetry catalog");
  br_cmd->add_option("--frame", br.frame)
      ->check(CLI::IsMember({"cartesian", "spherical"}))
      ->capture_default_str();
  br_cmd->add_option("--omega", br.omega)->capture_default_str();
  br_cmd->add_option("--radius", br.radius)->capture_default_str();
  br_cmd->add_option("--f-poly", br.f_poly, "Polynomial coefficients of f")->delimiter(',');
  br_cmd->add_option("--g-poly", br.g_poly, "Polynomial coefficients of g")->delimiter(',');
  br_cmd->add_option("--output,-o", br.output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (list_cmd->parsed()) return list_subgroups(list, out);
    if (red_cmd->parsed()) {
      if (red.config.empty() && red.subgroup.empty()) {
        throw CLI::RequiredError("--subgroup or --config");
      }
      return reduce(red, out);
    }
    if (lor_cmd->parsed()) return lorenz(lk, ll, lout, out);
    if (int_cmd->parsed()) {
      if (integ.config.empty() && integ.initial.empty()) {
        throw CLI::RequiredError("--initial or --config");
      }
      return integrate_command(integ, out);
    }
    if (ver_cmd->parsed()) return verify_solution(ver, out);
    if (tr_cmd->parsed()) {
      if (tr.config.empty() && (tr.map.empty() || tr.field.empty())) {
        throw CLI::RequiredError("--map and --field, or --config");
      }
      return transform(tr, out);
    }
    if (br_cmd->parsed()) return bracket_table(br, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace vortlab::cli
