#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlap/io/csv.hpp"
#include "mlap/io/json.hpp"
#include "mlap/mlap.hpp"

namespace {

using mlap::io::json;

constexpr const char* tool_version = "1.0.0";

enum exit_code { exit_pass = 0, exit_error = 1, exit_check_failed = 2 };

/// A failed check; the report is already written.
struct check_failed {
  std::string what;
};

std::optional<unsigned> env_precision() {
  const char* v = std::getenv("MLAP_PRECISION_BITS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long bits = std::strtol(v, &end, 10);
  if (*end != '\0' || bits < 16 || bits > 100000)
    throw mlap::parameter_error("MLAP_PRECISION_BITS must be an integer in [16, 100000]");
  return static_cast<unsigned>(bits);
}

/// Options shared by every report command.
struct common_flags {
  std::string format = "json";
  std::string output;
};

void add_common(CLI::App* sub, common_flags& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("-o,--output", c.output, "Output file (default: stdout)");
}

class output {
 public:
  explicit output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw mlap::format_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

/// Every option of the subcommand with its resolved value.
json resolved_config(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help") continue;
    if (o->get_expected_max() == 0) {
      cfg[name] = o->count() > 0;
    } else if (o->count() > 0) {
      const auto& r = o->results();
      cfg[name] = r.size() == 1 ? json(r.front()) : json(r);
    } else if (!o->get_default_str().empty()) {
      cfg[name] = o->get_default_str();
    } else {
      cfg[name] = nullptr;
    }
  }
  return cfg;
}

/// Marks an option that has no default value.
CLI::Option* no_default(CLI::Option* o) { return o->default_str(""); }

json envelope(const CLI::App* sub, const std::string& command) {
  json cfg = resolved_config(sub);
  const auto bits = env_precision();
  cfg["env_precision_bits"] = bits ? json(*bits) : json(nullptr);
  return json{{"tool", "mlap"}, {"version", tool_version}, {"command", command}, {"config", cfg}};
}

void write_json(const common_flags& c, const json& j) {
  output out(c.output);
  out.stream() << j.dump(2) << '\n';
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json residual_json(const mlap::residual_value& r) {
  return json{{"residual", number(r.value())},
              {"normalized", number(r.normalized)},
              {"log_scale", number(r.log_scale)},
              {"log_laplacian", number(r.log_laplacian)},
              {"laplacian_sign", r.laplacian_sign},
              {"log_source", number(r.log_source)}};
}

/// Flags that describe a homogeneous-tree construction, or a stored profile.
struct tree_flags {
  std::string profile;
  std::string case_name;
  double m = 0, p = 0, q = 0;
  int N = 3;
  std::int64_t depth = 100;
  double eps = 0, lambda = 0, a = 0, delta = 0;
  int n0 = 0;
  int window_factor = 100;
  int n0_max = 5000;
  double lambda_step = 0.5;
  CLI::Option *o_eps = nullptr, *o_lambda = nullptr, *o_a = nullptr, *o_delta = nullptr, *o_n0 = nullptr;
  CLI::Option *o_case = nullptr, *o_depth = nullptr;
};

void add_tree_flags(CLI::App* sub, tree_flags& f, bool allow_profile) {
  if (allow_profile) sub->add_option("--profile", f.profile, "Profile JSON written by 'tree build'");
  f.o_case = no_default(sub->add_option("--case", f.case_name, "Construction: I, II, III, IV, V1, V2"))
                 ->check(CLI::IsMember({"I", "II", "III", "IV", "V1", "V2"}));
  no_default(sub->add_option("--m", f.m, "Exponent m > 1"));
  no_default(sub->add_option("--p", f.p, "Exponent p"));
  no_default(sub->add_option("--q", f.q, "Exponent q"));
  sub->add_option("--N", f.N, "Tree degree (>= 3)");
  f.o_depth = sub->add_option("--depth", f.depth, "Last level of the truncated tree");
  f.o_eps = no_default(sub->add_option("--eps", f.eps, "epsilon (cases I, II, III)"));
  f.o_lambda = no_default(sub->add_option("--lambda", f.lambda, "lambda (case IV; fixed instead of searched in V1, V2)"));
  f.o_a = no_default(sub->add_option("--a", f.a, "a (cases V1, V2)"));
  f.o_n0 = no_default(sub->add_option("--n0", f.n0, "Fixed n0 (cases I to IV)"));
  f.o_delta = no_default(sub->add_option("--delta", f.delta, "Fixed delta (cases I, III, IV)"));
  sub->add_option("--window-factor", f.window_factor, "n0 search window [n0+1, K n0]");
  sub->add_option("--n0-max", f.n0_max, "Largest n0 tried");
  sub->add_option("--lambda-step", f.lambda_step, "Step of the lambda search (cases V1, V2)");
}

mlap::tree_request tree_request_from(const tree_flags& f) {
  if (f.case_name.empty()) throw mlap::parameter_error("--case is required without --profile");
  mlap::tree_request r{mlap::parse_tree_case(f.case_name), mlap::param_triple(f.m, f.p, f.q), f.N, f.depth};
  if (f.o_eps->count()) r.epsilon = f.eps;
  if (f.o_lambda->count()) r.lambda = f.lambda;
  if (f.o_a->count()) r.a = f.a;
  if (f.o_n0->count()) r.n0 = f.n0;
  if (f.o_delta->count()) r.delta = f.delta;
  return r;
}

mlap::selection_options selection_from(const tree_flags& f, std::optional<unsigned> bits) {
  mlap::selection_options o;
  o.window_factor = f.window_factor;
  o.n0_max = f.n0_max;
  o.lambda_step = f.lambda_step;
  if (bits) o.precision_bits = *bits;
  return o;
}

mlap::radial_profile load_profile(const tree_flags& f, std::optional<unsigned> bits) {
  if (!f.profile.empty()) {
    if (f.o_case->count()) throw mlap::parameter_error("--profile and --case are exclusive");
    return mlap::io::profile_from_json(mlap::io::read_json_file(f.profile));
  }
  return mlap::make_profile(tree_request_from(f), selection_from(f, bits));
}

struct graph_flags {
  std::string graph;
  std::string u;
};

mlap::io::graph_file load_graph(const std::string& path) {
  if (path.empty()) throw mlap::parameter_error("--graph is required");
  return mlap::io::graph_from_json(mlap::io::read_json_file(path));
}

mlap::vertex_function load_function(const std::string& path) {
  if (path.empty()) throw mlap::parameter_error("--u is required");
  return mlap::io::function_from_json(mlap::io::read_json_file(path));
}

std::vector<mlap::vertex_id> interior_of(const mlap::io::graph_file& gf) {
  std::vector<char> out(gf.graph.vertex_count(), 1);
  if (gf.boundary)
    for (auto x : *gf.boundary) out[x] = 0;
  std::vector<mlap::vertex_id> in;
  for (mlap::vertex_id x = 0; x < out.size(); ++x)
    if (out[x]) in.push_back(x);
  return in;
}

void check_center(const mlap::weighted_graph& g, std::int64_t c) {
  if (c < 0 || static_cast<std::size_t>(c) >= g.vertex_count())
    throw mlap::domain_error("center " + std::to_string(c) + " is out of range");
}

json t_interval_json(const std::optional<mlap::t_interval>& t) {
  if (!t) return nullptr;
  return json::array({number(t->lo), std::isinf(t->hi) ? json(nullptr) : json(t->hi)});
}

// classify

struct classify_flags {
  common_flags c;
  double m = 0, p = 0, q = 0, p0 = 0, alpha = 0, kappa = 0, n = 0;
  CLI::Option *o_p0 = nullptr, *o_alpha = nullptr, *o_kappa = nullptr, *o_n = nullptr;
};

int run_classify(const CLI::App* sub, const classify_flags& f) {
  mlap::param_triple pr(f.m, f.p, f.q);
  const auto g = mlap::classify_G(pr);
  const auto k = mlap::classify_K(pr);
  json j = envelope(sub, "classify");
  j["region"] = std::string(mlap::to_string(g));
  j["k_region"] = std::string(mlap::to_string(k.region));
  j["t_interval"] = t_interval_json(k.interval);
  j["threshold_formula"] = mlap::threshold_formula(pr);
  j["no_volume_condition"] = mlap::needs_no_volume_condition(pr);
  if (f.o_p0->count()) j["kappa0"] = mlap::kappa0(f.m, f.p0);
  if (f.o_n->count()) {
    mlap::threshold_options opt;
    if (f.o_alpha->count()) opt.alpha = f.alpha;
    if (f.o_kappa->count()) opt.kappa = f.kappa;
    if (f.o_p0->count()) opt.p0 = f.p0;
    auto t = mlap::threshold_W(pr, f.n, opt);
    j["log_threshold"] = t.log_value ? json(*t.log_value) : json(nullptr);
  }
  if (f.c.format == "json") {
    write_json(f.c, j);
    return exit_pass;
  }
  output out(f.c.output);
  mlap::io::csv_writer w(out.stream(), {"m", "p", "q", "region", "k_region", "t_lo", "t_hi", "threshold_formula"});
  w.next() << f.m << f.p << f.q << j["region"].get<std::string>() << j["k_region"].get<std::string>()
           << (k.interval ? k.interval->lo : std::nan("")) << (k.interval ? k.interval->hi : std::nan(""))
           << j["threshold_formula"].get<std::string>();
  return exit_pass;
}

// tree build

struct build_flags {
  tree_flags t;
  std::string output;
  bool no_sequences = false;
  unsigned bits = 0;
  CLI::Option* o_bits = nullptr;
};

std::optional<unsigned> precision(const CLI::Option* o, unsigned bits) {
  if (o && o->count()) return bits;
  return env_precision();
}

int run_tree_build(const CLI::App* sub, const build_flags& f) {
  auto req = tree_request_from(f.t);
  auto opt = selection_from(f.t, precision(f.o_bits, f.bits));
  mlap::selection_result sel;
  try {
    sel = mlap::select_constants(req, opt);
  } catch (const mlap::constants_not_found& e) {
    for (const auto& line : e.trace()) std::cerr << line << '\n';
    throw check_failed{e.what()};
  }
  auto prof = mlap::profile_from_constants(req.c, req.pr, req.N, sel.k, req.depth);
  json j = envelope(sub, "tree build");
  j.update(mlap::io::profile_to_json(prof, !f.no_sequences));
  j["lambda_limit"] = number(sel.limit);
  j["selection_trace"] = sel.trace;
  common_flags c{"json", f.output};
  write_json(c, j);
  return exit_pass;
}

// tree verify

struct tree_verify_flags {
  common_flags c;
  tree_flags t;
  double tol_rel = 1e-9, tol_abs = 0.0;
};

int run_tree_verify(const CLI::App* sub, const tree_verify_flags& f) {
  auto prof = load_profile(f.t, env_precision());
  auto rep = mlap::verify_profile(prof, {f.tol_abs, f.tol_rel});
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"level", "log_u", "log_mu", "residual", "normalized", "log_scale", "pass"});
    for (const auto& e : rep.entries)
      w.next() << e.vertex << prof.log_u(e.vertex) << prof.log_mu(e.vertex) << e.r.value() << e.r.normalized
               << e.r.log_scale << e.r.passes(rep.tol);
  } else {
    json j = envelope(sub, "tree verify");
    j["case"] = std::string(mlap::to_string(prof.c));
    j["constants"] = mlap::io::constants_to_json(prof.k);
    j["checked_levels"] = rep.checked_vertices;
    j["boundary_excluded"] = rep.boundary_excluded;
    j["max_normalized"] = number(rep.max_normalized);
    j["worst_level"] = rep.worst_vertex;
    j["worst_value"] = number(rep.worst_value);
    json v = json::array();
    for (const auto& e : rep.violations) {
      json r = residual_json(e.r);
      r["level"] = e.vertex;
      v.push_back(r);
    }
    j["violations"] = v;
    j["ok"] = rep.ok();
    write_json(f.c, j);
  }
  if (!rep.ok()) throw check_failed{std::to_string(rep.violations.size()) + " level(s) violate the inequality"};
  return exit_pass;
}

// tree lambda

struct lambda_flags {
  common_flags c;
  std::string case_name;
  double m = 0, p = 0, q = 0, x = 0;
  std::vector<double> ns;
  double n_min = 10, n_max = 1e6;
  int per_decade = 1;
  unsigned bits = 0;
  CLI::Option* o_bits = nullptr;
};

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo)) throw mlap::parameter_error("grid needs 0 < n-min <= n-max");
  if (per_decade < 1) throw mlap::parameter_error("--per-decade must be >= 1");
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double n = std::round(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    if (n > hi * (1.0 + 1e-12)) break;
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

int run_tree_lambda(const CLI::App* sub, const lambda_flags& f) {
  const auto c = mlap::parse_tree_case(f.case_name);
  int index = 0;
  switch (c) {
    case mlap::tree_case::I: index = 1; break;
    case mlap::tree_case::II: index = 2; break;
    case mlap::tree_case::III: index = 3; break;
    case mlap::tree_case::IV: index = 4; break;
    default: throw mlap::parameter_error("Lambda is defined for cases I to IV");
  }
  mlap::param_triple pr(f.m, f.p, f.q);
  auto ns = f.ns.empty() ? geometric_grid(f.n_min, f.n_max, f.per_decade) : f.ns;
  const auto bits = precision(f.o_bits, f.bits);
  const double limit = mlap::lambda_limit(index, pr, f.x);
  struct row {
    double n, value, bits;
  };
  std::vector<row> rows;
  for (double n : ns) {
    const unsigned b = bits ? *bits : mlap::lambda_precision_bits(n);
    rows.push_back({n, mlap::lambda_eval(index, pr, f.x, n, b), static_cast<double>(b)});
  }
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"n", "lambda", "limit", "difference", "relative_gap", "precision_bits"});
    for (const auto& r : rows)
      w.next() << r.n << r.value << limit << r.value - limit << (std::isinf(limit) ? std::nan("") : r.value / limit - 1.0)
               << static_cast<unsigned>(r.bits);
  } else {
    json j = envelope(sub, "tree lambda");
    j["index"] = index;
    j["limit"] = number(limit);
    json a = json::array();
    for (const auto& r : rows)
      a.push_back({{"n", r.n}, {"lambda", number(r.value)}, {"precision_bits", static_cast<unsigned>(r.bits)}});
    j["rows"] = a;
    write_json(f.c, j);
  }
  return exit_pass;
}

// tree volume

struct tree_volume_flags {
  common_flags c;
  tree_flags t;
  std::int64_t max_n = 0;
};

int run_tree_volume(const CLI::App* sub, const tree_volume_flags& f) {
  auto prof = load_profile(f.t, env_precision());
  const std::int64_t n_max = f.max_n > 0 ? f.max_n : prof.hi - 1;
  auto rows = mlap::volume_growth_check(prof, n_max);
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"n", "log_W", "log_form", "ratio"});
    for (const auto& r : rows) w.next() << r.n << r.log_W << r.log_form << r.ratio;
  } else {
    json j = envelope(sub, "tree volume");
    json a = json::array();
    for (const auto& r : rows)
      a.push_back({{"n", r.n}, {"log_W", number(r.log_W)}, {"log_form", number(r.log_form)}, {"ratio", number(r.ratio)}});
    j["rows"] = a;
    write_json(f.c, j);
  }
  return exit_pass;
}

// verify

struct verify_flags {
  common_flags c;
  graph_flags g;
  double m = 0, p = 0, q = 0;
  double tol_rel = 1e-9, tol_abs = 0.0;
};

int run_verify(const CLI::App* sub, const verify_flags& f) {
  auto gf = load_graph(f.g.graph);
  auto u = load_function(f.g.u);
  mlap::param_triple pr(f.m, f.p, f.q);
  auto rep = mlap::verify_supersolution(gf.graph, u, pr, interior_of(gf), {f.tol_abs, f.tol_rel});
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"vertex", "u", "residual", "normalized", "log_scale", "laplacian_sign",
                                          "log_laplacian", "log_source", "pass"});
    for (const auto& e : rep.entries)
      w.next() << e.vertex << u.value(static_cast<mlap::vertex_id>(e.vertex)) << e.r.value() << e.r.normalized
               << e.r.log_scale << e.r.laplacian_sign << e.r.log_laplacian << e.r.log_source << e.r.passes(rep.tol);
  } else {
    json j = envelope(sub, "verify");
    j["checked_vertices"] = rep.checked_vertices;
    j["boundary_excluded"] = rep.boundary_excluded;
    j["max_normalized"] = number(rep.max_normalized);
    j["worst_vertex"] = rep.worst_vertex;
    j["worst_value"] = number(rep.worst_value);
    j["tolerance"] = {{"rel", rep.tol.rel}, {"abs", rep.tol.abs}};
    json v = json::array();
    for (const auto& e : rep.violations) {
      json r = residual_json(e.r);
      r["vertex"] = e.vertex;
      v.push_back(r);
    }
    j["violations"] = v;
    j["ok"] = rep.ok();
    write_json(f.c, j);
  }
  if (!rep.ok()) throw check_failed{std::to_string(rep.violations.size()) + " vertex(es) violate the inequality"};
  return exit_pass;
}

// harnack

struct harnack_flags {
  common_flags c;
  graph_flags g;
  double m = 0, p0 = 0;
  CLI::Option* o_p0 = nullptr;
};

int run_harnack(const CLI::App* sub, const harnack_flags& f) {
  auto gf = load_graph(f.g.graph);
  auto u = load_function(f.g.u);
  const double p0 = f.o_p0->count() ? f.p0 : mlap::p0_constant(gf.graph);
  auto rep = mlap::harnack_check(gf.graph, u, f.m, p0);
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"x", "y", "ratio", "p1"});
    for (const auto& v : rep.violations) w.next() << v.x << v.y << v.ratio << rep.p1;
  } else {
    json j = envelope(sub, "harnack");
    j["p0"] = p0;
    j["p1"] = rep.p1;
    j["worst_pair"] = {rep.worst_pair.first, rep.worst_pair.second};
    j["worst_ratio"] = number(rep.worst_ratio);
    json v = json::array();
    for (const auto& x : rep.violations) v.push_back({{"x", x.x}, {"y", x.y}, {"ratio", number(x.ratio)}});
    j["violations"] = v;
    j["ok"] = rep.ok;
    write_json(f.c, j);
  }
  if (!rep.ok) throw check_failed{"edge ratio exceeds p1 = " + mlap::io::format_double(rep.p1)};
  return exit_pass;
}

// descent

struct descent_flags {
  common_flags c;
  graph_flags g;
  tree_flags t;
  double m = 2.0;
  std::int64_t start = -1;
  int steps = 100;
  CLI::Option* o_m = nullptr;
};

template <class G>
int report_descent(const CLI::App* sub, const descent_flags& f, const G& g, const mlap::vertex_function& u, double m,
                   mlap::vertex_id x0, std::vector<mlap::vertex_id> interior,
                   const std::function<std::int64_t(mlap::vertex_id)>& label) {
  auto rep = mlap::descent_sequence(g, u, m, x0, f.steps, std::move(interior));
  const bool ok = rep.strictly_decreasing && rep.laplacian_negative;
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"step", "vertex", "u", "laplacian", "gradient", "increment"});
    for (std::size_t n = 0; n < rep.steps.size(); ++n) {
      const auto& s = rep.steps[n];
      w.next() << n << label(s.vertex) << s.u << s.laplacian << s.gradient
               << (n < rep.increments.size() ? rep.increments[n] : std::nan(""));
    }
  } else {
    json j = envelope(sub, "descent");
    json a = json::array();
    for (std::size_t n = 0; n < rep.steps.size(); ++n) {
      const auto& s = rep.steps[n];
      a.push_back({{"step", n},
                   {"vertex", label(s.vertex)},
                   {"u", number(s.u)},
                   {"laplacian", number(s.laplacian)},
                   {"gradient", number(s.gradient)}});
    }
    j["steps"] = a;
    j["truncated"] = rep.truncated;
    j["strictly_decreasing"] = rep.strictly_decreasing;
    j["laplacian_negative"] = rep.laplacian_negative;
    j["ok"] = ok;
    write_json(f.c, j);
  }
  if (!ok) throw check_failed{"descent sequence is not strictly decreasing with negative m-Laplacian"};
  return exit_pass;
}

int run_descent(const CLI::App* sub, const descent_flags& f) {
  if (!f.g.graph.empty()) {
    auto gf = load_graph(f.g.graph);
    auto u = load_function(f.g.u);
    const std::int64_t x0 = f.start < 0 ? static_cast<std::int64_t>(gf.graph.root()) : f.start;
    check_center(gf.graph, x0);
    return report_descent(sub, f, gf.graph, u, f.m, static_cast<mlap::vertex_id>(x0), interior_of(gf),
                          [](mlap::vertex_id x) { return static_cast<std::int64_t>(x); });
  }
  auto prof = load_profile(f.t, env_precision());
  mlap::radial_tree t(prof);
  const std::int64_t lvl = f.start < 0 ? 0 : f.start;
  if (!prof.in_range(lvl)) throw mlap::domain_error("start level is out of range");
  const double m = f.o_m->count() ? f.m : prof.pr.m;
  return report_descent(sub, f, t, mlap::radial_solution(prof), m, t.index(lvl), t.interior(),
                        [&](mlap::vertex_id x) { return t.level(x); });
}

// parabolic

struct parabolic_flags {
  common_flags c;
  std::string graph;
  std::int64_t center = -1;
  double m = 2.0;
  std::vector<std::int64_t> radii;
  std::int64_t max_r = 0;
};

int run_parabolic(const CLI::App* sub, const parabolic_flags& f) {
  auto gf = load_graph(f.graph);
  const std::int64_t o = f.center < 0 ? static_cast<std::int64_t>(gf.graph.root()) : f.center;
  check_center(gf.graph, o);
  std::vector<std::int64_t> radii = f.radii;
  if (radii.empty()) {
    if (f.max_r < 2) throw mlap::parameter_error("give --radii or --max-r >= 2");
    for (std::int64_t r = 1; r <= f.max_r; ++r) radii.push_back(r);
  }
  auto rep = mlap::parabolicity_series(gf.graph, static_cast<mlap::vertex_id>(o), radii, f.m);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << '\n';
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"r0", "r1", "log_dW", "term", "partial"});
    for (const auto& r : rep.rows) w.next() << r.r0 << r.r1 << r.log_dW << r.term << r.partial;
  } else {
    json j = envelope(sub, "parabolic");
    json a = json::array();
    for (const auto& r : rep.rows)
      a.push_back({{"r0", r.r0}, {"r1", r.r1}, {"log_dW", number(r.log_dW)}, {"term", number(r.term)},
                   {"partial", number(r.partial)}});
    j["rows"] = a;
    j["warnings"] = rep.warnings;
    write_json(f.c, j);
  }
  return exit_pass;
}

// caccioppoli

struct caccioppoli_flags {
  common_flags c;
  graph_flags g;
  tree_flags t;
  double gm = 0, gp = 0, gq = 0;
  int i = 2;
  double tt = 0, s = 10.0;
  std::int64_t center = -1;
  CLI::Option* o_t = nullptr;
};

int run_caccioppoli(const CLI::App* sub, const caccioppoli_flags& f) {
  mlap::caccioppoli_result r{};
  double t = 0.0;
  auto pick_t = [&](const mlap::param_triple& pr) {
    return f.o_t->count() ? f.tt : mlap::proof_t_schedule(pr, f.i).t;
  };
  std::int64_t depth = 0;
  if (!f.g.graph.empty()) {
    auto gf = load_graph(f.g.graph);
    auto u = load_function(f.g.u);
    mlap::param_triple pr(f.gm, f.gp, f.gq);
    const std::int64_t o = f.center < 0 ? static_cast<std::int64_t>(gf.graph.root()) : f.center;
    check_center(gf.graph, o);
    auto phi = mlap::make_cutoff(gf.graph, static_cast<mlap::vertex_id>(o), mlap::cutoff_kind::phi, f.i);
    t = pick_t(pr);
    r = mlap::caccioppoli_sides(gf.graph, u, pr, t, f.s, phi.values);
  } else {
    auto prof = load_profile(f.t, env_precision());
    mlap::radial_tree tree(prof);
    auto phi = mlap::make_cutoff(tree, tree.root(), mlap::cutoff_kind::phi, f.i);
    t = pick_t(prof.pr);
    r = mlap::caccioppoli_sides(tree, mlap::radial_solution(prof), prof.pr, t, f.s, phi.values);
    depth = prof.hi;
  }
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"i", "t", "s", "log_lhs", "log_rhs", "log_constant", "exponent", "p0", "p1", "ok"});
    w.next() << f.i << t << f.s << r.log_lhs << r.log_rhs << r.constant.log_value << r.constant.exponent << r.p0 << r.p1
             << r.ok;
  } else {
    json j = envelope(sub, "caccioppoli");
    j["t"] = t;
    j["depth"] = depth;
    j["log_lhs"] = number(r.log_lhs);
    j["log_rhs"] = number(r.log_rhs);
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["log_constant"] = number(r.constant.log_value);
    j["exponent"] = r.constant.exponent;
    j["p0"] = r.p0;
    j["p1"] = r.p1;
    j["ok"] = r.ok;
    write_json(f.c, j);
  }
  if (!r.ok) throw check_failed{"left side exceeds the right side"};
  return exit_pass;
}

// volume

struct volume_flags {
  common_flags c;
  std::string graph;
  std::int64_t center = -1;
  std::int64_t max_n = 10;
};

int run_volume(const CLI::App* sub, const volume_flags& f) {
  auto gf = load_graph(f.graph);
  const std::int64_t o = f.center < 0 ? static_cast<std::int64_t>(gf.graph.root()) : f.center;
  check_center(gf.graph, o);
  auto rows = mlap::volume_profile(gf.graph, static_cast<mlap::vertex_id>(o), f.max_n);
  if (f.c.format == "csv") {
    output out(f.c.output);
    mlap::io::csv_writer w(out.stream(), {"n", "V", "W", "log_V", "log_W"});
    for (const auto& r : rows) w.next() << r.n << r.V << r.W << r.log_V << r.log_W;
  } else {
    json j = envelope(sub, "volume");
    json a = json::array();
    for (const auto& r : rows)
      a.push_back({{"n", r.n}, {"V", number(r.V)}, {"W", number(r.W)}, {"log_V", number(r.log_V)},
                   {"log_W", number(r.log_W)}});
    j["rows"] = a;
    write_json(f.c, j);
  }
  return exit_pass;
}

// graph generators

struct graph_gen_flags {
  std::string output;
  int last = 32;
  int N = 3;
  int depth = 4;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete m-Laplacian supersolutions on weighted graphs: classification, tree constructions, checks"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", tool_version);
  app.require_subcommand(1);

  classify_flags cf;
  auto* classify = app.add_subcommand("classify", "Parameter regions, t-interval and volume threshold");
  add_common(classify, cf.c, "json");
  classify->add_option("--m", cf.m, "Exponent m > 1")->required();
  classify->add_option("--p", cf.p, "Exponent p")->required();
  classify->add_option("--q", cf.q, "Exponent q")->required();
  cf.o_p0 = no_default(classify->add_option("--p0", cf.p0, "Graph constant p0 (adds kappa0)"));
  cf.o_alpha = no_default(classify->add_option("--alpha", cf.alpha, "Polynomial exponent for region G4"));
  cf.o_kappa = no_default(classify->add_option("--kappa", cf.kappa, "Exponential rate for critical-line regions"));
  cf.o_n = no_default(classify->add_option("--n", cf.n, "Evaluate ln of the threshold at n >= 2"));

  auto* tree = app.add_subcommand("tree", "Homogeneous-tree constructions");
  tree->require_subcommand(1);

  build_flags bf;
  auto* tbuild = tree->add_subcommand("build", "Select constants and write the profile JSON");
  add_tree_flags(tbuild, bf.t, false);
  tbuild->add_option("-o,--output", bf.output, "Output file (default: stdout)");
  tbuild->add_flag("--no-sequences", bf.no_sequences, "Omit log_mu and log_u (regenerated on load)");
  bf.o_bits = no_default(tbuild->add_option("--precision-bits", bf.bits, "Lambda precision (default: MLAP_PRECISION_BITS or per n)"));

  tree_verify_flags tvf;
  auto* tverify = tree->add_subcommand(
      "verify", "Residual at every interior level. CSV columns: level, log_u, log_mu, residual, normalized, log_scale, pass");
  add_common(tverify, tvf.c, "json");
  add_tree_flags(tverify, tvf.t, true);
  tverify->add_option("--tol-rel", tvf.tol_rel, "Relative tolerance on the residual");
  tverify->add_option("--tol-abs", tvf.tol_abs, "Absolute tolerance on the residual");

  lambda_flags lf;
  auto* tlambda = tree->add_subcommand(
      "lambda", "Lambda_k(n) on a grid. CSV columns: n, lambda, limit, difference, relative_gap, precision_bits");
  add_common(tlambda, lf.c, "csv");
  tlambda->add_option("--case", lf.case_name, "I, II, III or IV")->required()->check(CLI::IsMember({"I", "II", "III", "IV"}));
  tlambda->add_option("--m", lf.m, "Exponent m")->required();
  tlambda->add_option("--p", lf.p, "Exponent p")->required();
  tlambda->add_option("--q", lf.q, "Exponent q")->required();
  tlambda->add_option("--eps,--lambda", lf.x, "epsilon (I to III) or lambda (IV)")->required();
  no_default(tlambda->add_option("--n", lf.ns, "Explicit n values"));
  tlambda->add_option("--n-min", lf.n_min, "Grid start");
  tlambda->add_option("--n-max", lf.n_max, "Grid end");
  tlambda->add_option("--per-decade", lf.per_decade, "Grid points per decade");
  lf.o_bits = no_default(tlambda->add_option("--precision-bits", lf.bits, "Precision (default: MLAP_PRECISION_BITS or per n)"));

  tree_volume_flags tvol;
  auto* tvolume = tree->add_subcommand("volume", "W_o(n) against its asymptotic form. CSV columns: n, log_W, log_form, ratio");
  add_common(tvolume, tvol.c, "csv");
  add_tree_flags(tvolume, tvol.t, true);
  tvolume->add_option("--max-n", tvol.max_n, "Largest n (default: depth - 1)");

  verify_flags vf;
  auto* verify = app.add_subcommand(
      "verify",
      "Residual of the inequality on a graph. CSV columns: vertex, u, residual, normalized, log_scale, laplacian_sign, "
      "log_laplacian, log_source, pass");
  add_common(verify, vf.c, "json");
  verify->add_option("--graph", vf.g.graph, "Graph JSON")->required();
  verify->add_option("--u", vf.g.u, "Function JSON")->required();
  verify->add_option("--m", vf.m, "Exponent m")->required();
  verify->add_option("--p", vf.p, "Exponent p")->required();
  verify->add_option("--q", vf.q, "Exponent q")->required();
  verify->add_option("--tol-rel", vf.tol_rel, "Relative tolerance");
  verify->add_option("--tol-abs", vf.tol_abs, "Absolute tolerance");

  harnack_flags hf;
  auto* harnack = app.add_subcommand("harnack", "Edge ratio bound u(y) <= p1 u(x). CSV columns: x, y, ratio, p1");
  add_common(harnack, hf.c, "json");
  harnack->add_option("--graph", hf.g.graph, "Graph JSON")->required();
  harnack->add_option("--u", hf.g.u, "Function JSON")->required();
  harnack->add_option("--m", hf.m, "Exponent m")->required();
  hf.o_p0 = no_default(harnack->add_option("--p0", hf.p0, "p0 (default: computed from the graph)"));

  descent_flags df;
  auto* descent = app.add_subcommand(
      "descent", "Minimum-descent sequence. CSV columns: step, vertex, u, laplacian, gradient, increment");
  add_common(descent, df.c, "csv");
  descent->add_option("--graph", df.g.graph, "Graph JSON (otherwise a tree profile)");
  descent->add_option("--u", df.g.u, "Function JSON");
  add_tree_flags(descent, df.t, true);
  df.o_m = descent->add_option("--m-laplacian", df.m, "m of the Laplacian (default: the profile's m, or 2)");
  descent->add_option("--start", df.start, "Start vertex or level (default: root)");
  descent->add_option("--steps", df.steps, "Number of moves");

  parabolic_flags pf;
  auto* parabolic = app.add_subcommand(
      "parabolic", "Partial sums of ((r1-r0)^m / (W(r1)-W(r0)))^(1/(m-1)). CSV columns: r0, r1, log_dW, term, partial");
  add_common(parabolic, pf.c, "csv");
  parabolic->add_option("--graph", pf.graph, "Graph JSON")->required();
  parabolic->add_option("--center", pf.center, "Center (default: root)");
  parabolic->add_option("--m", pf.m, "Exponent m");
  parabolic->add_option("--radii", pf.radii, "Increasing radii");
  parabolic->add_option("--max-r", pf.max_r, "Use radii 1..max-r");

  caccioppoli_flags kf;
  auto* cacc = app.add_subcommand(
      "caccioppoli", "Both sides of the Caccioppoli-type estimate with phi_i. CSV columns: i, t, s, log_lhs, log_rhs, "
                     "log_constant, exponent, p0, p1, ok");
  add_common(cacc, kf.c, "json");
  cacc->add_option("--graph", kf.g.graph, "Graph JSON (otherwise a tree profile)");
  cacc->add_option("--u", kf.g.u, "Function JSON");
  no_default(cacc->add_option("--gm", kf.gm, "m for --graph"));
  no_default(cacc->add_option("--gp", kf.gp, "p for --graph"));
  no_default(cacc->add_option("--gq", kf.gq, "q for --graph"));
  cacc->add_option("--center", kf.center, "Center of phi_i for --graph (default: root)");
  add_tree_flags(cacc, kf.t, true);
  cacc->add_option("--i", kf.i, "Cutoff index i");
  kf.o_t = no_default(cacc->add_option("--t", kf.tt, "t (default: the proof schedule at i)"));
  cacc->add_option("--s", kf.s, "s");

  volume_flags volf;
  auto* volume = app.add_subcommand("volume", "V_o(n) and W_o(n). CSV columns: n, V, W, log_V, log_W");
  add_common(volume, volf.c, "csv");
  volume->add_option("--graph", volf.graph, "Graph JSON")->required();
  volume->add_option("--center", volf.center, "Center (default: root)");
  volume->add_option("--max-n", volf.max_n, "Largest radius");

  graph_gen_flags gg;
  auto* graph = app.add_subcommand("graph", "Write a generated graph as JSON");
  graph->require_subcommand(1);
  auto* chain = graph->add_subcommand("clique-chain", "Chain K_2, K_3, ..., K_last sharing one vertex between neighbors");
  chain->add_option("--last", gg.last, "Largest clique");
  chain->add_option("-o,--output", gg.output, "Output file (default: stdout)");
  auto* utree = graph->add_subcommand("tree", "Unit-weight homogeneous tree");
  utree->add_option("--N", gg.N, "Degree");
  utree->add_option("--depth", gg.depth, "Depth");
  utree->add_option("-o,--output", gg.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_error;
  }

  try {
    if (*classify) return run_classify(classify, cf);
    if (*tbuild) return run_tree_build(tbuild, bf);
    if (*tverify) return run_tree_verify(tverify, tvf);
    if (*tlambda) return run_tree_lambda(tlambda, lf);
    if (*tvolume) return run_tree_volume(tvolume, tvol);
    if (*verify) return run_verify(verify, vf);
    if (*harnack) return run_harnack(harnack, hf);
    if (*descent) return run_descent(descent, df);
    if (*parabolic) return run_parabolic(parabolic, pf);
    if (*cacc) return run_caccioppoli(cacc, kf);
    if (*volume) return run_volume(volume, volf);
    if (*chain || *utree) {
      auto g = *chain ? mlap::clique_chain(gg.last) : mlap::unit_tree(gg.N, gg.depth);
      common_flags c{"json", gg.output};
      write_json(c, mlap::io::graph_to_json(g));
      return exit_pass;
    }
  } catch (const check_failed& e) {
    std::cerr << "check failed: " << e.what << '\n';
    return exit_check_failed;
  } catch (const mlap::constants_not_found& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return exit_check_failed;
  } catch (const mlap::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
