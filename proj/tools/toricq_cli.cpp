#include "toricq_cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toricq/errors.hpp"
#include "toricq/geodesic.hpp"
#include "toricq/polytope.hpp"
#include "toricq/polytope_io.hpp"
#include "toricq/potential.hpp"
#include "toricq/quadrature.hpp"
#include "toricq/quantization.hpp"
#include "toricq/reduction.hpp"

namespace toricq::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string input;
  std::string command;
  std::optional<std::size_t> p;
  std::string frame;
  std::string s_grid;
  std::string m;
  std::string x;
  std::string level;
  std::string alpha;
  std::string correction = "none";
  double tol = 1e-8;
  std::string format = "csv";
  std::string out;
};

// Empty cells become "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, std::string, double, long long, bool>;

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json meta = json::object();
};

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double d) const { return fmt17(d); }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

json json_cell(const Cell& c) {
  struct V {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(const std::string& s) const { return s; }
    json operator()(double d) const { return std::isfinite(d) ? json(d) : json(fmt17(d)); }
    json operator()(long long i) const { return i; }
    json operator()(bool b) const { return b; }
  };
  return std::visit(V{}, c);
}

std::string render(const Report& r, const std::string& command, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    json doc = r.meta;
    doc["command"] = command;
    doc["rows"] = json::array();
    for (const auto& row : r.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < r.columns.size(); ++i) o[r.columns[i]] = json_cell(row[i]);
      doc["rows"].push_back(std::move(o));
    }
    os << doc.dump(2) << '\n';
    return os.str();
  }
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string{} : cur.substr(b, e - b + 1));
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const char* field) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError("'" + s + "' is not an integer", field);
  return v;
}

double parse_double(const std::string& s, const char* field) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw InputError("'" + s + "' is not a number", field);
  return v;
}

char list_separator(const std::string& s) { return s.find(';') != std::string::npos ? ';' : ','; }

std::vector<IntVector> parse_frame(const std::string& s) {
  std::vector<IntVector> rows;
  for (const auto& r : split(s, ';')) {
    IntVector row;
    for (const auto& e : split(r, ',')) row.push_back(parse_int(e, "B"));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> g;
  for (const auto& e : split(s, ',')) g.push_back(parse_double(e, "s-grid"));
  if (g.empty()) throw InputError("s-grid is empty", "s-grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0) || !std::isfinite(g[i])) throw InputError("s-grid entries must be finite and >= 0", "s-grid");
    if (i > 0 && !(g[i] > g[i - 1])) throw InputError("s-grid must be strictly increasing", "s-grid");
  }
  return g;
}

IntVector parse_lattice_point(const std::string& s, std::size_t n) {
  IntVector m;
  for (const auto& e : split(s, list_separator(s))) m.push_back(parse_int(e, "m"));
  if (m.size() != n) throw InputError("--m needs " + std::to_string(n) + " entries", "m");
  return m;
}

Eigen::VectorXd parse_point(const std::string& s, std::size_t n) {
  const auto parts = split(s, list_separator(s));
  if (parts.size() != n) throw InputError("--x needs " + std::to_string(n) + " entries", "x");
  Eigen::VectorXd x(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = parse_double(parts[i], "x");
  return x;
}

RationalVector parse_level(const std::string& s, std::size_t p) {
  RationalVector c;
  for (const auto& e : split(s, list_separator(s))) {
    try {
      c.push_back(parse_rational(e));
    } catch (const InputError& ex) {
      throw InputError(ex.what(), "c");
    }
  }
  if (c.size() != p) throw InputError("--c needs " + std::to_string(p) + " entries", "c");
  return c;
}

std::string join_ints(const IntVector& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

std::string join_indices(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::string join_rationals(const RationalVector& v, char sep = ';') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + to_string(v[i]);
  return s;
}

std::string join_doubles(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt17(v[i]);
  return s;
}

std::size_t resolve_p(const RunConfig& cfg, std::size_t n) {
  const std::size_t p = cfg.p.value_or(1);
  if (p < 1 || p > n) throw InputError("--p must satisfy 1 <= p <= n = " + std::to_string(n), "p");
  return p;
}

DelzantPolytope load_with_frame(const RunConfig& cfg, std::size_t* p_out) {
  if (cfg.input.empty()) throw InputError("--input is required", "input");
  DelzantPolytope poly = load_polytope(cfg.input);
  const std::size_t p = resolve_p(cfg, poly.dim());
  if (p_out) *p_out = p;
  if (!cfg.frame.empty()) poly = apply_frame_change(poly, FrameChange(parse_frame(cfg.frame), p));
  return poly;
}

// Validation gate for commands that need a genuine Delzant polytope.
void require_valid(const DelzantPolytope& poly) {
  const auto rep = validate_delzant(poly);
  if (!rep.ok) throw DomainError("polytope is not a valid Delzant polytope (" + to_string(rep.verdict) + ")");
}

SymplecticPotential make_potential(const RunConfig& cfg, const DelzantPolytope& poly) {
  auto pot = SymplecticPotential::guillemin(poly);
  const auto h = parse_correction(cfg.correction, poly.dim());
  return h.is_zero() ? pot : pot.with_correction(h);
}

Eigen::VectorXd sample_point(const RunConfig& cfg, const SymplecticPotential& pot) {
  if (!cfg.x.empty()) return parse_point(cfg.x, pot.dim());
  if (!pot.barycenter()) throw DomainError("no barycenter for an unbounded polytope; pass --x");
  return *pot.barycenter();
}

int cmd_validate(const RunConfig& cfg, Report& r, std::ostream& err) {
  std::size_t p = 0;
  RunConfig relaxed = cfg;
  if (!relaxed.p && !relaxed.frame.empty()) relaxed.p = 1;
  const DelzantPolytope poly = load_with_frame(relaxed, &p);
  const auto rep = validate_delzant(poly);
  r.columns = {"verdict", "vertex", "active", "determinant", "delzant"};
  for (const auto& v : rep.vertices) {
    r.rows.push_back({to_string(rep.verdict), join_rationals(v.vertex), join_indices(v.active), v.determinant.str(),
                      v.delzant});
    if (!v.delzant)
      err << "vertex (" << join_rationals(v.vertex, ',') << ") is not Delzant: " << v.active.size()
          << " active facets, determinant " << v.determinant.str() << '\n';
  }
  r.meta["verdict"] = to_string(rep.verdict);
  r.meta["ok"] = rep.ok;
  r.meta["redundant"] = rep.redundant;
  r.meta["non_primitive"] = rep.non_primitive;
  if (!rep.ok) err << "verdict: " << to_string(rep.verdict) << '\n';
  return rep.ok ? kOk : kDomainFailure;
}

int cmd_points(const RunConfig& cfg, Report& r) {
  std::size_t p = 0;
  const DelzantPolytope poly = load_with_frame(cfg, &p);
  require_valid(poly);
  r.columns = {"index", "m", "H"};
  for (const auto& e : quantum_basis(poly, p))
    r.rows.push_back({static_cast<long long>(e.index), join_ints(e.m), e.hamiltonian});
  r.meta["p"] = p;
  return kOk;
}

int cmd_norms(const RunConfig& cfg, Report& r) {
  std::size_t p = 0;
  const DelzantPolytope poly = load_with_frame(cfg, &p);
  require_valid(poly);
  const auto grid = parse_grid(cfg.s_grid.empty() ? "10,20,40,80" : cfg.s_grid);
  if (!(cfg.tol > 0.0)) throw InputError("--tol must be positive", "tol");
  const MabuchiRay ray(make_potential(cfg, poly), p);
  QuadratureOptions opts;
  opts.tolerance = cfg.tol;

  std::vector<IntVector> targets;
  if (!cfg.m.empty()) {
    targets.push_back(parse_lattice_point(cfg.m, poly.dim()));
  } else {
    for (const auto& e : quantum_basis(poly, p)) targets.push_back(e.m);
  }

  r.columns = {"m", "s", "norm2", "tilde_norm2", "c_m", "limit", "pass", "converged"};
  for (const auto& m : targets) {
    const LimitConstant lim = limit_constant_cm(ray, m, opts);
    std::vector<double> s_pos, tilde_pos;
    bool all_converged = lim.converged;
    for (double s : grid) {
      const NormValue v = norm_squared(ray, m, s, opts);
      r.rows.push_back({join_ints(m), s, v.norm_squared, v.tilde_norm_squared, lim.c_m, lim.limit, std::monostate{},
                        v.converged});
      all_converged = all_converged && v.converged;
      if (s > 0.0) {
        s_pos.push_back(s);
        tilde_pos.push_back(v.tilde_norm_squared);
      }
    }
    Cell extrap, pass;
    if (!s_pos.empty()) {
      const double e = richardson_extrapolate(s_pos, tilde_pos);
      extrap = e;
      pass = std::abs(e - lim.limit) <= std::max(cfg.tol, 0.02 * lim.limit);
    }
    r.rows.push_back({join_ints(m), std::string("inf"), std::monostate{}, extrap, lim.c_m, lim.limit, pass,
                      all_converged});
  }
  r.meta["p"] = p;
  r.meta["s_grid"] = grid;
  r.meta["tolerance"] = cfg.tol;
  return kOk;
}

int cmd_flow(const RunConfig& cfg, Report& r) {
  std::size_t p = 0;
  const DelzantPolytope poly = load_with_frame(cfg, &p);
  require_valid(poly);
  const auto grid = parse_grid(cfg.s_grid.empty() ? "1,2,4,8,16,32,64,128,256" : cfg.s_grid);
  const MabuchiRay ray(make_potential(cfg, poly), p);
  const Eigen::VectorXd x = sample_point(cfg, ray.base());

  r.columns = {"x", "s", "grassmann_distance", "connection_gap", "error"};
  if (!ray.base().is_interior(x)) {
    for (double s : grid)
      r.rows.push_back({join_doubles(x), s, std::monostate{}, std::monostate{}, std::string("outside interior")});
    return kOk;
  }
  const PolarizationFrame limit_frame = polarization_frame_limit(ray, x);
  const ConnectionFormValue limit_form = connection_form_limit(ray, x);
  for (double s : grid) {
    const double dist = grassmann_distance(polarization_frame_s(ray, x, s), limit_frame);
    const double gap = (connection_form_s(ray, x, s).coefficients - limit_form.coefficients).norm();
    r.rows.push_back({join_doubles(x), s, dist, gap, std::monostate{}});
  }
  r.meta["p"] = p;
  return kOk;
}

int cmd_reduce(const RunConfig& cfg, Report& r) {
  if (!cfg.alpha.empty()) {
    if (cfg.input.empty()) throw InputError("--input is required", "input");
    const DelzantPolytope poly = load_polytope(cfg.input);
    const std::size_t n = poly.dim();
    if (n < 2) throw InputError("--alpha needs dimension >= 2", "alpha");
    Rational alpha;
    try {
      alpha = parse_rational(cfg.alpha);
    } catch (const InputError& e) {
      throw InputError(e.what(), "alpha");
    }
    const Rational level = cfg.level.empty() ? Rational(0) : parse_level(cfg.level, 1)[0];
    const ReducedStructure red = reduce_graph(poly.as_polyhedron(), RationalVector(n - 1, alpha), level);
    const Eigen::VectorXd y = cfg.x.empty() ? Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n - 1))
                                            : parse_point(cfg.x, n - 1);
    const double s = reduced_scalar_curvature(red, y);
    r.columns = {"alpha", "c", "class", "y", "scalar_curvature"};
    r.rows.push_back({to_string(alpha), to_string(level), to_string(red.classification), join_doubles(y), s});
    return kOk;
  }
  std::size_t p = 0;
  const DelzantPolytope poly = load_with_frame(cfg, &p);
  require_valid(poly);
  const AuditReport audit = reduction_dimension_audit(poly, p);
  r.columns = {"c", "dim", "class", "trivial"};
  for (const auto& lv : audit.levels)
    r.rows.push_back({join_ints(lv.c), static_cast<long long>(lv.dimension),
                      lv.classification ? to_string(*lv.classification) : std::string("empty"), lv.trivial});
  r.meta["p"] = p;
  r.meta["total"] = audit.total;
  r.meta["basis_size"] = audit.basis_size;
  r.meta["consistent"] = audit.consistent;
  return audit.consistent ? kOk : kDomainFailure;
}

int cmd_curvature(const RunConfig& cfg, Report& r) {
  std::size_t p = 0;
  const DelzantPolytope poly = load_with_frame(cfg, &p);
  require_valid(poly);
  const SymplecticPotential pot = make_potential(cfg, poly);
  const Eigen::VectorXd x = sample_point(cfg, pot);
  r.columns = {"x", "scalar_curvature"};
  r.rows.push_back({join_doubles(x), abreu_scalar_curvature(pot, x)});
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"toricq: toric geometric quantization along Mabuchi rays", "toricq"};
  app.add_option("--input", cfg.input, "polytope JSON file");
  app.add_option("--command", cfg.command, "validate|points|norms|flow|reduce|curvature")
      ->required()
      ->check(CLI::IsMember({"validate", "points", "norms", "flow", "reduce", "curvature"}));
  app.add_option("--p", cfg.p, "dimension of the subtorus (default 1)");
  app.add_option("--B", cfg.frame, "SL(n,Z) frame change, rows separated by ';'");
  app.add_option("--s-grid", cfg.s_grid, "comma-separated increasing s values");
  app.add_option("--m", cfg.m, "lattice point, entries separated by ';'");
  app.add_option("--x", cfg.x, "sample point, entries separated by ';'");
  app.add_option("--c", cfg.level, "reduction level");
  app.add_option("--alpha", cfg.alpha, "reduce along x_n = alpha * sum_{i<n} x_i + c");
  app.add_option("--correction", cfg.correction, "none | quadratic:[...]");
  app.add_option("--tol", cfg.tol, "absolute quadrature tolerance");
  app.add_option("--format", cfg.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out, "output file (default stdout)");

  std::vector<const char*> argv{"toricq"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  Report report;
  int code = kOk;
  try {
    if (cfg.command == "validate") code = cmd_validate(cfg, report, err);
    else if (cfg.command == "points") code = cmd_points(cfg, report);
    else if (cfg.command == "norms") code = cmd_norms(cfg, report);
    else if (cfg.command == "flow") code = cmd_flow(cfg, report);
    else if (cfg.command == "reduce") code = cmd_reduce(cfg, report);
    else code = cmd_curvature(cfg, report);
  } catch (const InputError& e) {
    if (e.field().empty())
      err << "error: " << e.what() << '\n';
    else
      err << "error in '" << e.field() << "': " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainFailure;
  }

  const std::string text = render(report, cfg.command, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!(f << text)) {
      err << "error in 'out': cannot write " << cfg.out << '\n';
      return kUsage;
    }
  }
  return code;
}

}  // namespace toricq::cli
