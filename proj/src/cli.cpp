#include "hexdimer/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "hexdimer/asymptotics.hpp"
#include "hexdimer/fitting.hpp"
#include "hexdimer/kasteleyn.hpp"
#include "hexdimer/model_core.hpp"
#include "hexdimer/partition.hpp"
#include "hexdimer/scenario.hpp"
#include "hexdimer/special_functions.hpp"
#include "hexdimer/verify.hpp"

namespace hexdimer::cli {

namespace {

using json = nlohmann::ordered_json;

std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

double parse_double(const std::string& text, const std::string& what) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  double v = 0.0;
  if (!(is >> v) || !is.eof()) throw UsageError("cannot parse " + what + " from '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("cannot parse " + what + " from '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

struct Options {
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> n;
  std::optional<std::string> k;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<std::string> c;
  std::optional<std::int64_t> inv_eps;
  std::optional<std::int64_t> inv_eps_min;
  std::optional<std::int64_t> inv_eps_max;
  std::optional<double> q;
  std::optional<std::string> phi;
  std::optional<std::string> scenario;
  std::string method = "auto";
  std::vector<std::string> rows;
  std::vector<std::string> tol_overrides;
  std::optional<std::string> out_path;
  bool json = false;
  bool series = false;
  bool suite_enumeration = false;
  bool suite_kasteleyn = false;
  bool suite_dual = false;
  bool suite_constant_phi = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct Tolerances {
  special::QuadratureSettings quad;
  exact::SeriesSettings series;
  EnumerationLimits limits;
  asymptotics::SlicedDerivativeSettings sliced;
};

Tolerances apply_overrides(const Options& o) {
  Tolerances t;
  for (const auto& item : o.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol-override expects name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (name == "rel_tol") {
      t.quad.rel_tol = parse_double(value, name);
    } else if (name == "z_cut") {
      t.quad.z_cut = parse_double(value, name);
    } else if (name == "taylor_switch") {
      t.quad.taylor_switch = parse_double(value, name);
    } else if (name == "term_tol") {
      t.series.term_tol = parse_double(value, name);
    } else if (name == "n_max_cap") {
      t.series.n_max_cap = parse_int(value, name);
    } else if (name == "max_cells") {
      t.limits.max_cells = parse_int(value, name);
    } else if (name == "max_height") {
      t.limits.max_height = parse_int(value, name);
    } else if (name == "richardson_order") {
      t.sliced.richardson_order = static_cast<int>(parse_int(value, name));
    } else if (name == "quad_rel_tol") {
      t.sliced.quad_rel_tol = parse_double(value, name);
    } else if (name == "fd_steps") {
      t.sliced.inv_eps_steps.clear();
      for (const auto& s : split(value, ':')) t.sliced.inv_eps_steps.push_back(parse_int(s, name));
    } else {
      throw UsageError("unknown tolerance '" + name +
                       "' (known: rel_tol, z_cut, taylor_switch, term_tol, n_max_cap, max_cells, max_height, "
                       "richardson_order, quad_rel_tol, fd_steps)");
    }
  }
  try {
    t.quad.validate();
    t.series.validate();
    t.sliced.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  t.sliced.constant = t.quad;
  t.sliced.threads = o.threads;
  return t;
}

// Canonical description of the run, independent of output path and threads.
std::string config_line(const std::string& command, const Options& o) {
  std::ostringstream os;
  os << command;
  const auto put = [&](const char* name, const auto& value) {
    if (value) os << " --" << name << '=' << *value;
  };
  const auto put_num = [&](const char* name, const std::optional<double>& value) {
    if (value) os << " --" << name << '=' << format_number(*value);
  };
  put("M", o.m);
  put("N", o.n);
  put("K", o.k);
  put_num("a", o.a);
  put_num("b", o.b);
  put("c", o.c);
  put_num("q", o.q);
  put("phi", o.phi);
  put("inv-eps", o.inv_eps);
  put("inv-eps-min", o.inv_eps_min);
  put("inv-eps-max", o.inv_eps_max);
  put("scenario", o.scenario);
  if (o.method != "auto") os << " --method=" << o.method;
  for (const auto& r : o.rows) os << " --row=" << r;
  if (o.series) os << " --series";
  for (const auto& t : o.tol_overrides) os << " --tol-override=" << t;
  return os.str();
}

struct Report {
  std::vector<std::pair<std::string, json>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

std::string csv_field(const json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_integer()) {
    s = v.dump();
  } else if (v.is_number()) {
    s = format_number(v.get<double>());
  } else if (v.is_boolean()) {
    s = v.get<bool>() ? "true" : "false";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\r\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + "\"";
  }
  return s;
}

void write_report(const Report& r, const std::string& config, bool as_json, std::ostream& os) {
  if (as_json) {
    json doc;
    doc["version"] = kVersion;
    doc["config"] = config;
    doc["sign_convention"] = sign_convention_note();
    json meta = json::object();
    for (const auto& [k, v] : r.meta) meta[k] = v;
    doc["meta"] = meta;
    json rows = json::array();
    for (const auto& row : r.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < r.header.size(); ++i) obj[r.header[i]] = row[i];
      rows.push_back(obj);
    }
    doc["rows"] = rows;
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# hexdimer " << kVersion << '\n';
  os << "# config: " << config << '\n';
  os << "# sign-convention: " << sign_convention_note() << '\n';
  for (const auto& [k, v] : r.meta) os << "# " << k << ": " << csv_field(v) << '\n';
  for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
  os << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

Height parse_height(const std::string& text) {
  if (text == "inf" || text == "infinity") return Height::unbounded();
  const auto k = parse_int(text, "--K");
  if (k < 1) throw UsageError("--K must be a positive integer or 'inf'");
  return Height::finite(k);
}

bool has_lattice(const Options& o) { return o.m || o.n || o.k; }
bool has_scaled(const Options& o) { return o.a || o.b || o.c || o.inv_eps || o.inv_eps_min || o.inv_eps_max; }

BoxShape lattice_shape(const Options& o, bool allow_missing_k) {
  if (has_scaled(o) && (o.a || o.b || o.c)) throw UsageError("use either --M/--N/--K or --a/--b/--c, not both");
  if (!o.m || !o.n) throw UsageError("--M and --N are required");
  if (*o.m < 1 || *o.n < 1) throw UsageError("--M and --N must be positive");
  if (!o.k && !allow_missing_k) throw UsageError("--K is required (an integer or 'inf')");
  return BoxShape::make(*o.m, *o.n, o.k ? parse_height(*o.k) : Height::unbounded());
}

Scenario scaled_scenario(const Options& o) {
  if (has_lattice(o)) throw UsageError("use either --M/--N/--K or --a/--b/--c, not both");
  if (!o.a || !o.b) throw UsageError("--a and --b are required");
  if (!(*o.a > 0.0) || !(*o.b > 0.0)) throw UsageError("--a and --b must be positive");
  const bool finite_c = o.c && *o.c != "inf";
  Scenario s;
  if (o.phi) {
    if (finite_c) throw UsageError("--phi applies to the infinite-height box; drop --c");
    auto phi = parse_phi(*o.phi);
    try {
      require_positive(*phi, -*o.a, *o.b);
    } catch (const DomainError& e) {
      throw UsageError(std::string{"--phi: "} + e.what());
    }
    s = SlicedBox{*o.a, *o.b, phi};
  } else if (finite_c) {
    const double c = parse_double(*o.c, "--c");
    if (!(c > 0.0)) throw UsageError("--c must be positive or 'inf'");
    s = FiniteBox{*o.a, *o.b, c};
  } else {
    s = InfiniteBox{*o.a, *o.b};
  }
  if (o.scenario && *o.scenario != to_string(kind_of(s))) {
    throw UsageError("--scenario " + *o.scenario + " does not match the given parameters (" +
                     to_string(kind_of(s)) + ")");
  }
  return s;
}

std::vector<std::int64_t> mesh_grid(const Options& o, std::int64_t default_min, std::int64_t default_max) {
  if (o.inv_eps && (o.inv_eps_min || o.inv_eps_max)) {
    throw UsageError("use either --inv-eps or --inv-eps-min/--inv-eps-max");
  }
  if (o.inv_eps) {
    if (*o.inv_eps < 1) throw UsageError("--inv-eps must be positive");
    return {*o.inv_eps};
  }
  const std::int64_t lo = o.inv_eps_min.value_or(default_min);
  const std::int64_t hi = o.inv_eps_max.value_or(default_max);
  try {
    return fitting::sample_grid(lo, hi);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

json number_or_inf(double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); }

Report cmd_partition(const Options& o, const Tolerances& tol) {
  Report r;
  r.header = {"M", "N", "K", "weight", "method", "log_z", "z"};
  const BoxShape shape = lattice_shape(o, o.phi.has_value());
  double log_z = 0.0;
  std::string method = o.method;
  std::string weight;
  if (o.phi) {
    if (!shape.k.is_unbounded()) throw UsageError("--phi needs the infinite-height box (--K inf)");
    if (o.q) throw UsageError("--q and --phi are exclusive");
    if (!o.inv_eps || *o.inv_eps < 1) throw UsageError("--phi needs --inv-eps");
    if (method != "auto" && method != "sliced") throw UsageError("--method " + method + " does not support --phi");
    const auto phi = parse_phi(*o.phi);
    const double eps = 1.0 / static_cast<double>(*o.inv_eps);
    method = "sliced";
    weight = "phi=" + phi->describe() + ";eps=" + format_number(eps);
    log_z = exact::log_z_sliced(shape.m, shape.n, *phi, eps);
  } else {
    if (!o.q) throw UsageError("--q is required");
    const double q = *o.q;
    weight = "q=" + format_number(q);
    if (shape.k.is_unbounded()) {
      if (method != "auto" && method != "product") throw UsageError("--method " + method + " needs a finite --K");
      method = "product";
      log_z = exact::log_z_infinite(shape, q);
    } else {
      if (method == "auto") method = q == 1.0 ? "kasteleyn" : "macmahon";
      if (method == "macmahon") {
        log_z = exact::log_z_macmahon(shape, q);
      } else if (method == "kasteleyn") {
        log_z = kasteleyn::kasteleyn_log_partition(shape, q);
      } else if (method == "enumeration") {
        log_z = std::log(oracle_partition(shape, q, tol.limits));
      } else {
        throw UsageError("unknown --method " + method + " (auto, macmahon, kasteleyn, enumeration)");
      }
    }
  }
  r.rows.push_back({json(shape.m), json(shape.n), json(shape.k.to_string()), json(weight), json(method),
                    number_or_inf(log_z), number_or_inf(std::exp(log_z))});
  return r;
}

Report cmd_free_energy(const Options& o, const Tolerances& tol) {
  Report r;
  if (has_lattice(o)) {
    if (!o.q) throw UsageError("--q is required with --M/--N/--K");
    if (o.phi) throw UsageError("--phi needs the scaled form --a/--b with --inv-eps");
    const BoxShape shape = lattice_shape(o, false);
    r.header = {"M", "N", "K", "q", "V", "f"};
    r.rows.push_back({json(shape.m), json(shape.n), json(shape.k.to_string()), json(*o.q), json(volume(shape)),
                      json(exact::free_energy(shape, *o.q))});
    return r;
  }
  const Scenario s = scaled_scenario(o);
  const auto grid = mesh_grid(o, 2, 200);
  if (!o.inv_eps && !o.inv_eps_min && !o.inv_eps_max) {
    throw UsageError("give --inv-eps or --inv-eps-min/--inv-eps-max");
  }
  const bool series = o.series && kind_of(s) != ScenarioKind::kSliced;
  if (o.series && !series) throw UsageError("--series is available for the finite and infinite boxes only");
  r.header = {"inv_eps", "eps", "f", "variant", "params"};
  if (series) r.header.emplace_back("f_series");
  const auto samples = exact::free_energy_grid(s, grid, o.threads);
  for (const auto& smp : samples) {
    std::vector<json> row{json(smp.inv_eps), json(smp.eps), json(smp.f), json(to_string(kind_of(s))),
                          json(describe(s))};
    if (series) {
      ScaledShape sc{0, 0, std::nullopt, smp.eps};
      if (const auto* f = std::get_if<FiniteBox>(&s)) {
        sc = ScaledShape{f->a, f->b, f->c, smp.eps};
      } else {
        const auto& i = std::get<InfiniteBox>(s);
        sc = ScaledShape{i.a, i.b, std::nullopt, smp.eps};
      }
      row.emplace_back(exact::series_free_energy(sc, tol.series));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

void add_sliced_meta(Report& r, const asymptotics::ExpansionCoefficients& c) {
  if (!c.sliced) return;
  r.meta.emplace_back("corner_weight_p0", c.sliced->p0);
  r.meta.emplace_back("corner_f0", c.sliced->corner_f0);
  r.meta.emplace_back("corner_f3", c.sliced->corner_f3);
  r.meta.emplace_back("remainder_d0", c.sliced->d0);
  r.meta.emplace_back("remainder_d2", c.sliced->d2);
  r.meta.emplace_back("remainder_d2_noise", c.sliced->d2_noise);
}

Report cmd_coeffs(const Options& o, const Tolerances& tol) {
  const Scenario s = scaled_scenario(o);
  const auto c = asymptotics::coeffs(s, tol.sliced);
  Report r;
  r.meta.emplace_back("scenario", describe(s));
  add_sliced_meta(r, c);
  r.header = {"scenario", "provenance", "f0", "f1", "f2", "f3"};
  r.rows.push_back({json(to_string(c.scenario)), json(asymptotics::to_string(c.provenance)), json(c.f0),
                    json(c.f1), json(c.f2), json(c.f3)});
  return r;
}

Report cmd_fit(const Options& o, const Tolerances& tol) {
  const Scenario s = scaled_scenario(o);
  if (o.inv_eps) throw UsageError("fit uses --inv-eps-min/--inv-eps-max");
  const auto grid = mesh_grid(o, 2, 200);
  const auto samples = exact::free_energy_grid(s, grid, o.threads);
  const auto fr = fitting::fit(samples);
  const auto analytic = asymptotics::coeffs(s, tol.sliced);

  Report r;
  r.meta.emplace_back("scenario", describe(s));
  r.meta.emplace_back("samples", static_cast<std::int64_t>(samples.size()));
  r.meta.emplace_back("residual_rms", fr.residual_rms);
  r.meta.emplace_back("condition_estimate", fr.condition_estimate);
  r.meta.emplace_back("residual_slope", fr.residual_slope ? json(*fr.residual_slope) : json(nullptr));
  r.header = {"basis_term", "fitted", "analytic", "abs_diff"};
  for (std::size_t i = 0; i < fr.basis.terms.size(); ++i) {
    const auto term = fr.basis.terms[i];
    std::optional<double> an;
    switch (term) {
      case fitting::BasisTerm::kOne:
        an = analytic.f0;
        break;
      case fitting::BasisTerm::kEps:
        an = analytic.f1;
        break;
      case fitting::BasisTerm::kEps2LogEps:
        an = analytic.f2;
        break;
      case fitting::BasisTerm::kEps2:
        an = analytic.f3;
        break;
      default:
        break;
    }
    const double v = fr.coefficients[i];
    r.rows.push_back({json(fitting::to_string(term)), json(v), an ? json(*an) : json(nullptr),
                      an ? json(std::fabs(v - *an)) : json(nullptr)});
  }
  return r;
}

Report cmd_table1(const Options& o, const Tolerances& tol) {
  if (has_lattice(o) || o.a || o.b || o.c || o.phi || o.inv_eps) {
    throw UsageError("table1 takes --row and optionally --inv-eps-min/--inv-eps-max");
  }
  std::vector<std::string> specs = o.rows;
  if (specs.empty()) specs = {"cosine:1,3", "cosine:2,3", "linear:1,3", "linear:2,3"};
  const auto grid = mesh_grid(o, 2, 200);
  Report r;
  r.header = {"phi",    "a",          "b",           "f0_fitted", "f0_analytic", "f1_fitted",
              "12abf2", "f3_fitted",  "f3_analytic", "f3_abs_diff"};
  for (const auto& spec : specs) {
    const Table1Row row = parse_table1_row(spec);
    const Scenario s = SlicedBox{row.a, row.b, row.phi};
    const auto samples = exact::free_energy_grid(s, grid, o.threads);
    const auto fr = fitting::fit(samples);
    const auto an = asymptotics::coeffs(s, tol.sliced);
    const double f3 = fr.coefficient(fitting::BasisTerm::kEps2);
    r.rows.push_back({json(row.id), json(row.a), json(row.b), json(fr.coefficient(fitting::BasisTerm::kOne)),
                      json(an.f0), json(fr.coefficient(fitting::BasisTerm::kEps)),
                      json(12.0 * row.a * row.b * fr.coefficient(fitting::BasisTerm::kEps2LogEps)), json(f3),
                      json(an.f3), json(std::fabs(f3 - an.f3))});
  }
  return r;
}

Report cmd_constant(const Options& o, const Tolerances& tol) {
  if (has_lattice(o) || has_scaled(o) || o.phi) throw UsageError("constant takes only --tol-override");
  const auto u = special::universal_constant(tol.quad);
  Report r;
  r.header = {"value", "error", "tail_bound", "rel_tol", "z_cut", "taylor_switch"};
  r.rows.push_back({json(u.value), json(u.error), json(u.tail_bound), json(tol.quad.rel_tol), json(tol.quad.z_cut),
                    json(tol.quad.taylor_switch)});
  return r;
}

Report cmd_verify(const Options& o, bool& all_pass) {
  const bool any = o.suite_enumeration || o.suite_kasteleyn || o.suite_dual || o.suite_constant_phi;
  std::vector<verify::CheckResult> results;
  const auto append = [&](std::vector<verify::CheckResult> v) {
    results.insert(results.end(), v.begin(), v.end());
  };
  if (!any || o.suite_enumeration) append(verify::enumeration_vs_macmahon());
  if (!any || o.suite_kasteleyn) append(verify::kasteleyn_vs_macmahon());
  if (!any || o.suite_dual) append(verify::dual_evaluators());
  if (!any || o.suite_constant_phi) append(verify::constant_phi_reduction());

  Report r;
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& c) { return c.pass; });
  r.meta.emplace_back("passed", static_cast<std::int64_t>(passed));
  r.meta.emplace_back("failed", static_cast<std::int64_t>(results.size()) - passed);
  r.header = {"suite", "check", "measured", "tolerance", "status"};
  for (const auto& c : results) {
    r.rows.push_back({json(c.suite), json(c.name), json(c.measured), json(c.tolerance), json(c.pass ? "PASS" : "FAIL")});
  }
  all_pass = passed == static_cast<std::ptrdiff_t>(results.size());
  return r;
}

}  // namespace

std::shared_ptr<const SliceFunction> parse_phi(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string id = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (id == "cosine") {
    if (!args.empty()) throw UsageError("phi 'cosine' takes no parameters");
    return std::make_shared<CosineSlice>();
  }
  if (id == "const") {
    if (args.empty()) throw UsageError("phi 'const:c' needs a value");
    return std::make_shared<ConstantSlice>(parse_double(args, "const phi"));
  }
  if (id == "linear") {
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw UsageError("phi 'linear:alpha,beta' needs two values");
    return std::make_shared<LinearSlice>(parse_double(parts[0], "alpha"), parse_double(parts[1], "beta"));
  }
  if (id == "tabulated") {
    if (args.empty()) throw UsageError("phi 'tabulated:<file>' needs a path");
    try {
      return load_tabulated_slice(args);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
  throw UsageError("unknown phi '" + spec + "' (const:c, linear:alpha,beta, cosine, tabulated:<file>)");
}

Table1Row parse_table1_row(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--row expects cosine:a,b or linear:a,b");
  const std::string id = spec.substr(0, colon);
  const auto parts = split(spec.substr(colon + 1), ',');
  if (parts.size() != 2) throw UsageError("--row expects two sides, e.g. cosine:1,3");
  Table1Row row;
  row.id = id;
  row.a = parse_double(parts[0], "a");
  row.b = parse_double(parts[1], "b");
  if (!(row.a > 0.0) || !(row.b > 0.0)) throw UsageError("--row sides must be positive");
  if (id == "cosine") {
    row.phi = std::make_shared<CosineSlice>();
  } else if (id == "linear") {
    row.phi = std::make_shared<LinearSlice>(row.a, 0.5);
  } else {
    throw UsageError("unknown --row profile '" + id + "' (cosine, linear)");
  }
  return row;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact partition functions and finite-size expansion of the hexagonal dimer model", "hexdimer"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kVersion);

  const auto common = [&](CLI::App* s) {
    s->add_option("--out", o.out_path, "Write the result to this file instead of stdout");
    s->add_flag("--json", o.json, "Emit JSON instead of CSV");
    s->add_option("--threads", o.threads, "Maximum worker threads")->check(CLI::PositiveNumber);
    s->add_option("--tol-override", o.tol_overrides, "Tolerance override name=value (repeatable)");
  };
  const auto lattice = [&](CLI::App* s) {
    s->add_option("--M", o.m, "Lattice side M");
    s->add_option("--N", o.n, "Lattice side N");
    s->add_option("--K", o.k, "Lattice side K, an integer or 'inf'");
  };
  const auto scaled = [&](CLI::App* s) {
    s->add_option("--a", o.a, "Scaled side a = M eps");
    s->add_option("--b", o.b, "Scaled side b = N eps");
    s->add_option("--c", o.c, "Scaled side c = K eps, or 'inf'");
    s->add_option("--phi", o.phi, "Slice profile: const:c, linear:alpha,beta, cosine, tabulated:<file>");
    s->add_option("--scenario", o.scenario, "Expected scenario")->check(CLI::IsMember({"finite", "infinite", "sliced"}));
  };
  const auto grid = [&](CLI::App* s) {
    s->add_option("--inv-eps-min", o.inv_eps_min, "Smallest 1/eps of the grid");
    s->add_option("--inv-eps-max", o.inv_eps_max, "Largest 1/eps of the grid");
  };

  auto* partition = app.add_subcommand("partition", "Exact ln Z of a lattice box");
  lattice(partition);
  partition->add_option("--q", o.q, "Uniform weight q in (0, 1]");
  partition->add_option("--phi", o.phi, "Slice profile (infinite height, needs --inv-eps)");
  partition->add_option("--inv-eps", o.inv_eps, "1/eps for slice weights");
  partition->add_option("--method", o.method, "auto, macmahon, kasteleyn, enumeration");
  common(partition);

  auto* free_energy = app.add_subcommand("free-energy", "Exact free energy, single mesh or grid");
  lattice(free_energy);
  free_energy->add_option("--q", o.q, "Uniform weight q (lattice form)");
  scaled(free_energy);
  free_energy->add_option("--inv-eps", o.inv_eps, "Single 1/eps");
  grid(free_energy);
  free_energy->add_flag("--series", o.series, "Add the resummed series evaluator as a column");
  common(free_energy);

  auto* coeffs = app.add_subcommand("coeffs", "Analytic expansion coefficients f0..f3");
  scaled(coeffs);
  common(coeffs);

  auto* fit = app.add_subcommand("fit", "Least-squares fit of exact samples against the analytic coefficients");
  scaled(fit);
  fit->add_option("--inv-eps", o.inv_eps, "Not accepted; use the grid bounds");
  grid(fit);
  common(fit);

  auto* table1 = app.add_subcommand("table1", "Sliced-box reference configurations: fitted vs analytic");
  table1->add_option("--row", o.rows, "cosine:a,b or linear:a,b (repeatable; default all four)");
  grid(table1);
  common(table1);

  auto* constant = app.add_subcommand("constant", "Universal constant int_0^inf e^{-z} Q(z) dz");
  common(constant);

  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle suites");
  verify_cmd->add_flag("--enumeration", o.suite_enumeration, "Enumeration vs MacMahon");
  verify_cmd->add_flag("--kasteleyn", o.suite_kasteleyn, "Kasteleyn determinant vs MacMahon");
  verify_cmd->add_flag("--dual", o.suite_dual, "Lattice vs series free energy");
  verify_cmd->add_flag("--constant-phi", o.suite_constant_phi, "Constant slice profile vs uniform box");
  common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Tolerances tol = apply_overrides(o);
    Report report;
    std::string command;
    bool verified = true;
    if (partition->parsed()) {
      command = "partition";
      report = cmd_partition(o, tol);
    } else if (free_energy->parsed()) {
      command = "free-energy";
      report = cmd_free_energy(o, tol);
    } else if (coeffs->parsed()) {
      command = "coeffs";
      report = cmd_coeffs(o, tol);
    } else if (fit->parsed()) {
      command = "fit";
      report = cmd_fit(o, tol);
    } else if (table1->parsed()) {
      command = "table1";
      report = cmd_table1(o, tol);
    } else if (constant->parsed()) {
      command = "constant";
      report = cmd_constant(o, tol);
    } else {
      command = "verify";
      report = cmd_verify(o, verified);
    }

    const std::string config = config_line(command, o);
    if (o.out_path) {
      std::ofstream file(*o.out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw UsageError("cannot open --out file '" + *o.out_path + "'");
      write_report(report, config, o.json, file);
      if (!file) throw UsageError("failed writing --out file '" + *o.out_path + "'");
    } else {
      write_report(report, config, o.json, out);
    }
    if (!verified) {
      err << "verification failed\n";
      return kExitVerification;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace hexdimer::cli
