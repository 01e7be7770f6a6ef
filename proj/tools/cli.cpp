#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "freebrown/brown.hpp"
#include "freebrown/elliptic.hpp"
#include "freebrown/errors.hpp"
#include "freebrown/poly_parser.hpp"
#include "freebrown/rdiag.hpp"
#include "freebrown/rmt.hpp"

namespace freebrown::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- utilities

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class OutputSet {
 public:
  explicit OutputSet(std::string prefix) : prefix_(std::move(prefix)) {}

  /// Writes atomically (temp file + rename) and records the content hash.
  void write(const std::string& suffix, const std::string& bytes) {
    const fs::path path(prefix_ + suffix);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot open " + tmp.string());
      os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
    records_.push_back({path.string(), hex64(fnv1a64(bytes))});
  }

  json manifest_entries() const {
    json out = json::array();
    for (const auto& r : records_) out.push_back({{"path", r.path}, {"fnv1a64", r.hash}});
    return out;
  }

 private:
  struct Record {
    std::string path;
    std::string hash;
  };
  std::string prefix_;
  std::vector<Record> records_;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& tok, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot parse " + what + " from '" + tok + "'");
  }
}

int parse_int(const std::string& tok, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot parse " + what + " from '" + tok + "'");
  }
}

/// "0.2", "0.2+0.1i", "-1i"
cplx parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw DomainError("empty complex literal");
  // split at the last +/- that is not an exponent sign or leading
  int split_at = -1;
  for (int i = static_cast<int>(t.size()) - 1; i > 0; --i) {
    const char c = t[static_cast<std::size_t>(i)];
    if ((c == '+' || c == '-') && t[static_cast<std::size_t>(i - 1)] != 'e' &&
        t[static_cast<std::size_t>(i - 1)] != 'E') {
      split_at = i;
      break;
    }
  }
  auto part = [](const std::string& s) -> std::pair<double, bool> {
    if (s.empty()) throw DomainError("malformed complex literal");
    if (s.back() == 'i') {
      std::string body = s.substr(0, s.size() - 1);
      if (body.empty() || body == "+" || body == "-") body += "1";
      return {parse_double(body, "complex part"), true};
    }
    return {parse_double(s, "complex part"), false};
  };
  if (split_at < 0) {
    const auto [v, imag] = part(t);
    return imag ? cplx(0.0, v) : cplx(v, 0.0);
  }
  const auto [a, a_imag] = part(t.substr(0, static_cast<std::size_t>(split_at)));
  const auto [b, b_imag] = part(t.substr(static_cast<std::size_t>(split_at)));
  if (a_imag == b_imag) throw DomainError("complex literal needs one real and one imaginary part");
  return a_imag ? cplx(b, a) : cplx(a, b);
}

// ------------------------------------------------------- measure descriptors

Measure1D measure_from_inline(const std::string& text, int nodes_real, int nodes_circle) {
  const auto parts = split(text, ':');
  const std::string& kind = parts.front();
  auto arg = [&](std::size_t i, double fallback) {
    return parts.size() > i ? parse_double(parts[i], "measure parameter") : fallback;
  };
  auto int_arg = [&](std::size_t i, int fallback) {
    return parts.size() > i ? parse_int(parts[i], "node count") : fallback;
  };
  if (kind == "semicircle") return Measure1D::semicircle(arg(1, 2.0), int_arg(2, nodes_real));
  if (kind == "free_poisson")
    return Measure1D::free_poisson(arg(1, 1.0), int_arg(2, nodes_real));
  if (kind == "uniform") return Measure1D::uniform(arg(1, 0.0), arg(2, 1.0), int_arg(3, nodes_real));
  if (kind == "arcsine") return Measure1D::arcsine(arg(1, 2.0), int_arg(2, nodes_real));
  if (kind == "quarter_circle")
    return Measure1D::quarter_circle(arg(1, 2.0), int_arg(2, nodes_real));
  if (kind == "haar_unitary") return Measure1D::haar_unitary(int_arg(1, nodes_circle));
  if (kind == "atoms" || kind == "unit_circle_atoms") {
    if (parts.size() < 3 || (parts.size() - 1) % 2 != 0)
      throw DomainError("atoms descriptor needs loc:weight pairs");
    std::vector<Measure1D::Weighted> pts;
    for (std::size_t i = 1; i + 1 < parts.size(); i += 2)
      pts.push_back({parse_double(parts[i], "atom location"),
                     parse_double(parts[i + 1], "atom weight")});
    return Measure1D::atoms(std::move(pts), kind == "atoms" ? SupportKind::RealLine
                                                            : SupportKind::UnitCircleAngle);
  }
  throw DomainError("unknown measure kind '" + kind + "'");
}

Measure1D measure_from_json(const json& j, int nodes_real, int nodes_circle) {
  const std::string kind = j.at("kind").get<std::string>();
  const int nr = j.value("nodes", nodes_real);
  const int nc = j.value("nodes", nodes_circle);
  if (kind == "semicircle") return Measure1D::semicircle(j.value("radius", 2.0), nr);
  if (kind == "free_poisson") return Measure1D::free_poisson(j.value("lambda", 1.0), nr);
  if (kind == "uniform") return Measure1D::uniform(j.value("a", 0.0), j.value("b", 1.0), nr);
  if (kind == "arcsine") return Measure1D::arcsine(j.value("radius", 2.0), nr);
  if (kind == "quarter_circle") return Measure1D::quarter_circle(j.value("radius", 2.0), nr);
  if (kind == "haar_unitary") return Measure1D::haar_unitary(nc);
  if (kind == "atoms") {
    std::vector<Measure1D::Weighted> pts;
    for (const auto& pair : j.at("atoms"))
      pts.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    const bool circle = j.value("support", std::string("real")) == std::string("circle");
    return Measure1D::atoms(std::move(pts),
                            circle ? SupportKind::UnitCircleAngle : SupportKind::RealLine);
  }
  throw DomainError("unknown measure kind '" + kind + "'");
}

VariableModel model_from_measure(const std::string& kind_hint, Measure1D mu) {
  if (mu.support_kind() == SupportKind::UnitCircleAngle) {
    if (kind_hint == "haar_unitary") return VariableModel::haar_unitary(
        static_cast<int>(mu.node_count()));
    return VariableModel::unitary(std::move(mu));
  }
  return VariableModel::selfadjoint(std::move(mu));
}

// --model x1=semicircle:2 entries plus optional JSON file {"x1": {...}, ...}
ModelMap build_models(const std::vector<std::string>& inline_models,
                      const std::string& models_json_path, int nodes_real, int nodes_circle) {
  ModelMap out;
  if (!models_json_path.empty()) {
    std::ifstream is(models_json_path);
    if (!is) throw std::runtime_error("cannot open models file " + models_json_path);
    json j;
    is >> j;
    for (const auto& [key, desc] : j.items()) {
      if (key.size() < 2 || key[0] != 'x')
        throw DomainError("model keys look like 'x1'; got '" + key + "'");
      const int var = parse_int(key.substr(1), "variable index");
      Measure1D mu = measure_from_json(desc, nodes_real, nodes_circle);
      out.emplace(var, model_from_measure(desc.value("kind", std::string()), std::move(mu)));
    }
  }
  for (const auto& item : inline_models) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || item.size() < 4 || item[0] != 'x')
      throw DomainError("model syntax is xJ=kind:params; got '" + item + "'");
    const int var = parse_int(item.substr(1, eq - 1), "variable index");
    const std::string desc = item.substr(eq + 1);
    Measure1D mu = measure_from_inline(desc, nodes_real, nodes_circle);
    out.insert_or_assign(var, model_from_measure(split(desc, ':').front(), std::move(mu)));
  }
  return out;
}

// grid spec reMin:reMax:imMin:imMax:NXxNY
LambdaGrid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 5) throw DomainError("grid syntax is reMin:reMax:imMin:imMax:NXxNY");
  LambdaGrid g;
  g.re_min = parse_double(parts[0], "grid bound");
  g.re_max = parse_double(parts[1], "grid bound");
  g.im_min = parse_double(parts[2], "grid bound");
  g.im_max = parse_double(parts[3], "grid bound");
  const auto dims = split(parts[4], 'x');
  if (dims.size() != 2) throw DomainError("grid node spec is NXxNY");
  g.nx = parse_int(dims[0], "grid nx");
  g.ny = parse_int(dims[1], "grid ny");
  g.validate();
  return g;
}

std::vector<double> parse_schedule(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split(text, ','))
    if (!tok.empty()) out.push_back(parse_double(tok, "epsilon"));
  return out;
}

std::string format_csv_rows(const std::vector<std::vector<double>>& rows,
                            const std::string& header) {
  std::ostringstream os;
  os << header << "\n";
  char buf[64];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      os << buf << (i + 1 == row.size() ? "" : ",");
    }
    os << "\n";
  }
  return os.str();
}

int worker_count_from_env() {
  const char* env = std::getenv("FREEBROWN_WORKERS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

struct SolverFlags {
  double tol = 1e-11;
  double consistency_tol = 1e-9;
  int max_iter = 2000;
  double damping = 0.5;
  bool no_memo = false;
  std::string solver_json;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol", tol, "solver iterate tolerance");
    cmd->add_option("--consistency-tol", consistency_tol, "two-sided residual tolerance");
    cmd->add_option("--max-iter", max_iter, "solver iteration cap");
    cmd->add_option("--damping", damping, "under-relaxation factor");
    cmd->add_flag("--no-memo", no_memo, "disable partial-sum memoization");
    cmd->add_option("--solver-json", solver_json, "JSON file with solver options");
  }

  SolverOptions to_options() const {
    SolverOptions opts;
    opts.tol = tol;
    opts.consistency_tol = consistency_tol;
    opts.max_iter = max_iter;
    opts.damping = damping;
    opts.memoize = !no_memo;
    if (!solver_json.empty()) {
      std::ifstream is(solver_json);
      if (!is) throw std::runtime_error("cannot open solver options " + solver_json);
      json j;
      is >> j;
      opts.tol = j.value("tol", opts.tol);
      opts.consistency_tol = j.value("consistency_tol", opts.consistency_tol);
      opts.max_iter = j.value("max_iter", opts.max_iter);
      opts.damping = j.value("damping", opts.damping);
      opts.memoize = j.value("memoize", opts.memoize);
    }
    return opts;
  }

  json to_json() const {
    const SolverOptions o = to_options();
    return {{"tol", o.tol},
            {"consistency_tol", o.consistency_tol},
            {"max_iter", o.max_iter},
            {"damping", o.damping},
            {"memoize", o.memoize}};
  }
};

void write_manifest(OutputSet& outputs, const std::string& command, const json& config,
                    const json& extra) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config;
  manifest["config_hash"] = hex64(fnv1a64(config.dump()));
  manifest["version"] = "0.1.0";
  for (const auto& [key, value] : extra.items()) manifest[key] = value;
  // the manifest lists every other output with its content hash
  manifest["outputs"] = outputs.manifest_entries();
  outputs.write("_manifest.json", manifest.dump(2) + "\n");
}

// --------------------------------------------------------------- subcommands

struct BrownArgs {
  std::string poly;
  std::vector<std::string> models;
  std::string models_json;
  std::string grid = "-2:2:-2:2:41x41";
  double eps = 1e-3;
  std::string out = "brown";
  double delta_factor = 0.01;
  double max_fail_frac = 0.05;
  int workers = 0;
  int nodes_real = 400;
  int nodes_circle = 512;
  std::string density_method = "wirtinger";
  SolverFlags solver;
};

int run_brown(const BrownArgs& a, std::ostream& err) {
  const NCPolynomial p = parse_polynomial(a.poly);
  const Linearization lin = linearize_polynomial(p);
  const ModelMap models = build_models(a.models, a.models_json, a.nodes_real, a.nodes_circle);
  for (int j = 1; j <= p.variable_count(); ++j) {
    if (!models.count(j))
      throw DomainError("variable x" + std::to_string(j) + " has no --model entry");
  }
  const LambdaGrid grid = parse_grid(a.grid);
  if (!(a.eps > 0.0)) throw DomainError("--eps must be positive");

  GridOptions opts;
  opts.solver = a.solver.to_options();
  opts.delta_factor = a.delta_factor;
  opts.workers = a.workers > 0 ? a.workers : worker_count_from_env();
  opts.max_failure_fraction = 1.0;  // budget enforced below for the exit code
  if (a.density_method == "laplacian")
    opts.method = DensityMethod::LaplacianLogDet;
  else if (a.density_method != "wirtinger")
    throw DomainError("--density-method is wirtinger or laplacian");

  const DensityGrid dg = density_grid(lin, models, grid, a.eps, opts);
  const std::size_t failures = dg.grid.size() - dg.converged_count();

  std::ostringstream csv;
  dg.write_csv(csv);
  OutputSet outputs(a.out);
  outputs.write("_density.csv", csv.str());

  json config{{"command", "brown"},
              {"poly", a.poly},
              {"grid", a.grid},
              {"eps", a.eps},
              {"delta_factor", a.delta_factor},
              {"density_method", a.density_method},
              {"nodes_real", a.nodes_real},
              {"nodes_circle", a.nodes_circle},
              {"solver", a.solver.to_json()},
              {"models", a.models},
              {"models_json", a.models_json}};
  write_manifest(outputs, "brown", config,
                 json{{"nodes_total", dg.grid.size()},
                      {"nodes_failed", failures},
                      {"total_mass", dg.total_mass}});

  err << "brown: " << dg.grid.size() - failures << "/" << dg.grid.size()
      << " nodes converged, total mass " << dg.total_mass << "\n";
  if (static_cast<double>(failures) >
      a.max_fail_frac * static_cast<double>(dg.grid.size())) {
    err << "brown: failure fraction above budget " << a.max_fail_frac << "\n";
    return kSolverFailure;
  }
  return kOk;
}

struct RdiagArgs {
  std::string mu_a2 = "free_poisson:1";
  std::string r_grid = "0:2:201";
  std::string out = "rdiag";
  int nodes_real = 400;
};

int run_rdiag(const RdiagArgs& a, std::ostream& err) {
  const RDiagonalSpec spec(measure_from_inline(a.mu_a2, a.nodes_real, 512));
  const auto parts = split(a.r_grid, ':');
  if (parts.size() != 3) throw DomainError("--r-grid syntax is min:max:n");
  const double r0 = parse_double(parts[0], "r min");
  const double r1 = parse_double(parts[1], "r max");
  const int n = parse_int(parts[2], "r count");
  if (!(r0 >= 0.0 && r1 > r0 && n >= 2)) throw DomainError("invalid --r-grid range");

  const Radii rad = radii(spec);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    const double r = r0 + (r1 - r0) * i / (n - 1);
    const double cdf = radial_cdf(spec, r);
    double dens = 0.0;
    if (r > rad.inner && r < rad.outer && !spec.mu_a2.is_point_mass()) {
      dens = radial_density(spec, r);
    }
    rows.push_back({r, cdf, dens});
  }
  OutputSet outputs(a.out);
  outputs.write("_radial.csv", format_csv_rows(rows, "r,cdf,density"));
  json config{{"command", "rdiag"}, {"mu_a2", a.mu_a2}, {"r_grid", a.r_grid}};
  write_manifest(outputs, "rdiag", config,
                 json{{"inner_radius", rad.inner}, {"outer_radius", rad.outer}});
  err << "rdiag: annulus [" << rad.inner << ", " << rad.outer << "]\n";
  return kOk;
}

struct EllipticArgs {
  double alpha = 1.0;
  double beta = 1.0;
  std::string gamma = "0";
  std::string grid = "-2:2:-2:2:41x41";
  int boundary_points = 512;
  std::string out = "elliptic";
};

int run_elliptic(const EllipticArgs& a, std::ostream& err) {
  EllipticParams p{a.alpha, a.beta, parse_complex(a.gamma)};
  p.validate();
  OutputSet outputs(a.out);

  const bool degenerate = p.degenerate_interval() || p.quasinilpotent_corner();
  json extra{{"degenerate", degenerate}};
  if (p.degenerate_interval()) {
    const auto ends = elliptic_boundary(p, 8);
    std::vector<std::vector<double>> rows;
    for (const cplx& z : ends) rows.push_back({std::arg(z), z.real(), z.imag()});
    outputs.write("_boundary.csv", format_csv_rows(rows, "theta,re,im"));
    err << "elliptic: support degenerates to an interval; boundary lists endpoints\n";
  } else if (p.quasinilpotent_corner()) {
    err << "elliptic: quasinilpotent corner; support is a point, no boundary emitted\n";
  } else {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < a.boundary_points; ++i) {
      const double theta = 2.0 * 3.14159265358979323846 * i / a.boundary_points;
      const double r = std::sqrt(boundary_radius_sq(p, theta));
      rows.push_back({theta, r * std::cos(theta), r * std::sin(theta)});
    }
    outputs.write("_boundary.csv", format_csv_rows(rows, "theta,re,im"));

    const LambdaGrid grid = parse_grid(a.grid);
    std::vector<std::vector<double>> dens_rows;
    for (int iy = 0; iy < grid.ny; ++iy) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        const cplx lam = grid.node(ix, iy);
        dens_rows.push_back({lam.real(), lam.imag(), elliptic_density(p, lam)});
      }
    }
    outputs.write("_density.csv", format_csv_rows(dens_rows, "re_lambda,im_lambda,density"));
    extra["area"] = elliptic_area(p, 4096);
  }

  json config{{"command", "elliptic"}, {"alpha", a.alpha},      {"beta", a.beta},
              {"gamma", a.gamma},      {"grid", a.grid},        {"boundary_points", a.boundary_points}};
  write_manifest(outputs, "elliptic", config, extra);
  return kOk;
}

struct RmtArgs {
  std::string ensemble = "triangular-elliptic";
  double alpha = 1.0;
  double beta = 1.0;
  std::string gamma = "0";
  std::string sv;  // biunitary singular value law
  std::string poly;
  std::vector<std::string> models;
  std::string models_json;
  int n = 200;
  std::uint64_t seed = 1;
  std::string out = "rmt";
  int nodes_real = 400;
  int nodes_circle = 512;
};

int run_rmt(const RmtArgs& a, std::ostream& err) {
  EnsembleSpec spec;
  spec.n = a.n;
  spec.seed = a.seed;
  if (a.ensemble == "triangular-elliptic") {
    EllipticParams p{a.alpha, a.beta, parse_complex(a.gamma)};
    p.validate();
    spec.kind = TriangularEllipticKind{p};
  } else if (a.ensemble == "ginibre") {
    spec.kind = GinibreKind{};
  } else if (a.ensemble == "biunitary") {
    if (a.sv.empty()) throw DomainError("biunitary needs --sv MEASURE");
    spec.kind = BiunitaryKind{measure_from_inline(a.sv, a.nodes_real, a.nodes_circle)};
  } else if (a.ensemble == "polynomial") {
    if (a.poly.empty()) throw DomainError("polynomial ensemble needs --poly");
    PolynomialKind kind;
    kind.poly = parse_polynomial(a.poly);
    kind.models = build_models(a.models, a.models_json, a.nodes_real, a.nodes_circle);
    for (int j = 1; j <= kind.poly.variable_count(); ++j) {
      if (!kind.models.count(j))
        throw DomainError("variable x" + std::to_string(j) + " has no --model entry");
    }
    spec.kind = std::move(kind);
  } else {
    throw DomainError("unknown ensemble '" + a.ensemble + "'");
  }

  const ComplexMatrix m = sample(spec);
  const auto eigs = empirical_spectrum(m);
  std::vector<std::vector<double>> rows;
  rows.reserve(eigs.size());
  for (const cplx& e : eigs) rows.push_back({e.real(), e.imag()});

  OutputSet outputs(a.out);
  outputs.write("_eigs.csv", format_csv_rows(rows, "re,im"));
  json config{{"command", "rmt"}, {"ensemble", a.ensemble}, {"alpha", a.alpha},
              {"beta", a.beta},   {"gamma", a.gamma},       {"sv", a.sv},
              {"poly", a.poly},   {"N", a.n},               {"seed", a.seed}};
  write_manifest(outputs, "rmt", config, json{{"n_eigenvalues", eigs.size()}});
  err << "rmt: " << eigs.size() << " eigenvalues\n";
  return kOk;
}

struct CompareArgs {
  std::string eigs_path;
  std::string pred_path;
  double margin = 0.05;
  std::string out = "compare";
};

std::vector<cplx> read_eigs_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<cplx> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first && line.find("re") == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto cols = split(line, ',');
    if (cols.size() < 2) throw DomainError("eigs CSV needs re,im columns");
    out.push_back({parse_double(cols[0], "re"), parse_double(cols[1], "im")});
  }
  return out;
}

DensityGrid read_density_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(is, header)) throw DomainError("empty density CSV");
  const auto columns = split(header, ',');
  int col_re = -1, col_im = -1, col_density = -1, col_conv = -1;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (columns[static_cast<std::size_t>(i)] == "re_lambda") col_re = i;
    if (columns[static_cast<std::size_t>(i)] == "im_lambda") col_im = i;
    if (columns[static_cast<std::size_t>(i)] == "density") col_density = i;
    if (columns[static_cast<std::size_t>(i)] == "converged") col_conv = i;
  }
  if (col_re < 0 || col_im < 0 || col_density < 0)
    throw DomainError("density CSV needs re_lambda, im_lambda, density columns");

  std::vector<double> res, ims, dens;
  std::vector<char> conv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    res.push_back(parse_double(cols[static_cast<std::size_t>(col_re)], "re_lambda"));
    ims.push_back(parse_double(cols[static_cast<std::size_t>(col_im)], "im_lambda"));
    dens.push_back(parse_double(cols[static_cast<std::size_t>(col_density)], "density"));
    conv.push_back(col_conv >= 0
                       ? static_cast<char>(parse_int(cols[static_cast<std::size_t>(col_conv)],
                                                     "converged") != 0)
                       : 1);
  }
  if (res.size() < 9) throw DomainError("density CSV has too few rows");

  // infer the row-major grid: nx = index where re_lambda wraps around
  std::size_t nx = 0;
  for (std::size_t i = 1; i < res.size(); ++i) {
    if (res[i] < res[i - 1]) {
      nx = i;
      break;
    }
  }
  if (nx == 0 || res.size() % nx != 0)
    throw DomainError("density CSV is not a row-major rectangular grid");
  const std::size_t ny = res.size() / nx;

  DensityGrid dg;
  dg.grid.re_min = res.front();
  dg.grid.re_max = res[nx - 1];
  dg.grid.im_min = ims.front();
  dg.grid.im_max = ims.back();
  dg.grid.nx = static_cast<int>(nx);
  dg.grid.ny = static_cast<int>(ny);
  dg.grid.validate();
  dg.density = std::move(dens);
  dg.converged = std::move(conv);
  dg.g_values.assign(res.size(), 0.0);
  dg.g11_values.assign(res.size(), 0.0);
  return dg;
}

int run_compare(const CompareArgs& a, std::ostream& err) {
  const auto eigs = read_eigs_csv(a.eigs_path);
  const DensityGrid dg = read_density_csv(a.pred_path);
  const CompareReport rep = compare(eigs, dg, a.margin);
  json report{{"l1_histogram", rep.l1_histogram},
              {"frac_inside_support", rep.frac_inside_support},
              {"n_eigenvalues", rep.n_eigenvalues},
              {"n_outside_grid", rep.n_outside_grid},
              {"margin", a.margin}};
  OutputSet outputs(a.out);
  outputs.write("_report.json", report.dump(2) + "\n");
  json config{{"command", "compare"},
              {"eigs", a.eigs_path},
              {"pred", a.pred_path},
              {"margin", a.margin}};
  write_manifest(outputs, "compare", config, json{});
  err << "compare: l1 " << rep.l1_histogram << ", inside " << rep.frac_inside_support << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Spectral distributions of polynomials in free normal variables"};
  app.require_subcommand(1);

  BrownArgs brown_args;
  auto* brown_cmd = app.add_subcommand("brown", "density grid through the general pipeline");
  brown_cmd->add_option("--poly", brown_args.poly, "polynomial text")->required();
  brown_cmd->add_option("--model", brown_args.models, "xJ=kind:params (repeatable)");
  brown_cmd->add_option("--models-json", brown_args.models_json, "JSON file of models");
  brown_cmd->add_option("--grid", brown_args.grid, "reMin:reMax:imMin:imMax:NXxNY");
  brown_cmd->add_option("--eps", brown_args.eps, "regularization epsilon");
  brown_cmd->add_option("--out", brown_args.out, "output path prefix");
  brown_cmd->add_option("--delta-factor", brown_args.delta_factor, "delta = factor * eps");
  brown_cmd->add_option("--max-fail-frac", brown_args.max_fail_frac,
                        "allowed non-converged node fraction");
  brown_cmd->add_option("--workers", brown_args.workers,
                        "worker threads (default FREEBROWN_WORKERS or 1)");
  brown_cmd->add_option("--nodes-real", brown_args.nodes_real, "quadrature nodes, real line");
  brown_cmd->add_option("--nodes-circle", brown_args.nodes_circle, "quadrature nodes, circle");
  brown_cmd->add_option("--density-method", brown_args.density_method,
                        "wirtinger or laplacian");
  brown_args.solver.attach(brown_cmd);

  RdiagArgs rdiag_args;
  auto* rdiag_cmd = app.add_subcommand("rdiag", "closed-form radial profile");
  rdiag_cmd->add_option("--mu-a2", rdiag_args.mu_a2, "measure descriptor for x x^*")
      ->required();
  rdiag_cmd->add_option("--r-grid", rdiag_args.r_grid, "min:max:n");
  rdiag_cmd->add_option("--out", rdiag_args.out, "output path prefix");
  rdiag_cmd->add_option("--nodes-real", rdiag_args.nodes_real, "quadrature nodes");

  EllipticArgs elliptic_args;
  auto* elliptic_cmd = app.add_subcommand("elliptic", "closed-form support and density");
  elliptic_cmd->add_option("--alpha", elliptic_args.alpha, "variance above the diagonal");
  elliptic_cmd->add_option("--beta", elliptic_args.beta, "variance below the diagonal");
  elliptic_cmd->add_option("--gamma", elliptic_args.gamma, "pseudo-covariance (complex)");
  elliptic_cmd->add_option("--grid", elliptic_args.grid, "density grid spec");
  elliptic_cmd->add_option("--boundary-points", elliptic_args.boundary_points,
                           "boundary polyline resolution");
  elliptic_cmd->add_option("--out", elliptic_args.out, "output path prefix");

  RmtArgs rmt_args;
  auto* rmt_cmd = app.add_subcommand("rmt", "sample an ensemble and export eigenvalues");
  rmt_cmd->add_option("--ensemble", rmt_args.ensemble,
                      "triangular-elliptic | ginibre | biunitary | polynomial");
  rmt_cmd->add_option("--alpha", rmt_args.alpha, "triangular-elliptic alpha");
  rmt_cmd->add_option("--beta", rmt_args.beta, "triangular-elliptic beta");
  rmt_cmd->add_option("--gamma", rmt_args.gamma, "triangular-elliptic gamma");
  rmt_cmd->add_option("--sv", rmt_args.sv, "biunitary singular value law");
  rmt_cmd->add_option("--poly", rmt_args.poly, "polynomial ensemble text");
  rmt_cmd->add_option("--model", rmt_args.models, "xJ=kind:params (repeatable)");
  rmt_cmd->add_option("--models-json", rmt_args.models_json, "JSON file of models");
  rmt_cmd->add_option("--N", rmt_args.n, "matrix size");
  rmt_cmd->add_option("--seed", rmt_args.seed, "RNG seed");
  rmt_cmd->add_option("--out", rmt_args.out, "output path prefix");

  CompareArgs compare_args;
  auto* compare_cmd = app.add_subcommand("compare", "empirical spectrum vs predicted grid");
  compare_cmd->add_option("--eigs", compare_args.eigs_path, "eigenvalues CSV")->required();
  compare_cmd->add_option("--pred", compare_args.pred_path, "predicted density CSV")
      ->required();
  compare_cmd->add_option("--margin", compare_args.margin, "support dilation margin");
  compare_cmd->add_option("--out", compare_args.out, "output path prefix");

  // CLI11 wants argc/argv in reverse
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends
      err << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }

  try {
    if (brown_cmd->parsed()) return run_brown(brown_args, err);
    if (rdiag_cmd->parsed()) return run_rdiag(rdiag_args, err);
    if (elliptic_cmd->parsed()) return run_elliptic(elliptic_args, err);
    if (rmt_cmd->parsed()) return run_rmt(rmt_args, err);
    if (compare_cmd->parsed()) return run_compare(compare_args, err);
    err << "error: no subcommand\n";
    return kValidationError;
  } catch (const ParseError& e) {
    // caret diagnostics for the polynomial grammar
    std::string poly = brown_cmd->parsed() ? brown_args.poly : rmt_args.poly;
    err << "error: " << e.what() << "\n";
    if (!poly.empty() && e.position() <= poly.size()) {
      err << "  " << poly << "\n  " << std::string(e.position(), ' ') << "^\n";
    }
    return kValidationError;
  } catch (const NoConvergence& e) {
    err << "error: solver did not converge: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace freebrown::cli
