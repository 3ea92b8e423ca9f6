#include "hilbert/cli.hpp"

#include <CLI11.hpp>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hilbert/error.hpp"
#include "hilbert/euler.hpp"
#include "hilbert/integrand.hpp"
#include "hilbert/integrator.hpp"
#include "hilbert/json_io.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/reduction.hpp"
#include "hilbert/verify.hpp"

namespace hilbert::cli {

namespace {

struct RunConfig {
  std::string subcommand;
  int k = 0;
  int m = 0;
  double tol = kDefaultTolerance;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 1'000'000;
  std::uint64_t chunk = 1u << 14;
  unsigned threads = 0;
  std::string input = "-";
  std::string output = "-";
  std::string format = "json";

  std::string integrand = "gaussian";
  std::string method = "all";
  std::string scheme = "auto";
  int nodes = 8;
  bool timing = true;
  std::string euler_from = "angles";
  bool decompose = false;
  bool suite = false;
  bool inject_fault = false;
};

// Usage problems found after CLI11 has parsed the flags.
[[noreturn]] void usage(const std::string& message) { throw Error(ErrorCode::kInvalidInput, message); }

std::uint64_t default_seed() {
  const char* env = std::getenv("HILBERT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  errno = 0;
  const unsigned long long s = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || *env == '-') usage("HILBERT_SEED must be an unsigned 64-bit integer");
  return s;
}

void require_coregular(int k, int m) {
  if (k < 1 || m < 1) usage("k and m must be positive (got k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  if (k > m) {
    throw Error(ErrorCode::kNotCoregular, "coregularity bound violated: 1 <= k <= m required (got k=" +
                                              std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
}

Json read_input(const RunConfig& cfg, std::istream& in) {
  std::string text;
  if (cfg.input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(cfg.input);
    if (!f) usage("cannot open input file '" + cfg.input + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    usage(std::string("malformed JSON input: ") + e.what());
  }
}

void require_json_format(const RunConfig& cfg) {
  if (cfg.format != "json") usage("subcommand '" + cfg.subcommand + "' only writes JSON");
}

std::string run_density(const RunConfig& cfg, std::istream& in) {
  const GramMatrix g = gram_matrix_from_json(read_input(cfg, in));
  const int k = cfg.k == 0 ? g.k() : cfg.k;
  if (k != g.k()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "--k " + std::to_string(k) + " does not match the input (k=" + std::to_string(g.k()) + ")");
  }
  require_coregular(k, cfg.m);
  const DensityValue d = hilbert_density(g, k, cfg.m, cfg.tol);
  if (cfg.format == "csv") {
    const auto cell = [](double x) {
      if (std::isnan(x)) return std::string("nan");
      return std::isfinite(x) ? format_double(x) : std::string(x > 0 ? "inf" : "-inf");
    };
    return "value,log_value,singular\n" + cell(d.value) + "," + cell(d.log_value) + "," +
           (d.singular ? "true" : "false") + "\n";
  }
  return format_json(to_json(d)) + "\n";
}

std::string run_volumes(const RunConfig& cfg) {
  if (cfg.m < 1) usage("--m must be positive");
  if (cfg.k != 0) require_coregular(cfg.k, cfg.m);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "quantity,index,value\n";
    for (int j = 0; j < cfg.m; ++j) os << "sphere," << j << ',' << format_double(sphere_volume(j)) << '\n';
    os << "orthogonal_group," << cfg.m << ',' << format_double(orthogonal_group_volume(cfg.m)) << '\n';
    if (cfg.k != 0) os << "stiefel," << cfg.k << ',' << format_double(stiefel_volume(cfg.m, cfg.k)) << '\n';
    return os.str();
  }
  Json spheres = Json::array();
  for (int j = 0; j < cfg.m; ++j) spheres.push_back({{"n", j}, {"volume", sphere_volume(j)}});
  Json j = {{"m", cfg.m}, {"spheres", spheres}, {"orthogonal_group", orthogonal_group_volume(cfg.m)}};
  if (cfg.k != 0) j["stiefel"] = {{"k", cfg.k}, {"volume", stiefel_volume(cfg.m, cfg.k)}};
  return format_json(j) + "\n";
}

std::string run_reduce(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const VectorTuple v = vector_tuple_from_json(read_input(cfg, in));
  require_coregular(v.k(), v.m());
  const Reduction red = reduce(v);
  const Json j = {{"w", to_json(red.w)},
                  {"schedule", to_json(red.schedule)},
                  {"rotation", to_json(red.r)},
                  {"gram", to_json(gram(v))}};
  return format_json(j) + "\n";
}

std::string run_lift(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const GramMatrix g = gram_matrix_from_json(read_input(cfg, in));
  require_coregular(g.k(), cfg.m);
  const VectorTuple v = lift(g, cfg.m, cfg.tol);
  const TriangularFactor w = semidefinite_cholesky(g, cfg.tol).with_ambient(cfg.m);
  return format_json(Json{{"v", to_json(v)}, {"w", to_json(w)}}) + "\n";
}

std::string run_euler(const RunConfig& cfg, std::istream& in) {
  require_json_format(cfg);
  const Json input = read_input(cfg, in);
  if (cfg.decompose && cfg.euler_from != "matrix") usage("--decompose needs --from matrix");
  if (cfg.euler_from == "matrix" && cfg.decompose) {
    const Matrix a = matrix_from_json(input);
    const auto factors = decompose_rotation(a);
    Json list = Json::array();
    for (const auto& f : factors) list.push_back(to_json(f));
    return format_json(Json{{"factors", list}, {"rotation", to_json(compose_rotation(factors))}}) + "\n";
  }
  EulerAngles angles;
  if (cfg.euler_from == "angles") {
    angles = euler_angles_from_json(input);
  } else if (cfg.euler_from == "vector") {
    if (!input.is_array()) usage("--from vector expects a JSON array of numbers");
    std::vector<double> v;
    for (const auto& x : input) {
      if (!x.is_number()) usage("--from vector expects a JSON array of numbers");
      v.push_back(x.get<double>());
    }
    angles = angles_from_unit_vector(v);
  } else {
    angles = angles_from_rotation(matrix_from_json(input));
  }
  const Json j = {{"angles", to_json(angles)},
                  {"vector", vector_from_angles(angles)},
                  {"rotation", to_json(rotation_from_angles(angles))}};
  return format_json(j) + "\n";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "quadrature") return Scheme::kQuadrature;
  if (s == "mc") return Scheme::kMonteCarlo;
  return Scheme::kAutomatic;
}

std::string run_integrate(const RunConfig& cfg) {
  require_coregular(cfg.k, cfg.m);
  const InvariantIntegrand g = resolve_integrand(cfg.integrand);
  SamplerConfig sampler;
  sampler.samples = cfg.samples;
  sampler.seed = cfg.seed;
  sampler.chunk_size = cfg.chunk;
  sampler.threads = cfg.threads;
  DomainOptions options;
  options.scheme = parse_scheme(cfg.scheme);
  options.nodes = cfg.nodes;
  options.sampler = sampler;

  const auto start = std::chrono::steady_clock::now();
  std::vector<IntegralEstimate> estimates;
  std::optional<ConsistencyReport> report;
  if (cfg.method == "ambient") {
    estimates.push_back(integrate_ambient_mc(g, cfg.k, cfg.m, sampler));
  } else if (cfg.method == "domain-w") {
    estimates.push_back(integrate_domain_w(g, cfg.k, cfg.m, options));
  } else if (cfg.method == "orbit-u") {
    estimates.push_back(integrate_orbit_u(g, cfg.k, cfg.m, options));
  } else {
    MethodBudgets budgets;
    budgets.sampler = sampler;
    budgets.quadrature_nodes = cfg.nodes;
    report = compare_methods(g, cfg.k, cfg.m, budgets);
    for (const auto& row : report->rows) estimates.push_back(row.estimate);
  }
  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "method,value,std_error,samples" << (cfg.timing ? ",elapsed_ms" : "") << '\n';
    for (const auto& e : estimates) {
      os << to_string(e.method) << ',' << format_double(e.value) << ',' << format_double(e.std_error) << ','
         << e.samples_or_nodes;
      if (cfg.timing) os << ',' << format_double(elapsed_ms);
      os << '\n';
    }
    return os.str();
  }
  Json j;
  if (!report) {
    j = to_json(estimates.front());
  } else {
    Json rows = Json::array();
    for (const auto& row : report->rows) {
      Json r = to_json(row.estimate);
      r["z_max"] = row.z_max;
      r["pass"] = row.pass;
      rows.push_back(std::move(r));
    }
    j = {{"integrand", g.name},
         {"k", cfg.k},
         {"m", cfg.m},
         {"exact", report->exact ? Json(*report->exact) : Json(nullptr)},
         {"results", std::move(rows)},
         {"pass", report->pass}};
  }
  if (cfg.timing) j["elapsed_ms"] = elapsed_ms;
  return format_json(j) + "\n";
}

std::string run_verify(const RunConfig& cfg, bool& all_pass) {
  SuiteOptions options;
  options.samples = cfg.samples;
  options.seed = cfg.seed;
  options.threads = cfg.threads;
  options.fault = cfg.inject_fault ? Fault::kFlipTwoPower : Fault::kNone;
  all_pass = true;
  if (cfg.suite) {
    const auto rows = run_suite(options);
    for (const auto& r : rows) all_pass = all_pass && r.pass;
    if (cfg.format == "json") {
      Json list = Json::array();
      for (const auto& r : rows) {
        list.push_back({{"group", r.group},
                        {"check", r.name},
                        {"measured", r.measured},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass},
                        {"detail", r.detail}});
      }
      return format_json(list) + "\n";
    }
    return suite_csv(rows);
  }
  const auto reports = consistency_table(options);
  for (const auto& r : reports) all_pass = all_pass && r.pass;
  if (cfg.format == "json") {
    Json list = Json::array();
    for (const auto& r : reports) {
      for (const auto& row : r.rows) {
        Json e = to_json(row.estimate);
        e["integrand"] = r.integrand;
        e["k"] = r.k;
        e["m"] = r.m;
        e["z_max"] = row.z_max;
        e["pass"] = row.pass;
        list.push_back(std::move(e));
      }
    }
    return format_json(list) + "\n";
  }
  return consistency_csv(reports);
}

void report_error(std::ostream& err, const std::string& code, const std::string& message, const RunConfig& cfg) {
  Json context = {{"subcommand", cfg.subcommand}};
  if (cfg.k != 0) context["k"] = cfg.k;
  if (cfg.m != 0) context["m"] = cfg.m;
  err << format_json(Json{{"code", code}, {"message", message}, {"context", context}}, -1) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Integration of O(m)-invariant functions through the Gram-matrix orbit space"};
  app.name("hilbert");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--tol", cfg.tol, "Relative tolerance")->capture_default_str();
  app.add_option("--input", cfg.input, "Input file, - for stdin")->capture_default_str();
  app.add_option("--output", cfg.output, "Output file, - for stdout")->capture_default_str();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* density = app.add_subcommand("density", "Hilbert-measure density of a GramMatrix (JSON input)");
  density->add_option("--k", cfg.k, "Number of vectors (defaults to the input size)");
  density->add_option("--m", cfg.m, "Ambient dimension")->required();

  auto* volumes = app.add_subcommand("volumes", "Sphere, orthogonal-group and Stiefel volumes");
  volumes->add_option("--m", cfg.m, "Ambient dimension")->required();
  volumes->add_option("--k", cfg.k, "Frame size for the Stiefel volume");

  app.add_subcommand("reduce", "Fundamental-domain representative of a VectorTuple (JSON input)");

  auto* lift = app.add_subcommand("lift", "Configuration with a given GramMatrix (JSON input)");
  lift->add_option("--m", cfg.m, "Ambient dimension")->required();

  auto* euler = app.add_subcommand("euler", "Euler-angle conversions (JSON input)");
  euler->add_option("--from", cfg.euler_from, "Input kind")
      ->check(CLI::IsMember({"angles", "vector", "matrix"}))
      ->capture_default_str();
  euler->add_flag("--decompose", cfg.decompose, "Factor a general rotation into nested frames");

  auto* integrate = app.add_subcommand("integrate", "Integrate a registered invariant function");
  integrate->add_option("--k", cfg.k, "Number of vectors")->required();
  integrate->add_option("--m", cfg.m, "Ambient dimension")->required();
  integrate->add_option("--integrand", cfg.integrand, "Registry name or poly:<expr>")->capture_default_str();
  integrate->add_option("--method", cfg.method, "Integration route")
      ->check(CLI::IsMember({"ambient", "domain-w", "orbit-u", "all"}))
      ->capture_default_str();
  integrate->add_option("--scheme", cfg.scheme, "Scheme for domain-w and orbit-u")
      ->check(CLI::IsMember({"auto", "quadrature", "mc"}))
      ->capture_default_str();
  integrate->add_option("--nodes", cfg.nodes, "Quadrature nodes per dimension")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  integrate->add_flag("!--no-timing", cfg.timing, "Omit elapsed_ms");

  auto* verify = app.add_subcommand("verify", "Cross-method consistency table or the full check battery (CSV)");
  verify->add_flag("--suite", cfg.suite, "Run the full battery, one row per check");
  verify->add_flag("--inject-fault", cfg.inject_fault, "Corrupt the 2^k constant of orbit-u (negative control)");

  for (auto* sub : {integrate, verify}) {
    sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::Range(2ULL, 1ULL << 40));
    sub->add_option("--seed", cfg.seed, "Seed (default: HILBERT_SEED or 20240607)");
    sub->add_option("--threads", cfg.threads, "Worker threads, 0 = hardware concurrency");
  }
  integrate->add_option("--chunk", cfg.chunk, "Samples per chunk")->check(CLI::Range(1ULL, 1ULL << 32));

  std::vector<std::string> argv_storage{"hilbert"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    cfg.seed = default_seed();
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what(), cfg);
    return kExitUsage;
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what(), cfg);
    return kExitUsage;
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  if (app.got_subcommand("verify") && app.count("--format") == 0) cfg.format = "csv";

  int status = kExitOk;
  std::string text;
  try {
    if (cfg.subcommand == "density") {
      text = run_density(cfg, in);
    } else if (cfg.subcommand == "volumes") {
      text = run_volumes(cfg);
    } else if (cfg.subcommand == "reduce") {
      text = run_reduce(cfg, in);
    } else if (cfg.subcommand == "lift") {
      text = run_lift(cfg, in);
    } else if (cfg.subcommand == "euler") {
      text = run_euler(cfg, in);
    } else if (cfg.subcommand == "integrate") {
      text = run_integrate(cfg);
    } else {
      bool pass = true;
      text = run_verify(cfg, pass);
      if (!pass) status = kExitNumerical;
    }
  } catch (const Error& e) {
    report_error(err, std::string(to_string(e.code())), e.what(), cfg);
    return is_numerical(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what(), cfg);
    return kExitNumerical;
  }

  if (cfg.output == "-") {
    out << text;
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      report_error(err, "InvalidInput", "cannot open output file '" + cfg.output + "'", cfg);
      return kExitUsage;
    }
    f << text;
  }
  if (status != kExitOk) {
    report_error(err, "CheckFailed", "one or more verification rows failed", cfg);
  }
  return status;
}

}  // namespace hilbert::cli
