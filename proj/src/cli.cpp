#include "orthograph/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orthograph/report.hpp"

namespace orthograph::cli {

namespace {

namespace fs = std::filesystem;

PointClass parse_epsilon(const std::string& text) {
  if (text == "square") return PointClass::Square;
  if (text == "nonsquare") return PointClass::Nonsquare;
  throw UsageError("--epsilon must be 'square' or 'nonsquare'");
}

Field make_field(const CliConfig& c) {
  try {
    return Field::of_order(c.q);
  } catch (const FieldError& e) {
    throw UsageError(std::string("--q ") + std::to_string(c.q) + ": " + e.what());
  }
}

BuildOptions build_options(const CliConfig& c) {
  return {.vertex_cap = c.vertex_cap ? c.vertex_cap : kDefaultVertexCap, .threads = c.threads.value_or(1)};
}

Graph build_graph(const CliConfig& c, const QuadraticSpace& space) {
  const auto options = build_options(c);
  try {
    if (c.family == "gamma") return build_gamma(space, parse_epsilon(c.epsilon), options);
    if (c.family == "gamma-prime") return build_gamma_prime(space, options);
    return build_ak(space.field(), c.k, options);
  } catch (const CapExceeded& e) {
    throw UsageError(e.what());
  }
}

std::size_t clique_free_order(const CliConfig& c) {
  if (c.family == "ak") return c.k + 1;
  if (c.family == "gamma" && c.epsilon == "nonsquare" && c.k % 2 == 1) return c.k + 1;
  return c.k;
}

std::string graph_slug(const CliConfig& c) {
  std::string slug = c.family + "_k" + std::to_string(c.k) + "_q" + std::to_string(c.q);
  if (c.family == "gamma") slug += "_" + c.epsilon;
  return slug;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

void print_stats(std::ostream& out, const Graph& g) {
  const auto s = graph_stats(g);
  out << describe(g.meta()) << ": " << s.n << " vertices, " << s.edge_count << " edges";
  if (s.loop_count) out << ", " << s.loop_count << " loops";
  if (s.n) {
    if (s.is_regular) {
      out << ", " << s.d << "-regular";
    } else {
      out << ", degrees " << s.degree_min << ".." << s.degree_max;
    }
  }
  out << '\n';
}

int cmd_generate(const CliConfig& c, std::ostream& out) {
  const Field field = make_field(c);
  const QuadraticSpace space(field, c.k);
  const Graph g = build_graph(c, space);

  std::ostringstream body;
  if (c.format == "dimacs") {
    write_dimacs(body, g);
  } else {
    write_edge_list(body, g);
  }
  fs::path path = c.output;
  if (path.empty()) path = fs::path(output_directory("")) / (graph_slug(c) + (c.format == "dimacs" ? ".dimacs" : ".edges"));
  write_file(path, body.str());
  print_stats(out, g);
  out << "wrote " << path.string() << '\n';
  return kExitPass;
}

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string record;
};

CheckOutcome check_clique(const CliConfig& c, const Graph& g, std::ostream& out) {
  const std::size_t order = clique_free_order(c);
  CliqueOptions options{.cutoff = std::nullopt,
                        .time_budget = std::chrono::milliseconds(c.time_budget_ms),
                        .threads = c.threads.value_or(1)};
  CheckOutcome outcome;
  outcome.name = "clique";
  try {
    const auto absence = verify_k_free(g, order, options);
    outcome.passed = absence.mode == CertificateMode::UpperBoundProof && check_certificate(g, absence);
    outcome.record = to_record(g.meta(), absence);
    out << "K_" << order << (outcome.passed ? " absent" : " present") << " (" << absence.nodes << " nodes)\n";
    if (order >= 2) {
      const auto lower = verify_k_free(g, order - 1, options);
      outcome.record += '\n' + to_record(g.meta(), lower);
      out << "K_" << order - 1
          << (lower.mode == CertificateMode::WitnessFound ? " present, witness" : " absent") ;
      for (auto v : lower.witness) out << ' ' << v;
      out << '\n';
    }
  } catch (const CliqueTimeout& e) {
    throw UsageError("clique search exceeded the time budget (lower bound " + std::to_string(e.lower_bound()) + ")");
  }
  return outcome;
}

CheckOutcome check_spectral(const CliConfig& c, const Graph& g, std::ostream& out) {
  CheckOutcome outcome;
  outcome.name = "spectral";
  Spectrum spectrum;
  try {
    spectrum = eigenvalues(g, EigenOptions{.cap = c.eigen_cap ? c.eigen_cap : kDefaultEigenCap});
  } catch (const SpectralError& e) {
    throw UsageError(e.what());
  }
  const auto report = pseudorandomness_report(g, spectrum);
  outcome.passed = report.passes;
  std::ostringstream record;
  record << "[spectral-report]\n" << spectral_csv_header() << '\n' << spectral_csv_row(g.meta(), report) << '\n';
  if (c.family == "gamma-prime") {
    const bool matches = gamma_prime_spectrum_matches(spectrum.values, c.k, c.q);
    outcome.passed = outcome.passed && matches;
    record << "spectrum_matches = " << (matches ? "true" : "false") << '\n';
  }
  outcome.record = record.str();
  char line[160];
  std::snprintf(line, sizeof line, "lambda = %.9f, bound = %.9f, residual = %.3g\n", report.lambda, report.bound,
                spectrum.residual);
  out << line;
  return outcome;
}

CheckOutcome check_identity(const CliConfig& c, const Graph& g, std::ostream& out) {
  CheckOutcome outcome;
  outcome.name = "identity";
  const auto check = verify_gamma_prime_identity(
      g, IdentityOptions{.full_check_cap = c.identity_cap ? c.identity_cap : kDefaultIdentityFullCap,
                         .random_vectors = 32,
                         .seed = c.seed ? c.seed : kIdentitySeed});
  outcome.passed = check.exact_pass;
  std::ostringstream record;
  record << "[identity-check]\nm = " << check.m << "\ndelta = " << check.delta << "\nmu = " << check.mu
         << "\nmode = " << (check.mode == IdentityCheck::Mode::Full ? "full" : "randomized")
         << "\nexact_pass = " << (check.exact_pass ? "true" : "false") << '\n';
  outcome.record = record.str();
  out << "A^2 = " << check.mu << "J + " << check.delta - check.mu << "I: "
      << (check.exact_pass ? "holds" : "fails") << " ("
      << (check.mode == IdentityCheck::Mode::Full ? "full" : "randomized") << " check, m = " << check.m << ")\n";
  return outcome;
}

CheckOutcome check_transitivity_cmd(const CliConfig& c, const QuadraticSpace& space, const Graph& g,
                                    std::ostream& out) {
  CheckOutcome outcome;
  outcome.name = "transitivity";
  const auto check = check_transitivity(
      space, g, TransitivityOptions{.exhaustive_limit = 200, .samples = c.samples, .seed = c.seed ? c.seed : kIdentitySeed});
  outcome.passed = check.passed();
  std::ostringstream record;
  record << "[transitivity-check]\npairs = " << check.pairs << "\nexhaustive = " << (check.exhaustive ? "true" : "false")
         << "\nfailures = " << check.failures << '\n';
  outcome.record = record.str();
  out << "transitivity: " << check.pairs << (check.exhaustive ? " pairs (all)" : " sampled pairs") << ", "
      << check.failures << " failures\n";
  return outcome;
}

CheckOutcome check_neighborhood(const CliConfig& c, const QuadraticSpace& space, const Graph& g, std::ostream& out) {
  CheckOutcome outcome;
  outcome.name = "neighborhood";
  const Graph lower = build_gamma(space.restricted(c.k - 1), PointClass::Square, build_options(c));
  const std::size_t centers = std::min(g.size(), c.max_centers.value_or(g.size()));
  std::size_t bad = 0;
  std::size_t mismatched = 0;
  for (std::size_t v = 0; v < centers; ++v) {
    const auto check = check_neighborhood_map(g, neighborhood_isomorphism(space, g, v, lower), lower);
    if (!check.exact()) ++bad;
    mismatched += check.mismatched_bits;
  }
  outcome.passed = bad == 0;
  std::ostringstream record;
  record << "[neighborhood-check]\ncenters = " << centers << "\nlower = " << describe(lower.meta())
         << "\nfailed_centers = " << bad << "\nmismatched_bits = " << mismatched << '\n';
  outcome.record = record.str();
  out << "neighborhoods: " << centers << " centers mapped onto " << describe(lower.meta()) << ", " << bad
      << " failures\n";
  return outcome;
}

int cmd_verify(const CliConfig& c, std::ostream& out) {
  const Field field = make_field(c);
  const QuadraticSpace space(field, c.k);
  const Graph g = build_graph(c, space);
  print_stats(out, g);

  std::vector<CheckOutcome> outcomes;
  for (const auto& check : c.checks) {
    if (check == "clique") outcomes.push_back(check_clique(c, g, out));
    if (check == "spectral") outcomes.push_back(check_spectral(c, g, out));
    if (check == "identity") outcomes.push_back(check_identity(c, g, out));
    if (check == "transitivity") outcomes.push_back(check_transitivity_cmd(c, space, g, out));
    if (check == "neighborhood") outcomes.push_back(check_neighborhood(c, space, g, out));
  }

  bool all = true;
  std::string bundle;
  for (const auto& o : outcomes) {
    out << o.name << ": " << (o.passed ? "PASS" : "FAIL") << '\n';
    all = all && o.passed;
    bundle += (bundle.empty() ? "" : "\n") + o.record;
  }
  if (!c.output.empty() || std::getenv(kOutputDirEnv)) {
    const fs::path path = fs::path(output_directory(c.output)) / (graph_slug(c) + ".certificates.txt");
    write_file(path, bundle);
    out << "wrote " << path.string() << '\n';
  }
  return all ? kExitPass : kExitCertificateFailure;
}

int cmd_grid(const CliConfig& c, std::ostream& out, std::ostream& err) {
  GridConfig config;
  try {
    config = c.config_path.empty() ? parse_grid_config(default_grid_config_text()) : load_grid_config(c.config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (c.threads) config.threads = *c.threads;
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_grid(config);
  const fs::path dir = output_directory(c.output.empty() ? std::string() : c.output);
  write_grid_outputs(dir, results);
  out << grid_summary(results);
  out << "wrote " << (dir / "grid.csv").string() << '\n';
  if (c.verbose) {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& r : results) {
      err << row_slug(r) << ": build " << r.times.build << " s, clique " << r.times.clique << " s, spectral "
          << r.times.spectral << " s, identity " << r.times.identity << " s, transitivity " << r.times.transitivity
          << " s\n";
    }
    err << "grid finished in " << elapsed << " s\n";
  }
  return kExitPass;
}

int cmd_census(const CliConfig& c, std::ostream& out) {
  const Field field = make_field(c);
  const QuadraticSpace space(field, c.k);
  const auto census = space.census();
  out << "k = " << c.k << ", q = " << c.q << ", xi = " << field.format(space.xi()) << '\n';
  out << "points " << census.total() << '\n';
  out << "singular " << census.singular << '\n';
  out << "square " << census.square << '\n';
  out << "nonsquare " << census.nonsquare << '\n';
  return kExitPass;
}

int cmd_witness(const CliConfig& c, std::ostream& out) {
  const Field field = make_field(c);
  const QuadraticSpace space(field, c.k);
  ProjectivePoint x;
  ProjectivePoint y;
  try {
    x = parse_point(space, c.from);
    y = parse_point(space, c.to);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad point: ") + e.what());
  }
  IsometryWitness w{FieldMatrix(field, c.k, c.k), x, y};
  try {
    w = transitivity_witness(space, x, y);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool iso = is_isometry(space, w.matrix);
  const auto image = space.normalize(w.matrix.apply(x.coords));
  const bool maps = image && image->index == y.index;
  out << "source " << format_point(field, x) << " (" << to_string(space.classify(x)) << ")\n";
  out << "target " << format_point(field, y) << " (" << to_string(space.classify(y)) << ")\n";
  out << "A =\n" << format_matrix(w.matrix);
  out << "A^T B A = B: " << (iso ? "yes" : "no") << '\n';
  out << "A x spans target: " << (maps ? "yes" : "no") << '\n';
  return iso && maps ? kExitPass : kExitCertificateFailure;
}

}  // namespace

void validate(const CliConfig& c) {
  const auto& s = c.subcommand;
  if (s == "grid") return;
  if (c.k < 2) throw UsageError("--k must be at least 2");
  if (c.q % 2 == 0) throw UsageError("--q must be an odd prime power (got " + std::to_string(c.q) + ")");
  (void)make_field(c);
  if (s == "census" || s == "witness") return;

  if (c.family != "gamma" && c.family != "gamma-prime" && c.family != "ak") {
    throw UsageError("--family must be gamma, gamma-prime or ak");
  }
  if (c.family == "gamma") parse_epsilon(c.epsilon);
  if (s == "generate") {
    if (c.format != "edgelist" && c.format != "dimacs") throw UsageError("--format must be edgelist or dimacs");
    return;
  }
  if (c.checks.empty()) throw UsageError("--checks needs at least one certifier");
  for (const auto& check : c.checks) {
    if (check == "clique") {
      if (c.family == "gamma-prime") throw UsageError("the clique check applies to gamma and ak graphs");
    } else if (check == "spectral") {
      if (c.family == "ak") throw UsageError("the spectral check applies to gamma and gamma-prime graphs");
    } else if (check == "identity") {
      if (c.family != "gamma-prime") throw UsageError("the identity check applies to gamma-prime graphs");
    } else if (check == "transitivity") {
      if (c.family != "gamma") throw UsageError("the transitivity check applies to gamma graphs");
    } else if (check == "neighborhood") {
      if (c.family != "gamma" || c.epsilon != "square") {
        throw UsageError("the neighborhood check applies to gamma graphs with --epsilon square");
      }
      if (c.k < 3) throw UsageError("the neighborhood check needs --k 3 or more");
    } else {
      throw UsageError("unknown check '" + check + "' (clique, spectral, identity, transitivity, neighborhood)");
    }
  }
}

std::string output_directory(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return ".";
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonality graphs of quadratic forms over finite fields: build and certify."};
  app.require_subcommand(1);
  CliConfig c;
  std::uint64_t threads = 0;

  auto add_space = [&](CLI::App* sub) {
    sub->add_option("--k", c.k, "Dimension of the vector space")->required();
    sub->add_option("--q", c.q, "Field order (odd prime power)")->required();
  };
  auto add_graph = [&](CLI::App* sub) {
    add_space(sub);
    sub->add_option("--family", c.family, "gamma, gamma-prime or ak")->capture_default_str();
    sub->add_option("--epsilon", c.epsilon, "Point class for gamma: square or nonsquare")->capture_default_str();
    sub->add_option("--vertex-cap", c.vertex_cap, "Largest vertex count to build");
    sub->add_option("--threads", threads, "Worker threads");
  };

  auto* generate = app.add_subcommand("generate", "Build a graph and write it to a file");
  add_graph(generate);
  generate->add_option("--format", c.format, "edgelist or dimacs")->capture_default_str();
  generate->add_option("--output", c.output, "Output file (default: <dir>/<graph>.edges)");

  auto* verify = app.add_subcommand("verify", "Run certifiers on one graph");
  add_graph(verify);
  verify->add_option("--checks", c.checks, "clique,spectral,identity,transitivity,neighborhood")
      ->delimiter(',')
      ->required();
  verify->add_option("--output", c.output, "Directory for the certificate file");
  verify->add_option("--eigen-cap", c.eigen_cap, "Largest vertex count for the eigensolver");
  verify->add_option("--identity-cap", c.identity_cap, "Largest vertex count for the full identity check");
  verify->add_option("--time-budget", c.time_budget_ms, "Clique search budget in milliseconds");
  verify->add_option("--samples", c.samples, "Random pairs for transitivity above 200 vertices");
  verify->add_option("--max-centers", c.max_centers, "Check only the first N neighborhoods");
  verify->add_option("--seed", c.seed, "Seed for randomized checks");

  auto* grid = app.add_subcommand("grid", "Run a verification grid and write CSV, summary and certificates");
  grid->add_option("--config", c.config_path, "Grid config file (default: built-in grid)");
  grid->add_option("--output", c.output, "Output directory");
  grid->add_option("--threads", threads, "Worker threads (overrides the config)");
  grid->add_flag("--verbose,-v", c.verbose, "Print per-phase timings to stderr");
  bool print_default = false;
  grid->add_flag("--print-default-config", print_default, "Print the built-in config and exit");

  auto* census = app.add_subcommand("census", "Count singular, square and non-square points");
  add_space(census);

  auto* witness = app.add_subcommand("witness", "Print an isometry mapping one point to another");
  add_space(witness);
  witness->add_option("--from", c.from, "Source point, e.g. 0:1")->required();
  witness->add_option("--to", c.to, "Target point, e.g. 1:2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (threads) c.threads = static_cast<unsigned>(threads);
  c.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (c.subcommand == "grid" && print_default) {
      out << default_grid_config_text();
      return kExitPass;
    }
    validate(c);
    if (c.subcommand == "generate") return cmd_generate(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out);
    if (c.subcommand == "grid") return cmd_grid(c, out, err);
    if (c.subcommand == "census") return cmd_census(c, out);
    return cmd_witness(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("orthograph");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace orthograph::cli
