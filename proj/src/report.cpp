#include "orthograph/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "orthograph/parallel.hpp"

namespace orthograph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& text, std::size_t line, const std::string& key) {
  std::string_view digits = text;
  int base = 10;
  if (digits.starts_with("0x") || digits.starts_with("0X")) {
    digits.remove_prefix(2);
    base = 16;
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ConfigError(line, "'" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::string fixed(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

template <class T, class F>
std::string optional_field(const std::optional<T>& value, F&& render) {
  return value ? render(*value) : std::string("-");
}

bool family_allows(const std::string& family, const std::string& phase) {
  if (family == kRowGammaSquare) return phase == "clique" || phase == "spectral" || phase == "transitivity";
  if (family == kRowGammaNonsquare) return phase == "clique" || phase == "spectral" || phase == "transitivity";
  if (family == kRowGammaPrime) return phase == "identity" || phase == "spectral";
  if (family == kRowAk) return phase == "clique";
  return false;
}

void validate_row(const GridRow& row, std::uint32_t max_field_order) {
  if (row.family.empty()) throw ConfigError(row.line, "row is missing 'family'");
  if (row.k.empty()) throw ConfigError(row.line, "row is missing 'k'");
  if (row.q.empty()) throw ConfigError(row.line, "row is missing 'q'");
  for (auto k : row.k) {
    if (k < 2 || k > 12) throw ConfigError(row.line, "k = " + std::to_string(k) + " is outside 2..12");
  }
  for (auto q : row.q) {
    try {
      (void)Field::of_order(q, max_field_order);
    } catch (const FieldError& e) {
      throw ConfigError(row.line, "q = " + std::to_string(q) + ": " + e.what());
    }
  }
}

std::size_t clique_free_order(const std::string& family, std::size_t k) {
  if (family == kRowGammaSquare) return k;
  // An orthogonal basis of k non-square points has discriminant xi^k; the
  // form's discriminant is xi, so this is impossible exactly when k is even.
  if (family == kRowGammaNonsquare) return k % 2 == 0 ? k : k + 1;
  if (family == kRowAk) return k + 1;
  return 0;
}

double scaled_density(double d, std::size_t n, double exponent_denominator) {
  if (n == 0 || exponent_denominator <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const auto nn = static_cast<double>(n);
  return d / nn * std::pow(nn, 1.0 / exponent_denominator);
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t k, std::uint32_t q) {
  return seed ^ (static_cast<std::uint64_t>(k) * 0x9E3779B97F4A7C15ULL) ^ (static_cast<std::uint64_t>(q) << 17);
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

GridConfig parse_grid_config(const std::string& text) {
  GridConfig config;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  GridRow* row = nullptr;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[row]") throw ConfigError(line_no, "unknown section '" + line + "'");
      if (row) validate_row(*row, config.max_field_order);
      config.rows.emplace_back().line = line_no;
      row = &config.rows.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(line_no, "'" + key + "' has no value");

    if (!row) {
      const auto number = parse_unsigned(value, line_no, key);
      if (key == "threads") {
        if (number < 1 || number > 256) throw ConfigError(line_no, "threads must be in 1..256");
        config.threads = static_cast<unsigned>(number);
      } else if (key == "vertex_cap") {
        config.vertex_cap = number;
      } else if (key == "eigen_cap") {
        config.eigen_cap = number;
      } else if (key == "identity_cap") {
        config.identity_cap = number;
      } else if (key == "time_budget_ms") {
        config.time_budget = std::chrono::milliseconds(number);
      } else if (key == "transitivity_samples") {
        config.transitivity_samples = number;
      } else if (key == "seed") {
        config.seed = number;
      } else if (key == "max_field_order") {
        if (number < 3 || number > std::numeric_limits<std::uint32_t>::max()) {
          throw ConfigError(line_no, "max_field_order is out of range");
        }
        config.max_field_order = static_cast<std::uint32_t>(number);
      } else {
        throw ConfigError(line_no, "unknown global key '" + key + "'");
      }
      continue;
    }

    if (key == "family") {
      if (value != kRowGammaSquare && value != kRowGammaNonsquare && value != kRowGammaPrime && value != kRowAk) {
        throw ConfigError(line_no, "unknown family '" + value + "' (gamma-square, gamma-nonsquare, gamma-prime, ak)");
      }
      row->family = value;
    } else if (key == "k") {
      row->k.clear();
      for (const auto& item : split_list(value)) row->k.push_back(parse_unsigned(item, line_no, key));
    } else if (key == "q") {
      row->q.clear();
      for (const auto& item : split_list(value)) {
        const auto q = parse_unsigned(item, line_no, key);
        if (q > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(line_no, "q is out of range");
        row->q.push_back(static_cast<std::uint32_t>(q));
      }
    } else if (key == "phases") {
      if (row->family.empty()) throw ConfigError(line_no, "'family' must precede 'phases'");
      row->phases = {};
      for (const auto& phase : split_list(value)) {
        if (phase != "clique" && phase != "spectral" && phase != "identity" && phase != "transitivity") {
          throw ConfigError(line_no, "unknown phase '" + phase + "'");
        }
        if (!family_allows(row->family, phase)) {
          throw ConfigError(line_no, "phase '" + phase + "' does not apply to family " + row->family);
        }
        if (phase == "clique") row->phases.clique = true;
        if (phase == "spectral") row->phases.spectral = true;
        if (phase == "identity") row->phases.identity = true;
        if (phase == "transitivity") row->phases.transitivity = true;
      }
    } else {
      throw ConfigError(line_no, "unknown row key '" + key + "'");
    }
  }
  if (row) validate_row(*row, config.max_field_order);
  return config;
}

GridConfig load_grid_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_grid_config(text.str());
}

const std::string& default_grid_config_text() {
  static const std::string text = R"(# Default verification grid.
threads = 1
vertex_cap = 20000
eigen_cap = 6000
identity_cap = 3000
time_budget_ms = 300000
transitivity_samples = 16
seed = 0xC11CE

[row]
family = gamma-square
k = 2,3,4,5
q = 3,5,7,9,11,13
phases = clique,spectral,transitivity

[row]
family = gamma-prime
k = 2,3,4,5
q = 3,5,7,9,11,13
phases = identity,spectral

[row]
family = ak
k = 2,3,4
q = 3,5,7,9,11,13
phases = clique

[row]
family = ak
k = 5
q = 5
phases = clique
)";
  return text;
}

bool GridResult::passed() const {
  if (!error.empty()) return false;
  if (omega_bound_certified && !*omega_bound_certified) return false;
  if (spectral && !spectral->passes) return false;
  if (spectrum_matches && !*spectrum_matches) return false;
  if (identity && !identity->exact_pass) return false;
  if (transitivity && !transitivity->passed()) return false;
  return true;
}

std::string GridResult::status() const {
  if (error.starts_with("cap exceeded")) return "skipped";
  if (!error.empty()) return "error";
  return passed() ? "pass" : "fail";
}

GridResult run_grid_point(const GridConfig& config, const GridRow& row, std::size_t k, std::uint32_t q) {
  GridResult r;
  r.family = row.family;
  r.k = k;
  r.q = q;
  r.clique_free_order = clique_free_order(row.family, k);
  try {
    const Field field = Field::of_order(q, config.max_field_order);
    const QuadraticSpace space(field, k);
    const BuildOptions build{.vertex_cap = config.vertex_cap, .threads = 1};

    auto start = Clock::now();
    Graph g;
    if (row.family == kRowGammaSquare) {
      g = build_gamma(space, PointClass::Square, build);
    } else if (row.family == kRowGammaNonsquare) {
      g = build_gamma(space, PointClass::Nonsquare, build);
    } else if (row.family == kRowGammaPrime) {
      g = build_gamma_prime(space, build);
    } else {
      g = build_ak(field, k, build);
    }
    r.times.build = seconds_since(start);
    r.meta = g.meta();

    const auto stats = graph_stats(g);
    r.n = stats.n;
    r.regular = stats.is_regular;
    if (r.n > 0) {
      std::size_t total = 0;
      for (std::size_t v = 0; v < g.size(); ++v) total += g.degree(v);
      r.d = static_cast<double>(total) / static_cast<double>(r.n);
    }
    const std::size_t order = r.clique_free_order ? r.clique_free_order : k;
    r.density_diag = scaled_density(r.d, r.n, static_cast<double>(order) - 1.0);
    r.ak_density_diag = row.family == kRowAk ? scaled_density(r.d, r.n, static_cast<double>(order) - 2.0)
                                             : std::numeric_limits<double>::quiet_NaN();

    if (row.phases.clique) {
      start = Clock::now();
      const CliqueOptions options{.cutoff = std::nullopt, .time_budget = config.time_budget, .threads = 1};
      try {
        r.absence = verify_k_free(g, r.clique_free_order, options);
        r.omega_bound_certified = r.absence->mode == CertificateMode::UpperBoundProof;
        if (r.clique_free_order >= 2) r.witness = verify_k_free(g, r.clique_free_order - 1, options);
      } catch (const CliqueTimeout& e) {
        r.omega_bound_certified = false;
        r.notes.push_back("clique search ran out of time (lower bound " + std::to_string(e.lower_bound()) + ")");
      }
      r.times.clique = seconds_since(start);
    }

    if (row.phases.spectral) {
      if (r.n > config.eigen_cap) {
        r.notes.push_back("spectral phase skipped: n = " + std::to_string(r.n) + " above eigen_cap " +
                          std::to_string(config.eigen_cap));
      } else {
        start = Clock::now();
        const auto spectrum = eigenvalues(g, EigenOptions{.cap = config.eigen_cap});
        r.spectral = pseudorandomness_report(g, spectrum);
        if (row.family == kRowGammaPrime) r.spectrum_matches = gamma_prime_spectrum_matches(spectrum.values, k, q);
        r.times.spectral = seconds_since(start);
      }
    }

    if (row.phases.identity) {
      start = Clock::now();
      r.identity = verify_gamma_prime_identity(
          g, IdentityOptions{.full_check_cap = config.identity_cap, .random_vectors = 32, .seed = config.seed});
      r.times.identity = seconds_since(start);
    }

    if (row.phases.transitivity) {
      start = Clock::now();
      r.transitivity = check_transitivity(space, g,
                                          TransitivityOptions{.exhaustive_limit = 0,
                                                              .samples = config.transitivity_samples,
                                                              .seed = point_seed(config.seed, k, q)});
      r.times.transitivity = seconds_since(start);
    }
  } catch (const CapExceeded& e) {
    r.error = std::string("cap exceeded: ") + e.what();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<GridResult> run_grid(const GridConfig& config) {
  struct Job {
    const GridRow* row;
    std::size_t k;
    std::uint32_t q;
  };
  std::vector<Job> jobs;
  for (const auto& row : config.rows) {
    for (auto k : row.k) {
      for (auto q : row.q) jobs.push_back({&row, k, q});
    }
  }
  std::vector<GridResult> results(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
    results[i] = run_grid_point(config, *jobs[i].row, jobs[i].k, jobs[i].q);
  });
  return results;
}

double density_trend(const std::vector<GridResult>& results, std::size_t clique_free_order, const std::string& family,
                     std::span<const std::uint32_t> qs) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& r : results) {
    if (r.family != family || r.clique_free_order != clique_free_order || !r.error.empty()) continue;
    if (!qs.empty() && std::find(qs.begin(), qs.end(), r.q) == qs.end()) continue;
    if (r.n == 0 || r.d <= 0.0) continue;
    xs.push_back(std::log(static_cast<double>(r.n)));
    ys.push_back(std::log(r.d / static_cast<double>(r.n)));
  }
  if (xs.size() < 3) {
    throw std::invalid_argument("density trend for " + family + " at order " + std::to_string(clique_free_order) +
                                " needs at least 3 rows, found " + std::to_string(xs.size()));
  }
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("density trend needs at least two distinct vertex counts");
  return sxy / sxx;
}

std::string grid_csv_header() {
  return "family,k,q,n,d,regular,clique_free_order,omega_lower,omega_bound_certified,clique_nodes,lambda,"
         "spectral_bound,spectral_pass,identity_pass,transitivity_pairs,transitivity_pass,density_diag,"
         "ak_density_diag,status";
}

std::string grid_csv_row(const GridResult& r) {
  std::string omega_lower = "-";
  if (r.absence && r.absence->mode == CertificateMode::WitnessFound) {
    omega_lower = std::to_string(r.clique_free_order);
  } else if (r.witness && r.witness->mode == CertificateMode::WitnessFound) {
    omega_lower = std::to_string(r.clique_free_order - 1);
  }
  std::string nodes = "-";
  if (r.absence) nodes = std::to_string(r.absence->nodes + (r.witness ? r.witness->nodes : 0));

  const bool spectral_pass = r.spectral && r.spectral->passes && r.spectrum_matches.value_or(true);
  std::ostringstream out;
  out << r.family << ',' << r.k << ',' << r.q << ',' << r.n << ',' << fixed(r.d) << ',' << yes_no(r.regular) << ','
      << r.clique_free_order << ',' << omega_lower << ','
      << optional_field(r.omega_bound_certified, [](bool b) { return std::string(yes_no(b)); }) << ',' << nodes << ','
      << (r.spectral ? fixed(r.spectral->lambda) : "-") << ',' << (r.spectral ? fixed(r.spectral->bound) : "-") << ','
      << (r.spectral ? yes_no(spectral_pass) : "-") << ','
      << optional_field(r.identity, [](const IdentityCheck& c) { return std::string(yes_no(c.exact_pass)); }) << ','
      << optional_field(r.transitivity, [](const TransitivityCheck& c) { return std::to_string(c.pairs); }) << ','
      << optional_field(r.transitivity, [](const TransitivityCheck& c) { return std::string(yes_no(c.passed())); })
      << ',' << fixed(r.density_diag) << ',' << fixed(r.ak_density_diag) << ',' << r.status();
  return out.str();
}

std::string grid_csv(const std::vector<GridResult>& results) {
  std::string out = grid_csv_header() + '\n';
  for (const auto& r : results) out += grid_csv_row(r) + '\n';
  return out;
}

std::string row_slug(const GridResult& r) {
  return r.family + "_k" + std::to_string(r.k) + "_q" + std::to_string(r.q);
}

std::string grid_summary(const std::vector<GridResult>& results) {
  std::ostringstream out;
  char line[256];
  std::size_t passed = 0, failed = 0, skipped = 0, errors = 0;
  for (const auto& r : results) {
    const auto s = r.status();
    passed += s == "pass";
    failed += s == "fail";
    skipped += s == "skipped";
    errors += s == "error";
  }
  out << "rows " << results.size() << ": " << passed << " pass, " << failed << " fail, " << skipped << " skipped, "
      << errors << " error\n\n";
  std::snprintf(line, sizeof line, "%-26s %8s %12s %8s  %s\n", "row", "n", "d", "status", "notes");
  out << line;
  for (const auto& r : results) {
    std::string notes;
    for (const auto& note : r.notes) notes += (notes.empty() ? "" : "; ") + note;
    if (!r.error.empty()) notes += (notes.empty() ? "" : "; ") + r.error;
    std::snprintf(line, sizeof line, "%-26s %8zu %12.3f %8s  ", row_slug(r).c_str(), r.n, r.d, r.status().c_str());
    out << line << notes << '\n';
  }

  out << "\ndensity trends (slope of log(d/n) against log(n))\n";
  bool any = false;
  for (const char* family : {kRowGammaSquare, kRowGammaNonsquare, kRowAk}) {
    for (std::size_t order = 2; order <= 13; ++order) {
      double slope = 0.0;
      try {
        slope = density_trend(results, order, family);
      } catch (const std::invalid_argument&) {
        continue;
      }
      const double expected = std::string(family) == kRowAk ? -1.0 / (static_cast<double>(order) - 2.0)
                                                            : -1.0 / (static_cast<double>(order) - 1.0);
      std::snprintf(line, sizeof line, "%-16s K_%zu-free  slope %.6f  expected %.6f\n", family, order, slope,
                    expected);
      out << line;
      any = true;
    }
  }
  if (!any) out << "none (each trend needs at least 3 rows)\n";
  return out.str();
}

std::string certificate_bundle(const GridResult& r) {
  std::ostringstream out;
  out << "[grid-row]\n";
  out << "family = " << r.family << '\n';
  out << "k = " << r.k << '\n';
  out << "q = " << r.q << '\n';
  if (!r.meta.family.empty()) out << "graph = " << describe(r.meta) << '\n';
  out << "n = " << r.n << '\n';
  out << "d = " << fixed(r.d) << '\n';
  out << "regular = " << yes_no(r.regular) << '\n';
  out << "status = " << r.status() << '\n';
  if (!r.error.empty()) out << "error = " << r.error << '\n';
  for (const auto& note : r.notes) out << "note = " << note << '\n';
  if (r.absence) out << '\n' << to_record(r.meta, *r.absence);
  if (r.witness) out << '\n' << to_record(r.meta, *r.witness);
  if (r.spectral) {
    const auto& s = *r.spectral;
    out << "\n[spectral-report]\n";
    out << "n = " << s.n << '\n';
    out << "d = " << fixed(s.d) << '\n';
    out << "lambda2 = " << fixed(s.lambda2) << '\n';
    out << "lambda_min = " << fixed(s.lambda_min) << '\n';
    out << "lambda = " << fixed(s.lambda) << '\n';
    out << "bound = " << fixed(s.bound) << '\n';
    out << "passes = " << yes_no(s.passes) << '\n';
    if (r.spectrum_matches) out << "spectrum_matches = " << yes_no(*r.spectrum_matches) << '\n';
  }
  if (r.identity) {
    const auto& c = *r.identity;
    out << "\n[identity-check]\n";
    out << "m = " << c.m << '\n';
    out << "delta = " << c.delta << '\n';
    out << "mu = " << c.mu << '\n';
    out << "mode = " << (c.mode == IdentityCheck::Mode::Full ? "full" : "randomized") << '\n';
    out << "exact_pass = " << yes_no(c.exact_pass) << '\n';
  }
  if (r.transitivity) {
    const auto& t = *r.transitivity;
    out << "\n[transitivity-check]\n";
    out << "pairs = " << t.pairs << '\n';
    out << "exhaustive = " << yes_no(t.exhaustive) << '\n';
    out << "failures = " << t.failures << '\n';
  }
  return out.str();
}

void write_grid_outputs(const std::filesystem::path& dir, const std::vector<GridResult>& results) {
  std::filesystem::create_directories(dir / "certificates");
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
  };
  write(dir / "grid.csv", grid_csv(results));
  write(dir / "summary.txt", grid_summary(results));
  for (const auto& r : results) write(dir / "certificates" / (row_slug(r) + ".txt"), certificate_bundle(r));
}

}  // namespace orthograph
