// Acceptance gate: one PASS/FAIL line per criterion. Run with a criterion
// number to check one, or without arguments to check all.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "orthograph/cliques.hpp"
#include "orthograph/isometry.hpp"
#include "orthograph/report.hpp"
#include "orthograph/spectral.hpp"

using namespace orthograph;

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<std::uint32_t> kGridQ = {3, 5, 7, 9, 11, 13};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Point classes on the line by raw vector enumeration: every nonzero pair
// (a, b), Q = xi a^2 + b^2, divided by the q - 1 scalar multiples.
std::size_t brute_force_square_points(const Field& f) {
  const Field::Code xi = f.smallest_nonsquare();
  std::size_t count = 0;
  for (Field::Code a = 0; a < f.order(); ++a) {
    for (Field::Code b = 0; b < f.order(); ++b) {
      if (a == 0 && b == 0) continue;
      const auto value = f.add(f.mul(xi, f.mul(a, a)), f.mul(b, b));
      if (value != 0 && f.pow(value, (f.order() - 1) / 2) == f.one_code()) ++count;
    }
  }
  return count / (f.order() - 1);
}

Verdict line_graphs_are_edgeless() {
  Verdict v;
  const auto start = Clock::now();
  for (auto q : kGridQ) {
    const Field f = Field::of_order(q);
    const Graph g = build_gamma(QuadraticSpace(f, 2), PointClass::Square);
    const auto stats = graph_stats(g);
    v.require(stats.edge_count == 0, "edges in q=" + std::to_string(q));
    v.require(stats.n == (q - 1) / 2 || stats.n == (q + 1) / 2, "class size for q=" + std::to_string(q));
    v.require(stats.n == brute_force_square_points(f), "brute-force count for q=" + std::to_string(q));
    v.detail << "q=" << q << ":n=" << stats.n << " ";
  }
  const double t = since(start);
  v.require(t < 1.0, "runtime " + fmt(t) + " s");
  v.detail << "(" << fmt(t, 3) << " s)";
  return v;
}

Verdict clique_freeness() {
  Verdict v;
  const auto start = Clock::now();
  std::size_t certified = 0;
  for (std::size_t k = 3; k <= 5; ++k) {
    for (auto q : kGridQ) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma(s, PointClass::Square, {.vertex_cap = 20000});
      const auto cert = verify_k_free(g, k, {.time_budget = std::chrono::minutes(10)});
      const bool ok = cert.mode == CertificateMode::UpperBoundProof && check_certificate(g, cert);
      v.require(ok, "K_" + std::to_string(k) + " found in " + describe(g.meta()));
      certified += ok;
    }
  }
  const double t = since(start);
  v.require(t < 600.0, "runtime " + fmt(t) + " s");
  v.detail << certified << "/18 graphs certified K_k-free (" << fmt(t, 1) << " s)";
  return v;
}

Verdict gamma_prime_identity() {
  Verdict v;
  std::size_t full = 0, randomized = 0;
  for (std::size_t k = 2; k <= 5; ++k) {
    for (auto q : kGridQ) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma_prime(s, {.vertex_cap = 40000});
      const auto check = verify_gamma_prime_identity(g, {.full_check_cap = 3000, .random_vectors = 32, .seed = kIdentitySeed});
      v.require(check.exact_pass, "identity fails on " + describe(g.meta()));
      (check.mode == IdentityCheck::Mode::Full ? full : randomized) += 1;
    }
  }
  v.detail << full << " exact full checks (m <= 3000), " << randomized << " randomized checks";
  return v;
}

struct SpectralPair {
  std::size_t k;
  std::uint32_t q;
  Spectrum gamma;
  std::optional<Spectrum> prime;
};

std::vector<SpectralPair> grid_spectra(std::size_t cap) {
  std::vector<SpectralPair> out;
  for (std::size_t k = 2; k <= 5; ++k) {
    for (auto q : kGridQ) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma(s, PointClass::Square, {.vertex_cap = 20000});
      if (g.size() > cap) continue;
      SpectralPair p{k, q, eigenvalues(g, {.cap = cap}), std::nullopt};
      if (s.point_count() <= cap) p.prime = eigenvalues(build_gamma_prime(s), {.cap = cap});
      out.push_back(std::move(p));
    }
  }
  return out;
}

Verdict spectral_bound_holds() {
  Verdict v;
  double worst_margin = 1e300;
  std::size_t primes = 0;
  const auto spectra = grid_spectra(kDefaultEigenCap);
  for (const auto& p : spectra) {
    const auto& ev = p.gamma.values;
    const double lambda = ev.size() < 2 ? 0.0 : std::max(std::abs(ev[1]), std::abs(ev.back()));
    const double bound = spectral_bound(p.k, p.q);
    v.require(lambda <= bound + kSpectralTolerance,
              "lambda " + fmt(lambda, 9) + " > " + fmt(bound, 9) + " at k=" + std::to_string(p.k) +
                  " q=" + std::to_string(p.q));
    worst_margin = std::min(worst_margin, bound - lambda);
    if (p.prime) {
      ++primes;
      v.require(gamma_prime_spectrum_matches(p.prime->values, p.k, p.q),
                "gamma-prime spectrum at k=" + std::to_string(p.k) + " q=" + std::to_string(p.q));
    }
  }
  v.detail << spectra.size() << " gamma spectra, smallest margin " << fmt(worst_margin, 9) << "; " << primes
           << " gamma-prime spectra two-valued";
  return v;
}

Verdict interlacing() {
  Verdict v;
  std::size_t checked = 0;
  for (const auto& p : grid_spectra(kDefaultEigenCap)) {
    if (!p.prime) continue;
    const auto r = interlacing_check(p.prime->values, p.gamma.values, kSpectralTolerance);
    v.require(r.ok, "interlacing at k=" + std::to_string(p.k) + " q=" + std::to_string(p.q) + " index " +
                        std::to_string(r.first_violation.value_or(0)));
    ++checked;
  }
  v.detail << checked << " grid points interlace";
  return v;
}

Verdict vertex_transitivity() {
  Verdict v;
  std::size_t pairs = 0, points = 0;
  for (std::size_t k = 2; k <= 5; ++k) {
    for (auto q : kGridQ) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma(s, PointClass::Square, {.vertex_cap = 20000});
      const auto check = check_transitivity(s, g, {.exhaustive_limit = 200, .samples = 500, .seed = kIdentitySeed + k * 100 + q});
      v.require(check.passed(), "witness failure in " + describe(g.meta()));
      v.require(check.exhaustive == (g.size() <= 200), "sampling mode in " + describe(g.meta()));
      pairs += check.pairs;
      ++points;
    }
  }
  v.detail << pairs << " ordered pairs over " << points << " grid points, all isometries with A^T B A = B";
  return v;
}

Verdict neighbourhood_recursion() {
  Verdict v;
  std::size_t centers = 0, mismatched = 0;
  for (std::size_t k = 3; k <= 5; ++k) {
    for (std::uint32_t q : {3U, 5U, 7U}) {
      const QuadraticSpace s(Field::of_order(q), k);
      const Graph g = build_gamma(s, PointClass::Square);
      const Graph lower = build_gamma(s.restricted(k - 1), PointClass::Square);
      for (std::size_t c = 0; c < g.size(); ++c) {
        const auto check = check_neighborhood_map(g, neighborhood_isomorphism(s, g, c, lower), lower);
        v.require(check.exact(), "center " + std::to_string(c) + " of " + describe(g.meta()));
        mismatched += check.mismatched_bits;
        ++centers;
      }
    }
  }
  v.detail << centers << " neighbourhoods mapped exactly, " << mismatched << " mismatched bits";
  return v;
}

Verdict density_scaling() {
  Verdict v;
  const auto config = parse_grid_config(
      "[row]\nfamily = gamma-square\nk = 3,4\nq = 5,7,9,11,13\n"
      "[row]\nfamily = ak\nk = 2,3\nq = 5,7,9,11,13\n");
  const auto results = run_grid(config);
  for (const auto& r : results) v.require(r.error.empty(), r.error);
  for (std::size_t k = 3; k <= 4; ++k) {
    const double gamma = density_trend(results, k, kRowGammaSquare);
    const double ak = density_trend(results, k, kRowAk);
    const double gamma_target = -1.0 / (static_cast<double>(k) - 1.0);
    const double ak_target = -1.0 / (static_cast<double>(k) - 2.0);
    v.require(std::abs(gamma - gamma_target) <= 0.05,
              "gamma slope k=" + std::to_string(k) + " " + fmt(gamma) + " vs " + fmt(gamma_target));
    v.require(std::abs(ak - ak_target) <= 0.05,
              "ak slope k=" + std::to_string(k) + " " + fmt(ak) + " vs " + fmt(ak_target));
    v.detail << "k=" << k << ": gamma " << fmt(gamma) << " (target " << fmt(gamma_target) << "), ak " << fmt(ak)
             << " (target " << fmt(ak_target) << "); ";
    if (k == 4) {
      v.require(gamma - ak > 0.1, "separation " + fmt(gamma - ak));
      v.detail << "separation " << fmt(gamma - ak);
    }
  }
  return v;
}

Verdict ak_clique_number() {
  Verdict v;
  for (const auto& [k, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{4, 5}, {4, 7}, {5, 5}}) {
    const Graph g = build_ak(Field::of_order(q), k);
    const auto present = verify_k_free(g, k);
    const auto absent = verify_k_free(g, k + 1);
    v.require(present.mode == CertificateMode::WitnessFound && check_certificate(g, present),
              "no K_" + std::to_string(k) + " in " + describe(g.meta()));
    v.require(absent.mode == CertificateMode::UpperBoundProof && check_certificate(g, absent),
              "K_" + std::to_string(k + 1) + " in " + describe(g.meta()));
    v.detail << describe(g.meta()) << ": K_" << k << " witness, K_" << k + 1 << " absent; ";
  }
  return v;
}

Verdict determinism() {
  Verdict v;
  auto config = parse_grid_config(default_grid_config_text());
  config.threads = 1;
  const auto a = grid_csv(run_grid(config));
  config.threads = 4;
  const auto b = grid_csv(run_grid(config));
  v.require(a == b, "CSV differs between 1 and 4 threads");
  const auto rows = static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n')) - 1;
  v.require(rows >= 12, "default grid has fewer than 12 rows");
  v.detail << rows << " rows byte-identical across 1 and 4 threads";
  return v;
}

struct Criterion {
  const char* name;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"square-class line graphs are edgeless", line_graphs_are_edgeless},
      {"K_k-freeness certified on the grid", clique_freeness},
      {"gamma-prime satisfies A^2 = mu J + (delta - mu) I", gamma_prime_identity},
      {"second eigenvalue within q^((k-2)/2)", spectral_bound_holds},
      {"spectra interlace with gamma-prime", interlacing},
      {"vertex transitivity witnesses", vertex_transitivity},
      {"neighbourhoods match the lower-dimensional graph", neighbourhood_recursion},
      {"edge density slopes", density_scaling},
      {"comparison graph clique number", ak_clique_number},
      {"grid output independent of thread count", determinism},
  };
  std::vector<std::size_t> selected;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      const long n = std::strtol(argv[i], nullptr, 10);
      if (n < 1 || n > static_cast<long>(criteria.size())) {
        std::cerr << "criterion must be 1.." << criteria.size() << '\n';
        return 2;
      }
      selected.push_back(static_cast<std::size_t>(n));
    }
  } else {
    for (std::size_t i = 1; i <= criteria.size(); ++i) selected.push_back(i);
  }

  bool all = true;
  for (auto n : selected) {
    const auto& c = criteria[n - 1];
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << n << " (" << c.name << "): " << v.detail.str()
              << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
