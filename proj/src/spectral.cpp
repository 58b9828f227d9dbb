#include "orthograph/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include <lapacke.h>

namespace orthograph {

namespace {

std::int64_t geometric_sum(std::size_t terms, std::uint32_t q) {
  // 1 + q + ... + q^(terms-1)
  std::int64_t sum = 0;
  std::int64_t power = 1;
  for (std::size_t i = 0; i < terms; ++i) {
    sum += power;
    power *= q;
  }
  return sum;
}

std::string fixed(double x, int digits = 9) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  // Avoid "-0.000000000".
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

}  // namespace

std::int64_t gamma_prime_degree(std::size_t k, std::uint32_t q) { return geometric_sum(k - 1, q); }

std::int64_t gamma_prime_common_neighbors(std::size_t k, std::uint32_t q) { return k >= 2 ? geometric_sum(k - 2, q) : 0; }

IdentityCheck verify_gamma_prime_identity(const Graph& g, const IdentityOptions& options) {
  const auto& meta = g.meta();
  if (meta.family != kFamilyGammaPrime || !meta.neighborhood_path.empty()) {
    throw std::invalid_argument("identity check needs a gamma-prime graph");
  }
  if (meta.k < 2) throw std::invalid_argument("identity check needs k >= 2");

  IdentityCheck check;
  check.m = g.size();
  check.delta = gamma_prime_degree(meta.k, meta.q);
  check.mu = gamma_prime_common_neighbors(meta.k, meta.q);
  const std::size_t m = check.m;

  if (m <= options.full_check_cap) {
    check.mode = IdentityCheck::Mode::Full;
    for (std::size_t i = 0; i < m; ++i) {
      const auto ri = g.row(i);
      for (std::size_t j = i; j < m; ++j) {
        const auto rj = g.row(j);
        std::int64_t entry = 0;
        for (std::size_t w = 0; w < ri.size(); ++w) entry += std::popcount(ri[w] & rj[w]);
        const std::int64_t expected = i == j ? check.delta : check.mu;
        if (entry != expected) {
          check.first_violation = {i, j};
          return check;
        }
      }
    }
    check.exact_pass = true;
    return check;
  }

  check.mode = IdentityCheck::Mode::Randomized;
  const std::size_t s = options.random_vectors;
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::int64_t> dist(-1000, 1000);
  std::vector<std::int64_t> v(m * s);
  for (auto& x : v) x = dist(rng);

  auto apply = [&](const std::vector<std::int64_t>& in) {
    std::vector<std::int64_t> out(m * s, 0);
    for (std::size_t i = 0; i < m; ++i) {
      const auto r = g.row(i);
      std::int64_t* acc = out.data() + i * s;
      for (std::size_t w = 0; w < r.size(); ++w) {
        std::uint64_t bits = r[w];
        while (bits) {
          const std::size_t l = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          bits &= bits - 1;
          const std::int64_t* src = in.data() + l * s;
          for (std::size_t t = 0; t < s; ++t) acc[t] += src[t];
        }
      }
    }
    return out;
  };
  const auto av = apply(v);
  const auto aav = apply(av);
  std::vector<std::int64_t> column_sum(s, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t t = 0; t < s; ++t) column_sum[t] += v[i * s + t];
  }
  for (std::size_t t = 0; t < s; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::int64_t expected = check.mu * column_sum[t] + (check.delta - check.mu) * v[i * s + t];
      if (aav[i * s + t] != expected) {
        check.first_violation = {t, i};
        return check;
      }
    }
  }
  check.exact_pass = true;
  return check;
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = g.row(static_cast<std::size_t>(i));
    for (std::size_t w = 0; w < r.size(); ++w) {
      std::uint64_t bits = r[w];
      while (bits) {
        const auto j = static_cast<Eigen::Index>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
        a(i, j) = 1.0;
      }
    }
  }
  return a;
}

std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, std::size_t max_sweeps) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("matrix must be square");
  const double threshold = 1e-12 * static_cast<double>(std::max<Eigen::Index>(n, 1));
  auto off_mass = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (i != j) s += a(i, j) * a(i, j);
      }
    }
    return std::sqrt(s);
  };

  bool converged = false;
  for (std::size_t sweep = 0; sweep <= max_sweeps; ++sweep) {
    if (off_mass() < threshold) {
      converged = true;
      break;
    }
    if (sweep == max_sweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Entries below the rounding unit of both diagonals are zeroed; rotating on them only stirs noise.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) && std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
          a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
      }
    }
  }
  if (!converged) throw SpectralError("Jacobi iteration did not converge");

  std::vector<double> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

Spectrum eigenvalues(const Graph& g, const EigenOptions& options) {
  const std::size_t n = g.size();
  if (n > options.cap) {
    throw SpectralError(describe(g.meta()) + " has " + std::to_string(n) + " vertices, above the eigensolver cap of " +
                        std::to_string(options.cap));
  }
  Spectrum spectrum;
  if (n == 0) return spectrum;

  Eigen::MatrixXd a = adjacency_matrix(g);
  const bool use_jacobi = options.backend == EigenBackend::Jacobi ||
                          (options.backend == EigenBackend::Auto && n <= kJacobiAutoLimit);
  if (use_jacobi) {
    spectrum.values = jacobi_eigenvalues(std::move(a), options.max_sweeps);
  } else {
    spectrum.values.resize(n);
    const auto order = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', order, a.data(), order, spectrum.values.data());
    if (info != 0) throw SpectralError("dsyevd failed with info " + std::to_string(info));
    std::sort(spectrum.values.begin(), spectrum.values.end(), std::greater<>());
  }

  double trace = 0.0;
  double trace_sq = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    trace += g.has_loop(v) ? 1.0 : 0.0;
    trace_sq += static_cast<double>(g.degree(v));
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : spectrum.values) {
    sum += x;
    sum_sq += x * x;
  }
  spectrum.residual = std::max(std::abs(sum - trace), std::abs(sum_sq - trace_sq));
  return spectrum;
}

InterlacingResult interlacing_check(const std::vector<double>& outer, const std::vector<double>& inner,
                                    double tolerance) {
  const std::size_t m = outer.size();
  const std::size_t n = inner.size();
  if (n > m) throw std::invalid_argument("inner spectrum is longer than the outer one");
  InterlacingResult result;
  for (std::size_t i = 0; i < n; ++i) {
    if (outer[i] < inner[i] - tolerance || inner[i] < outer[m - n + i] - tolerance) {
      result.ok = false;
      result.first_violation = i + 1;
      break;
    }
  }
  return result;
}

double spectral_bound(std::size_t k, std::uint32_t q) {
  return std::pow(static_cast<double>(q), (static_cast<double>(k) - 2.0) / 2.0);
}

bool gamma_prime_spectrum_matches(const std::vector<double>& values, std::size_t k, std::uint32_t q,
                                  double tolerance) {
  if (values.empty()) return false;
  const auto delta = static_cast<double>(gamma_prime_degree(k, q));
  if (std::abs(values.front() - delta) > tolerance) return false;
  const double root = spectral_bound(k, q);
  return std::all_of(values.begin() + 1, values.end(),
                     [&](double x) { return std::abs(std::abs(x) - root) <= tolerance; });
}

SpectralReport pseudorandomness_report(const Graph& g, const Spectrum& spectrum) {
  const auto& meta = g.meta();
  SpectralReport r;
  r.n = g.size();
  r.bound = spectral_bound(meta.k, meta.q);
  r.residual = spectrum.residual;
  const auto& ev = spectrum.values;
  if (!ev.empty()) r.d = ev.front();
  if (ev.size() >= 2) {
    r.lambda2 = ev[1];
    r.lambda_min = ev.back();
    r.lambda = std::max(std::abs(r.lambda2), std::abs(r.lambda_min));
  }
  r.passes = r.lambda <= r.bound + kSpectralTolerance;

  const auto stats = graph_stats(g);
  const double degree = stats.is_regular ? static_cast<double>(stats.d) : r.d;
  if (meta.k >= 2 && r.n > 0) {
    const auto n = static_cast<double>(r.n);
    r.density_diag = degree / n * std::pow(n, 1.0 / (static_cast<double>(meta.k) - 1.0));
  } else {
    r.density_diag = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

SpectralReport pseudorandomness_report(const Graph& g, const EigenOptions& options) {
  return pseudorandomness_report(g, eigenvalues(g, options));
}

std::string spectral_csv_header() { return "family,k,q,epsilon,n,d,lambda,bound,passes,density_exponent_diag"; }

std::string spectral_csv_row(const GraphMeta& meta, const SpectralReport& r) {
  return meta.family + ',' + std::to_string(meta.k) + ',' + std::to_string(meta.q) + ',' +
         (meta.epsilon ? to_string(*meta.epsilon) : std::string("-")) + ',' + std::to_string(r.n) + ',' +
         fixed(r.d) + ',' + fixed(r.lambda) + ',' + fixed(r.bound) + ',' + (r.passes ? "true" : "false") + ',' +
         fixed(r.density_diag);
}

}  // namespace orthograph
