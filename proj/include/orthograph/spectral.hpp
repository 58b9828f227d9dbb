#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "orthograph/graphs.hpp"

namespace orthograph {

inline constexpr double kSpectralTolerance = 1e-6;
inline constexpr std::size_t kDefaultEigenCap = 6000;
inline constexpr std::size_t kDefaultIdentityFullCap = 3000;
inline constexpr std::uint64_t kIdentitySeed = 0xC11CE;

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Outcome of the exact check A^2 = mu*J + (delta - mu)*I.
struct IdentityCheck {
  enum class Mode { Full, Randomized };

  std::size_t m = 0;
  std::int64_t delta = 0;
  std::int64_t mu = 0;
  Mode mode = Mode::Full;
  bool exact_pass = false;
  /// (row, col) of the first bad entry in Full mode; (vector, row) in Randomized mode.
  std::optional<std::pair<std::size_t, std::size_t>> first_violation;
};

struct IdentityOptions {
  std::size_t full_check_cap = kDefaultIdentityFullCap;
  std::size_t random_vectors = 32;
  std::uint64_t seed = kIdentitySeed;
};

/// delta = (q^(k-1) - 1)/(q - 1).
std::int64_t gamma_prime_degree(std::size_t k, std::uint32_t q);
/// mu = (q^(k-2) - 1)/(q - 1).
std::int64_t gamma_prime_common_neighbors(std::size_t k, std::uint32_t q);

/// Integer arithmetic only. Throws std::invalid_argument unless g is a gamma-prime graph with k >= 2.
IdentityCheck verify_gamma_prime_identity(const Graph& g, const IdentityOptions& options = {});

enum class EigenBackend {
  /// Jacobi up to kJacobiAutoLimit vertices, LAPACK dsyevd above.
  Auto,
  Jacobi,
  /// Householder tridiagonalization plus divide and conquer (dsyevd).
  Tridiagonal,
};

inline constexpr std::size_t kJacobiAutoLimit = 160;

struct EigenOptions {
  std::size_t cap = kDefaultEigenCap;
  EigenBackend backend = EigenBackend::Auto;
  std::size_t max_sweeps = 100;
};

struct Spectrum {
  /// Sorted descending.
  std::vector<double> values;
  /// max(|sum(l) - tr A|, |sum(l^2) - tr A^2|).
  double residual = 0.0;
};

/// Dense adjacency matrix; loops put ones on the diagonal.
Eigen::MatrixXd adjacency_matrix(const Graph& g);

/// Cyclic Jacobi rotations; converges when the off-diagonal Frobenius mass
/// drops below 1e-12 * n. Throws SpectralError after max_sweeps.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, std::size_t max_sweeps = 100);

/// Throws SpectralError when g exceeds the cap or the solver fails.
Spectrum eigenvalues(const Graph& g, const EigenOptions& options = {});

struct InterlacingResult {
  bool ok = true;
  /// 1-based index i of the first failing inequality.
  std::optional<std::size_t> first_violation;
};

/// outer[i] >= inner[i] >= outer[m - n + i] for all i (both sorted descending).
InterlacingResult interlacing_check(const std::vector<double>& outer, const std::vector<double>& inner,
                                    double tolerance = kSpectralTolerance);

/// Largest value delta once, every other value +-q^((k-2)/2).
bool gamma_prime_spectrum_matches(const std::vector<double>& values, std::size_t k, std::uint32_t q,
                                  double tolerance = kSpectralTolerance);

struct SpectralReport {
  std::size_t n = 0;
  double d = 0.0;
  double lambda2 = 0.0;
  double lambda_min = 0.0;
  double lambda = 0.0;
  double bound = 0.0;
  bool passes = false;
  double residual = 0.0;
  /// (d/n) * n^(1/(k-1)); NaN when undefined.
  double density_diag = 0.0;
};

/// q^((k-2)/2).
double spectral_bound(std::size_t k, std::uint32_t q);

SpectralReport pseudorandomness_report(const Graph& g, const EigenOptions& options = {});
SpectralReport pseudorandomness_report(const Graph& g, const Spectrum& spectrum);

/// `family,k,q,epsilon,n,d,lambda,bound,passes,density_exponent_diag`
std::string spectral_csv_header();
std::string spectral_csv_row(const GraphMeta& meta, const SpectralReport& report);

}  // namespace orthograph
