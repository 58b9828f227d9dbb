#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthograph/cliques.hpp"
#include "orthograph/isometry.hpp"
#include "orthograph/spectral.hpp"

namespace orthograph {

/// Family labels accepted in grid configs.
inline constexpr const char* kRowGammaSquare = "gamma-square";
inline constexpr const char* kRowGammaNonsquare = "gamma-nonsquare";
inline constexpr const char* kRowGammaPrime = "gamma-prime";
inline constexpr const char* kRowAk = "ak";

struct Phases {
  bool clique = false;
  bool spectral = false;
  bool identity = false;
  bool transitivity = false;
};

struct GridRow {
  std::string family;
  std::vector<std::size_t> k;
  std::vector<std::uint32_t> q;
  Phases phases;
  /// Line of the `[row]` header, for messages.
  std::size_t line = 0;
};

struct GridConfig {
  unsigned threads = 1;
  std::size_t vertex_cap = kDefaultVertexCap;
  std::size_t eigen_cap = kDefaultEigenCap;
  std::size_t identity_cap = kDefaultIdentityFullCap;
  std::chrono::milliseconds time_budget{300'000};
  std::size_t transitivity_samples = 16;
  std::uint64_t seed = kIdentitySeed;
  std::uint32_t max_field_order = 8192;
  std::vector<GridRow> rows;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/**
 * key = value lines; `#` starts a comment. Global keys come first, then one
 * `[row]` section per family block:
 *
 *   threads = 2
 *   [row]
 *   family = gamma-square
 *   k = 3,4
 *   q = 5,7,9
 *   phases = clique,spectral
 */
GridConfig parse_grid_config(const std::string& text);
GridConfig load_grid_config(const std::filesystem::path& path);
/// Built-in grid: k in {2..5}, q in {3..13} odd prime powers.
const std::string& default_grid_config_text();

struct PhaseTimes {
  double build = 0.0;
  double clique = 0.0;
  double spectral = 0.0;
  double identity = 0.0;
  double transitivity = 0.0;
};

struct GridResult {
  std::string family;
  std::size_t k = 0;
  std::uint32_t q = 0;
  GraphMeta meta;
  std::size_t n = 0;
  /// Mean degree (the common degree when regular).
  double d = 0.0;
  bool regular = false;
  /// Smallest clique order the family excludes: k for gamma, k + 1 for AK, 0 otherwise.
  std::size_t clique_free_order = 0;

  std::optional<CliqueCertificate> absence;
  std::optional<CliqueCertificate> witness;
  std::optional<bool> omega_bound_certified;

  std::optional<SpectralReport> spectral;
  /// gamma-prime only: the spectrum is {delta, +-q^((k-2)/2)}.
  std::optional<bool> spectrum_matches;
  std::optional<IdentityCheck> identity;
  std::optional<TransitivityCheck> transitivity;

  double density_diag = 0.0;
  double ak_density_diag = 0.0;

  /// Non-fatal notes, e.g. a phase skipped for size.
  std::vector<std::string> notes;
  /// Set when the row could not be completed.
  std::string error;
  PhaseTimes times;

  bool passed() const;
  std::string status() const;
};

/// Rows in config order (k outer, q inner within a block). Row failures are
/// recorded, never thrown.
std::vector<GridResult> run_grid(const GridConfig& config);
GridResult run_grid_point(const GridConfig& config, const GridRow& row, std::size_t k, std::uint32_t q);

/// Least-squares slope of log(d/n) against log(n) over rows of `family`
/// with the given clique-free order, optionally restricted to `qs`.
/// Throws std::invalid_argument with fewer than three usable rows.
double density_trend(const std::vector<GridResult>& results, std::size_t clique_free_order, const std::string& family,
                     std::span<const std::uint32_t> qs = {});

std::string grid_csv_header();
std::string grid_csv_row(const GridResult& r);
std::string grid_csv(const std::vector<GridResult>& results);
/// Per-row table plus density trends where at least three rows exist.
std::string grid_summary(const std::vector<GridResult>& results);
/// Structured-text certificate bundle of one row.
std::string certificate_bundle(const GridResult& r);
/// grid.csv, summary.txt and certificates/<row>.txt under dir.
void write_grid_outputs(const std::filesystem::path& dir, const std::vector<GridResult>& results);
std::string row_slug(const GridResult& r);

}  // namespace orthograph
