#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthograph/graphs.hpp"

namespace orthograph {

struct CliqueOptions {
  /// Search no further than cutoff + 1; nullopt for the exact clique number.
  std::optional<std::size_t> cutoff;
  std::chrono::milliseconds time_budget{300'000};
  unsigned threads = 1;
};

struct CliqueResult {
  /// Clique number, or cutoff + 1 as a lower bound when exact is false.
  std::size_t omega = 0;
  /// Lexicographically least clique of size omega.
  std::vector<std::size_t> witness;
  bool exact = true;
  std::uint64_t nodes = 0;
};

/// Thrown when the time budget runs out; carries the best clique found so far.
class CliqueTimeout : public std::runtime_error {
 public:
  CliqueTimeout(std::size_t lower_bound, std::vector<std::size_t> witness);
  std::size_t lower_bound() const { return lower_bound_; }
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  std::size_t lower_bound_;
  std::vector<std::size_t> witness_;
};

/// Lexicographically least clique on `size` vertices, or nullopt if the graph
/// has none. Loops are ignored. `nodes` accumulates the search tree size; the
/// count only covers top-level branches up to the answer, so it does not
/// depend on the thread count.
std::optional<std::vector<std::size_t>> find_clique(const Graph& g, std::size_t size, const CliqueOptions& options,
                                                    std::uint64_t* nodes = nullptr);

CliqueResult max_clique(const Graph& g, const CliqueOptions& options = {});

enum class CertificateMode { UpperBoundProof, WitnessFound };

struct CliqueCertificate {
  CertificateMode mode = CertificateMode::UpperBoundProof;
  std::size_t bound_k = 0;
  std::vector<std::size_t> witness;
  std::uint64_t nodes = 0;
  /// Wall time; reported on the console but kept out of serialized records.
  double elapsed_seconds = 0.0;
};

/// UpperBoundProof when g has no K_k, WitnessFound with the least K_k otherwise.
CliqueCertificate verify_k_free(const Graph& g, std::size_t k, const CliqueOptions& options = {});

/// Re-checks a WitnessFound certificate by reading |witness|^2 adjacency bits.
/// UpperBoundProof certificates only admit a bound sanity check.
bool check_certificate(const Graph& g, const CliqueCertificate& cert);

std::string to_string(CertificateMode mode);
/// Structured text record; deterministic for fixed inputs.
std::string to_record(const GraphMeta& meta, const CliqueCertificate& cert);

}  // namespace orthograph
