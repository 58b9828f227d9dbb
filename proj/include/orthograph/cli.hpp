#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace orthograph::cli {

inline constexpr const char* kOutputDirEnv = "ORTHOGRAPH_OUTPUT_DIR";

enum ExitCode : int {
  kExitPass = 0,
  kExitCertificateFailure = 1,
  kExitUsage = 2,
};

/// Invalid flag combination or resource limit; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string subcommand;
  std::string family = "gamma";
  std::size_t k = 0;
  std::uint32_t q = 0;
  std::string epsilon = "square";
  std::string output;
  std::string format = "edgelist";
  std::vector<std::string> checks;
  std::string config_path;
  std::string from;
  std::string to;

  std::size_t vertex_cap = 0;
  std::size_t eigen_cap = 0;
  std::size_t identity_cap = 0;
  std::uint64_t time_budget_ms = 300'000;
  std::size_t samples = 500;
  std::optional<std::size_t> max_centers;
  std::uint64_t seed = 0;
  std::optional<unsigned> threads;
  bool verbose = false;
};

/// Rejects bad combinations before anything is built.
void validate(const CliConfig& config);

/// Output directory: explicit flag, then the environment variable, then ".".
std::string output_directory(const std::string& flag);

/// Parses argv (argv[0] is the program name) and runs the subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orthograph::cli
