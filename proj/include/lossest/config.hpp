#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lossest {

/// One check requested by a verification config, with optional per-check
/// overrides of the global settings.
struct CheckRequest {
  std::string name;
  std::optional<long> replications;
  std::optional<std::uint64_t> seed;
};

/// A verification job: flat `key = value` lines for the globals, then one
/// `[check-name]` section per requested check. Empty section list means
/// the whole default suite.
struct VerifyJob {
  long replications = 100000;
  std::uint64_t seed = 0;
  double z_threshold = 4.0;
  long min_replications = 1000;
  std::vector<CheckRequest> checks;
};

VerifyJob parse_verify_config(const std::string& text);
VerifyJob read_verify_config(const std::string& path);

}  // namespace lossest
