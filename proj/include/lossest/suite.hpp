#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lossest/verify.hpp"

namespace lossest {

/// A registered identity check, runnable with any (seed, replications).
struct SuiteCheck {
  std::string name;
  std::function<IdentityReport(std::uint64_t seed, long replications)> run;
};

/// The built-in verification suite: Stein and Stein-Haff identities in the
/// Gaussian, spherical and elliptical settings, plus the unbiasedness
/// checks for every criterion.
const std::vector<SuiteCheck>& default_suite();

/// nullptr when no check carries that name.
const SuiteCheck* find_check(const std::string& name);

/// Deterministic standard-normal design used by the registered checks.
Eigen::MatrixXd seeded_design(int n, int p, std::uint64_t seed);

}  // namespace lossest
