#pragma once

#include <cstdio>
#include <span>
#include <string>

namespace lossest {

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// length of the input, so accumulated results are reproducible no matter
/// how the values were produced (sequentially or by parallel workers).
double pairwise_sum(std::span<const double> values);

struct SampleStats {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
};

/// Mean and its standard error, both via pairwise summation (two passes).
SampleStats sample_stats(std::span<const double> values);

/// Decimal serialization used by every report writer: 17 significant
/// digits round-trip an IEEE double exactly.
std::string format_g17(double x);

}  // namespace lossest
