#include "lossest/numeric.hpp"

#include <cmath>
#include <vector>

namespace lossest {

namespace {

double pairwise_sum_range(const double* v, std::size_t count) {
  if (count <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum_range(v, half) + pairwise_sum_range(v + half, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

SampleStats sample_stats(std::span<const double> values) {
  SampleStats out;
  const std::size_t count = values.size();
  if (count == 0) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(count);
  if (count < 2) return out;
  std::vector<double> sq(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double d = values[i] - out.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(count - 1);
  out.se = std::sqrt(var / static_cast<double>(count));
  return out;
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace lossest
