#ifndef ROUGHIR_TEST_SUPPORT_HPP
#define ROUGHIR_TEST_SUPPORT_HPP

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "roughir/roughir.hpp"

namespace roughir::test {

/// Shipped tables, loaded once per test binary.
inline const VarianceTable& gaussian_table() {
  static const VarianceTable t =
      VarianceTable::from_delimited(io::read_table(resolve_table_dir() / kGaussianTableFile));
  return t;
}

inline const LambdaTildeTable& stable_table() {
  static const LambdaTildeTable t =
      LambdaTildeTable::from_delimited(io::read_table(resolve_table_dir() / kStableTableFile));
  return t;
}

inline io::DelimitedTable table_from_text(const std::string& text) {
  std::istringstream in(text);
  return io::parse_table(in);
}

/// Random walk with Gaussian steps; `zero_prob` of the steps are exactly zero.
inline SampledPath random_walk(std::size_t n, Rng& rng, double zero_prob = 0.0) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[j + 1] = x[j] + (unif(rng) < zero_prob ? 0.0 : normal(rng));
  return SampledPath(std::move(x));
}

inline SampledPath from_function(std::size_t n, auto f) {
  std::vector<double> x(n + 1);
  for (std::size_t j = 0; j <= n; ++j) x[j] = f(static_cast<double>(j) / static_cast<double>(n));
  return SampledPath(std::move(x));
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double var = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  for (double x : v) out.var += (x - out.mean) * (x - out.mean);
  out.var /= static_cast<double>(v.size() - 1);
  out.se = std::sqrt(out.var / static_cast<double>(v.size()));
  return out;
}

}  // namespace roughir::test

#endif
