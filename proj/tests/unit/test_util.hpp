#pragma once
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#ifndef PATKIT_TEST_TMPDIR
#define PATKIT_TEST_TMPDIR "/tmp/patkit_tests"
#endif

namespace testutil {

inline std::filesystem::path tmp_dir(const std::string& leaf) {
  std::filesystem::path p = std::filesystem::path(PATKIT_TEST_TMPDIR) / leaf;
  std::filesystem::create_directories(p);
  return p;
}

inline std::vector<double> random_vector(int n, uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  return v;
}

inline double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    num += d * d;
    den += a[i] * a[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace testutil
