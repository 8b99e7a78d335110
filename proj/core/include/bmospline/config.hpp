#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmospline/partition.hpp"

namespace bmospline {

// Run configuration shared by the command-line tools.  Serialization is
// canonical (fixed key order), so hash() is a stable content digest; every
// output file embeds it.
struct Config {
  double window_lo = -1.0;
  double window_hi = 2.0;
  int k = 2;
  int L = 8;
  double q = 2.0;
  std::vector<double> alphas = {0.5, 1.0};
  std::uint64_t seed = 1;
  std::vector<int> n_grid = {4, 8, 16, 32, 64, 128, 256};
  std::string out_dir = "out";
  std::string partition_kind = "dyadic";  // "dyadic" or "perturbed"
  double jitter = 0.0;

  // partial object: present keys override defaults, unknown keys are errors
  static Config from_json_string(const std::string& text);
  std::string to_json_string() const;
  std::string hash() const;
  void validate() const;
  MultilevelPartition make_partition() const;
};

}  // namespace bmospline
