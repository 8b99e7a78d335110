#pragma once

#include <string>
#include <vector>

#include "bmospline/frozen_constants.hpp"
#include "bmospline/nterm.hpp"

namespace bmospline {

// Fixed measurement protocols (partitions, seeds, grids are pinned inside).
// tools/calibrate freezes their outputs into frozen_constants; the acceptance
// suite reruns them and asserts against the checked-in values with headroom.
// Any protocol change here invalidates the frozen file and requires a
// re-freeze.

struct RatioRange {
  double lo = 0.0;
  double hi = 0.0;
  int cases = 0;
  void add(double r);
};

struct WhitneyReport {
  double worst_excess = 0.0;    // max over cases of omega - 2^k * oracle error
  double max_e_over_omega = 0.0;
  int cases = 0;
};
WhitneyReport measure_whitney();

struct NearBestReport {
  double max_ratio = 0.0;  // projection error / oracle error
  int cases = 0;
};
NearBestReport measure_near_best();

double measure_quasi_interp_c();
double measure_jn_ratio();
double measure_poly_pq_equiv();

struct BesovRatioRow {
  std::string fn;
  double alpha = 0.0;
  double q = 0.0;
  int L = 0;
  double ratio_qe = -1.0;    // -1 when degenerate (zero denominator)
  double ratio_mode = -1.0;
};

struct BesovRatioReport {
  std::vector<BesovRatioRow> rows;
  RatioRange qe;    // pooled over corpus x combos x L in {8, 10}
  RatioRange mode;
  double max_drift = 0.0;  // max |ratio(L=10)/ratio(L=8) - 1|
};
BesovRatioReport measure_besov_ratios();

struct EmbeddingReport {
  double max_ltau_ratio = 0.0;  // bmo / ltau, worst over tau in {0.5, 1, 2}
  double max_g1_ratio = 0.0;    // bmo / gq(., 1)
  int cases = 0;
};
EmbeddingReport measure_embeddings();

struct SeqJacksonReport {
  double max_cj = 0.0;               // greedy sigma_n * n^{1/tau} / ltau
  double max_greedy_over_oracle = 0.0;
  double max_gq_over_ltau = 0.0;
  int cases_cj = 0;
  int cases_oracle = 0;
};
SeqJacksonReport measure_seq_jackson();

struct StableBasisRanges {
  RatioRange single;  // one unit coefficient, p=2, tau=2
  RatioRange random;  // +-1 coefficients, p=2, tau=2
};
StableBasisRanges measure_stable_basis();

struct JacksonRatePair {
  RateReport cusp;  // cusp05, alpha = 0.5
  RateReport saw;   // sawtooth_2, alpha = 1
  double max_normalized = 0.0;
};
JacksonRatePair measure_jackson_rates();

struct Baselines {
  double besov_e_phi = 0.0;
  double besov_mod_bump = 0.0;
  double counterexample = 0.0;
};
Baselines measure_baselines();

// everything above, assembled for freezing (slow: several minutes)
FrozenConstants measure_all();

}  // namespace bmospline
