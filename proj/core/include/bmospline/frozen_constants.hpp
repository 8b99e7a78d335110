#pragma once

#include <string>

namespace bmospline {

// Equivalence constants measured once on the v1 corpus and checked in.
// Tests assert against them with 1.5x headroom (regression bounds, not
// absolute truths); baselines are deterministic recomputation anchors.
// Re-freeze procedure: run tools/calibrate, paste its C++ block here and
// its JSON into data/frozen_constants.json (a sync test keeps them equal).
struct FrozenConstants {
  int version = 1;
  std::string corpus = "v1";

  // local polynomial approximation
  double near_best_A = 0.0;       // sup over corpus of projection err / oracle err
  double quasi_interp_c = 0.0;    // sup cell error / neighborhood oracle err
  double whitney_cw = 0.0;        // sup of oracle err / modulus
  double poly_pq_equiv_c = 0.0;   // scaled L^p vs L^q equivalence for low-degree polys

  // norm estimators
  double jn_ratio = 0.0;          // sup bmo(q=2) / bmo(q=1)
  double besov_qe_lo = 0.0;       // besov_Q / besov_E range over corpus x (alpha, q)
  double besov_qe_hi = 0.0;
  double besov_mode_lo = 0.0;     // besov_modulus / besov_E range (tau >= 1 combos)
  double besov_mode_hi = 0.0;
  double embed_ltau_ce = 0.0;     // bmo(sum c phi) <= ce * ltau_norm
  double embed_g1_cg = 0.0;       // bmo(sum c phi) <= cg * gq_norm(., 1)
  double stable_single_lo = 0.0;  // stable_basis_check ratio, one nonzero coeff
  double stable_single_hi = 0.0;
  double stable_rand_lo = 0.0;    // stable_basis_check ratio, random +-1, p=2, tau=2
  double stable_rand_hi = 0.0;

  // n-term approximation
  double jackson_normalized = 0.0;   // bmo residual * n^alpha / besov_E bound
  double jackson_seq_cj = 0.0;       // greedy sigma_n * n^{1/tau} / ltau_norm
  double greedy_oracle_factor = 0.0; // greedy / exhaustive oracle on small trees
  double gq_vs_ltau_c = 0.0;         // gq_norm(h, q) <= c * ltau_norm(h, tau)

  // deterministic recomputation anchors
  double baseline_besov_e_phi = 0.0;       // besov_E of one unit spline, alpha=1, q=2
  double baseline_besov_mod_bump = 0.0;    // besov_modulus(bump, alpha=1)
  double baseline_counterexample = 0.0;    // besov_E of the eps=0.5 smoothed step
};

const FrozenConstants& frozen_constants();

// canonical JSON of the compiled values (matches data/frozen_constants.json)
std::string frozen_constants_json();
FrozenConstants frozen_constants_from_json(const std::string& text);
std::string frozen_constants_to_json(const FrozenConstants& c);

}  // namespace bmospline
