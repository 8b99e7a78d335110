#include <doctest.h>

#include <string>

#include "bmospline/frozen_constants.hpp"
#include "bmospline/io.hpp"

using namespace bmospline;

#ifndef BMOSPLINES_SOURCE_DIR
#error "BMOSPLINES_SOURCE_DIR must point at the repository root"
#endif

TEST_SUITE("constants-sync") {

// data/frozen_constants.json is the re-freeze artifact written by the
// calibration tool; the compiled table must match it bit for bit
TEST_CASE("compiled constants match the data file") {
  std::string path = std::string(BMOSPLINES_SOURCE_DIR) + "/data/frozen_constants.json";
  FrozenConstants disk = frozen_constants_from_json(read_file(path));
  const FrozenConstants& code = frozen_constants();

  CHECK(disk.version == code.version);
  CHECK(disk.corpus == code.corpus);
  CHECK(disk.near_best_A == code.near_best_A);
  CHECK(disk.quasi_interp_c == code.quasi_interp_c);
  CHECK(disk.whitney_cw == code.whitney_cw);
  CHECK(disk.poly_pq_equiv_c == code.poly_pq_equiv_c);
  CHECK(disk.jn_ratio == code.jn_ratio);
  CHECK(disk.besov_qe_lo == code.besov_qe_lo);
  CHECK(disk.besov_qe_hi == code.besov_qe_hi);
  CHECK(disk.besov_mode_lo == code.besov_mode_lo);
  CHECK(disk.besov_mode_hi == code.besov_mode_hi);
  CHECK(disk.embed_ltau_ce == code.embed_ltau_ce);
  CHECK(disk.embed_g1_cg == code.embed_g1_cg);
  CHECK(disk.stable_single_lo == code.stable_single_lo);
  CHECK(disk.stable_single_hi == code.stable_single_hi);
  CHECK(disk.stable_rand_lo == code.stable_rand_lo);
  CHECK(disk.stable_rand_hi == code.stable_rand_hi);
  CHECK(disk.jackson_normalized == code.jackson_normalized);
  CHECK(disk.jackson_seq_cj == code.jackson_seq_cj);
  CHECK(disk.greedy_oracle_factor == code.greedy_oracle_factor);
  CHECK(disk.gq_vs_ltau_c == code.gq_vs_ltau_c);
  CHECK(disk.baseline_besov_e_phi == code.baseline_besov_e_phi);
  CHECK(disk.baseline_besov_mod_bump == code.baseline_besov_mod_bump);
  CHECK(disk.baseline_counterexample == code.baseline_counterexample);

  // serialization round trip preserves every value
  FrozenConstants back = frozen_constants_from_json(frozen_constants_to_json(code));
  CHECK(frozen_constants_to_json(back) == frozen_constants_to_json(code));

  // sanity: the table was actually measured, not left at placeholders
  CHECK(code.near_best_A > 1.0);
  CHECK(code.near_best_A <= 6.0);  // declared corpus bound
  CHECK(code.whitney_cw >= 1.0);
  CHECK(code.besov_qe_lo < code.besov_qe_hi);
  CHECK(code.besov_mode_lo < code.besov_mode_hi);
  CHECK(code.stable_rand_lo < code.stable_rand_hi);
  CHECK(code.greedy_oracle_factor >= 1.0);
  CHECK(code.greedy_oracle_factor <= 8.0);
}

}  // TEST_SUITE
