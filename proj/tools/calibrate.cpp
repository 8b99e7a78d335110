#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "bmospline/calibration.hpp"
#include "bmospline/frozen_constants.hpp"
#include "bmospline/io.hpp"
#include "bmospline/util.hpp"

using namespace bmospline;

// Measures every frozen constant on the v1 corpus and emits both encodings:
// the JSON file for data/frozen_constants.json and a C++ value block to paste
// into core/src/frozen_constants.cpp.  Runs for several minutes.
int main(int argc, char** argv) {
  CLI::App app{"measure the frozen corpus constants"};
  std::string out_json = "frozen_constants.json";
  app.add_option("--json", out_json, "where to write the JSON encoding");
  CLI11_PARSE(app, argc, argv);

  std::fprintf(stderr, "measuring (several minutes, single-threaded)...\n");

  FrozenConstants c;
  c.version = 1;
  c.corpus = "v1";

  auto stage = [](const char* name) { std::fprintf(stderr, "  %s\n", name); };

  stage("near-best projection ratio");
  c.near_best_A = measure_near_best().max_ratio;
  stage("quasi-interpolant locality");
  c.quasi_interp_c = measure_quasi_interp_c();
  stage("whitney ratio");
  WhitneyReport wh = measure_whitney();
  c.whitney_cw = wh.max_e_over_omega;
  std::fprintf(stderr, "    worst sandwich excess %s over %d cases\n",
               format_double(wh.worst_excess).c_str(), wh.cases);
  stage("polynomial p-q equivalence");
  c.poly_pq_equiv_c = measure_poly_pq_equiv();
  stage("oscillation exponent ratio");
  c.jn_ratio = measure_jn_ratio();

  stage("besov form ratios (slowest stage)");
  BesovRatioReport br = measure_besov_ratios();
  c.besov_qe_lo = br.qe.lo;
  c.besov_qe_hi = br.qe.hi;
  c.besov_mode_lo = br.mode.lo;
  c.besov_mode_hi = br.mode.hi;
  std::fprintf(stderr, "    max level drift %s\n",
               format_double(br.max_drift).c_str());

  stage("embedding constants");
  EmbeddingReport emb = measure_embeddings();
  c.embed_ltau_ce = emb.max_ltau_ratio;
  c.embed_g1_cg = emb.max_g1_ratio;

  stage("stable basis ranges");
  StableBasisRanges sb = measure_stable_basis();
  c.stable_single_lo = sb.single.lo;
  c.stable_single_hi = sb.single.hi;
  c.stable_rand_lo = sb.random.lo;
  c.stable_rand_hi = sb.random.hi;

  stage("greedy rate normalization");
  c.jackson_normalized = measure_jackson_rates().max_normalized;

  stage("sequence-space greedy bounds");
  SeqJacksonReport sj = measure_seq_jackson();
  c.jackson_seq_cj = sj.max_cj;
  c.greedy_oracle_factor = sj.max_greedy_over_oracle;
  c.gq_vs_ltau_c = sj.max_gq_over_ltau;

  stage("deterministic baselines");
  Baselines base = measure_baselines();
  c.baseline_besov_e_phi = base.besov_e_phi;
  c.baseline_besov_mod_bump = base.besov_mod_bump;
  c.baseline_counterexample = base.counterexample;

  atomic_write(out_json, frozen_constants_to_json(c));
  std::fprintf(stderr, "wrote %s\n", out_json.c_str());

  // paste-ready block for core/src/frozen_constants.cpp
  std::printf("    f.near_best_A = %s;\n", format_double(c.near_best_A).c_str());
  std::printf("    f.quasi_interp_c = %s;\n", format_double(c.quasi_interp_c).c_str());
  std::printf("    f.whitney_cw = %s;\n", format_double(c.whitney_cw).c_str());
  std::printf("    f.poly_pq_equiv_c = %s;\n", format_double(c.poly_pq_equiv_c).c_str());
  std::printf("    f.jn_ratio = %s;\n", format_double(c.jn_ratio).c_str());
  std::printf("    f.besov_qe_lo = %s;\n", format_double(c.besov_qe_lo).c_str());
  std::printf("    f.besov_qe_hi = %s;\n", format_double(c.besov_qe_hi).c_str());
  std::printf("    f.besov_mode_lo = %s;\n", format_double(c.besov_mode_lo).c_str());
  std::printf("    f.besov_mode_hi = %s;\n", format_double(c.besov_mode_hi).c_str());
  std::printf("    f.embed_ltau_ce = %s;\n", format_double(c.embed_ltau_ce).c_str());
  std::printf("    f.embed_g1_cg = %s;\n", format_double(c.embed_g1_cg).c_str());
  std::printf("    f.stable_single_lo = %s;\n", format_double(c.stable_single_lo).c_str());
  std::printf("    f.stable_single_hi = %s;\n", format_double(c.stable_single_hi).c_str());
  std::printf("    f.stable_rand_lo = %s;\n", format_double(c.stable_rand_lo).c_str());
  std::printf("    f.stable_rand_hi = %s;\n", format_double(c.stable_rand_hi).c_str());
  std::printf("    f.jackson_normalized = %s;\n", format_double(c.jackson_normalized).c_str());
  std::printf("    f.jackson_seq_cj = %s;\n", format_double(c.jackson_seq_cj).c_str());
  std::printf("    f.greedy_oracle_factor = %s;\n", format_double(c.greedy_oracle_factor).c_str());
  std::printf("    f.gq_vs_ltau_c = %s;\n", format_double(c.gq_vs_ltau_c).c_str());
  std::printf("    f.baseline_besov_e_phi = %s;\n", format_double(c.baseline_besov_e_phi).c_str());
  std::printf("    f.baseline_besov_mod_bump = %s;\n", format_double(c.baseline_besov_mod_bump).c_str());
  std::printf("    f.baseline_counterexample = %s;\n", format_double(c.baseline_counterexample).c_str());
  return 0;
}
