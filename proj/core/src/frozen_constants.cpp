#include "bmospline/frozen_constants.hpp"

#include "json.hpp"

namespace bmospline {

#define BMOSPLINE_FROZEN_FIELDS(X) \
  X(near_best_A)                   \
  X(quasi_interp_c)                \
  X(whitney_cw)                    \
  X(poly_pq_equiv_c)               \
  X(jn_ratio)                      \
  X(besov_qe_lo)                   \
  X(besov_qe_hi)                   \
  X(besov_mode_lo)                 \
  X(besov_mode_hi)                 \
  X(embed_ltau_ce)                 \
  X(embed_g1_cg)                   \
  X(stable_single_lo)              \
  X(stable_single_hi)              \
  X(stable_rand_lo)                \
  X(stable_rand_hi)                \
  X(jackson_normalized)            \
  X(jackson_seq_cj)                \
  X(greedy_oracle_factor)          \
  X(gq_vs_ltau_c)                  \
  X(baseline_besov_e_phi)          \
  X(baseline_besov_mod_bump)       \
  X(baseline_counterexample)

const FrozenConstants& frozen_constants() {
  // frozen from tools/calibrate on the v1 corpus
  static const FrozenConstants c = [] {
    FrozenConstants f;
    f.version = 1;
    f.corpus = "v1";
    f.near_best_A = 2.457107736303703;
    f.quasi_interp_c = 1.5260784109517609;
    f.whitney_cw = 1.0004672881837695;
    f.poly_pq_equiv_c = 5.4244071595449261;
    f.jn_ratio = 1.2703214698192784;
    f.besov_qe_lo = 0.32837815367373618;
    f.besov_qe_hi = 1.0314152184030738;
    f.besov_mode_lo = 1.060149057317985;
    f.besov_mode_hi = 2.4889956432135505;
    f.embed_ltau_ce = 0.34857497364326434;
    f.embed_g1_cg = 0.57027070426546433;
    f.stable_single_lo = 1;
    f.stable_single_hi = 1;
    f.stable_rand_lo = 0.76468170474554087;
    f.stable_rand_hi = 1.1855776674661196;
    f.jackson_normalized = 0.24836931313914826;
    f.jackson_seq_cj = 1.1732785227790774;
    f.greedy_oracle_factor = 1.8619649006506709;
    f.gq_vs_ltau_c = 0.13824081119548945;
    f.baseline_besov_e_phi = 6.5613756207732585;
    f.baseline_besov_mod_bump = 12.521793010551349;
    f.baseline_counterexample = 6.3129443392602429;
    return f;
  }();
  return c;
}

std::string frozen_constants_to_json(const FrozenConstants& c) {
  nlohmann::ordered_json j;
  j["version"] = c.version;
  j["corpus"] = c.corpus;
  nlohmann::ordered_json vals;
#define BMOSPLINE_EMIT(name) vals[#name] = c.name;
  BMOSPLINE_FROZEN_FIELDS(BMOSPLINE_EMIT)
#undef BMOSPLINE_EMIT
  j["constants"] = vals;
  return j.dump(2) + "\n";
}

std::string frozen_constants_json() {
  return frozen_constants_to_json(frozen_constants());
}

FrozenConstants frozen_constants_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  FrozenConstants c;
  c.version = j.at("version").get<int>();
  c.corpus = j.at("corpus").get<std::string>();
  const auto& vals = j.at("constants");
#define BMOSPLINE_READ(name) c.name = vals.at(#name).get<double>();
  BMOSPLINE_FROZEN_FIELDS(BMOSPLINE_READ)
#undef BMOSPLINE_READ
  return c;
}

}  // namespace bmospline
