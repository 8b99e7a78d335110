#include "bmospline/config.hpp"

#include <set>
#include <stdexcept>

#include "bmospline/util.hpp"
#include "json.hpp"

namespace bmospline {

Config Config::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  static const std::set<std::string> known = {
      "window", "k", "L", "q", "alphas", "seed",
      "n_grid", "out_dir", "partition_kind", "jitter"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  Config c;
  if (j.contains("window")) {
    auto w = j.at("window");
    if (!w.is_array() || w.size() != 2)
      throw std::invalid_argument("config: window must be [lo, hi]");
    c.window_lo = w[0].get<double>();
    c.window_hi = w[1].get<double>();
  }
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("L")) c.L = j.at("L").get<int>();
  if (j.contains("q")) c.q = j.at("q").get<double>();
  if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<int>>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("partition_kind"))
    c.partition_kind = j.at("partition_kind").get<std::string>();
  if (j.contains("jitter")) c.jitter = j.at("jitter").get<double>();
  return c;
}

std::string Config::to_json_string() const {
  nlohmann::ordered_json j;
  j["window"] = {window_lo, window_hi};
  j["k"] = k;
  j["L"] = L;
  j["q"] = q;
  j["alphas"] = alphas;
  j["seed"] = seed;
  j["n_grid"] = n_grid;
  j["out_dir"] = out_dir;
  j["partition_kind"] = partition_kind;
  j["jitter"] = jitter;
  return j.dump(2) + "\n";
}

std::string Config::hash() const { return to_hex(fnv1a(to_json_string())); }

void Config::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(window_lo < window_hi)) fail("window must satisfy lo < hi");
  if (k < 2 || k > 4) fail("k must be in [2, 4]");
  if (L < 0 || L > 14) fail("L must be in [0, 14]");
  if (!(q >= 1.0)) fail("q must be at least 1");
  if (alphas.empty()) fail("alphas must be nonempty");
  for (double a : alphas)
    if (!(a > 0.0)) fail("alphas must be positive");
  if (n_grid.empty()) fail("n_grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1) fail("n_grid entries must be positive");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) fail("n_grid must be strictly increasing");
  }
  if (partition_kind != "dyadic" && partition_kind != "perturbed")
    fail("partition_kind must be 'dyadic' or 'perturbed'");
  if (jitter < 0.0 || jitter >= 0.25) fail("jitter must lie in [0, 0.25)");
  if (partition_kind == "dyadic" && jitter != 0.0)
    fail("jitter applies to the perturbed partition only");
}

MultilevelPartition Config::make_partition() const {
  validate();
  Interval w{window_lo, window_hi};
  if (partition_kind == "perturbed")
    return MultilevelPartition::build_perturbed(w, L, k, jitter, seed);
  return MultilevelPartition::build_dyadic(w, L, k);
}

}  // namespace bmospline
