#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "bmospline/config.hpp"
#include "bmospline/corpus.hpp"
#include "bmospline/io.hpp"
#include "bmospline/partition.hpp"
#include "json.hpp"

using namespace bmospline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("bmospline_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config serialization round trip") {
  Config c;
  c.k = 3;
  c.L = 5;
  c.alphas = {0.25, 0.75};
  c.n_grid = {2, 4, 8};
  c.partition_kind = "perturbed";
  c.jitter = 0.1;
  c.seed = 99;

  Config back = Config::from_json_string(c.to_json_string());
  CHECK(back.window_lo == c.window_lo);
  CHECK(back.window_hi == c.window_hi);
  CHECK(back.k == c.k);
  CHECK(back.L == c.L);
  CHECK(back.q == c.q);
  CHECK(back.alphas == c.alphas);
  CHECK(back.seed == c.seed);
  CHECK(back.n_grid == c.n_grid);
  CHECK(back.out_dir == c.out_dir);
  CHECK(back.partition_kind == c.partition_kind);
  CHECK(back.jitter == c.jitter);
  CHECK(back.hash() == c.hash());

  // partial objects override the defaults only where present
  Config partial = Config::from_json_string(R"({"k": 4, "L": 2})");
  CHECK(partial.k == 4);
  CHECK(partial.L == 2);
  CHECK(partial.q == Config{}.q);
  CHECK(partial.window_lo == Config{}.window_lo);

  CHECK_THROWS_AS(Config::from_json_string(R"({"bogus": 1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(Config::from_json_string(R"({"window": [1.0]})"),
                  std::invalid_argument);
}

TEST_CASE("config hash is content-sensitive") {
  Config a, b;
  CHECK(a.hash() == b.hash());
  b.k = 3;
  CHECK(a.hash() != b.hash());
  b = a;
  b.seed = 2;
  CHECK(a.hash() != b.hash());
  b = a;
  b.n_grid.push_back(512);
  CHECK(a.hash() != b.hash());
}

TEST_CASE("config validation rejects bad values") {
  auto reject = [](auto&& mutate) {
    Config c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  reject([](Config& c) { c.window_lo = c.window_hi; });
  reject([](Config& c) { c.k = 1; });
  reject([](Config& c) { c.k = 5; });
  reject([](Config& c) { c.L = -1; });
  reject([](Config& c) { c.L = 15; });
  reject([](Config& c) { c.q = 0.5; });
  reject([](Config& c) { c.alphas.clear(); });
  reject([](Config& c) { c.alphas = {0.5, -1.0}; });
  reject([](Config& c) { c.n_grid.clear(); });
  reject([](Config& c) { c.n_grid = {4, 4}; });
  reject([](Config& c) { c.n_grid = {8, 4}; });
  reject([](Config& c) { c.partition_kind = "random"; });
  reject([](Config& c) { c.jitter = -0.1; });
  reject([](Config& c) {
    c.partition_kind = "perturbed";
    c.jitter = 0.25;
  });
  reject([](Config& c) { c.jitter = 0.1; });  // jitter without perturbed kind

  Config ok;
  ok.partition_kind = "perturbed";
  ok.jitter = 0.2;
  CHECK_NOTHROW(ok.validate());
  MultilevelPartition p = ok.make_partition();
  CHECK(p.k() == ok.k);
  CHECK(p.max_level() == ok.L);
  CHECK(p.window().lo == ok.window_lo);
  // same seed, same knots
  MultilevelPartition p2 = ok.make_partition();
  for (int m = 0; m <= p.max_level(); ++m) {
    auto a = p.knots(m), b = p2.knots(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("partition json round trip") {
  MultilevelPartition p =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 4, 3, 0.15, 17);
  std::string text = partition_to_json(p);
  MultilevelPartition back = partition_from_json(text);
  CHECK(back.k() == p.k());
  CHECK(back.max_level() == p.max_level());
  for (int m = 0; m <= p.max_level(); ++m) {
    auto a = p.knots(m), b = back.knots(m);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);  // bit exact
  }

  CHECK_THROWS(partition_from_json("not json"));

  // loader runs the validator: break the nesting and expect a rejection
  nlohmann::json j = nlohmann::json::parse(text);
  j["levels"][1][1] = j["levels"][1][0].get<double>() - 0.01;
  CHECK_THROWS_AS(partition_from_json(j.dump()), std::invalid_argument);
}

TEST_CASE("decomposition json round trip and index validation") {
  MultilevelPartition p = MultilevelPartition::build_dyadic({-1.0, 2.0}, 3, 2);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  SplineDecomposition dec = decompose(corpus_function("bump"), p, rule);

  std::string text = decomposition_to_json(dec, "partition.json", "bump", "cafe01");
  LoadedDecomposition ld = decomposition_from_json(text, p);
  CHECK(ld.partition_ref == "partition.json");
  CHECK(ld.fn_id == "bump");
  CHECK(ld.config_hash == "cafe01");
  REQUIRE(ld.dec.levels.size() == dec.levels.size());
  for (std::size_t m = 0; m < dec.levels.size(); ++m) {
    REQUIRE(ld.dec.levels[m].size() == dec.levels[m].size());
    for (std::size_t j = 0; j < dec.levels[m].size(); ++j)
      CHECK(ld.dec.levels[m][j] == dec.levels[m][j]);  // bit exact
  }

  // out-of-range support index is rejected
  nlohmann::json j = nlohmann::json::parse(text);
  j["details"][0]["j"] = 10000;
  CHECK_THROWS_AS(decomposition_from_json(j.dump(), p), std::invalid_argument);
  nlohmann::json j2 = nlohmann::json::parse(text);
  j2["details"][0]["m"] = 99;
  CHECK_THROWS_AS(decomposition_from_json(j2.dump(), p), std::invalid_argument);
}

TEST_CASE("decomposition loads through its partition reference") {
  TempDir tmp;
  MultilevelPartition p =
      MultilevelPartition::build_perturbed({-1.0, 2.0}, 3, 2, 0.1, 4);
  QuadratureRule rule = QuadratureRule::for_partition(p, 4);
  SplineDecomposition dec = decompose(corpus_function("cusp05"), p, rule);

  atomic_write((tmp.path / "partition.json").string(), partition_to_json(p));
  atomic_write((tmp.path / "dec.json").string(),
               decomposition_to_json(dec, "partition.json", "cusp05", "ff"));

  LoadedDecomposition ld = load_decomposition((tmp.path / "dec.json").string());
  CHECK(ld.fn_id == "cusp05");
  CHECK(ld.dec.partition == ld.partition.get());
  CHECK(ld.partition->max_level() == p.max_level());
  for (std::size_t m = 0; m < dec.levels.size(); ++m)
    for (std::size_t j = 0; j < dec.levels[m].size(); ++j)
      CHECK(ld.dec.levels[m][j] == dec.levels[m][j]);

  CHECK_THROWS((void)load_decomposition((tmp.path / "missing.json").string()));
}

TEST_CASE("atomic write round trip") {
  TempDir tmp;
  std::string path = (tmp.path / "file.txt").string();
  atomic_write(path, "first\n");
  CHECK(read_file(path) == "first\n");
  atomic_write(path, "second\n");  // overwrite in place
  CHECK(read_file(path) == "second\n");
  CHECK_THROWS((void)read_file((tmp.path / "absent.txt").string()));
}

TEST_CASE("row stores carry the config hash up front") {
  RateReport r;
  r.fn_id = "bump";
  r.alpha = 0.5;
  r.rows = {{4, 0.5, 1.0}, {8, 0.3, 0.9}};
  r.slope = -0.7;
  r.intercept = 0.1;
  r.r2 = 0.99;
  r.slope_defined = true;
  r.besov_value = 2.0;
  r.config_hash = "abc123";

  std::string csv = rate_rows_csv(r);
  CHECK(csv.rfind("# config abc123\n", 0) == 0);
  CHECK(csv.find("n,error,normalized") != std::string::npos);
  CHECK(csv.find("\n4,") != std::string::npos);

  nlohmann::json j = nlohmann::json::parse(rate_report_json(r));
  CHECK(j.at("config").get<std::string>() == "abc123");
  CHECK(j.at("fn").get<std::string>() == "bump");
  CHECK(j.at("rows").size() == 2);

  BernsteinReport b;
  b.alpha = 1.0;
  b.trials = 2;
  b.rows = {{1, 3.0, 2.0}, {2, 2.5, 2.1}};
  b.random_slope = -0.4;
  b.witness_slope = -0.05;
  b.tail_start = 1;
  b.slopes_defined = true;
  b.config_hash = "beef";
  std::string bcsv = bernstein_rows_csv(b);
  CHECK(bcsv.rfind("# config beef\n", 0) == 0);
  CHECK(bcsv.find("n,random_max,witness") != std::string::npos);
  nlohmann::json bj = nlohmann::json::parse(bernstein_report_json(b));
  CHECK(bj.at("config").get<std::string>() == "beef");
  CHECK(bj.at("rows").size() == 2);

  GrowthReport g;
  g.rows = {{0.125, 1.0}, {0.0625, 1.4}};
  g.slope = 0.55;
  g.r2 = 0.97;
  std::string gcsv = growth_rows_csv(g, "0a0a");
  CHECK(gcsv.rfind("# config 0a0a\n", 0) == 0);
  nlohmann::json gj = nlohmann::json::parse(growth_report_json(g, "0a0a"));
  CHECK(gj.at("config").get<std::string>() == "0a0a");

  std::string svg = svg_loglog("rates", {{4.0, 0.5}, {8.0, 0.3}}, "abc123");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("abc123") != std::string::npos);
}

TEST_CASE("norm results serialize with identity fields") {
  BmoEstimate e;
  e.value = 0.5;
  e.argmax = {0.2, 0.8};
  e.family_size = 42;
  e.q = 1.0;
  nlohmann::json j = nlohmann::json::parse(bmo_to_json(e, "step", "h1"));
  CHECK(j.at("fn") == "step");
  CHECK(j.at("config") == "h1");
  CHECK(j.at("value").get<double>() == 0.5);

  BesovNorm bn;
  bn.alpha = 0.5;
  bn.tau = 2.0;
  bn.k = 2;
  bn.q = 2.0;
  bn.variant = BesovVariant::E;
  bn.value = 1.25;
  nlohmann::json bj = nlohmann::json::parse(besov_to_json(bn, "cusp05", "h2"));
  CHECK(bj.at("fn") == "cusp05");
  CHECK(bj.at("config") == "h2");
  CHECK(bj.at("value").get<double>() == 1.25);

  nlohmann::json qj = nlohmann::json::parse(bmo_qk_to_json(0.7, 1.0, 2, "step", "h3"));
  CHECK(qj.at("value").get<double>() == 0.7);
  CHECK(qj.at("config") == "h3");
}

}  // TEST_SUITE
