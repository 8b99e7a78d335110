#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bmospline/bspline.hpp"
#include "bmospline/norms.hpp"
#include "bmospline/nterm.hpp"
#include "bmospline/partition.hpp"

namespace bmospline {

std::string read_file(const std::string& path);
// temp file in the target directory + rename, so readers never see partial
// content
void atomic_write(const std::string& path, const std::string& content);

// partition file: {"window": [a, b], "k": k, "levels": [[knots...], ...]}
std::string partition_to_json(const MultilevelPartition& p);
MultilevelPartition partition_from_json(const std::string& text);

// decomposition file: {"partition_ref", "fn", "k", "q", "config",
//   "base": [{"j", "coef"}...], "details": [{"m", "j", "coef"}...]}
std::string decomposition_to_json(const SplineDecomposition& dec,
                                  const std::string& partition_ref,
                                  const std::string& fn_id,
                                  const std::string& config_hash);

struct LoadedDecomposition {
  std::shared_ptr<MultilevelPartition> partition;
  SplineDecomposition dec;  // dec.partition aliases *partition
  std::string partition_ref;
  std::string fn_id;
  std::string config_hash;
};

// validates every index against the given partition
LoadedDecomposition decomposition_from_json(const std::string& text,
                                            const MultilevelPartition& partition);
// reads the file and its partition_ref (resolved relative to the file's
// directory)
LoadedDecomposition load_decomposition(const std::string& path);

// norm results as single JSON objects
std::string bmo_to_json(const BmoEstimate& e, const std::string& fn_id,
                        const std::string& config_hash);
std::string bmo_qk_to_json(double value, double q, int k,
                           const std::string& fn_id,
                           const std::string& config_hash);
std::string besov_to_json(const BesovNorm& n, const std::string& fn_id,
                          const std::string& config_hash);

// rate / growth artifacts; CSV is the canonical row store, with the config
// hash on a leading comment line
std::string rate_rows_csv(const RateReport& r);
std::string rate_report_json(const RateReport& r);
std::string bernstein_rows_csv(const BernsteinReport& r);
std::string bernstein_report_json(const BernsteinReport& r);
std::string growth_rows_csv(const GrowthReport& r,
                            const std::string& config_hash);
std::string growth_report_json(const GrowthReport& r,
                               const std::string& config_hash);

// minimal self-contained log-log scatter+line plot
std::string svg_loglog(const std::string& title,
                       const std::vector<std::pair<double, double>>& pts,
                       const std::string& config_hash);

}  // namespace bmospline
