#include "bmospline/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "bmospline/util.hpp"
#include "json.hpp"

namespace bmospline {

namespace {

const char* variant_name(BesovVariant v) {
  switch (v) {
    case BesovVariant::E: return "besov-e";
    case BesovVariant::Q: return "besov-q";
    case BesovVariant::modulus: return "besov-mod";
  }
  return "besov-e";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string partition_to_json(const MultilevelPartition& p) {
  nlohmann::ordered_json j;
  j["window"] = {p.window().lo, p.window().hi};
  j["k"] = p.k();
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (int m = 0; m <= p.max_level(); ++m) {
    auto span = p.knots(m);
    levels.push_back(std::vector<double>(span.begin(), span.end()));
  }
  j["levels"] = levels;
  return j.dump(2) + "\n";
}

MultilevelPartition partition_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  auto w = j.at("window");
  if (!w.is_array() || w.size() != 2)
    throw std::invalid_argument("partition file: window must be [lo, hi]");
  Interval window{w[0].get<double>(), w[1].get<double>()};
  int k = j.at("k").get<int>();
  auto levels = j.at("levels").get<std::vector<std::vector<double>>>();
  return MultilevelPartition::from_levels(window, k, std::move(levels));
}

std::string decomposition_to_json(const SplineDecomposition& dec,
                                  const std::string& partition_ref,
                                  const std::string& fn_id,
                                  const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["partition_ref"] = partition_ref;
  j["fn"] = fn_id;
  j["k"] = dec.k;
  j["q"] = dec.q;
  j["config"] = config_hash;
  nlohmann::ordered_json base = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < dec.levels[0].size(); ++i) {
    nlohmann::ordered_json e;
    e["j"] = i;
    e["coef"] = dec.levels[0][i];
    base.push_back(e);
  }
  j["base"] = base;
  nlohmann::ordered_json details = nlohmann::ordered_json::array();
  for (int m = 1; m <= dec.max_level(); ++m)
    for (std::size_t i = 0; i < dec.levels[m].size(); ++i) {
      nlohmann::ordered_json e;
      e["m"] = m;
      e["j"] = i;
      e["coef"] = dec.levels[m][i];
      details.push_back(e);
    }
  j["details"] = details;
  return j.dump(2) + "\n";
}

LoadedDecomposition decomposition_from_json(const std::string& text,
                                            const MultilevelPartition& partition) {
  nlohmann::json j = nlohmann::json::parse(text);
  LoadedDecomposition out;
  out.partition = std::make_shared<MultilevelPartition>(partition);
  out.partition_ref = j.value("partition_ref", "");
  out.fn_id = j.value("fn", "");
  out.config_hash = j.value("config", "");
  out.dec.partition = out.partition.get();
  out.dec.k = j.at("k").get<int>();
  out.dec.q = j.at("q").get<double>();
  if (out.dec.k != partition.k())
    throw std::invalid_argument("decomposition file: k disagrees with the partition");
  out.dec.levels.resize(partition.num_levels());
  for (int m = 0; m <= partition.max_level(); ++m)
    out.dec.levels[m].assign(partition.support_count(m), 0.0);
  for (const auto& e : j.at("base")) {
    int idx = e.at("j").get<int>();
    if (idx < 0 || idx >= partition.support_count(0))
      throw std::invalid_argument("decomposition file: base index out of range");
    out.dec.levels[0][idx] = e.at("coef").get<double>();
  }
  for (const auto& e : j.at("details")) {
    int m = e.at("m").get<int>();
    int idx = e.at("j").get<int>();
    if (m < 1 || m > partition.max_level())
      throw std::invalid_argument("decomposition file: level out of range");
    if (idx < 0 || idx >= partition.support_count(m))
      throw std::invalid_argument("decomposition file: detail index out of range");
    out.dec.levels[m][idx] = e.at("coef").get<double>();
  }
  return out;
}

LoadedDecomposition load_decomposition(const std::string& path) {
  namespace fs = std::filesystem;
  std::string text = read_file(path);
  nlohmann::json j = nlohmann::json::parse(text);
  std::string ref = j.at("partition_ref").get<std::string>();
  fs::path ref_path(ref);
  if (ref_path.is_relative()) ref_path = fs::path(path).parent_path() / ref_path;
  MultilevelPartition p = partition_from_json(read_file(ref_path.string()));
  return decomposition_from_json(text, p);
}

std::string bmo_to_json(const BmoEstimate& e, const std::string& fn_id,
                        const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["variant"] = "bmo";
  j["fn"] = fn_id;
  j["q"] = e.q;
  j["value"] = e.value;
  j["argmax"] = {e.argmax.lo, e.argmax.hi};
  j["family_size"] = e.family_size;
  j["config"] = config_hash;
  return j.dump(2) + "\n";
}

std::string bmo_qk_to_json(double value, double q, int k,
                           const std::string& fn_id,
                           const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["variant"] = "bmo-qk";
  j["fn"] = fn_id;
  j["q"] = q;
  j["k"] = k;
  j["value"] = value;
  j["config"] = config_hash;
  return j.dump(2) + "\n";
}

std::string besov_to_json(const BesovNorm& n, const std::string& fn_id,
                          const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(n.variant);
  j["fn"] = fn_id;
  j["alpha"] = n.alpha;
  j["tau"] = n.tau;
  j["k"] = n.k;
  j["q"] = n.q;
  j["value"] = n.value;
  j["config"] = config_hash;
  return j.dump(2) + "\n";
}

std::string rate_rows_csv(const RateReport& r) {
  std::string out = "# config " + r.config_hash + "\n";
  out += "n,error,normalized\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.n) + "," + format_double(row.error) + "," +
           format_double(row.normalized) + "\n";
  return out;
}

std::string rate_report_json(const RateReport& r) {
  nlohmann::ordered_json j;
  j["fn"] = r.fn_id;
  j["alpha"] = r.alpha;
  j["slope_defined"] = r.slope_defined;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r2"] = r.r2;
  j["besov_value"] = r.besov_value;
  j["config"] = r.config_hash;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["n"] = row.n;
    e["error"] = row.error;
    e["normalized"] = row.normalized;
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string bernstein_rows_csv(const BernsteinReport& r) {
  std::string out = "# config " + r.config_hash + "\n";
  out += "n,random_max,witness\n";
  for (const auto& row : r.rows)
    out += std::to_string(row.n) + "," + format_double(row.random_max) + "," +
           format_double(row.witness) + "\n";
  return out;
}

std::string bernstein_report_json(const BernsteinReport& r) {
  nlohmann::ordered_json j;
  j["alpha"] = r.alpha;
  j["trials"] = r.trials;
  j["slopes_defined"] = r.slopes_defined;
  j["random_slope"] = r.random_slope;
  j["witness_slope"] = r.witness_slope;
  j["tail_start"] = r.tail_start;
  j["config"] = r.config_hash;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["n"] = row.n;
    e["random_max"] = row.random_max;
    e["witness"] = row.witness;
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string growth_rows_csv(const GrowthReport& r,
                            const std::string& config_hash) {
  std::string out = "# config " + config_hash + "\n";
  out += "eps,value\n";
  for (const auto& row : r.rows)
    out += format_double(row.eps) + "," + format_double(row.value) + "\n";
  return out;
}

std::string growth_report_json(const GrowthReport& r,
                               const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["slope"] = r.slope;
  j["intercept"] = r.intercept;
  j["r2"] = r.r2;
  j["config"] = config_hash;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["eps"] = row.eps;
    e["value"] = row.value;
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string svg_loglog(const std::string& title,
                       const std::vector<std::pair<double, double>>& pts,
                       const std::string& config_hash) {
  const double W = 640, H = 440, ml = 70, mr = 20, mt = 40, mb = 50;
  double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  bool first = true;
  for (auto [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    double lx = std::log10(x), ly = std::log10(y);
    if (first) {
      xlo = xhi = lx;
      ylo = yhi = ly;
      first = false;
    } else {
      xlo = std::min(xlo, lx);
      xhi = std::max(xhi, lx);
      ylo = std::min(ylo, ly);
      yhi = std::max(yhi, ly);
    }
  }
  if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
  if (yhi - ylo < 1e-12) yhi = ylo + 1.0;
  auto px = [&](double lx) { return ml + (lx - xlo) / (xhi - xlo) * (W - ml - mr); };
  auto py = [&](double ly) { return H - mb - (ly - ylo) / (yhi - ylo) * (H - mt - mb); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
    << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
    << xml_escape(title) << "</text>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
    << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
    << H - mb << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << ml << "\" y=\"" << H - mb + 20
    << "\" font-family=\"sans-serif\" font-size=\"12\">1e" << format_double(xlo)
    << "</text>\n";
  s << "<text x=\"" << W - mr << "\" y=\"" << H - mb + 20
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
    << format_double(xhi) << "</text>\n";
  s << "<text x=\"" << ml - 6 << "\" y=\"" << H - mb
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
    << format_double(ylo) << "</text>\n";
  s << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
    << format_double(yhi) << "</text>\n";
  std::ostringstream poly;
  for (auto [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    poly << px(std::log10(x)) << "," << py(std::log10(y)) << " ";
    s << "<circle cx=\"" << px(std::log10(x)) << "\" cy=\"" << py(std::log10(y))
      << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  s << "<polyline points=\"" << poly.str()
    << "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
  s << "<!-- config " << xml_escape(config_hash) << " -->\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace bmospline
