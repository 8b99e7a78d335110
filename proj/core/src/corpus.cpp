#include "bmospline/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "bmospline/bspline.hpp"
#include "bmospline/partition.hpp"
#include "bmospline/rng.hpp"
#include "bmospline/util.hpp"

namespace bmospline {

namespace {

double bump_fn(double x) {
  const double u = 2.0 * x - 1.0;
  const double d = 1.0 - u * u;
  if (d <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / d);
}

Func make_const1() {
  return Func::from_pw("const1",
                       PiecewisePoly::constant(Interval{-1e6, 1e6}, 1.0));
}

Func make_bump() {
  return Func::from_callable("bump", Interval{0.0, 1.0}, bump_fn);
}

Func make_cusp(const std::string& id, double expo) {
  return Func::from_callable(id, Interval{0.0, 1.0}, [expo](double x) {
    return std::pow(std::abs(x - 0.5), expo) * bump_fn(x);
  });
}

Func make_step() {
  PiecewisePoly pw({0.0, 0.5}, {{1.0}});
  return Func::from_pw("step", pw);
}

Func make_logsing() {
  return Func::from_callable("logsing", Interval{0.0, 1.0}, [](double x) {
    return std::log(std::max(std::abs(x - 0.5), 1e-300)) * bump_fn(x);
  });
}

}  // namespace

Func smoothed_step(double eps) {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("smoothed_step: eps must lie in (0, 0.5]");
  const std::string name = "smoothstep_" + format_double(eps);
  if (eps == 0.5) {
    PiecewisePoly pw({0.0, 0.5, 1.0}, {{0.5, 0.5}, {0.5, -0.5}});
    return Func::from_pw(name, pw);
  }
  PiecewisePoly pw({0.0, eps, 1.0 - eps, 1.0},
                   {{0.5, 0.5}, {1.0}, {0.5, -0.5}});
  return Func::from_pw(name, pw);
}

Func sawtooth(int j) {
  if (j < 0) throw std::invalid_argument("sawtooth: level must be nonnegative");
  if (j > 20) throw std::invalid_argument("sawtooth: level too deep");
  const int pieces = 1 << (j + 1);
  const double half = std::ldexp(1.0, -(j + 1));  // half period = peak height
  std::vector<double> breaks(pieces + 1);
  for (int i = 0; i <= pieces; ++i) breaks[i] = i * half;
  breaks.back() = 1.0;
  std::vector<std::vector<double>> coef(pieces);
  for (int i = 0; i < pieces; ++i)
    coef[i] = (i % 2 == 0) ? std::vector<double>{0.5 * half, 0.5 * half}
                           : std::vector<double>{0.5 * half, -0.5 * half};
  return Func::from_pw("sawtooth_" + std::to_string(j),
                       PiecewisePoly(std::move(breaks), std::move(coef)));
}

Func random_spline(int n) {
  if (n < 1) throw std::invalid_argument("random_spline: n must be positive");
  MultilevelPartition p = MultilevelPartition::build_dyadic(Interval{-1.0, 2.0}, 6, 2);
  std::vector<SupportIndex> eligible;
  for (int m = 0; m <= p.max_level(); ++m)
    for (auto s : p.supports(m)) {
      Interval u = p.support_interval(s);
      if (u.lo >= 0.0 && u.hi <= 1.0) eligible.push_back(s);
    }
  if (n > static_cast<int>(eligible.size()))
    throw std::invalid_argument("random_spline: n exceeds the eligible supports");
  Rng rng(derive_seed(0x5eed, static_cast<std::uint64_t>(n)));
  auto pick = rng.sample_without_replacement(static_cast<int>(eligible.size()), n);
  std::vector<SupportIndex> sel;
  std::vector<double> coeffs;
  sel.reserve(pick.size());
  for (int i : pick) {
    sel.push_back(eligible[i]);
    coeffs.push_back(rng.normal());
  }
  return Func::from_pw("randspline_" + std::to_string(n),
                       synth_spline(p, sel, coeffs));
}

std::vector<std::string> corpus_ids() {
  return {"const1",          "bump",       "cusp05",
          "cusp025",         "step",       "smoothstep_0.125",
          "sawtooth_2",      "randspline_16", "logsing"};
}

Func corpus_function(const std::string& id) {
  if (id == "const1") return make_const1();
  if (id == "bump") return make_bump();
  if (id == "cusp05") return make_cusp("cusp05", 0.5);
  if (id == "cusp025") return make_cusp("cusp025", 0.25);
  if (id == "step") return make_step();
  if (id == "logsing") return make_logsing();
  auto suffix = [&](const char* prefix) -> const char* {
    const std::size_t n = std::char_traits<char>::length(prefix);
    return id.compare(0, n, prefix) == 0 ? id.c_str() + n : nullptr;
  };
  try {
    if (const char* s = suffix("smoothstep_")) {
      Func f = smoothed_step(std::strtod(s, nullptr));
      if (f.name() == id) return f;
    } else if (const char* s2 = suffix("sawtooth_")) {
      Func f = sawtooth(std::atoi(s2));
      if (f.name() == id) return f;
    } else if (const char* s3 = suffix("randspline_")) {
      Func f = random_spline(std::atoi(s3));
      if (f.name() == id) return f;
    }
  } catch (const std::invalid_argument&) {
    // fall through to the listing error
  }
  std::string msg = "unknown function id '" + id + "'; available:";
  for (const auto& known : corpus_ids()) msg += " " + known;
  msg += " (families: smoothstep_<eps>, sawtooth_<j>, randspline_<n>)";
  throw std::invalid_argument(msg);
}

std::vector<CorpusEntry> corpus_catalog() {
  std::vector<CorpusEntry> out;
  auto add = [&](const std::string& id, double alpha_hint) {
    out.push_back(CorpusEntry{id, corpus_function(id), alpha_hint});
  };
  add("const1", 0.0);
  add("bump", 1.0);
  add("cusp05", 0.5);
  add("cusp025", 0.25);
  add("step", 0.0);
  add("smoothstep_0.125", 1.0);
  add("sawtooth_2", 1.0);
  add("randspline_16", 1.0);
  add("logsing", 0.0);
  return out;
}

}  // namespace bmospline
