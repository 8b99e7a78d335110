#pragma once

#include <string>
#include <vector>

#include "bmospline/funcspace.hpp"

namespace bmospline {

// Builtin target functions (corpus v1).  All entries except const1 are
// supported in [0, 1]; const1 is 1 on the whole line so that its oscillation
// really is zero on every window.
//
//   const1            1 everywhere
//   bump              exp(1 - 1/(1-u^2)), u = 2x-1, on (0,1)
//   cusp05            |x-1/2|^{1/2} * bump
//   cusp025           |x-1/2|^{1/4} * bump
//   step              indicator of [0, 1/2)
//   smoothstep_<eps>  0 -> 1 ramp of width eps, plateau, ramp back down
//   sawtooth_<j>      triangle wave, period 2^-j, slope +-1, on [0, 1]
//   randspline_<n>    seeded n-term piecewise-linear spline combination
//   logsing           ln|x-1/2| * bump (unbounded, finite oscillation)
struct CorpusEntry {
  std::string id;
  Func fn;
  double alpha_hint = 0.0;  // suggested rate target, 0 when none applies
};

// the nine pinned v1 ids (families at their representative parameters)
std::vector<std::string> corpus_ids();

// resolves pinned ids and family ids like smoothstep_0.25, sawtooth_3,
// randspline_8; unknown ids throw std::invalid_argument listing the options
Func corpus_function(const std::string& id);

std::vector<CorpusEntry> corpus_catalog();

// family builders
Func smoothed_step(double eps);    // ramps inside [0,1]; 0 < eps <= 0.5
Func sawtooth(int j);              // j >= 0
Func random_spline(int n);         // n >= 1, internally seeded by n

}  // namespace bmospline
