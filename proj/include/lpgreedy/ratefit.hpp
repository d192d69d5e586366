#ifndef LPGREEDY_RATEFIT_HPP
#define LPGREEDY_RATEFIT_HPP

#include <utility>
#include <vector>

namespace lpgreedy {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // in log space
  double residual_rms = 0.0;
  int n_used = 0;
  double m_lo = 0.0, m_hi = 0.0;  // range actually used
  double target = 0.0;
  double slack = 0.0;
  bool pass = false;  // |slope - target| <= slack
};

// Least squares of log v against log m over m in [m_lo, m_hi]; values at or
// below 1e-13 are excluded (log domain). Throws unless >= 3 points survive.
RateFit fit_rate(const std::vector<std::pair<double, double>>& values,
                 double target, double slack, double m_lo, double m_hi);

}  // namespace lpgreedy

#endif
