#include "lpgreedy/ratefit.hpp"

#include <cmath>
#include <stdexcept>

namespace lpgreedy {

RateFit fit_rate(const std::vector<std::pair<double, double>>& values,
                 double target, double slack, double m_lo, double m_hi) {
  std::vector<std::pair<double, double>> pts;  // (log m, log v)
  double used_lo = 0.0, used_hi = 0.0;
  for (const auto& [m, v] : values) {
    if (m < m_lo || m > m_hi) continue;
    if (!(v > 1e-13)) continue;
    if (!(m > 0.0)) continue;
    if (pts.empty()) {
      used_lo = used_hi = m;
    } else {
      used_lo = std::min(used_lo, m);
      used_hi = std::max(used_hi, m);
    }
    pts.emplace_back(std::log(m), std::log(v));
  }
  if (pts.size() < 3)
    throw std::invalid_argument("fit_rate: fewer than 3 usable points");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  fit.n_used = static_cast<int>(pts.size());
  fit.m_lo = used_lo;
  fit.m_hi = used_hi;
  fit.target = target;
  fit.slack = slack;
  fit.pass = std::abs(fit.slope - target) <= slack;
  return fit;
}

}  // namespace lpgreedy
