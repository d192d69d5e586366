#include "lpgreedy/space.hpp"

#include "lpgreedy/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lpgreedy {

double lp_norm(const Vec& x, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  const Eigen::Index n = x.size();
  if (n == 0) return 0.0;
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 2.0) return x.norm();
  if (p == 1.0) return x.cwiseAbs().sum();
  double s = 0.0;
  if (p == 3.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(x[i]);
      s += a * a * a;
    }
    return std::cbrt(s);
  }
  if (p == 1.5) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(x[i]);
      s += a * std::sqrt(a);
    }
    return std::pow(s, 2.0 / 3.0);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::abs(x[i]);
    if (a > 0.0) s += std::pow(a, p);
  }
  return std::pow(s, 1.0 / p);
}

LpSpace::LpSpace(int dim, double lebesgue_p) : dim_(dim), p_(lebesgue_p) {
  if (dim < 1) throw std::invalid_argument("LpSpace: dim must be >= 1");
  if (!(p_ > 1.0) || !std::isfinite(p_))
    throw std::invalid_argument(
        "LpSpace: p must lie in (1, inf); outside that range the space is "
        "not uniformly smooth");
  q_ = std::min(p_, 2.0);
  gamma_ = p_ <= 2.0 ? 1.0 / p_ : (p_ - 1.0) / 2.0;
  conj_p_ = q_ / (q_ - 1.0);
}

double LpSpace::norm(const Vec& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("LpSpace::norm: dimension mismatch");
  return lp_norm(x, p_);
}

Vec norming_functional(const LpSpace& space, const Vec& f) {
  if (f.size() != space.dim())
    throw std::invalid_argument("norming_functional: dimension mismatch");
  const double p = space.lebesgue_p();
  const double nf = lp_norm(f, p);
  if (nf == 0.0)
    throw std::invalid_argument(
        "norming_functional: functional undefined at zero");
  const double e = p - 1.0;
  const double scale = std::pow(nf, e);
  Vec g(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    double m;
    if (e == 1.0)
      m = a;
    else if (e == 2.0)
      m = a * a;
    else if (e == 0.5)
      m = std::sqrt(a);
    else
      m = a > 0.0 ? std::pow(a, e) : 0.0;
    g[i] = std::copysign(m / scale, f[i]);
  }
  return g;
}

namespace {

Vec unit_or_e1(const LpSpace& space, Vec v) {
  const double n = lp_norm(v, space.lebesgue_p());
  if (n < 1e-300) {
    v.setZero();
    v[0] = 1.0;
    return v;
  }
  return v / n;
}

}  // namespace

double modulus_smoothness_estimate(const LpSpace& space, double u,
                                   int n_samples, std::uint64_t seed) {
  if (!(u > 0.0))
    throw std::invalid_argument("modulus_smoothness_estimate: u must be > 0");
  if (n_samples < 1)
    throw std::invalid_argument(
        "modulus_smoothness_estimate: n_samples must be >= 1");
  const int n = space.dim();
  const double p = space.lebesgue_p();
  const auto objective = [&](const Vec& x, const Vec& y) {
    return 0.5 * (lp_norm(x + u * y, p) + lp_norm(x - u * y, p)) - 1.0;
  };
  const Rng root(seed);
  double best = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    Rng rng = root.stream("modulus-pair-" + std::to_string(s));
    Vec x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = rng.normal();
    for (int i = 0; i < n; ++i) y[i] = rng.normal();
    x = unit_or_e1(space, x);
    y = unit_or_e1(space, y);
    double val = objective(x, y);
    double step = 0.5;
    for (int iter = 0; iter < 200 && step > 1e-10; ++iter) {
      bool improved = false;
      for (int which = 0; which < 2; ++which) {
        Vec& v = which == 0 ? x : y;
        for (int i = 0; i < n; ++i) {
          for (double d : {step, -step}) {
            Vec cand = v;
            cand[i] += d;
            cand = unit_or_e1(space, cand);
            Vec& other = which == 0 ? y : x;
            const double c =
                which == 0 ? objective(cand, other) : objective(other, cand);
            if (c > val + 1e-15) {
              val = c;
              v = cand;
              improved = true;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, val);
  }
  return best;
}

SegmentMin segment_min(const LpSpace& space, const Vec& f, const Vec& a,
                       const Vec& b, double tol) {
  if (f.size() != space.dim() || a.size() != space.dim() ||
      b.size() != space.dim())
    throw std::invalid_argument("segment_min: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("segment_min: tol must be > 0");
  const double p = space.lebesgue_p();
  const Vec u = f - a;
  const Vec v = b - a;
  Vec buf(f.size());
  const auto phi = [&](double lam) {
    buf = u - lam * v;
    return lp_norm(buf, p);
  };
  constexpr double gr = 0.6180339887498949;  // (sqrt(5)-1)/2
  double lo = 0.0, hi = 1.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = phi(x2);
    }
  }
  double mid = 0.5 * (lo + hi);
  // Function-value comparisons cannot localize the minimizer of a flat convex
  // map beyond ~sqrt(machine eps). A 3-point parabolic refinement on a local
  // grid recovers the vertex to ~1e-12 wherever phi is smooth.
  {
    const double h = 1e-4;
    double x0 = std::clamp(mid, h, 1.0 - h);
    const double yl = phi(x0 - h), y0 = phi(x0), yr = phi(x0 + h);
    const double denom = yr - 2.0 * y0 + yl;
    if (denom > 0.0) {
      const double vertex = x0 - 0.5 * h * (yr - yl) / denom;
      if (std::isfinite(vertex))
        mid = std::clamp(vertex, std::max(0.0, x0 - h), std::min(1.0, x0 + h));
    }
  }
  SegmentMin best{0.0, phi(0.0)};
  for (double cand : {1.0, mid - tol, mid, mid + tol}) {
    if (cand < 0.0 || cand > 1.0) continue;
    const double val = phi(cand);
    if (val < best.value) best = {cand, val};
  }
  return best;
}

}  // namespace lpgreedy
