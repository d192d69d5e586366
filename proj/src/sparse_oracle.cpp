#include "lpgreedy/sparse_oracle.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lpgreedy {

namespace {

std::vector<int> order_by_magnitude(const Vec& x) {
  std::vector<int> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(x[a]) > std::abs(x[b]);
  });
  return idx;
}

// 1-D convex minimization of t -> ||base + t * dir||_p over the reals.
double line_min_coef(const Vec& base, const Vec& dir, double p, double start) {
  const double dn = lp_norm(dir, p);
  if (dn == 0.0) return start;
  // beyond |t| > (2 ||base|| / ||dir||) + |start| the value exceeds phi(start)
  const double radius = 2.0 * lp_norm(base, p) / dn + std::abs(start) + 1.0;
  double lo = start - radius, hi = start + radius;
  Vec buf(base.size());
  const auto phi = [&](double t) {
    buf = base + t * dir;
    return lp_norm(buf, p);
  };
  constexpr double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  while (hi - lo > 1e-12 * (1.0 + std::abs(start))) {
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
  return 0.5 * (lo + hi);
}

// coordinate descent on ||f - A c||_p from a given start
double polish_lp(const Mat& A, const Vec& f, double p, Vec& c) {
  const int m = static_cast<int>(A.cols());
  Vec resid = f - A * c;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double moved = 0.0;
    for (int t = 0; t < m; ++t) {
      const Vec base = resid + c[t] * A.col(t);  // residual without term t
      const double next = line_min_coef(base, -A.col(t), p, c[t]);
      moved = std::max(moved, std::abs(next - c[t]));
      c[t] = next;
      resid = base - c[t] * A.col(t);
    }
    if (moved < 1e-12) break;
  }
  return lp_norm(resid, p);
}

}  // namespace

MTermResult sigma_m_canonical(const Vec& x, int m, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("sigma_m_canonical: p must be > 0");
  if (m < 0 || m > x.size())
    throw std::invalid_argument("sigma_m_canonical: m out of range");
  const auto idx = order_by_magnitude(x);
  MTermResult out;
  Vec tail = x;
  for (int t = 0; t < m; ++t) {
    out.support.push_back(idx[static_cast<std::size_t>(t)]);
    out.coefs.push_back(x[idx[static_cast<std::size_t>(t)]]);
    tail[idx[static_cast<std::size_t>(t)]] = 0.0;
  }
  out.error = lp_norm(tail, p);
  out.certified = true;
  return out;
}

MTermResult sigma_m_bruteforce(const SymmetricSystem& system, const Vec& f,
                               int m) {
  const int n = system.n_atoms();
  if (n > 12 || m > 4)
    throw std::invalid_argument(
        "sigma_m_bruteforce: instance too large for brute force");
  if (m < 0 || m > n)
    throw std::invalid_argument("sigma_m_bruteforce: m out of range");
  const LpSpace& sp = system.space();
  if (f.size() != sp.dim())
    throw std::invalid_argument("sigma_m_bruteforce: dimension mismatch");
  const double p = sp.lebesgue_p();

  MTermResult best;
  best.error = sp.norm(f);
  best.certified = (p == 2.0);
  if (m == 0) return best;

  std::vector<int> comb(static_cast<std::size_t>(m));
  std::iota(comb.begin(), comb.end(), 0);
  const Mat& atoms = system.atoms();
  while (true) {
    Mat A(sp.dim(), m);
    for (int t = 0; t < m; ++t) A.col(t) = atoms.col(comb[static_cast<std::size_t>(t)]);
    Vec c = A.colPivHouseholderQr().solve(f);
    double err;
    if (p == 2.0) {
      err = (f - A * c).norm();
    } else {
      err = polish_lp(A, f, p, c);
      Vec c0 = Vec::Zero(m);  // restart from zero, keep the better polish
      const double err0 = polish_lp(A, f, p, c0);
      if (err0 < err) {
        err = err0;
        c = c0;
      }
    }
    if (err < best.error - 1e-15) {  // ties keep the earlier (lex-smallest) support
      best.error = err;
      best.support.assign(comb.begin(), comb.end());
      best.coefs.assign(c.data(), c.data() + m);
    }
    // next combination in lexicographic order
    int t = m - 1;
    while (t >= 0 && comb[static_cast<std::size_t>(t)] == n - m + t) --t;
    if (t < 0) break;
    ++comb[static_cast<std::size_t>(t)];
    for (int u = t + 1; u < m; ++u)
      comb[static_cast<std::size_t>(u)] = comb[static_cast<std::size_t>(u - 1)] + 1;
  }
  best.certified = (p == 2.0);
  return best;
}

TailBound tail_bound_check(const Vec& x, int m, double p, double q) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::invalid_argument("tail_bound_check: exponents must be > 0");
  if (q > p)
    throw std::invalid_argument("tail_bound_check: requires q <= p");
  if (m < 0) throw std::invalid_argument("tail_bound_check: m must be >= 0");
  Vec s = x.cwiseAbs();
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  const Eigen::Index n = s.size();
  TailBound out;
  const Eigen::Index from = std::min<Eigen::Index>(m, n);
  out.lhs = lp_norm(s.tail(n - from), p);
  out.rhs = std::pow(static_cast<double>(m), 1.0 / p - 1.0 / q) * lp_norm(s, q);
  out.pass = out.lhs == 0.0 || out.lhs <= out.rhs + 1e-12;
  return out;
}

}  // namespace lpgreedy
