#ifndef LPGREEDY_SPACE_HPP
#define LPGREEDY_SPACE_HPP

#include <Eigen/Core>

#include <cstdint>

namespace lpgreedy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// l_p norm for 0 < p <= inf; below p = 1 this is the usual quasi-norm.
double lp_norm(const Vec& x, double p);

// Ambient l_p^n, 1 < p < inf, together with the smoothness data that drives
// the greedy recursion:
//   smooth_q = min(p, 2)
//   gamma    = 1/p for p <= 2, (p-1)/2 for p >= 2   (rho(u) <= gamma u^q)
//   conj_p   = smooth_q/(smooth_q - 1) = max(p/(p-1), 2)
// p = 1 and p = inf are rejected up front: those spaces are not uniformly
// smooth and the norming functional is not unique.
class LpSpace {
 public:
  LpSpace(int dim, double lebesgue_p);

  int dim() const { return dim_; }
  double lebesgue_p() const { return p_; }
  double dual_p() const { return p_ / (p_ - 1.0); }
  double smooth_q() const { return q_; }
  double gamma() const { return gamma_; }
  double conj_p() const { return conj_p_; }

  double norm(const Vec& x) const;

 private:
  int dim_;
  double p_;
  double q_;
  double gamma_;
  double conj_p_;
};

// Dual vector g of the peak functional for f: F_f(h) = g.dot(h) with
// ||g||_{p'} = 1 and g.dot(f) = ||f||_p. Throws for f = 0.
Vec norming_functional(const LpSpace& space, const Vec& f);

// Seeded lower estimate of rho(u) = sup over unit x, y of
// (||x+uy|| + ||x-uy||)/2 - 1, by random unit pairs followed by coordinate
// ascent with step halving. Deterministic given the seed.
double modulus_smoothness_estimate(const LpSpace& space, double u,
                                   int n_samples, std::uint64_t seed);

struct SegmentMin {
  double lambda;  // minimizer in [0, 1]
  double value;   // ||f - ((1-lambda) a + lambda b)||
};

// Minimizes the convex map lambda -> ||f - ((1-lambda) a + lambda b)|| over
// [0, 1] by golden-section search plus a 3-point local refinement; the
// endpoints are always part of the final comparison, so the returned value
// never exceeds min(phi(0), phi(1)).
SegmentMin segment_min(const LpSpace& space, const Vec& f, const Vec& a,
                       const Vec& b, double tol = 1e-12);

}  // namespace lpgreedy

#endif
