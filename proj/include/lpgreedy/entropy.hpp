#ifndef LPGREEDY_ENTROPY_HPP
#define LPGREEDY_ENTROPY_HPP

#include "lpgreedy/rng.hpp"
#include "lpgreedy/space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lpgreedy {

// Ambient marker for nets. Grid constructions live naturally in l_inf, which
// the LpSpace type excludes, so nets carry their own (dim, p) with p = inf
// allowed.
struct Ambient {
  int dim = 0;
  double p = 2.0;  // in (0, inf]

  static Ambient lp(const LpSpace& space);
  static Ambient lp(int dim, double p);
  static Ambient linf(int dim);

  double dist(const Vec& x, const Vec& y) const;
  bool operator==(const Ambient& o) const { return dim == o.dim && p == o.p; }
};

struct NetCertificate {
  enum class Kind { GridExact, Sampled, Composed };
  Kind kind = Kind::Sampled;
  long n_samples = 0;
  double max_observed = 0.0;
  std::vector<std::string> parents;

  std::string describe() const;
};

struct EpsNet {
  Ambient ambient;
  double radius = 0.0;
  std::vector<Vec> centers;
  NetCertificate certificate;
  // per-axis bit counts for product-grid nets (empty otherwise)
  std::vector<int> grid_bits;
};

// 2^k centers on a product grid in [-1,1]^d; per-axis counts are powers of
// two differing by at most a factor 2. The l_inf covering radius is
// 2^{-floor(k/d)} <= 2 * 2^{-k/d}, certified analytically.
EpsNet grid_net_ball(int d, int k);

// Exact distance from x to the nearest center of a product-grid net, O(d).
double grid_net_distance(const EpsNet& net, const Vec& x);

// Centers {y_i + eps_A z_j}, radius eps_A * eps_ball, size |A| * |ball|.
// Coverage follows from the triangle inequality whenever the parents cover.
EpsNet compose_product_net(const EpsNet& net_a, const EpsNet& net_ball);

// max over points of the distance to the nearest center (brute force).
double coverage_max_distance(const EpsNet& net, const std::vector<Vec>& points);

struct EntropyPoint {
  int k = 0;
  double eps_upper = 0.0;
  double eps_lower = 0.0;
};

// Farthest-point (Gonzalez) brackets on the sample cloud: with t greedy
// centers the covering radius equals the (t+1)-st insertion distance, and the
// first t+1 picks form a set with pairwise separation at least that value,
// so eps_lower = eps_upper / 2 is a genuine packing lower bound.
std::vector<EntropyPoint> empirical_entropy_curve(const std::vector<Vec>& samples,
                                                  int k_max,
                                                  const LpSpace& space);

// Per-scale bit budgets n_s = floor((r+1)(l-s) 2^{s+1}) for s = 1..l_r.
struct MultiscaleBudget {
  int l = 0;      // scale count of the class
  double r = 0.0; // rate parameter
  int l_r = 0;    // scales actually resolved by nets
  std::vector<int> n_s;

  static MultiscaleBudget make(int l, double r, int l_r);
  // The asymptotic proof additionally wants l_r <= l-2 and
  // sum n_s <= 2^{l-1}; toy instances usually break this, so it is reported
  // rather than enforced.
  bool proof_constraints_hold() const;
};

// A net for the unit ball of a subspace, centers already mapped to ambient
// coordinates.
struct SubspaceBallNet {
  Mat basis;  // ambient_dim x subspace_dim
  EpsNet net;
};

// Maps grid_net_ball(basis.cols(), k) into the subspace. For coordinate-block
// 0/1 bases under l_inf the stated radius is exact (grid-exact certificate);
// otherwise the radius carries the operator-norm factor of the basis and the
// certificate is downgraded to sampled.
SubspaceBallNet subspace_grid_net(const Ambient& ambient, const Mat& basis, int k);

struct BudgetTerm {
  std::string label;
  double value = 0.0;
};

struct MultiscaleNet {
  Ambient ambient;
  MultiscaleBudget budget;
  std::vector<std::vector<SubspaceBallNet>> scales;  // s = 1..l_r
  std::vector<Mat> tail_bases;                       // s = l_r+1..l
  std::vector<BudgetTerm> budget_chain;
  double radius = 0.0;        // sum of the chain
  std::uint64_t size = 0;     // prod M_s bookkeeping, M_s = |collection| 2^{n_s}
  NetCertificate certificate;

  // Explicit centers of the weighted Minkowski sum A; guarded to <= 2^20.
  std::vector<Vec> materialize() const;
};

struct HrMember {
  Vec f;
  std::vector<Vec> t_by_scale;      // s = 1..l (zero vectors where absent)
  std::vector<int> subspace_choice; // s = 1..l_r
};

HrMember sample_hr_member(const MultiscaleNet& net, Rng& rng);

// Upper bound on dist(f, A) for a member with known decomposition: per scale,
// the best net point of the chosen subspace.
double multiscale_assign_distance(const MultiscaleNet& net, const HrMember& member);

// Builds the weighted Minkowski-sum net with weights 2^{-r(s-1)}, records the
// error budget chain (class tail + per-scale quantization + unresolved
// scales), and verifies it against n_verify synthetic class members.
MultiscaleNet multiscale_compose(const MultiscaleBudget& budget,
                                 std::vector<std::vector<SubspaceBallNet>> scale_nets,
                                 double r,
                                 std::vector<Mat> tail_bases = {},
                                 int n_verify = 200,
                                 std::uint64_t seed = 1);

// Composes a net for an n-dimensional subspace compact with a ball grid net
// mapped through the given basis: size |F| * 2^{extra_k}, radius
// eps_F * 3 * 2^{-extra_k/n}.
EpsNet composed_ball_entropy_bound(const LpSpace& space, const Mat& subspace_basis,
                                   const EpsNet& f_net, int extra_k);

// JSON {ambient, radius, certificate, centers}, 17 significant digits.
std::string net_to_json(const EpsNet& net);

}  // namespace lpgreedy

#endif
