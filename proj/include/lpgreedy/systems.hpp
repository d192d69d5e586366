#ifndef LPGREEDY_SYSTEMS_HPP
#define LPGREEDY_SYSTEMS_HPP

#include "lpgreedy/space.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace lpgreedy {

// Finite symmetric system D = {±g_j} of elements with ||g_j||_p <= 1.
// Atoms are stored once; the sign half is handled by the operations.
// Immutable after construction, safe to share across runs.
class SymmetricSystem {
 public:
  SymmetricSystem(LpSpace space, Mat atoms);

  const LpSpace& space() const { return space_; }
  const Mat& atoms() const { return atoms_; }
  int n_atoms() const { return static_cast<int>(atoms_.cols()); }
  bool normalized() const { return normalized_; }

 private:
  LpSpace space_;
  Mat atoms_;
  bool normalized_;
};

using SystemPtr = std::shared_ptr<const SymmetricSystem>;

// The n coordinate vectors e_j (unit norm in every l_p).
SystemPtr canonical_system(const LpSpace& space);

// Seeded standard-normal columns rescaled to unit l_p norm.
SystemPtr random_system(const LpSpace& space, int n_atoms, std::uint64_t seed);

// Coefficient vector over the atoms with hull-exponent bookkeeping:
// sum |c_j|^hull_q <= 1 for members of A_q(D).
struct CoefRepr {
  SystemPtr system;
  Vec coefs;
  double hull_q = 1.0;

  double hull_mass() const;  // sum |c_j|^hull_q
};

// Draws a member of A_q(D) with sum |c_j|^q = 1: w uniform on the simplex
// (normalized exponentials), |c_j| = w_j^{1/q}, independent random signs.
CoefRepr sample_hull(SystemPtr system, double hull_q, std::uint64_t seed);

Vec synthesize(const CoefRepr& repr);

struct HullDistance {
  double upper = 0.0;  // ||f - witness||, non-increasing over iterations
  double lower = 0.0;  // certified from the Frank-Wolfe duality gap
  CoefRepr witness;
  int iterations = 0;
  // (upper, lower) per iteration, for the monotonicity checks
  std::vector<std::pair<double, double>> history;
};

// Distance from f to A_1(D) in the Hilbert case, by away-step Frank-Wolfe
// over conv(±atoms) with exact line search. Stops once
// upper^2 - lower^2 <= tol or max_iter is reached. Throws for p != 2:
// the duality-gap certificate is only valid there.
HullDistance hull_distance_l2(SystemPtr system, const Vec& f, double tol,
                              int max_iter);

// JSON document {dim, p, atoms: [[...], ...]}; doubles carry 17 significant
// digits so a save/load round trip is bit exact.
std::string system_to_json(const SymmetricSystem& system);
SystemPtr system_from_json(const std::string& text);

}  // namespace lpgreedy

#endif
