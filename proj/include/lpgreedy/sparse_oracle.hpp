#ifndef LPGREEDY_SPARSE_ORACLE_HPP
#define LPGREEDY_SPARSE_ORACLE_HPP

#include "lpgreedy/systems.hpp"

#include <vector>

namespace lpgreedy {

struct MTermResult {
  std::vector<int> support;   // |support| <= m
  std::vector<double> coefs;  // aligned with support
  double error = 0.0;         // sigma value in the ambient norm
  bool certified = true;      // exact, vs best-effort upper bound
};

// Best m-term error with respect to the canonical basis: keep the m largest
// |x_j| (ties to the smaller index), error is the tail norm. Exactly optimal
// for the canonical system. p ranges over (0, inf]; below 1 the tail is
// measured in the quasi-norm.
MTermResult sigma_m_canonical(const Vec& x, int m, double p);

// Exhaustive support enumeration for tiny systems (n_atoms <= 12, m <= 4).
// p = 2 solves least squares per support and is certified exact; p != 2
// polishes the least-squares start by coordinate descent (with a zero-start
// restart) and is flagged as an upper bound. Lexicographically smallest
// optimal support wins.
MTermResult sigma_m_bruteforce(const SymmetricSystem& system, const Vec& f,
                               int m);

struct TailBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Sorted-tail inequality for 0 < q <= p:
//   (sum_{j>m} x_(j)^p)^{1/p} <= m^{1/p - 1/q} (sum_j x_(j)^q)^{1/q}
// where x_(j) are the |x| entries sorted descending.
TailBound tail_bound_check(const Vec& x, int m, double p, double q);

}  // namespace lpgreedy

#endif
