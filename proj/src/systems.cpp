#include "lpgreedy/systems.hpp"

#include "lpgreedy/io.hpp"
#include "lpgreedy/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpgreedy {

SymmetricSystem::SymmetricSystem(LpSpace space, Mat atoms)
    : space_(space), atoms_(std::move(atoms)), normalized_(true) {
  if (atoms_.rows() != space_.dim())
    throw std::invalid_argument("SymmetricSystem: atom dimension mismatch");
  if (atoms_.cols() < 1)
    throw std::invalid_argument("SymmetricSystem: empty system");
  for (Eigen::Index j = 0; j < atoms_.cols(); ++j) {
    const double n = space_.norm(atoms_.col(j));
    if (n > 1.0 + 1e-12)
      throw std::invalid_argument("SymmetricSystem: atom " + std::to_string(j) +
                                  " has norm > 1");
    if (std::abs(n - 1.0) > 1e-12) normalized_ = false;
  }
}

SystemPtr canonical_system(const LpSpace& space) {
  return std::make_shared<SymmetricSystem>(
      space, Mat(Mat::Identity(space.dim(), space.dim())));
}

SystemPtr random_system(const LpSpace& space, int n_atoms, std::uint64_t seed) {
  if (n_atoms < 1)
    throw std::invalid_argument("random_system: n_atoms must be >= 1");
  Rng rng = Rng(seed).stream("system-atoms");
  Mat atoms(space.dim(), n_atoms);
  for (int j = 0; j < n_atoms; ++j) {
    for (int i = 0; i < space.dim(); ++i) atoms(i, j) = rng.normal();
    const double n = lp_norm(atoms.col(j), space.lebesgue_p());
    if (n < 1e-300) {
      atoms.col(j).setZero();
      atoms(0, j) = 1.0;
    } else {
      atoms.col(j) /= n;
    }
  }
  return std::make_shared<SymmetricSystem>(space, std::move(atoms));
}

double CoefRepr::hull_mass() const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < coefs.size(); ++j) {
    const double a = std::abs(coefs[j]);
    if (a == 0.0) continue;
    s += hull_q == 1.0 ? a : std::pow(a, hull_q);
  }
  return s;
}

CoefRepr sample_hull(SystemPtr system, double hull_q, std::uint64_t seed) {
  if (!system) throw std::invalid_argument("sample_hull: null system");
  if (!(hull_q > 0.0 && hull_q <= 1.0))
    throw std::invalid_argument("sample_hull: hull_q must lie in (0, 1]");
  Rng rng = Rng(seed).stream("hull-sample");
  const int n = system->n_atoms();
  Vec w(n);
  double tot = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = -std::log(rng.uniform_pos());
    tot += w[j];
  }
  w /= tot;
  Vec c(n);
  for (int j = 0; j < n; ++j) {
    const double mag = hull_q == 1.0 ? w[j] : std::pow(w[j], 1.0 / hull_q);
    c[j] = rng.sign() * mag;
  }
  return CoefRepr{std::move(system), std::move(c), hull_q};
}

Vec synthesize(const CoefRepr& repr) {
  if (!repr.system) throw std::invalid_argument("synthesize: null system");
  if (repr.coefs.size() != repr.system->n_atoms())
    throw std::invalid_argument("synthesize: coefficient dimension mismatch");
  return repr.system->atoms() * repr.coefs;
}

HullDistance hull_distance_l2(SystemPtr system, const Vec& f, double tol,
                              int max_iter) {
  if (!system) throw std::invalid_argument("hull_distance_l2: null system");
  const LpSpace& sp = system->space();
  if (sp.lebesgue_p() != 2.0)
    throw std::invalid_argument(
        "hull_distance_l2: certified hull distance requires Hilbert case");
  if (f.size() != sp.dim())
    throw std::invalid_argument("hull_distance_l2: dimension mismatch");
  if (!(tol > 0.0) || max_iter < 1)
    throw std::invalid_argument("hull_distance_l2: bad tol or max_iter");

  const Mat& A = system->atoms();
  const int n = system->n_atoms();
  Vec wp = Vec::Zero(n), wm = Vec::Zero(n);

  // start at the vertex most correlated with f
  Vec corr = A.transpose() * f;
  Eigen::Index j0 = 0;
  corr.cwiseAbs().maxCoeff(&j0);
  const int s0 = corr[j0] >= 0.0 ? 1 : -1;
  (s0 > 0 ? wp[j0] : wm[j0]) = 1.0;
  Vec phi = static_cast<double>(s0) * A.col(j0);

  double upper_sq = (f - phi).squaredNorm();
  double lower_sq = 0.0;
  HullDistance out;
  int it = 0;
  for (; it < max_iter; ++it) {
    const Vec d = f - phi;
    const double q = d.squaredNorm();
    upper_sq = std::min(upper_sq, q);
    corr = A.transpose() * d;

    Eigen::Index jf = 0;
    const double cf = corr.cwiseAbs().maxCoeff(&jf);
    const int sf = corr[jf] >= 0.0 ? 1 : -1;
    const double base = d.dot(phi);
    const double fw_gain = cf - base;        // <d, v_fw - phi> >= 0
    const double gap = 2.0 * fw_gain;        // Frank-Wolfe duality gap of ||f-phi||^2
    lower_sq = std::max(lower_sq, q - gap);
    out.history.emplace_back(std::sqrt(std::max(upper_sq, 0.0)),
                             std::sqrt(std::max(lower_sq, 0.0)));
    if (upper_sq - lower_sq <= tol) break;

    // away vertex: active signed atom with the worst correlation
    int ja = -1, sa = 0;
    double worst = std::numeric_limits<double>::infinity(), wa = 0.0;
    for (int j = 0; j < n; ++j) {
      if (wp[j] > 0.0 && corr[j] < worst) {
        worst = corr[j];
        ja = j;
        sa = 1;
        wa = wp[j];
      }
      if (wm[j] > 0.0 && -corr[j] < worst) {
        worst = -corr[j];
        ja = j;
        sa = -1;
        wa = wm[j];
      }
    }
    const double away_gain = base - worst;  // <d, phi - v_away>

    if (fw_gain >= away_gain || ja < 0 || wa >= 1.0 - 1e-15) {
      const Vec dir = static_cast<double>(sf) * A.col(jf) - phi;
      const double dd = dir.squaredNorm();
      if (dd <= 0.0) break;  // already at the FW vertex, gap handled above
      const double gamma = std::clamp(d.dot(dir) / dd, 0.0, 1.0);
      if (gamma <= 0.0) break;
      wp *= (1.0 - gamma);
      wm *= (1.0 - gamma);
      (sf > 0 ? wp[jf] : wm[jf]) += gamma;
    } else {
      const Vec dir = phi - static_cast<double>(sa) * A.col(ja);
      const double dd = dir.squaredNorm();
      if (dd <= 0.0) break;
      const double gmax = wa / (1.0 - wa);
      const double gamma = std::clamp(d.dot(dir) / dd, 0.0, gmax);
      if (gamma <= 0.0) break;
      wp *= (1.0 + gamma);
      wm *= (1.0 + gamma);
      double& slot = (sa > 0 ? wp[ja] : wm[ja]);
      slot -= gamma;
      if (slot < 1e-15) slot = 0.0;  // drop step
    }
    phi = A * (wp - wm);
    const double mass = wp.sum() + wm.sum();
    if (mass > 1.0 + 1e-13) {  // guard against accumulated drift
      wp /= mass;
      wm /= mass;
      phi /= mass;
    }
  }

  out.upper = std::sqrt(std::max(upper_sq, 0.0));
  out.lower = std::min(std::sqrt(std::max(lower_sq, 0.0)), out.upper);
  out.iterations = it;
  out.witness = CoefRepr{std::move(system), wp - wm, 1.0};
  return out;
}

std::string system_to_json(const SymmetricSystem& system) {
  std::string s = "{\"dim\": " + std::to_string(system.space().dim()) +
                  ", \"p\": " + format_g17(system.space().lebesgue_p()) +
                  ", \"atoms\": [";
  for (int j = 0; j < system.n_atoms(); ++j) {
    if (j) s += ", ";
    s += '[';
    for (int i = 0; i < system.space().dim(); ++i) {
      if (i) s += ", ";
      s += format_g17(system.atoms()(i, j));
    }
    s += ']';
  }
  s += "]}";
  return s;
}

SystemPtr system_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int dim = j.at("dim").get<int>();
  const double p = j.at("p").get<double>();
  const auto& atoms = j.at("atoms");
  if (!atoms.is_array() || atoms.empty())
    throw std::invalid_argument("system_from_json: atoms must be a nonempty array");
  Mat m(dim, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t c = 0; c < atoms.size(); ++c) {
    const auto& col = atoms[c];
    if (!col.is_array() || static_cast<int>(col.size()) != dim)
      throw std::invalid_argument("system_from_json: atom length mismatch");
    for (int i = 0; i < dim; ++i) m(i, static_cast<Eigen::Index>(c)) = col[i].get<double>();
  }
  return std::make_shared<SymmetricSystem>(LpSpace(dim, p), std::move(m));
}

}  // namespace lpgreedy
