#include "lpgreedy/entropy.hpp"

#include "lpgreedy/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lpgreedy {

Ambient Ambient::lp(const LpSpace& space) {
  return Ambient{space.dim(), space.lebesgue_p()};
}

Ambient Ambient::lp(int dim, double p) {
  if (dim < 1 || !(p > 0.0)) throw std::invalid_argument("Ambient: bad (dim, p)");
  return Ambient{dim, p};
}

Ambient Ambient::linf(int dim) {
  if (dim < 1) throw std::invalid_argument("Ambient: bad dim");
  return Ambient{dim, std::numeric_limits<double>::infinity()};
}

double Ambient::dist(const Vec& x, const Vec& y) const {
  if (x.size() != dim || y.size() != dim)
    throw std::invalid_argument("Ambient::dist: dimension mismatch");
  return lp_norm(x - y, p);
}

std::string NetCertificate::describe() const {
  switch (kind) {
    case Kind::GridExact:
      return "grid-exact";
    case Kind::Sampled:
      return "sampled(" + std::to_string(n_samples) + ", " +
             format_g17(max_observed) + ")";
    case Kind::Composed: {
      std::string s = "composed(";
      for (std::size_t i = 0; i < parents.size(); ++i) {
        if (i) s += ", ";
        s += parents[i];
      }
      return s + ")";
    }
  }
  return "?";
}

EpsNet grid_net_ball(int d, int k) {
  if (d < 1) throw std::invalid_argument("grid_net_ball: d must be >= 1");
  if (k < 0) throw std::invalid_argument("grid_net_ball: k must be >= 0");
  std::vector<int> bits(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) bits[static_cast<std::size_t>(i)] = k / d + (i < k % d ? 1 : 0);

  EpsNet net;
  net.ambient = Ambient::linf(d);
  net.radius = std::pow(2.0, -static_cast<double>(k / d));
  net.grid_bits = bits;
  net.certificate.kind = NetCertificate::Kind::GridExact;

  std::vector<long> counts(static_cast<std::size_t>(d));
  long total = 1;
  for (int i = 0; i < d; ++i) {
    counts[static_cast<std::size_t>(i)] = 1L << bits[static_cast<std::size_t>(i)];
    total *= counts[static_cast<std::size_t>(i)];
  }
  net.centers.reserve(static_cast<std::size_t>(total));
  std::vector<long> ix(static_cast<std::size_t>(d), 0);
  Vec c(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double h = std::pow(2.0, -bits[static_cast<std::size_t>(i)]);
      c[i] = -1.0 + (2.0 * static_cast<double>(ix[static_cast<std::size_t>(i)]) + 1.0) * h;
    }
    net.centers.push_back(c);
    int axis = d - 1;
    while (axis >= 0) {
      if (++ix[static_cast<std::size_t>(axis)] < counts[static_cast<std::size_t>(axis)]) break;
      ix[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return net;
}

double grid_net_distance(const EpsNet& net, const Vec& x) {
  if (net.grid_bits.empty())
    throw std::invalid_argument("grid_net_distance: not a grid net");
  const int d = net.ambient.dim;
  if (x.size() != d)
    throw std::invalid_argument("grid_net_distance: dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    const int b = net.grid_bits[static_cast<std::size_t>(i)];
    const double h = std::pow(2.0, -b);        // half spacing
    const double spacing = 2.0 * h;
    const long count = 1L << b;
    long t = static_cast<long>(std::floor((x[i] + 1.0) / spacing));
    t = std::clamp<long>(t, 0, count - 1);
    const double center = -1.0 + (2.0 * static_cast<double>(t) + 1.0) * h;
    worst = std::max(worst, std::abs(x[i] - center));
  }
  return worst;
}

EpsNet compose_product_net(const EpsNet& net_a, const EpsNet& net_ball) {
  if (!(net_a.ambient == net_ball.ambient))
    throw std::invalid_argument("compose_product_net: ambient mismatch");
  EpsNet out;
  out.ambient = net_a.ambient;
  out.radius = net_a.radius * net_ball.radius;
  out.certificate.kind = NetCertificate::Kind::Composed;
  out.certificate.parents = {net_a.certificate.describe(),
                             net_ball.certificate.describe()};
  out.centers.reserve(net_a.centers.size() * net_ball.centers.size());
  for (const Vec& y : net_a.centers)
    for (const Vec& z : net_ball.centers) out.centers.push_back(y + net_a.radius * z);
  return out;
}

double coverage_max_distance(const EpsNet& net, const std::vector<Vec>& points) {
  if (net.centers.empty())
    throw std::invalid_argument("coverage_max_distance: empty net");
  double worst = 0.0;
  for (const Vec& x : points) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& c : net.centers) best = std::min(best, net.ambient.dist(x, c));
    worst = std::max(worst, best);
  }
  return worst;
}

std::vector<EntropyPoint> empirical_entropy_curve(const std::vector<Vec>& samples,
                                                  int k_max,
                                                  const LpSpace& space) {
  if (samples.empty())
    throw std::invalid_argument("empirical_entropy_curve: samples must be nonempty");
  if (k_max < 0)
    throw std::invalid_argument("empirical_entropy_curve: k_max must be >= 0");
  const long n = static_cast<long>(samples.size());
  const long max_centers = std::min(n, 1L << std::min(k_max, 30));

  std::vector<double> dist(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  // radius_after[t] = covering radius of the first t greedy centers
  std::vector<double> radius_after(static_cast<std::size_t>(max_centers) + 1, 0.0);
  long current = 0;
  for (long t = 1; t <= max_centers; ++t) {
    if (t > 1) {
      long arg = -1;
      double best = -1.0;
      for (long i = 0; i < n; ++i) {
        if (!taken[static_cast<std::size_t>(i)] &&
            dist[static_cast<std::size_t>(i)] > best) {
          best = dist[static_cast<std::size_t>(i)];
          arg = i;
        }
      }
      current = arg;
    }
    taken[static_cast<std::size_t>(current)] = 1;
    double worst = 0.0;
    for (long i = 0; i < n; ++i) {
      double& di = dist[static_cast<std::size_t>(i)];
      di = std::min(di, space.norm(samples[static_cast<std::size_t>(i)] -
                                   samples[static_cast<std::size_t>(current)]));
      worst = std::max(worst, di);
    }
    radius_after[static_cast<std::size_t>(t)] = worst;
  }

  std::vector<EntropyPoint> curve;
  for (int k = 0; k <= k_max; ++k) {
    const long want = k < 30 ? (1L << k) : n;
    const long c = std::min(want, n);
    EntropyPoint pt;
    pt.k = k;
    pt.eps_upper = c >= n ? 0.0 : radius_after[static_cast<std::size_t>(c)];
    pt.eps_lower = c >= n ? 0.0 : radius_after[static_cast<std::size_t>(c)] / 2.0;
    curve.push_back(pt);
  }
  return curve;
}

MultiscaleBudget MultiscaleBudget::make(int l, double r, int l_r) {
  if (l < 1) throw std::invalid_argument("MultiscaleBudget: l must be >= 1");
  if (l_r < 0 || l_r > l)
    throw std::invalid_argument("MultiscaleBudget: l_r must lie in [0, l]");
  if (!(r > 0.0)) throw std::invalid_argument("MultiscaleBudget: r must be > 0");
  MultiscaleBudget b;
  b.l = l;
  b.r = r;
  b.l_r = l_r;
  for (int s = 1; s <= l_r; ++s)
    b.n_s.push_back(static_cast<int>(
        std::floor((r + 1.0) * static_cast<double>(l - s) * std::pow(2.0, s + 1))));
  return b;
}

bool MultiscaleBudget::proof_constraints_hold() const {
  if (l_r > l - 2) return false;
  long sum = 0;
  for (int v : n_s) sum += v;
  return sum <= (1L << (l - 1));
}

SubspaceBallNet subspace_grid_net(const Ambient& ambient, const Mat& basis, int k) {
  if (basis.rows() != ambient.dim)
    throw std::invalid_argument("subspace_grid_net: basis rows must match ambient dim");
  const int d = static_cast<int>(basis.cols());
  EpsNet grid = grid_net_ball(d, k);

  // coordinate-block detection: 0/1 entries, one nonzero per column, disjoint rows
  bool block = std::isinf(ambient.p);
  std::vector<char> row_used(static_cast<std::size_t>(ambient.dim), 0);
  for (int j = 0; block && j < d; ++j) {
    int nonzeros = 0;
    for (int i = 0; i < ambient.dim; ++i) {
      const double v = basis(i, j);
      if (v == 0.0) continue;
      ++nonzeros;
      if (v != 1.0 || row_used[static_cast<std::size_t>(i)]) block = false;
      row_used[static_cast<std::size_t>(i)] = 1;
    }
    if (nonzeros != 1) block = false;
  }

  double factor = 1.0;
  if (!block) {
    // ||V c||_ambient <= factor ||c||_inf with factor from the row l1 sums
    Vec rowsums = basis.cwiseAbs().rowwise().sum();
    factor = lp_norm(rowsums, ambient.p);
  }

  SubspaceBallNet out;
  out.basis = basis;
  out.net.ambient = ambient;
  out.net.radius = grid.radius * factor;
  out.net.grid_bits = block ? grid.grid_bits : std::vector<int>{};
  out.net.certificate.kind = block ? NetCertificate::Kind::GridExact
                                   : NetCertificate::Kind::Sampled;
  out.net.centers.reserve(grid.centers.size());
  for (const Vec& z : grid.centers) out.net.centers.push_back(basis * z);
  return out;
}

namespace {

Vec random_in_subspace_ball(const Ambient& ambient, const Mat& basis, double bound,
                            Rng& rng, bool on_boundary) {
  const int d = static_cast<int>(basis.cols());
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = 2.0 * rng.uniform() - 1.0;
  Vec v = basis * c;
  const double nv = lp_norm(v, ambient.p);
  if (nv < 1e-300) return Vec::Zero(ambient.dim);
  const double target = bound * (on_boundary ? 1.0 : rng.uniform());
  return v * (target / nv);
}

}  // namespace

HrMember sample_hr_member(const MultiscaleNet& net, Rng& rng) {
  const int l = net.budget.l;
  const int l_r = net.budget.l_r;
  const double r = net.budget.r;
  HrMember mem;
  mem.f = Vec::Zero(net.ambient.dim);
  for (int s = 1; s <= l; ++s) {
    const double bound = std::pow(2.0, -r * (s - 1));
    const bool boundary = rng.uniform() < 0.25;
    Vec t = Vec::Zero(net.ambient.dim);
    if (s <= l_r) {
      const auto& collection = net.scales[static_cast<std::size_t>(s - 1)];
      const int pick = rng.uniform_int(0, static_cast<int>(collection.size()) - 1);
      mem.subspace_choice.push_back(pick);
      t = random_in_subspace_ball(net.ambient,
                                  collection[static_cast<std::size_t>(pick)].basis,
                                  bound, rng, boundary);
    } else if (static_cast<std::size_t>(s - l_r - 1) < net.tail_bases.size()) {
      t = random_in_subspace_ball(net.ambient,
                                  net.tail_bases[static_cast<std::size_t>(s - l_r - 1)],
                                  bound, rng, boundary);
    }
    mem.t_by_scale.push_back(t);
    mem.f += t;
  }
  // class residual, anywhere in ambient with norm <= 2^{-r l}
  Vec w(net.ambient.dim);
  for (int i = 0; i < net.ambient.dim; ++i) w[i] = rng.normal();
  const double nw = lp_norm(w, net.ambient.p);
  if (nw > 1e-300)
    mem.f += w * (std::pow(2.0, -r * l) * rng.uniform() / nw);
  return mem;
}

double multiscale_assign_distance(const MultiscaleNet& net, const HrMember& member) {
  Vec approx = Vec::Zero(net.ambient.dim);
  for (int s = 1; s <= net.budget.l_r; ++s) {
    const double weight = std::pow(2.0, -net.budget.r * (s - 1));
    const auto& sb =
        net.scales[static_cast<std::size_t>(s - 1)]
                  [static_cast<std::size_t>(member.subspace_choice[static_cast<std::size_t>(s - 1)])];
    const Vec target = member.t_by_scale[static_cast<std::size_t>(s - 1)] / weight;
    double best = std::numeric_limits<double>::infinity();
    const Vec* best_center = nullptr;
    for (const Vec& y : sb.net.centers) {
      const double d = net.ambient.dist(target, y);
      if (d < best) {
        best = d;
        best_center = &y;
      }
    }
    approx += weight * (*best_center);
  }
  return net.ambient.dist(member.f, approx);
}

std::vector<Vec> MultiscaleNet::materialize() const {
  if (size > (1ull << 20))
    throw std::invalid_argument(
        "MultiscaleNet::materialize: size exceeds the 2^20 toy-scale guard");
  std::vector<Vec> acc{Vec::Zero(ambient.dim)};
  for (int s = 1; s <= budget.l_r; ++s) {
    const double weight = std::pow(2.0, -budget.r * (s - 1));
    std::vector<Vec> next;
    std::size_t scale_count = 0;
    for (const auto& sb : scales[static_cast<std::size_t>(s - 1)])
      scale_count += sb.net.centers.size();
    next.reserve(acc.size() * scale_count);
    for (const Vec& a : acc)
      for (const auto& sb : scales[static_cast<std::size_t>(s - 1)])
        for (const Vec& y : sb.net.centers) next.push_back(a + weight * y);
    acc = std::move(next);
  }
  return acc;
}

MultiscaleNet multiscale_compose(const MultiscaleBudget& budget,
                                 std::vector<std::vector<SubspaceBallNet>> scale_nets,
                                 double r, std::vector<Mat> tail_bases,
                                 int n_verify, std::uint64_t seed) {
  if (r != budget.r)
    throw std::invalid_argument("multiscale_compose: budget inconsistency (r mismatch)");
  if (static_cast<int>(scale_nets.size()) != budget.l_r)
    throw std::invalid_argument(
        "multiscale_compose: one net collection required per resolved scale");
  if (!tail_bases.empty() &&
      static_cast<int>(tail_bases.size()) != budget.l - budget.l_r)
    throw std::invalid_argument(
        "multiscale_compose: tail bases must cover scales l_r+1..l");
  // recompute the budget formula to catch tampered n_s
  const MultiscaleBudget fresh = MultiscaleBudget::make(budget.l, budget.r, budget.l_r);
  if (fresh.n_s != budget.n_s)
    throw std::invalid_argument("multiscale_compose: budget inconsistency (n_s formula)");

  MultiscaleNet net;
  net.budget = budget;
  if (scale_nets.empty() || scale_nets[0].empty())
    throw std::invalid_argument("multiscale_compose: empty scale collection");
  net.ambient = scale_nets[0][0].net.ambient;
  net.size = 1;
  for (int s = 1; s <= budget.l_r; ++s) {
    const auto& collection = scale_nets[static_cast<std::size_t>(s - 1)];
    if (collection.empty())
      throw std::invalid_argument("multiscale_compose: empty scale collection");
    const std::uint64_t want = 1ull << budget.n_s[static_cast<std::size_t>(s - 1)];
    const long dim_cap = 1L << (s + 1);
    for (const auto& sb : collection) {
      if (!(sb.net.ambient == net.ambient))
        throw std::invalid_argument("multiscale_compose: ambient mismatch");
      if (sb.net.centers.size() != want)
        throw std::invalid_argument(
            "multiscale_compose: scale " + std::to_string(s) +
            " nets must have exactly 2^n_s centers");
      if (sb.basis.cols() > dim_cap)
        throw std::invalid_argument("multiscale_compose: subspace dimension exceeds 2^{s+1}");
    }
    const std::uint64_t m_s = static_cast<std::uint64_t>(collection.size()) * want;
    if (net.size > std::numeric_limits<std::uint64_t>::max() / m_s)
      throw std::invalid_argument("multiscale_compose: size bookkeeping overflow");
    net.size *= m_s;
  }
  net.scales = std::move(scale_nets);
  net.tail_bases = std::move(tail_bases);

  net.budget_chain.push_back({"class-tail", std::pow(2.0, -r * budget.l)});
  for (int s = 1; s <= budget.l_r; ++s) {
    double eps_s = 0.0;
    for (const auto& sb : net.scales[static_cast<std::size_t>(s - 1)])
      eps_s = std::max(eps_s, sb.net.radius);
    net.budget_chain.push_back(
        {"scale-" + std::to_string(s), std::pow(2.0, -r * (s - 1)) * eps_s});
  }
  for (int s = budget.l_r + 1; s <= budget.l; ++s)
    net.budget_chain.push_back(
        {"unresolved-scale-" + std::to_string(s), std::pow(2.0, -r * (s - 1))});
  net.radius = 0.0;
  for (const auto& term : net.budget_chain) net.radius += term.value;

  Rng rng = Rng(seed).stream("hr-members");
  double max_obs = 0.0;
  for (int i = 0; i < n_verify; ++i) {
    const HrMember mem = sample_hr_member(net, rng);
    max_obs = std::max(max_obs, multiscale_assign_distance(net, mem));
  }
  net.certificate.kind = NetCertificate::Kind::Sampled;
  net.certificate.n_samples = n_verify;
  net.certificate.max_observed = max_obs;
  return net;
}

EpsNet composed_ball_entropy_bound(const LpSpace& space, const Mat& subspace_basis,
                                   const EpsNet& f_net, int extra_k) {
  const int nsub = static_cast<int>(subspace_basis.cols());
  if (subspace_basis.rows() != space.dim() || f_net.ambient.dim != space.dim() ||
      f_net.ambient.p != space.lebesgue_p())
    throw std::invalid_argument(
        "composed_ball_entropy_bound: dimension bookkeeping mismatch");
  if (extra_k < 0)
    throw std::invalid_argument("composed_ball_entropy_bound: extra_k must be >= 0");
  const EpsNet grid = grid_net_ball(nsub, extra_k);
  EpsNet out;
  out.ambient = f_net.ambient;
  out.radius = f_net.radius * 3.0 *
               std::pow(2.0, -static_cast<double>(extra_k) / nsub);
  out.certificate.kind = NetCertificate::Kind::Composed;
  out.certificate.parents = {f_net.certificate.describe(),
                             "ball-grid(" + std::to_string(nsub) + ", " +
                                 std::to_string(extra_k) + ")"};
  out.centers.reserve(f_net.centers.size() * grid.centers.size());
  for (const Vec& y : f_net.centers)
    for (const Vec& z : grid.centers)
      out.centers.push_back(y + f_net.radius * (subspace_basis * z));
  return out;
}

std::string net_to_json(const EpsNet& net) {
  std::string s = "{\"ambient\": {\"dim\": " + std::to_string(net.ambient.dim) +
                  ", \"p\": " +
                  (std::isinf(net.ambient.p) ? std::string("\"inf\"")
                                             : format_g17(net.ambient.p)) +
                  "}, \"radius\": " + format_g17(net.radius) +
                  ", \"certificate\": \"" + net.certificate.describe() +
                  "\", \"centers\": [";
  for (std::size_t j = 0; j < net.centers.size(); ++j) {
    if (j) s += ", ";
    s += '[';
    for (Eigen::Index i = 0; i < net.centers[j].size(); ++i) {
      if (i) s += ", ";
      s += format_g17(net.centers[j][i]);
    }
    s += ']';
  }
  s += "]}";
  return s;
}

}  // namespace lpgreedy
