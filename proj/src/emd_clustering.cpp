#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wsnagg/emd_clustering.hpp"
#include "wsnagg/error.hpp"
#include "wsnagg/random.hpp"
#include "wsnagg/simd/kernels.hpp"

namespace wsnagg {

double Cov2::min_eigenvalue() const {
  const double half_trace = 0.5 * (xx + yy);
  const double half_diff = 0.5 * (xx - yy);
  return half_trace - std::sqrt(half_diff * half_diff + xy * xy);
}

std::vector<int> Clustering::members(int c) const {
  std::vector<int> out;
  for (std::size_t n = 0; n < assignment.size(); ++n) {
    if (assignment[n] == c) out.push_back(node_ids[n]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct PreparedComponent {
  simd::SymInverse2 inverse;
  double norm;  // 1 / (2 pi sqrt(det))
};

PreparedComponent prepare(const Cov2& s) {
  const double det = s.determinant();
  if (!(std::isfinite(det) && s.xx > 0.0 && det > 0.0)) {
    throw Error(ErrorCode::SingularCovariance,
                "covariance [[" + std::to_string(s.xx) + ", " + std::to_string(s.xy) + "], [" +
                    std::to_string(s.xy) + ", " + std::to_string(s.yy) +
                    "]] is not positive-definite");
  }
  return {{s.yy / det, -s.xy / det, s.xx / det}, 1.0 / (2.0 * std::numbers::pi * std::sqrt(det))};
}

// weighted(n, k) = pi_k N(x_n | mu_k, Sigma_k)
Responsibilities weighted_densities(const GaussianMixture& m, const PointSet& points) {
  const std::size_t n = points.size();
  const std::size_t k = m.pi.size();
  const auto& kernels = simd::active_kernels();
  Responsibilities w(n, k);
  std::vector<double> q(n);
  for (std::size_t c = 0; c < k; ++c) {
    const auto prep = prepare(m.sigma[c]);
    kernels.quadratic_forms(m.mu[c], prep.inverse, points.xs, points.ys, q);
    for (std::size_t i = 0; i < n; ++i) {
      w(i, c) = m.pi[c] * (std::exp(-0.5 * q[i]) * prep.norm);
    }
  }
  return w;
}

double row_total(const Responsibilities& w, std::size_t i) {
  double total = 0.0;
  for (std::size_t c = 0; c < w.cols(); ++c) total += w(i, c);
  return total;
}

[[noreturn]] void degenerate(std::size_t i) {
  throw Error(ErrorCode::DegenerateLikelihood,
              "point " + std::to_string(i) + " has zero density under every component");
}

// Per-axis population variance pooled over both axes, over the listed points.
double pooled_variance(const PointSet& points, const std::vector<std::size_t>& rows) {
  const double n = static_cast<double>(rows.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i : rows) {
    mx += points.xs[i];
    my += points.ys[i];
  }
  mx /= n;
  my /= n;
  double ss = 0.0;
  for (std::size_t i : rows) {
    const double dx = points.xs[i] - mx;
    const double dy = points.ys[i] - my;
    ss += dx * dx + dy * dy;
  }
  return std::max(ss / (2.0 * n), kCovarianceFloor);
}

double pooled_variance(const PointSet& points) {
  std::vector<std::size_t> all(points.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return pooled_variance(points, all);
}

// Seeded sampling without replacement, weighted by squared distance to the
// nearest pick so far (first pick uniform). Falls back to uniform over the
// unpicked points once every remaining weight is zero.
std::vector<std::size_t> spread_sample(Rng& rng, const PointSet& points, std::size_t count) {
  const std::size_t n = points.size();
  std::vector<std::size_t> picks;
  std::vector<bool> taken(n, false);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (picks.size() < count) {
    double total = 0.0;
    if (!picks.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i]) total += nearest[i];
      }
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.unit() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || nearest[i] == 0.0) continue;
        acc += nearest[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      std::size_t nth = static_cast<std::size_t>(rng.below(n - picks.size()));
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (nth-- == 0) {
          pick = i;
          break;
        }
      }
    }
    taken[pick] = true;
    picks.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = points.xs[i] - points.xs[pick];
      const double dy = points.ys[i] - points.ys[pick];
      nearest[i] = std::min(nearest[i], dx * dx + dy * dy);
    }
  }
  return picks;
}

// Lift the diagonal until the computed smallest eigenvalue clears the floor.
Cov2 floor_spectrum(Cov2 s) {
  // The eigenvalue carries cancellation error on the order of ulp(trace), so
  // the bump doubles until it dominates that noise.
  double lambda = s.min_eigenvalue();
  if (lambda >= kCovarianceFloor) return s;
  double bump = std::isfinite(lambda) ? (kCovarianceFloor - lambda) : kCovarianceFloor;
  bump += kCovarianceFloor * 1e-9;
  while (!(lambda >= kCovarianceFloor)) {
    s.xx += bump;
    s.yy += bump;
    lambda = s.min_eigenvalue();
    bump *= 2.0;
  }
  return s;
}

std::vector<int> hard_assign(const Responsibilities& r) {
  std::vector<int> out(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < r.cols(); ++c) {
      if (r(i, c) > r(i, best)) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

// Every cluster must own at least one node; steal from clusters with spares.
void repair_empty_clusters(const Responsibilities& r, const std::vector<int>& ids,
                           std::vector<int>& assignment) {
  const std::size_t k = r.cols();
  std::vector<int> sizes(k, 0);
  for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    std::size_t pick = r.rows();
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (sizes[static_cast<std::size_t>(assignment[i])] < 2) continue;
      if (pick == r.rows() || r(i, c) > r(pick, c) ||
          (r(i, c) == r(pick, c) && ids[i] < ids[pick])) {
        pick = i;
      }
    }
    --sizes[static_cast<std::size_t>(assignment[pick])];
    assignment[pick] = static_cast<int>(c);
    ++sizes[c];
  }
}

}  // namespace

double gaussian_density(Vec2 x, Vec2 mu, const Cov2& sigma) {
  const auto prep = prepare(sigma);
  const double dx = x.x - mu.x;
  const double dy = x.y - mu.y;
  const double q = (prep.inverse.xx * dx) * dx + (2.0 * prep.inverse.xy * dx) * dy +
                   (prep.inverse.yy * dy) * dy;
  return std::exp(-0.5 * q) * prep.norm;
}

double log_likelihood(const GaussianMixture& mixture, const PointSet& points) {
  const auto w = weighted_densities(mixture, points);
  double p = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double total = row_total(w, i);
    if (!(total > 0.0)) degenerate(i);
    p += std::log(total);
  }
  return p;
}

GaussianMixture initialize_mixture(const PointSet& points, int k, std::uint64_t seed) {
  if (k < 1 || static_cast<std::size_t>(k) > points.size()) {
    throw Error(ErrorCode::TooFewNodes, "cannot seed " + std::to_string(k) + " components from " +
                                            std::to_string(points.size()) + " points");
  }
  Rng rng(seed);
  const auto picks = spread_sample(rng, points, static_cast<std::size_t>(k));
  const double global = pooled_variance(points);

  // Spread of each component: pooled variance of its nearest-mean cell (ties
  // to the lower index), the global value for cells under two points.
  std::vector<std::vector<std::size_t>> cells(picks.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < picks.size(); ++c) {
      const double dx = points.xs[i] - points.xs[picks[c]];
      const double dy = points.ys[i] - points.ys[picks[c]];
      const double d = dx * dx + dy * dy;
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    cells[best].push_back(i);
  }

  GaussianMixture m;
  for (std::size_t c = 0; c < picks.size(); ++c) {
    m.pi.push_back(1.0 / k);
    m.mu.push_back(points[picks[c]]);
    const double s2 = cells[c].size() < 2 ? global : pooled_variance(points, cells[c]);
    m.sigma.push_back(Cov2::scaled_identity(s2));
  }
  return m;
}

Responsibilities e_step(const GaussianMixture& mixture, const PointSet& points) {
  auto r = weighted_densities(mixture, points);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    const double total = row_total(r, i);
    if (!(total > 0.0)) degenerate(i);
    for (std::size_t c = 0; c < r.cols(); ++c) r(i, c) /= total;
  }
  return r;
}

GaussianMixture m_step(const Responsibilities& r, const PointSet& points) {
  const std::size_t n = r.rows();
  const std::size_t k = r.cols();
  const double count = static_cast<double>(n);
  GaussianMixture m;
  m.pi.resize(k);
  m.mu.resize(k);
  m.sigma.resize(k);

  std::vector<std::size_t> empty;
  for (std::size_t c = 0; c < k; ++c) {
    double mass = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mass += r(i, c);
      sx += r(i, c) * points.xs[i];
      sy += r(i, c) * points.ys[i];
    }
    if (mass < kEmptyComponentMass) {
      empty.push_back(c);
      continue;
    }
    const Vec2 mean{sx / mass, sy / mass};
    Cov2 s;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = points.xs[i] - mean.x;
      const double dy = points.ys[i] - mean.y;
      s.xx += r(i, c) * dx * dx;
      s.xy += r(i, c) * dx * dy;
      s.yy += r(i, c) * dy * dy;
    }
    s.xx = s.xx / mass + kCovarianceFloor;
    s.xy = s.xy / mass;
    s.yy = s.yy / mass + kCovarianceFloor;
    m.pi[c] = mass / count;
    m.mu[c] = mean;
    m.sigma[c] = floor_spectrum(s);
  }

  if (!empty.empty()) {
    // Least-explained points first: smallest maximum responsibility.
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < n; ++i) {
      double best = 0.0;
      for (std::size_t c = 0; c < k; ++c) best = std::max(best, r(i, c));
      order.emplace_back(best, i);
    }
    std::sort(order.begin(), order.end());
    const Cov2 start = Cov2::scaled_identity(pooled_variance(points));
    for (std::size_t e = 0; e < empty.size(); ++e) {
      const std::size_t c = empty[e];
      m.pi[c] = 1.0 / count;
      m.mu[c] = points[order[e % order.size()].second];
      m.sigma[c] = start;
    }
    double total = 0.0;
    for (double p : m.pi) total += p;
    for (double& p : m.pi) p /= total;
  }
  return m;
}

Clustering fit_clusters_from(const PointSet& points, GaussianMixture mixture,
                             const EmOptions& options) {
  double previous = log_likelihood(mixture, points);
  Clustering out;
  out.log_likelihood_trace.push_back(previous);
  if (options.observer) options.observer({EmPhase::Init, 0, mixture, nullptr, previous});

  int iter = 0;
  while (iter < options.max_iters) {
    ++iter;
    const auto r = e_step(mixture, points);
    if (options.observer) {
      options.observer({EmPhase::Expectation, iter, mixture, &r,
                        std::numeric_limits<double>::quiet_NaN()});
    }
    mixture = m_step(r, points);
    const double current = log_likelihood(mixture, points);
    out.log_likelihood_trace.push_back(current);
    if (options.observer) options.observer({EmPhase::Maximization, iter, mixture, nullptr, current});
    out.converged = std::abs(current - previous) < options.theta;
    previous = current;
    if (out.converged) break;
  }

  out.iterations_used = iter;
  out.final_log_likelihood = previous;
  out.responsibilities = e_step(mixture, points);
  out.mixture = std::move(mixture);
  out.node_ids.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.node_ids[i] = static_cast<int>(i);
  out.assignment = hard_assign(out.responsibilities);
  repair_empty_clusters(out.responsibilities, out.node_ids, out.assignment);
  return out;
}

Clustering fit_clusters(const PointSet& points, int k, std::uint64_t seed, const EmOptions& options) {
  Clustering best;
  const int starts = std::max(1, options.restarts);
  for (int r = 0; r < starts; ++r) {
    const std::uint64_t start_seed = seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL;
    auto fit = fit_clusters_from(points, initialize_mixture(points, k, start_seed), options);
    const bool better = r == 0 || (fit.converged && !best.converged) ||
                        (fit.converged == best.converged &&
                         fit.final_log_likelihood > best.final_log_likelihood);
    if (better) best = std::move(fit);
  }
  return best;
}

Clustering run_emd(const Scenario& scenario, const std::vector<int>& node_ids, int k,
                   const EmOptions& options) {
  std::vector<Vec2> pts;
  pts.reserve(node_ids.size());
  for (int id : node_ids) pts.push_back(scenario.nodes.at(static_cast<std::size_t>(id)).position);
  auto out = fit_clusters(PointSet(pts), k, scenario.seed, options);
  out.node_ids = node_ids;
  // Row order follows node_ids, so repair ties must be re-resolved by real id.
  out.assignment = hard_assign(out.responsibilities);
  repair_empty_clusters(out.responsibilities, out.node_ids, out.assignment);
  return out;
}

Clustering run_emd(const Scenario& scenario) {
  EmOptions options;
  options.theta = scenario.theta_em;
  options.max_iters = scenario.max_em_iters;
  return run_emd(scenario, scenario.source_ids(), scenario.k, options);
}

}  // namespace wsnagg
