#pragma once

// Gaussian-mixture clustering of node positions by expectation-maximization.
// The log-likelihood tracked across iterations is
//
//   P = sum_n ln( sum_k pi_k N(x_n | mu_k, Sigma_k) )
//
// and the E/M updates are the standard mixture updates with a ridge of
// kCovarianceFloor on every covariance diagonal.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "wsnagg/geometry.hpp"
#include "wsnagg/scenario.hpp"

namespace wsnagg {

inline constexpr double kCovarianceFloor = 1e-6;      // m^2
inline constexpr double kEmptyComponentMass = 1e-9;

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Cov2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double determinant() const { return xx * yy - xy * xy; }
  double min_eigenvalue() const;
  static Cov2 scaled_identity(double s) { return {s, 0.0, s}; }

  friend bool operator==(const Cov2&, const Cov2&) = default;
};

struct GaussianMixture {
  std::vector<double> pi;
  std::vector<Vec2> mu;
  std::vector<Cov2> sigma;

  int k() const { return static_cast<int>(pi.size()); }
  friend bool operator==(const GaussianMixture&, const GaussianMixture&) = default;
};

/// Row-major N x K posterior weights.
class Responsibilities {
 public:
  Responsibilities() = default;
  Responsibilities(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t n, std::size_t k) { return v_[n * cols_ + k]; }
  double operator()(std::size_t n, std::size_t k) const { return v_[n * cols_ + k]; }

  friend bool operator==(const Responsibilities&, const Responsibilities&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> v_;
};

struct Clustering {
  std::vector<int> node_ids;  // row n of the matrices describes node_ids[n]
  Responsibilities responsibilities;
  std::vector<int> assignment;
  GaussianMixture mixture;
  double final_log_likelihood = 0.0;
  int iterations_used = 0;
  bool converged = false;  // last |dP| < theta within max_iters
  std::vector<double> log_likelihood_trace;  // P after init, then after every M-step

  int k() const { return mixture.k(); }
  /// Node ids in cluster c, ascending.
  std::vector<int> members(int c) const;

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Bivariate normal density. Throws SingularCovariance unless sigma is SPD.
double gaussian_density(Vec2 x, Vec2 mu, const Cov2& sigma);

/// Throws DegenerateLikelihood when a point has zero total density.
double log_likelihood(const GaussianMixture& mixture, const PointSet& points);

/// pi uniform, means drawn without replacement from the points, covariances
/// s^2 I with s^2 the pooled per-axis variance (floored). Throws TooFewNodes.
GaussianMixture initialize_mixture(const PointSet& points, int k, std::uint64_t seed);

Responsibilities e_step(const GaussianMixture& mixture, const PointSet& points);

/// Components whose mass falls below kEmptyComponentMass are reseeded onto
/// the least-explained points.
GaussianMixture m_step(const Responsibilities& r, const PointSet& points);

enum class EmPhase { Init, Expectation, Maximization };

struct EmProgress {
  EmPhase phase;
  int iteration;
  const GaussianMixture& mixture;
  const Responsibilities* responsibilities;  // set for Expectation
  double log_likelihood;                     // NaN for Expectation
};

struct EmOptions {
  double theta = 1e-6;
  int max_iters = 200;  // per start
  int restarts = 4;     // seeded starts; start 0 uses the seed itself
  std::function<void(const EmProgress&)> observer;  // sees every start, each opening with Init
};

/// Best of options.restarts fits: highest final P among converged starts,
/// else highest final P overall. Ties keep the earlier start.
Clustering fit_clusters(const PointSet& points, int k, std::uint64_t seed, const EmOptions& options);
Clustering fit_clusters_from(const PointSet& points, GaussianMixture initial,
                             const EmOptions& options);

/// Clusters every non-sink node of the scenario into scenario.k groups.
Clustering run_emd(const Scenario& scenario);
/// Clusters the given node ids (sink must not be among them).
Clustering run_emd(const Scenario& scenario, const std::vector<int>& node_ids, int k,
                   const EmOptions& options);

}  // namespace wsnagg
