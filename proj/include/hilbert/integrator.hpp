#pragma once

// Three routes to the integral of an invariant function over (R^m)^k:
//
//   ambient-mc  importance sampling directly on R^{km}
//   domain-w    angular_volume(k,m) * integral over the fundamental domain of
//               f(W) prod_i w_ii^{m-1-i}  (zero-based i)
//   orbit-u     integral over the image X of F(u) lambda_{k,m}(u), realized
//               through the substitution u = W W^T
//
// Monte Carlo runs are split into fixed-size chunks. Chunk c draws from an
// engine seeded by (seed, c) alone, and chunk statistics are merged in chunk
// order, so the estimate does not depend on the number of worker threads.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hilbert/integrand.hpp"
#include "hilbert/linalg.hpp"

namespace hilbert {

enum class Method { kAmbientMc, kDomainW, kOrbitU };

std::string_view to_string(Method method);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic quadrature
  std::uint64_t samples_or_nodes = 0;
  Method method = Method::kAmbientMc;
  bool deterministic = false;  // true when produced by tensor quadrature
};

struct SamplerConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 20240607;
  std::uint64_t chunk_size = 1u << 14;
  unsigned threads = 0;        // 0 selects the hardware concurrency
  double proposal_scale = 1.0; // std dev of the Gaussian proposals
};

enum class Scheme { kAutomatic, kQuadrature, kMonteCarlo };

/// Deliberate corruptions used as negative controls by the verification suite.
enum class Fault { kNone, kFlipTwoPower };

struct DomainOptions {
  Scheme scheme = Scheme::kAutomatic;
  int nodes = 8;  // per dimension for tensor quadrature
  SamplerConfig sampler;
  Fault fault = Fault::kNone;  // only read by integrate_orbit_u
};

/// Largest u-space dimension k(k+1)/2 integrated by tensor quadrature.
inline constexpr int kMaxQuadratureDimension = 6;

/// |du/dw| = 2^k prod_i w_ii^{k-i} (zero-based i). Throws kBoundaryPoint unless
/// W is interior.
double jacobian_w_to_u(const TriangularFactor& w, double tol = kDefaultTolerance);

/// w_ii = sqrt(|G_i| / |G_{i-1}|). Throws kBoundaryPoint when a ratio is not
/// above tol * max|G|, the clamping threshold of semidefinite_cholesky.
std::vector<double> diag_from_minors(const GramMatrix& g, double tol = kDefaultTolerance);

/// prod_i w_ii^{m-1-i}, computed from the diagonal directly.
double domain_weight(const TriangularFactor& w);

/// The same weight from the leading minors:
/// |G_k|^{(m-k)/2} prod_{i<k} sqrt(|G_i|).
double domain_weight_from_minors(const GramMatrix& g, int m, double tol = kDefaultTolerance);

IntegralEstimate integrate_ambient_mc(const InvariantIntegrand& g, int k, int m,
                                      const SamplerConfig& config);

/// Throws kNotCoregular for k > m and kQuadratureUnavailable when quadrature is
/// requested for a compactly supported integrand.
IntegralEstimate integrate_domain_w(const InvariantIntegrand& g, int k, int m,
                                    const DomainOptions& options);

IntegralEstimate integrate_orbit_u(const InvariantIntegrand& g, int k, int m,
                                   const DomainOptions& options);

struct MethodBudgets {
  SamplerConfig sampler;
  int quadrature_nodes = 8;
  Fault fault = Fault::kNone;
};

struct MethodRow {
  IntegralEstimate estimate;
  double z_max = 0.0;  // largest z-score over comparisons involving an MC estimate
  bool pass = true;
};

struct ConsistencyReport {
  std::string integrand;
  int k = 0;
  int m = 0;
  std::optional<double> exact;
  std::vector<MethodRow> rows;
  bool pass = true;
};

/// Pairwise agreement rule: two deterministic values must agree to relative
/// 1e-6; otherwise |a - b| <= 4 sqrt(se_a^2 + se_b^2).
inline constexpr double kZThreshold = 4.0;
inline constexpr double kDeterministicRtol = 1e-6;

/// Runs check_consistency first, so a mismatched f/F pair raises
/// kRegistrationError instead of producing numbers.
ConsistencyReport compare_methods(const InvariantIntegrand& g, int k, int m,
                                  const MethodBudgets& budgets);

}  // namespace hilbert
