#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilbert/linalg.hpp"

namespace hilbert {

/// Declared tail behaviour; selects the proposal distribution.
enum class DecayClass {
  kGaussian,  // |f| bounded by a polynomial times exp(-tr G)
  kCompact,   // supported in tr G <= support_radius^2
};

/// An O_m-invariant function with its two views: f on configurations and F on
/// Gram matrices, f(V) = F(gram(V)).
struct InvariantIntegrand {
  std::string name;
  std::function<double(const VectorTuple&)> ambient;
  std::function<double(const GramMatrix&)> invariant;
  DecayClass decay = DecayClass::kGaussian;
  double support_radius = 0.0;
  /// Exact integral over (R^m)^k when known.
  std::function<std::optional<double>(int k, int m)> exact;
  /// Smallest k for which the integral is finite.
  int min_k = 1;
};

/// Throws kRegistrationError unless f(V) = F(gram(V)) to 1e-12 (relative,
/// floored at 1) over random configurations with k <= m <= 4.
void check_consistency(const InvariantIntegrand& g, unsigned seed = 7);

class IntegrandRegistry {
 public:
  /// Registers after check_consistency; duplicate names are rejected.
  void add(InvariantIntegrand g);
  const InvariantIntegrand& find(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<std::string> names() const;

  /// gaussian, trace-gaussian, det-gaussian and ball.
  static const IntegrandRegistry& builtin();

 private:
  std::map<std::string, InvariantIntegrand> entries_;
};

/// Resolves a registry name or a "poly:<expr>" string.
InvariantIntegrand resolve_integrand(const std::string& name,
                                     const IntegrandRegistry& registry = IntegrandRegistry::builtin());

/// F(u) = P(u) exp(-tr u) for a polynomial P in the packed invariants, written
/// as a sum of terms like "2.5*u11*u21^2" or "-u(3,1)" with one-based indices.
/// Throws kInvalidInput on a malformed expression.
InvariantIntegrand polynomial_gaussian(const std::string& expression);

}  // namespace hilbert
