#pragma once

// The verification battery: one function per group of checks, each returning
// rows of measured-versus-tolerance results. Used by `hilbert verify --suite`
// and by the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "hilbert/integrator.hpp"

namespace hilbert {

struct CheckResult {
  int group = 0;
  std::string name;
  double measured = 0.0;   // worst observed error, z-score or mismatch count
  double tolerance = 0.0;  // pass iff measured <= tolerance
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t samples = 1'000'000;  // Monte Carlo budget per estimate
  std::uint64_t seed = 20240607;
  unsigned threads = 0;
  Fault fault = Fault::kNone;
};

/// Worked densities: lambda_{2,3} = 2 pi^2, lambda_{2,2} = pi / sqrt(det G),
/// lambda_{1,3}(u) = 2 pi sqrt(u).
std::vector<CheckResult> check_worked_densities(const SuiteOptions& options);
/// Vol(O_m) closed form against the sphere product, m <= 10, and spot values.
std::vector<CheckResult> check_volume_identities(const SuiteOptions& options);
/// angular_volume against its constants and against tensor quadrature.
std::vector<CheckResult> check_angular_volume(const SuiteOptions& options);
/// Three integration routes on exp(-tr G) for 1 <= k <= m <= 4.
std::vector<CheckResult> check_gaussian_consistency(const SuiteOptions& options);
/// diag_from_minors and jacobian_w_to_u against Cholesky and finite differences.
std::vector<CheckResult> check_minor_oracles(const SuiteOptions& options);
/// reduce on random configurations: reconstruction, Gram preservation,
/// triangular shape and invariance under SO(m).
std::vector<CheckResult> check_reduction(const SuiteOptions& options);
/// Euler angles: orthonormality, roundtrips, closed form against recursion.
std::vector<CheckResult> check_euler(const SuiteOptions& options);
/// is_in_image against semidefinite_cholesky and principal minors; lifting.
std::vector<CheckResult> check_image_membership(const SuiteOptions& options);
/// Homogeneity, constancy, singular dichotomy and factorized constant of the
/// density.
std::vector<CheckResult> check_density_properties(const SuiteOptions& options);

/// All groups in order 1..9.
std::vector<CheckResult> run_suite(const SuiteOptions& options);

/// CSV with header group,check,measured,tolerance,pass,detail.
std::string suite_csv(const std::vector<CheckResult>& rows);

/// compare_methods over the built-in registry: the Gaussian family for
/// 1 <= k <= m <= 4 and the unit ball for km <= 6.
std::vector<ConsistencyReport> consistency_table(const SuiteOptions& options);

/// CSV with header integrand,k,m,method,value,std_error,z_max,pass.
std::string consistency_csv(const std::vector<ConsistencyReport>& reports);

}  // namespace hilbert
