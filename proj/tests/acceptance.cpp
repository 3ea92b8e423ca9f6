// Acceptance battery: one [PASS]/[FAIL] line per criterion, followed by the
// individual checks that make it up. Exit status is nonzero iff a criterion
// fails.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hilbert/verify.hpp"

namespace {

using Group = std::function<std::vector<hilbert::CheckResult>(const hilbert::SuiteOptions&)>;

struct Criterion {
  int id;
  const char* title;
  Group run;
};

}  // namespace

int main(int argc, char** argv) {
  hilbert::SuiteOptions options;
  bool fault = false;
  bool verbose = true;
  CLI::App app{"Acceptance criteria"};
  app.add_option("--samples", options.samples, "Monte Carlo samples per estimate")->capture_default_str();
  app.add_option("--seed", options.seed)->capture_default_str();
  app.add_option("--threads", options.threads);
  app.add_flag("--inject-fault", fault, "Negative control: corrupt the orbit-u constant");
  app.add_flag("!--quiet", verbose, "Only print the per-criterion lines");
  CLI11_PARSE(app, argc, argv);
  if (fault) options.fault = hilbert::Fault::kFlipTwoPower;

  const std::vector<Criterion> criteria = {
      {1, "worked-example densities", hilbert::check_worked_densities},
      {2, "volume identities", hilbert::check_volume_identities},
      {3, "angular volume", hilbert::check_angular_volume},
      {4, "gaussian consistency, 1 <= k <= m <= 4", hilbert::check_gaussian_consistency},
      {5, "minor and jacobian oracles", hilbert::check_minor_oracles},
      {6, "reduction fidelity", hilbert::check_reduction},
      {7, "euler-angle suite", hilbert::check_euler},
      {8, "image membership and lifting", hilbert::check_image_membership},
      {9, "density homogeneity and constancy", hilbert::check_density_properties},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<hilbert::CheckResult> rows;
    std::string error;
    try {
      rows = c.run(options);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = error.empty() && !rows.empty();
    for (const auto& r : rows) pass = pass && r.pass;
    if (!pass) ++failures;
    std::printf("[%s] %d %s (%zu checks, %.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.title, rows.size(), seconds);
    if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
    if (!verbose) continue;
    for (const auto& r : rows) {
      std::printf("       %s %s: %.3e <= %.1e%s%s\n", r.pass ? "ok  " : "FAIL", r.name.c_str(), r.measured,
                  r.tolerance, r.detail.empty() ? "" : "  ", r.detail.c_str());
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
