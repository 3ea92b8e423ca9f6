#include "hilbert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hilbert/error.hpp"
#include "hilbert/json_io.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/oracles.hpp"
#include "hilbert/reduction.hpp"

namespace hilbert {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult result(int group, std::string name, double measured, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.group = group;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.pass = std::isfinite(measured) && measured <= tolerance;
  r.detail = std::move(detail);
  return r;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::mt19937_64 group_rng(const SuiteOptions& options, int group) {
  std::seed_seq seq{options.seed, static_cast<std::uint64_t>(group)};
  return std::mt19937_64(seq);
}

std::string kmtag(int k, int m) { return "k=" + std::to_string(k) + " m=" + std::to_string(m); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double log_det(const GramMatrix& g) { return std::log(leading_minors(g).back()); }

}  // namespace

std::vector<CheckResult> check_worked_densities(const SuiteOptions& options) {
  auto rng = group_rng(options, 1);
  std::vector<CheckResult> out;

  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    // Mostly interior points, with a share on the rank-deficient boundary.
    const GramMatrix g = t % 5 == 0 ? oracle::random_boundary_psd(2, rng) : oracle::random_psd(2, 2, rng);
    worst = std::max(worst, rel_err(hilbert_density(g, 2, 3).value, 2.0 * kPi * kPi));
  }
  out.push_back(result(1, "lambda_{2,3} = 2 pi^2 at 100 PSD points", worst, 1e-12));

  worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    // Both the closed-form det and the pivot product lose cond(G) * eps; extra
    // degrees of freedom keep that well below the tolerance.
    const GramMatrix g = oracle::random_psd(2, 6, rng);
    const double det = g(0, 0) * g(1, 1) - g(1, 0) * g(1, 0);
    worst = std::max(worst, rel_err(hilbert_density(g, 2, 2).value, kPi / std::sqrt(det)));
  }
  out.push_back(result(1, "lambda_{2,2} = pi/sqrt(det G) at 100 PD points", worst, 1e-12));

  worst = 0.0;
  for (double u : {0.25, 1.0, 4.0}) {
    worst = std::max(worst, rel_err(hilbert_density(GramMatrix(1, {u}), 1, 3).value, 2.0 * kPi * std::sqrt(u)));
  }
  out.push_back(result(1, "lambda_{1,3}(u) = 2 pi sqrt(u), u in {0.25,1,4}", worst, 1e-12));
  return out;
}

std::vector<CheckResult> check_volume_identities(const SuiteOptions&) {
  std::vector<CheckResult> out;
  double worst_product = 0.0;
  double worst_closed = 0.0;
  double worst_stiefel = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const double vol = orthogonal_group_volume(m);
    double product = 1.0;
    double closed = std::pow(2.0, m) * std::pow(std::sqrt(kPi), 0.5 * m * (m + 1));
    for (int j = 0; j < m; ++j) product *= sphere_volume(j);
    for (int j = 1; j <= m; ++j) closed /= std::tgamma(0.5 * j);
    worst_product = std::max(worst_product, rel_err(vol, product));
    worst_closed = std::max(worst_closed, rel_err(vol, closed));
    worst_stiefel = std::max(worst_stiefel, rel_err(stiefel_volume(m, m), vol));
  }
  out.push_back(result(2, "Vol(O_m) = prod_{j<m} Vol(S^j), m <= 10", worst_product, 1e-12));
  out.push_back(result(2, "Vol(O_m) = tgamma closed form, m <= 10", worst_closed, 1e-12));
  out.push_back(result(2, "stiefel_volume(m,m) = Vol(O_m), m <= 10", worst_stiefel, 1e-12));
  const double spot = std::max({rel_err(orthogonal_group_volume(1), 2.0),
                                rel_err(orthogonal_group_volume(2), 4.0 * kPi),
                                rel_err(orthogonal_group_volume(3), 16.0 * kPi * kPi)});
  out.push_back(result(2, "Vol(O_1)=2, Vol(O_2)=4 pi, Vol(O_3)=16 pi^2", spot, 1e-12));
  return out;
}

std::vector<CheckResult> check_angular_volume(const SuiteOptions&) {
  std::vector<CheckResult> out;
  out.push_back(result(3, "angular_volume(2,3) = 8 pi^2", rel_err(angular_volume(2, 3), 8.0 * kPi * kPi), 1e-12));
  out.push_back(result(3, "angular_volume(2,3) = quadrature of angular_weight",
                       rel_err(angular_volume(2, 3), oracle::angular_weight_quadrature(2, 3, 16)), 1e-8));
  out.push_back(result(3, "angular_volume(2,2) = 4 pi", rel_err(angular_volume(2, 2), 4.0 * kPi), 1e-12));
  out.push_back(result(3, "angular_volume(2,2) = quadrature of angular_weight",
                       rel_err(angular_volume(2, 2), oracle::angular_weight_quadrature(2, 2, 16)), 1e-8));
  double worst = 0.0;
  for (int m = 1; m <= 5; ++m) {
    for (int k = 1; k <= m; ++k) {
      worst = std::max(worst, rel_err(angular_volume(k, m), oracle::angular_weight_quadrature(k, m, 12)));
    }
  }
  out.push_back(result(3, "angular_volume = quadrature for all k <= m <= 5", worst, 1e-8));
  return out;
}

std::vector<CheckResult> check_gaussian_consistency(const SuiteOptions& options) {
  std::vector<CheckResult> out;
  const InvariantIntegrand& g = IntegrandRegistry::builtin().find("gaussian");
  MethodBudgets budgets;
  budgets.sampler.samples = options.samples;
  budgets.sampler.seed = options.seed;
  budgets.sampler.threads = options.threads;
  budgets.fault = options.fault;
  for (int m = 1; m <= 4; ++m) {
    for (int k = 1; k <= m; ++k) {
      const ConsistencyReport report = compare_methods(g, k, m, budgets);
      const double exact = *report.exact;
      for (const MethodRow& row : report.rows) {
        const IntegralEstimate& e = row.estimate;
        std::ostringstream detail;
        detail << "value=" << format_double(e.value) << " exact=" << format_double(exact);
        std::string name = "gaussian " + kmtag(k, m) + " " + std::string(to_string(e.method));
        if (e.deterministic) {
          // Quadrature must hit the exact value and sit within 4 sigma of every
          // Monte Carlo estimate.
          const bool z_ok = row.z_max <= kZThreshold;
          auto r = result(4, name + " quadrature", rel_err(e.value, exact), 1e-8, detail.str());
          r.pass = r.pass && z_ok && row.pass;
          out.push_back(std::move(r));
        } else {
          detail << " se=" << format_double(e.std_error);
          auto r = result(4, name + " mc z_max", row.z_max, kZThreshold, detail.str());
          r.pass = r.pass && row.pass;
          out.push_back(std::move(r));
        }
      }
    }
  }
  return out;
}

std::vector<CheckResult> check_minor_oracles(const SuiteOptions& options) {
  auto rng = group_rng(options, 5);
  std::vector<CheckResult> out;
  double worst = 0.0;
  // Both oracles require interior points; redraw the rare Wishart sample whose
  // smallest pivot is at rounding level.
  auto interior_psd = [&rng](int k) {
    for (;;) {
      GramMatrix g = oracle::random_psd(k, k, rng);
      if (semidefinite_cholesky(g).is_interior(1e-6)) return g;
    }
  };
  for (int t = 0; t < 1000; ++t) {
    const int k = 1 + t % 5;
    const GramMatrix g = interior_psd(k);
    const auto d = diag_from_minors(g);
    const TriangularFactor w = semidefinite_cholesky(g);
    for (int i = 0; i < k; ++i) {
      worst = std::max(worst, std::abs(d[static_cast<std::size_t>(i)] - w(i, i)) / std::max(1.0, w(i, i)));
    }
  }
  out.push_back(result(5, "diag_from_minors = Cholesky diagonal, 1000 PSD, k <= 5", worst, 1e-12));

  worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + t % 5;
    const TriangularFactor w = semidefinite_cholesky(interior_psd(k));
    worst = std::max(worst, rel_err(jacobian_w_to_u(w), oracle::finite_difference_jacobian(w)));
  }
  out.push_back(result(5, "jacobian_w_to_u = finite-difference determinant, 100 points", worst, 1e-6));
  return out;
}

std::vector<CheckResult> check_reduction(const SuiteOptions& options) {
  auto rng = group_rng(options, 6);
  double recon = 0.0;
  double gram_err = 0.0;
  double invariance = 0.0;
  int shape_failures = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const int m = 1 + t % 5;
    const int k = 1 + (t / 5) % m;
    const VectorTuple v = oracle::random_configuration(k, m, rng);
    const Reduction red = reduce(v);

    const VectorTuple rebuilt = compose(std::vector<double>(red.w.lower().begin(), red.w.lower().end()), red.schedule);
    const Matrix rw = red.w.embed().as_matrix() * transpose(red.r);
    recon = std::max({recon, max_abs_diff(rw, v.as_matrix()), max_abs_diff(rebuilt.as_matrix(), v.as_matrix())});
    gram_err = std::max(gram_err, max_abs_diff(gram(red.w).as_matrix(), gram(v).as_matrix()));
    for (int i = 0; i < k; ++i) {
      if (!(red.w(i, i) > 0.0)) ++shape_failures;
    }

    const Matrix q = oracle::haar_rotation(m, rng);
    const Matrix turned = v.as_matrix() * transpose(q);
    const VectorTuple v2(k, m, std::vector<double>(turned.data().begin(), turned.data().end()));
    const Reduction red2 = reduce(v2);
    for (std::size_t e = 0; e < red.w.lower().size(); ++e) {
      invariance = std::max(invariance, std::abs(red.w.lower()[e] - red2.w.lower()[e]));
    }
  }
  std::vector<CheckResult> out;
  out.push_back(result(6, "R W = V on 10^4 configurations, k <= m <= 5", recon, 1e-10));
  out.push_back(result(6, "gram(W) = gram(V)", gram_err, 1e-10));
  out.push_back(result(6, "positive diagonal on the principal stratum (failures)", shape_failures, 0.0));
  out.push_back(result(6, "W invariant under Haar SO(m) pre-rotation", invariance, 1e-10));
  return out;
}

std::vector<CheckResult> check_euler(const SuiteOptions& options) {
  auto rng = group_rng(options, 7);
  std::uniform_real_distribution<double> polar(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> azimuth(-kPi, kPi);
  // Generic set: polar cosines and the azimuthal tail stay away from zero.
  std::uniform_real_distribution<double> polar_generic(-kPi / 2 + 0.05, kPi / 2 - 0.05);

  double ortho = 0.0;
  double det = 0.0;
  double frame = 0.0;
  double matrix_trip = 0.0;
  double vector_trip = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const int m = 1 + t % 6;
    std::vector<double> theta(static_cast<std::size_t>(m - 1));
    std::vector<double> generic(static_cast<std::size_t>(m - 1));
    for (int j = 0; j + 1 < m; ++j) {
      const bool last = j + 2 == m;
      theta[static_cast<std::size_t>(j)] = last ? azimuth(rng) : polar(rng);
      generic[static_cast<std::size_t>(j)] = last ? azimuth(rng) : polar_generic(rng);
    }
    const EulerAngles angles(m, theta);
    const RotationMatrix a = rotation_from_angles(angles);
    ortho = std::max(ortho, max_abs_diff(transpose(a) * a, Matrix::identity(m)));
    det = std::max(det, std::abs(oracle::cofactor_determinant(a) - 1.0));
    frame = std::max(frame, max_abs_diff(a, oracle::recursive_frame(angles)));

    const EulerAngles g(m, generic);
    const EulerAngles back = angles_from_rotation(rotation_from_angles(g));
    const EulerAngles back_v = angles_from_unit_vector(vector_from_angles(g));
    for (int j = 0; j + 1 < m; ++j) {
      const auto s = static_cast<std::size_t>(j);
      matrix_trip = std::max(matrix_trip, std::abs(std::remainder(back.theta[s] - generic[s], 2 * kPi)));
      vector_trip = std::max(vector_trip, std::abs(std::remainder(back_v.theta[s] - generic[s], 2 * kPi)));
    }
  }
  std::vector<CheckResult> out;
  out.push_back(result(7, "A^T A = I over 10^4 angle tuples, m <= 6", ortho, 1e-12));
  out.push_back(result(7, "det A = 1", det, 1e-12));
  out.push_back(result(7, "angles -> matrix -> angles on the generic set", matrix_trip, 1e-10));
  out.push_back(result(7, "angles -> vector -> angles on the generic set", vector_trip, 1e-10));
  out.push_back(result(7, "closed-form entries = recursive frame", frame, 1e-13));
  return out;
}

std::vector<CheckResult> check_image_membership(const SuiteOptions& options) {
  auto rng = group_rng(options, 8);
  std::uniform_real_distribution<double> diag(0.0, 2.0);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  int cholesky_mismatch = 0;
  int minors_mismatch = 0;
  int accepted = 0;
  double lift_err = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const int k = 1 + t % 5;
    const int m = k + (t / 5) % (6 - k);
    GramMatrix g(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j <= i; ++j) g.at(i, j) = i == j ? diag(rng) : off(rng);
    }
    const bool in = is_in_image(g, k, m);
    bool factored = true;
    try {
      semidefinite_cholesky(g);
    } catch (const Error&) {
      factored = false;
    }
    if (in != factored) ++cholesky_mismatch;
    if (in != oracle::all_principal_minors_nonnegative(g, kDefaultTolerance)) ++minors_mismatch;
    if (in) {
      ++accepted;
      const VectorTuple v = lift(g, m);
      lift_err = std::max(lift_err, max_abs_diff(gram(v).as_matrix(), g.as_matrix()));
    }
  }
  std::vector<CheckResult> out;
  const std::string detail = std::to_string(accepted) + " of " + std::to_string(trials) + " accepted";
  out.push_back(result(8, "is_in_image = semidefinite_cholesky succeeds (mismatches)", cholesky_mismatch, 0.0, detail));
  out.push_back(result(8, "is_in_image = all principal minors >= 0 (mismatches)", minors_mismatch, 0.0, detail));
  out.push_back(result(8, "gram(lift(G)) = G on accepted points", lift_err, 1e-10, detail));
  return out;
}

std::vector<CheckResult> check_density_properties(const SuiteOptions& options) {
  auto rng = group_rng(options, 9);
  double homogeneity = 0.0;
  double constancy = 0.0;
  double factorized = 0.0;
  int dichotomy_failures = 0;
  for (int m = 1; m <= 5; ++m) {
    for (int k = 1; k <= m; ++k) {
      const double exponent = k * (m - k - 1);
      const double constant = std::pow(0.5, k) * angular_volume(k, m);
      for (int t = 0; t < 20; ++t) {
        // Extra degrees of freedom keep G well conditioned: the rounding of
        // c^2 G itself is amplified by cond(G) and would otherwise dominate.
        const GramMatrix g = oracle::random_psd(k, k + 4, rng);
        const DensityValue base = hilbert_density(g, k, m);
        for (double c : {0.5, 2.0, 10.0}) {
          std::vector<double> scaled(g.lower().begin(), g.lower().end());
          for (double& x : scaled) x *= c * c;
          const DensityValue d = hilbert_density(GramMatrix(k, scaled), k, m);
          homogeneity = std::max(homogeneity, rel_err(d.value, std::pow(c, exponent) * base.value));
        }
        factorized = std::max(factorized,
                              rel_err(base.value, constant * std::exp(0.5 * (m - k - 1) * log_det(g))));
        if (base.singular || !std::isfinite(base.value)) ++dichotomy_failures;

        if (k >= 2) {
          // Rank-deficient boundary point: singular iff k = m.
          const DensityValue edge = hilbert_density(oracle::random_boundary_psd(k, rng), k, m);
          const bool want_singular = k == m;
          if (edge.singular != want_singular) ++dichotomy_failures;
          if (!want_singular && !std::isfinite(edge.value)) ++dichotomy_failures;
        }
      }
      if (k == m - 1) {
        for (int t = 0; t < 100; ++t) {
          const GramMatrix g =
              t % 7 == 0 ? oracle::random_boundary_psd(k, rng) : oracle::random_psd(k, k, rng);
          constancy = std::max(constancy, rel_err(hilbert_density(g, k, m).value, constant));
        }
      }
    }
  }
  if (!hilbert_density(GramMatrix(1, {0.0}), 1, 1).singular) ++dichotomy_failures;
  std::vector<CheckResult> out;
  out.push_back(result(9, "lambda(c^2 G) = c^{k(m-k-1)} lambda(G), c in {0.5,2,10}, k <= m <= 5", homogeneity, 1e-12));
  out.push_back(result(9, "lambda_{m-1,m} constant at 100 PSD points per m", constancy, 1e-12));
  out.push_back(result(9, "finite for k < m, singular exactly on the k = m boundary (failures)",
                       dichotomy_failures, 0.0));
  out.push_back(result(9, "density = 2^-k angular_volume |G_k|^{(m-k-1)/2}", factorized, 1e-12));
  return out;
}

std::vector<CheckResult> run_suite(const SuiteOptions& options) {
  std::vector<CheckResult> all;
  for (auto* group : {check_worked_densities, check_volume_identities, check_angular_volume,
                      check_gaussian_consistency, check_minor_oracles, check_reduction, check_euler,
                      check_image_membership, check_density_properties}) {
    auto rows = group(options);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

std::string suite_csv(const std::vector<CheckResult>& rows) {
  std::ostringstream os;
  os << "group,check,measured,tolerance,pass,detail\n";
  for (const auto& r : rows) {
    os << r.group << ',' << csv_field(r.name) << ',' << format_double(r.measured) << ','
       << format_double(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.detail) << '\n';
  }
  return os.str();
}

std::vector<ConsistencyReport> consistency_table(const SuiteOptions& options) {
  const auto& registry = IntegrandRegistry::builtin();
  MethodBudgets budgets;
  budgets.sampler.samples = options.samples;
  budgets.sampler.seed = options.seed;
  budgets.sampler.threads = options.threads;
  budgets.fault = options.fault;
  std::vector<ConsistencyReport> out;
  for (const char* name : {"gaussian", "trace-gaussian", "det-gaussian"}) {
    for (int m = 1; m <= 4; ++m) {
      for (int k = 1; k <= m; ++k) out.push_back(compare_methods(registry.find(name), k, m, budgets));
    }
  }
  for (int m = 1; m <= 6; ++m) {
    for (int k = 1; k <= m && k * m <= 6; ++k) out.push_back(compare_methods(registry.find("ball"), k, m, budgets));
  }
  return out;
}

std::string consistency_csv(const std::vector<ConsistencyReport>& reports) {
  std::ostringstream os;
  os << "integrand,k,m,method,value,std_error,z_max,pass\n";
  for (const auto& r : reports) {
    for (const auto& row : r.rows) {
      os << csv_field(r.integrand) << ',' << r.k << ',' << r.m << ',' << to_string(row.estimate.method) << ','
         << format_double(row.estimate.value) << ',' << format_double(row.estimate.std_error) << ','
         << format_double(row.z_max) << ',' << (row.pass ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

}  // namespace hilbert
