#include "hilbert/integrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "hilbert/error.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/quadrature.hpp"
#include "hilbert/reduction.hpp"

namespace hilbert {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // ln sqrt(2 pi)

// Welford accumulator; merge() is Chan's pairwise update.
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }
};

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32),
                    0x68696c62u};
  return std::mt19937_64(seq);
}

// Draws config.samples weights with a fresh sampler and engine per chunk and
// merges the chunk statistics in chunk order.
template <class MakeSampler>
IntegralEstimate run_chunks(const SamplerConfig& config, Method method, MakeSampler make_sampler) {
  if (config.samples < 2) throw Error(ErrorCode::kInvalidInput, "Monte Carlo needs at least 2 samples");
  if (config.chunk_size < 1) throw Error(ErrorCode::kInvalidInput, "chunk size must be positive");
  const std::uint64_t chunks = (config.samples + config.chunk_size - 1) / config.chunk_size;
  std::vector<RunningStats> partial(static_cast<std::size_t>(chunks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        auto sampler = make_sampler();
        auto engine = chunk_engine(config.seed, c);
        const std::uint64_t begin = c * config.chunk_size;
        const std::uint64_t end = std::min(config.samples, begin + config.chunk_size);
        RunningStats& stats = partial[static_cast<std::size_t>(c)];
        for (std::uint64_t s = begin; s < end; ++s) stats.push(sampler(engine));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  RunningStats total;
  for (const auto& p : partial) total.merge(p);
  IntegralEstimate est;
  est.value = total.mean;
  const double var = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
  est.std_error = std::sqrt(var / static_cast<double>(total.n));
  est.samples_or_nodes = total.n;
  est.method = method;
  return est;
}

void require_coregular(int k, int m) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "integration needs k, m >= 1");
  if (k > m) {
    throw Error(ErrorCode::kNotCoregular,
                "orbit-space integration requires k <= m (got k=" + std::to_string(k) +
                    ", m=" + std::to_string(m) + ")");
  }
}

void require_integrable(const InvariantIntegrand& g, int k) {
  if (k < g.min_k) {
    throw Error(ErrorCode::kInvalidInput,
                "integrand '" + g.name + "' needs k >= " + std::to_string(g.min_k));
  }
}

// Proposal over the packed fundamental-domain coordinates: half-normal (or
// uniform on [0, R]) diagonals and normal (or uniform on [-R, R]) off-diagonals.
struct DomainProposal {
  int k;
  DecayClass decay;
  double sigma;
  double radius;

  // Fills w and returns log q(w).
  double draw(std::mt19937_64& engine, std::vector<double>& w) const {
    double log_q = 0.0;
    if (decay == DecayClass::kGaussian) {
      std::normal_distribution<double> normal(0.0, sigma);
      const double log_norm = -kLogSqrtTwoPi - std::log(sigma);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
          double x = normal(engine);
          log_q += log_norm - 0.5 * (x / sigma) * (x / sigma);
          if (i == j) {
            x = std::abs(x);
            log_q += std::numbers::ln2;
          }
          w[static_cast<std::size_t>(packed_index(i, j))] = x;
        }
      }
    } else {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
          const double u = unit(engine);
          if (i == j) {
            w[static_cast<std::size_t>(packed_index(i, j))] = radius * u;
            log_q -= std::log(radius);
          } else {
            w[static_cast<std::size_t>(packed_index(i, j))] = radius * (2.0 * u - 1.0);
            log_q -= std::log(2.0 * radius);
          }
        }
      }
    }
    return log_q;
  }
};

TriangularFactor factor_from(int k, int m, const std::vector<double>& w) {
  return TriangularFactor(k, m, w);
}

// Integrand over the fundamental domain with respect to dw, excluding the
// angular volume: F(u) prod w_ii^{m-1-i}.
double domain_integrand(const InvariantIntegrand& g, const TriangularFactor& w) {
  const double f = g.invariant(gram(w));
  if (f == 0.0) return 0.0;
  return f * domain_weight(w);
}

// F(u) lambda(u) |du/dw| at an interior point, including the angular volume.
// Points where the density cannot be evaluated as such use the closed form of
// the product, where the determinant factors cancel: those flagged singular
// (k = m, rounding-level |G_k|) and those whose rounded Gram matrix fails the
// PSD test although u = W W^T lies in the image by construction.
double orbit_integrand(const InvariantIntegrand& g, const TriangularFactor& w, int m, Fault fault) {
  const int k = w.k();
  const GramMatrix u = gram(w);
  const double f = g.invariant(u);
  if (f == 0.0) return 0.0;
  if (!w.is_interior()) return 0.0;  // measure zero
  DensityValue lambda;
  try {
    lambda = hilbert_density(u, k, m);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotInImage) throw;
    lambda.singular = true;
  }
  if (lambda.singular) return f * angular_volume(k, m) * domain_weight(w);
  if (lambda.value == 0.0) return 0.0;
  double log_lambda_jacobian = lambda.log_value + std::log(jacobian_w_to_u(w));
  if (fault == Fault::kFlipTwoPower) log_lambda_jacobian += 2.0 * k * std::numbers::ln2;
  return f * std::exp(log_lambda_jacobian);
}

bool use_quadrature(const InvariantIntegrand& g, int k, Scheme scheme) {
  switch (scheme) {
    case Scheme::kQuadrature:
      if (g.decay != DecayClass::kGaussian) {
        throw Error(ErrorCode::kQuadratureUnavailable,
                    "tensor quadrature needs a Gaussian-decay integrand ('" + g.name + "')");
      }
      return true;
    case Scheme::kMonteCarlo:
      return false;
    case Scheme::kAutomatic:
      return g.decay == DecayClass::kGaussian && packed_size(k) <= kMaxQuadratureDimension;
  }
  return false;
}

// Tensor rule over the packed coordinates: Gauss-Hermite for off-diagonals and
// the half-line rule for w^{m-1-i} exp(-w^2) on diagonal i. point_value(W)
// receives the full integrand with respect to dw; the Gaussian and the
// diagonal powers carried by the rule weights are divided back out.
template <class PointValue>
IntegralEstimate tensor_quadrature(int k, int m, int nodes, Method method, PointValue point_value) {
  if (nodes < 1) throw Error(ErrorCode::kInvalidInput, "quadrature needs at least one node");
  const int dims = packed_size(k);
  std::vector<QuadratureRule> rules(static_cast<std::size_t>(dims));
  std::vector<int> power(static_cast<std::size_t>(dims), -1);
  const QuadratureRule hermite = gauss_hermite(nodes);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto d = static_cast<std::size_t>(packed_index(i, j));
      if (i == j) {
        rules[d] = half_line_gauss(nodes, m - 1 - i);
        power[d] = m - 1 - i;
      } else {
        rules[d] = hermite;
      }
    }
  }

  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  std::vector<double> w(static_cast<std::size_t>(dims), 0.0);
  double total = 0.0;
  std::uint64_t count = 0;
  for (;;) {
    double weight = 1.0;
    double exponent = 0.0;
    double carried = 1.0;
    for (std::size_t d = 0; d < w.size(); ++d) {
      const auto n = static_cast<std::size_t>(idx[d]);
      w[d] = rules[d].nodes[n];
      weight *= rules[d].weights[n];
      exponent += w[d] * w[d];
      if (power[d] > 0) carried *= std::pow(w[d], power[d]);
    }
    const double value = point_value(factor_from(k, m, w));
    if (value != 0.0) total += weight * value * std::exp(exponent) / carried;
    ++count;

    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == nodes) idx[d++] = 0;
    if (d == idx.size()) break;
  }

  IntegralEstimate est;
  est.value = total;
  est.std_error = 0.0;
  est.samples_or_nodes = count;
  est.method = method;
  est.deterministic = true;
  return est;
}

// The combined error is floored at a few ulps of the values: an MC estimate
// whose weights are all equal (a box proposal inside the support) has a
// vanishing sample variance, and rounding alone would then read as z = inf.
double z_score(const IntegralEstimate& a, const IntegralEstimate& b) {
  const double rounding = 64.0 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(a.value), std::abs(b.value));
  const double se = std::max(std::hypot(a.std_error, b.std_error), rounding);
  const double diff = std::abs(a.value - b.value);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

bool agree(const IntegralEstimate& a, const IntegralEstimate& b) {
  if (a.deterministic && b.deterministic) {
    return std::abs(a.value - b.value) <=
           kDeterministicRtol * std::max(std::abs(a.value), std::abs(b.value));
  }
  return z_score(a, b) <= kZThreshold;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kAmbientMc: return "ambient-mc";
    case Method::kDomainW: return "domain-w";
    case Method::kOrbitU: return "orbit-u";
  }
  return "unknown";
}

double jacobian_w_to_u(const TriangularFactor& w, double tol) {
  if (!w.is_interior(tol)) {
    throw Error(ErrorCode::kBoundaryPoint, "jacobian_w_to_u needs every w_ii > tol");
  }
  const int k = w.k();
  double j = std::ldexp(1.0, k);
  for (int i = 0; i < k; ++i) j *= std::pow(w(i, i), k - i);
  return j;
}

std::vector<double> diag_from_minors(const GramMatrix& g, double tol) {
  const auto minors = leading_minors(g, tol);
  const double scale = g.max_abs_entry();
  std::vector<double> d(static_cast<std::size_t>(g.k()));
  for (int i = 1; i <= g.k(); ++i) {
    const double hi = minors[static_cast<std::size_t>(i)];
    const double lo = minors[static_cast<std::size_t>(i - 1)];
    // The ratio is the i-th Cholesky pivot; test it on the pivot scale.
    if (!(lo > 0.0) || !(hi > tol * scale * lo)) {
      throw Error(ErrorCode::kBoundaryPoint,
                  "leading minor " + std::to_string(i) + " is not positive");
    }
    d[static_cast<std::size_t>(i - 1)] = std::sqrt(hi / lo);
  }
  return d;
}

double domain_weight(const TriangularFactor& w) {
  double p = 1.0;
  for (int i = 0; i < w.k(); ++i) {
    const int power = w.m() - 1 - i;
    if (power > 0) p *= std::pow(w(i, i), power);
  }
  return p;
}

double domain_weight_from_minors(const GramMatrix& g, int m, double tol) {
  const int k = g.k();
  if (k > m) throw Error(ErrorCode::kNotCoregular, "domain weight requires k <= m");
  const auto minors = leading_minors(g, tol);
  double p = std::pow(minors[static_cast<std::size_t>(k)], 0.5 * (m - k));
  for (int i = 1; i < k; ++i) p *= std::sqrt(minors[static_cast<std::size_t>(i)]);
  return p;
}

IntegralEstimate integrate_ambient_mc(const InvariantIntegrand& g, int k, int m,
                                      const SamplerConfig& config) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "integration needs k, m >= 1");
  require_integrable(g, k);
  const int n = k * m;
  if (g.decay == DecayClass::kGaussian) {
    const double sigma = config.proposal_scale;
    if (!(sigma > 0.0)) throw Error(ErrorCode::kInvalidInput, "proposal scale must be positive");
    const double log_norm = n * (kLogSqrtTwoPi + std::log(sigma));
    return run_chunks(config, Method::kAmbientMc, [&] {
      return [&g, k, m, sigma, log_norm, v = VectorTuple(k, m),
              normal = std::normal_distribution<double>(0.0, 1.0)](std::mt19937_64& engine) mutable {
        double half_z2 = 0.0;
        for (int i = 0; i < k; ++i) {
          for (int l = 0; l < m; ++l) {
            const double z = normal(engine);
            half_z2 += 0.5 * z * z;
            v(i, l) = sigma * z;
          }
        }
        const double f = g.ambient(v);
        return f == 0.0 ? 0.0 : f * std::exp(half_z2 + log_norm);
      };
    });
  }
  if (g.decay == DecayClass::kCompact) {
    const double r = g.support_radius;
    const double box = std::pow(2.0 * r, n);
    return run_chunks(config, Method::kAmbientMc, [&] {
      return [&g, k, m, r, box, v = VectorTuple(k, m),
              unit = std::uniform_real_distribution<double>(-1.0, 1.0)](std::mt19937_64& engine) mutable {
        for (int i = 0; i < k; ++i) {
          for (int l = 0; l < m; ++l) v(i, l) = r * unit(engine);
        }
        return g.ambient(v) * box;
      };
    });
  }
  throw Error(ErrorCode::kUnsupportedDecayClass, "unsupported decay class for '" + g.name + "'");
}

IntegralEstimate integrate_domain_w(const InvariantIntegrand& g, int k, int m,
                                    const DomainOptions& options) {
  require_coregular(k, m);
  require_integrable(g, k);
  const double angular = angular_volume(k, m);
  if (use_quadrature(g, k, options.scheme)) {
    auto est = tensor_quadrature(k, m, options.nodes, Method::kDomainW, [&](const TriangularFactor& w) {
      return domain_integrand(g, w);
    });
    est.value *= angular;
    return est;
  }
  const DomainProposal proposal{k, g.decay, options.sampler.proposal_scale, g.support_radius};
  auto est = run_chunks(options.sampler, Method::kDomainW, [&] {
    return [&g, &proposal, k, m, w = std::vector<double>(static_cast<std::size_t>(packed_size(k)))](
               std::mt19937_64& engine) mutable {
      const double log_q = proposal.draw(engine, w);
      const double value = domain_integrand(g, factor_from(k, m, w));
      return value == 0.0 ? 0.0 : value * std::exp(-log_q);
    };
  });
  est.value *= angular;
  est.std_error *= angular;
  return est;
}

IntegralEstimate integrate_orbit_u(const InvariantIntegrand& g, int k, int m,
                                   const DomainOptions& options) {
  require_coregular(k, m);
  require_integrable(g, k);
  const Fault fault = options.fault;
  if (use_quadrature(g, k, options.scheme)) {
    return tensor_quadrature(k, m, options.nodes, Method::kOrbitU, [&](const TriangularFactor& w) {
      return orbit_integrand(g, w, m, fault);
    });
  }
  const DomainProposal proposal{k, g.decay, options.sampler.proposal_scale, g.support_radius};
  return run_chunks(options.sampler, Method::kOrbitU, [&] {
    return [&g, &proposal, k, m, fault, w = std::vector<double>(static_cast<std::size_t>(packed_size(k)))](
               std::mt19937_64& engine) mutable {
      const double log_q = proposal.draw(engine, w);
      const double value = orbit_integrand(g, factor_from(k, m, w), m, fault);
      return value == 0.0 ? 0.0 : value * std::exp(-log_q);
    };
  });
}

ConsistencyReport compare_methods(const InvariantIntegrand& g, int k, int m,
                                  const MethodBudgets& budgets) {
  check_consistency(g);
  ConsistencyReport report;
  report.integrand = g.name;
  report.k = k;
  report.m = m;
  if (g.exact) report.exact = g.exact(k, m);

  DomainOptions options;
  options.nodes = budgets.quadrature_nodes;
  options.sampler = budgets.sampler;
  options.fault = budgets.fault;

  report.rows.push_back({integrate_ambient_mc(g, k, m, budgets.sampler)});
  report.rows.push_back({integrate_domain_w(g, k, m, options)});
  report.rows.push_back({integrate_orbit_u(g, k, m, options)});

  for (std::size_t a = 0; a < report.rows.size(); ++a) {
    auto& row = report.rows[a];
    const auto& ea = row.estimate;
    auto note = [&row](const IntegralEstimate& x, const IntegralEstimate& y) {
      if (!(x.deterministic && y.deterministic)) row.z_max = std::max(row.z_max, z_score(x, y));
      row.pass = row.pass && agree(x, y);
    };
    for (std::size_t b = 0; b < report.rows.size(); ++b) {
      if (a != b) note(ea, report.rows[b].estimate);
    }
    if (report.exact) {
      IntegralEstimate truth;
      truth.value = *report.exact;
      truth.deterministic = true;
      note(ea, truth);
    }
    report.pass = report.pass && row.pass;
  }
  return report;
}

}  // namespace hilbert
