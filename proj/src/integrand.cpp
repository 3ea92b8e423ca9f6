#include "hilbert/integrand.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "hilbert/error.hpp"
#include "hilbert/measure.hpp"

namespace hilbert {

namespace {

double sum_of_squares(const VectorTuple& v) {
  double s = 0.0;
  for (int i = 0; i < v.k(); ++i) {
    double row = 0.0;
    for (int l = 0; l < v.m(); ++l) row += v(i, l) * v(i, l);
    s += row;
  }
  return s;
}

double gaussian_total(int k, int m) { return std::pow(std::numbers::pi, 0.5 * k * m); }

InvariantIntegrand make_gaussian() {
  InvariantIntegrand g;
  g.name = "gaussian";
  g.ambient = [](const VectorTuple& v) { return std::exp(-sum_of_squares(v)); };
  g.invariant = [](const GramMatrix& u) { return std::exp(-u.trace()); };
  g.exact = [](int k, int m) -> std::optional<double> { return gaussian_total(k, m); };
  return g;
}

InvariantIntegrand make_trace_gaussian() {
  InvariantIntegrand g;
  g.name = "trace-gaussian";
  g.ambient = [](const VectorTuple& v) {
    const double r2 = sum_of_squares(v);
    return r2 * std::exp(-r2);
  };
  g.invariant = [](const GramMatrix& u) { return u.trace() * std::exp(-u.trace()); };
  // Second moment of the radial Gaussian in R^{km}.
  g.exact = [](int k, int m) -> std::optional<double> { return 0.5 * k * m * gaussian_total(k, m); };
  return g;
}

InvariantIntegrand make_det_gaussian() {
  InvariantIntegrand g;
  g.name = "det-gaussian";
  g.ambient = [](const VectorTuple& v) {
    const Matrix a = v.as_matrix();
    return determinant(a * transpose(a)) * std::exp(-sum_of_squares(v));
  };
  g.invariant = [](const GramMatrix& u) {
    return leading_minors(u).back() * std::exp(-u.trace());
  };
  // Cauchy-Binet: E det(V V^T) = m!/(m-k)! sigma^{2k} with sigma^2 = 1/2.
  g.exact = [](int k, int m) -> std::optional<double> {
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= (m - j);
    return falling * std::pow(0.5, k) * gaussian_total(k, m);
  };
  return g;
}

InvariantIntegrand make_ball() {
  InvariantIntegrand g;
  g.name = "ball";
  g.decay = DecayClass::kCompact;
  g.support_radius = 1.0;
  g.ambient = [](const VectorTuple& v) { return sum_of_squares(v) <= 1.0 ? 1.0 : 0.0; };
  g.invariant = [](const GramMatrix& u) { return u.trace() <= 1.0 ? 1.0 : 0.0; };
  g.exact = [](int k, int m) -> std::optional<double> {
    const double n = static_cast<double>(k) * m;
    return std::exp(0.5 * n * std::log(std::numbers::pi) - log_gamma(0.5 * n + 1.0));
  };
  return g;
}

struct Monomial {
  double coefficient = 1.0;
  std::vector<std::pair<int, int>> factors;  // packed index, power
};

class PolynomialParser {
 public:
  explicit PolynomialParser(const std::string& text) : s_(text) {}

  std::vector<Monomial> parse() {
    std::vector<Monomial> terms;
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    terms.push_back(term(sign));
    while (skip(), pos_ < s_.size()) {
      const char op = take();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      terms.push_back(term(op == '-' ? -1.0 : 1.0));
    }
    return terms;
  }

  int max_index() const { return max_index_; }

 private:
  Monomial term(double sign) {
    Monomial t;
    t.coefficient = sign;
    skip();
    bool need_factor = true;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      t.coefficient *= number();
      skip();
      if (peek() != '*') return t;
      take();
    }
    while (need_factor) {
      skip();
      t.factors.push_back(factor());
      skip();
      need_factor = peek() == '*';
      if (need_factor) take();
    }
    return t;
  }

  std::pair<int, int> factor() {
    if (take() != 'u') fail("expected a factor u<i><j>");
    int i = 0;
    int j = 0;
    if (peek() == '(') {
      take();
      i = integer();
      skip();
      if (take() != ',') fail("expected ','");
      skip();
      j = integer();
      skip();
      if (take() != ')') fail("expected ')'");
    } else {
      i = digit();
      j = digit();
    }
    if (i < 1 || j < 1) fail("invariant indices are one-based");
    max_index_ = std::max({max_index_, i, j});
    int power = 1;
    skip();
    if (peek() == '^') {
      take();
      skip();
      power = integer();
    }
    const int hi = std::max(i, j) - 1;
    const int lo = std::min(i, j) - 1;
    return {packed_index(hi, lo), power};
  }

  double number() {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("bad number");
    }
    pos_ += used;
    return x;
  }

  int integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer");
    int x = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) x = 10 * x + (take() - '0');
    return x;
  }

  int digit() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an index digit");
    return take() - '0';
  }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  char take() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kInvalidInput,
                "polynomial '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
  }

  std::string s_;
  std::size_t pos_ = 0;
  int max_index_ = 1;
};

double evaluate(const std::vector<Monomial>& p, std::span<const double> lower) {
  double total = 0.0;
  for (const auto& t : p) {
    double x = t.coefficient;
    for (const auto& [idx, power] : t.factors) {
      x *= std::pow(lower[static_cast<std::size_t>(idx)], power);
    }
    total += x;
  }
  return total;
}

}  // namespace

void check_consistency(const InvariantIntegrand& g, unsigned seed) {
  if (!g.ambient || !g.invariant) {
    throw Error(ErrorCode::kRegistrationError, "integrand '" + g.name + "' lacks a view");
  }
  if (g.decay == DecayClass::kCompact && !(g.support_radius > 0.0)) {
    throw Error(ErrorCode::kRegistrationError,
                "compact integrand '" + g.name + "' needs a positive support radius");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (int m = 1; m <= 4; ++m) {
    for (int k = std::max(g.min_k, 1); k <= m; ++k) {
      for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> e(static_cast<std::size_t>(k * m));
        for (double& x : e) x = normal(rng);
        const VectorTuple v(k, m, std::move(e));
        const double f = g.ambient(v);
        const double big_f = g.invariant(gram(v));
        if (!(std::abs(f - big_f) <= 1e-12 * std::max(1.0, std::abs(f)))) {
          throw Error(ErrorCode::kRegistrationError,
                      "integrand '" + g.name + "': f(V) = " + std::to_string(f) +
                          " but F(gram(V)) = " + std::to_string(big_f) + " at k=" + std::to_string(k) +
                          ", m=" + std::to_string(m));
        }
      }
    }
  }
}

void IntegrandRegistry::add(InvariantIntegrand g) {
  if (entries_.count(g.name) != 0) {
    throw Error(ErrorCode::kRegistrationError, "integrand '" + g.name + "' already registered");
  }
  check_consistency(g);
  std::string key = g.name;
  entries_.emplace(std::move(key), std::move(g));
}

const InvariantIntegrand& IntegrandRegistry::find(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::kInvalidInput, "unknown integrand '" + name + "'");
  return it->second;
}

bool IntegrandRegistry::contains(const std::string& name) const { return entries_.count(name) != 0; }

std::vector<std::string> IntegrandRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

const IntegrandRegistry& IntegrandRegistry::builtin() {
  static const IntegrandRegistry registry = [] {
    IntegrandRegistry r;
    r.add(make_gaussian());
    r.add(make_trace_gaussian());
    r.add(make_det_gaussian());
    r.add(make_ball());
    return r;
  }();
  return registry;
}

InvariantIntegrand polynomial_gaussian(const std::string& expression) {
  PolynomialParser parser(expression);
  auto poly = parser.parse();
  InvariantIntegrand g;
  g.name = "poly:" + expression;
  g.min_k = parser.max_index();
  g.ambient = [poly](const VectorTuple& v) {
    if (v.k() < 1) return 0.0;
    return evaluate(poly, gram(v).lower()) * std::exp(-sum_of_squares(v));
  };
  g.invariant = [poly](const GramMatrix& u) { return evaluate(poly, u.lower()) * std::exp(-u.trace()); };
  g.exact = [](int, int) -> std::optional<double> { return std::nullopt; };
  return g;
}

InvariantIntegrand resolve_integrand(const std::string& name, const IntegrandRegistry& registry) {
  constexpr std::string_view kPrefix = "poly:";
  if (name.rfind(kPrefix, 0) == 0) {
    InvariantIntegrand g = polynomial_gaussian(name.substr(kPrefix.size()));
    check_consistency(g);
    return g;
  }
  return registry.find(name);
}

}  // namespace hilbert
