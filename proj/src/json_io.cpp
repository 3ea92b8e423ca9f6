#include "hilbert/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kInvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected a JSON object with '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

int positive_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    bad(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<int>();
}

double number(const Json& v, const char* what) {
  if (!v.is_number()) bad(std::string(what) + " must be numeric");
  return v.get<double>();
}

std::vector<double> numbers(const Json& v, const char* what) {
  if (!v.is_array()) bad(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void write_value(std::ostream& out, const Json& j, int indent, int depth) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (pretty) out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',';
        first = false;
        newline(depth + 1);
        out << Json(it.key()).dump() << (pretty ? ": " : ":");
        write_value(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& x : j) flat = flat && !x.is_structured();
      out << '[';
      bool first = true;
      for (const auto& x : j) {
        if (!first) out << (flat && pretty ? ", " : ",");
        first = false;
        if (!flat) newline(depth + 1);
        write_value(out, x, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (std::isfinite(x)) {
        out << format_double(x);
      } else {
        out << "null";
      }
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const VectorTuple& v) {
  Json rows = Json::array();
  for (int i = 0; i < v.k(); ++i) {
    Json row = Json::array();
    for (double x : v.row(i)) row.push_back(x);
    rows.push_back(std::move(row));
  }
  return {{"k", v.k()}, {"m", v.m()}, {"rows", std::move(rows)}};
}

Json to_json(const GramMatrix& g) {
  return {{"k", g.k()}, {"lower", std::vector<double>(g.lower().begin(), g.lower().end())}};
}

Json to_json(const TriangularFactor& w) {
  return {{"k", w.k()}, {"m", w.m()}, {"lower", std::vector<double>(w.lower().begin(), w.lower().end())}};
}

Json to_json(const EulerAngles& a) { return {{"m", a.m}, {"theta", a.theta}}; }

Json to_json(const Matrix& a) {
  Json rows = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const AngleSchedule& s) {
  Json theta = Json::object();
  for (int i = 0; i < s.k(); ++i) {
    for (int p = 0; p < s.rotations_for(i); ++p) {
      theta[std::to_string(i + 1) + "," + std::to_string(p + 1)] = s.angle(i, p);
    }
  }
  return {{"k", s.k()}, {"m", s.m()}, {"theta", std::move(theta)}, {"reflection", s.reflection_applied}};
}

Json to_json(const DensityValue& d) {
  return {{"value", finite_or_null(d.value)},
          {"log_value", finite_or_null(d.log_value)},
          {"singular", d.singular}};
}

Json to_json(const IntegralEstimate& e) {
  return {{"value", finite_or_null(e.value)},
          {"std_error", finite_or_null(e.std_error)},
          {"method", std::string(to_string(e.method))},
          {"scheme", e.deterministic ? "quadrature" : "monte-carlo"},
          {"samples", e.samples_or_nodes}};
}

VectorTuple vector_tuple_from_json(const Json& j) {
  const int k = positive_int(j, "k");
  const int m = positive_int(j, "m");
  const Json& rows = field(j, "rows");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(k)) bad("'rows' must hold k rows");
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(k * m));
  for (const auto& row : rows) {
    auto r = numbers(row, "row");
    if (r.size() != static_cast<std::size_t>(m)) bad("every row must hold m entries");
    e.insert(e.end(), r.begin(), r.end());
  }
  return VectorTuple(k, m, std::move(e));
}

GramMatrix gram_matrix_from_json(const Json& j) {
  const int k = positive_int(j, "k");
  auto lower = numbers(field(j, "lower"), "'lower'");
  if (lower.size() != static_cast<std::size_t>(packed_size(k))) bad("'lower' must hold k(k+1)/2 entries");
  return GramMatrix(k, std::move(lower));
}

TriangularFactor triangular_factor_from_json(const Json& j) {
  const int k = positive_int(j, "k");
  const int m = positive_int(j, "m");
  auto lower = numbers(field(j, "lower"), "'lower'");
  if (lower.size() != static_cast<std::size_t>(packed_size(k))) bad("'lower' must hold k(k+1)/2 entries");
  return TriangularFactor(k, m, std::move(lower));
}

EulerAngles euler_angles_from_json(const Json& j) {
  const int m = positive_int(j, "m");
  auto theta = numbers(field(j, "theta"), "'theta'");
  if (theta.size() != static_cast<std::size_t>(m - 1)) bad("'theta' must hold m-1 angles");
  return EulerAngles(m, std::move(theta));
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  const auto rows = static_cast<int>(j.size());
  std::vector<double> data;
  int cols = -1;
  for (const auto& row : j) {
    auto r = numbers(row, "matrix row");
    if (cols < 0) cols = static_cast<int>(r.size());
    if (static_cast<int>(r.size()) != cols || cols == 0) bad("matrix rows must have equal, nonzero length");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows, cols, std::move(data));
}

AngleSchedule angle_schedule_from_json(const Json& j) {
  const int k = positive_int(j, "k");
  const int m = positive_int(j, "m");
  AngleSchedule s(k, m);
  const Json& theta = field(j, "theta");
  if (!theta.is_object()) bad("'theta' must be an object keyed by \"i,p\"");
  for (auto it = theta.begin(); it != theta.end(); ++it) {
    int i = 0;
    int p = 0;
    char tail = 0;
    if (std::sscanf(it.key().c_str(), "%d,%d%c", &i, &p, &tail) != 2) bad("bad schedule key '" + it.key() + "'");
    if (i < 1 || i > k || p < 1 || p > s.rotations_for(i - 1)) bad("schedule key '" + it.key() + "' out of range");
    s.angle(i - 1, p - 1) = number(it.value(), "schedule angle");
  }
  if (j.contains("reflection")) {
    if (!j["reflection"].is_boolean()) bad("'reflection' must be boolean");
    s.reflection_applied = j["reflection"].get<bool>();
  }
  return s;
}

void write_json(std::ostream& out, const Json& j, int indent) { write_value(out, j, indent, 0); }

std::string format_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

}  // namespace hilbert
