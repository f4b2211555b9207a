#include "linloop/instance.hpp"

#include <algorithm>
#include <regex>

#include "json.hpp"

namespace linloop {

namespace {

using nlohmann::json;

const std::regex kFraction(R"(^(-?[0-9]+)(?:/([0-9]+))?$)");
const std::regex kDecimal(R"(^(-?)([0-9]+)\.([0-9]+)$)");
const std::regex kInterval(R"(^\[\s*([^,\s]+)\s*,\s*([^\]\s]+)\s*\]$)");

Rational parse_scalar(const std::string& s) {
  std::smatch match;
  if (std::regex_match(s, match, kFraction)) {
    Integer num(match[1].str(), 10);
    Integer den(1);
    if (match[2].matched) {
      den = Integer(match[2].str(), 10);
      if (den == 0) throw ZeroDenominatorError("zero denominator in entry \"" + s + "\"");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (std::regex_match(s, match, kDecimal)) {
    const std::string frac = match[3].str();
    Integer num(match[2].str() + frac, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(num, den);
    q.canonicalize();
    return match[1].str().empty() ? q : Rational(-q);
  }
  throw ParseError("malformed number \"" + s + "\"");
}

bool is_power_of_two(const Integer& z) { return z > 0 && mpz_popcount(z.get_mpz_t()) == 1; }

// Floor / ceiling of q onto the grid 2^-p.
Dyadic grid_floor(const Rational& q, unsigned long p) {
  Integer scaled = q.get_num() << p;
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(out, -static_cast<long>(p));
}

Dyadic grid_ceil(const Rational& q, unsigned long p) {
  Integer scaled = q.get_num() << p;
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
  return Dyadic(out, -static_cast<long>(p));
}

Dyadic exact_if_dyadic(const Rational& q, unsigned long p, bool down) {
  if (is_power_of_two(q.get_den())) {
    auto shift = static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2)) - 1;
    return Dyadic(q.get_num(), -shift);
  }
  return down ? grid_floor(q, p) : grid_ceil(q, p);
}

Entry entry_from_json(const json& j) {
  if (j.is_string()) return parse_entry(j.get<std::string>());
  if (j.is_number_integer()) return Entry(Rational(j.get<long>()));
  throw ParseError("entry must be a string (got " + std::string(j.type_name()) + ")");
}

std::vector<Entry> vector_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw ParseError(std::string(name) + " must be an array");
  std::vector<Entry> out;
  for (const auto& e : j) out.push_back(entry_from_json(e));
  return out;
}

EntryMatrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw ParseError(std::string(name) + " must be an array of rows");
  EntryMatrix m;
  m.rows = j.size();
  m.cols = (!j.empty() && j[0].is_array()) ? j[0].size() : 0;
  for (const auto& row : j) {
    if (!row.is_array()) throw ParseError(std::string(name) + " rows must be arrays");
    if (row.size() != m.cols) throw DimensionError(std::string(name) + " has rows of different lengths");
    for (const auto& e : row) m.entries.push_back(entry_from_json(e));
  }
  return m;
}

json matrix_to_json(const EntryMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const std::vector<Entry>& v) {
  json out = json::array();
  for (const auto& e : v) out.push_back(e.to_string());
  return out;
}

IntervalMatrix refine_matrix(const EntryMatrix& m, unsigned long p, bool& capped) {
  IntervalMatrix out(m.rows, m.cols, working_precision(p));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j).refine(p, capped);
  }
  return out;
}

IntervalVector refine_vector(const std::vector<Entry>& v, unsigned long p, bool& capped) {
  IntervalVector out;
  for (const auto& e : v) out.push_back(e.refine(p, capped));
  return out;
}

}  // namespace

mpfr_prec_t working_precision(unsigned long p) {
  return std::max<mpfr_prec_t>(static_cast<mpfr_prec_t>(p), kDefaultPrecision);
}

Entry::Entry(Rational value) : source_(std::move(value)) { std::get<Rational>(source_).canonicalize(); }

Entry Entry::interval(Rational lo, Rational hi) {
  lo.canonicalize();
  hi.canonicalize();
  if (hi < lo) throw ParseError("interval entry with lo > hi");
  Entry e;
  e.source_ = RationalRange{std::move(lo), std::move(hi)};
  return e;
}

Entry Entry::oracle(Oracle fn) {
  Entry e;
  e.source_ = std::move(fn);
  return e;
}

DyadicInterval Entry::refine(unsigned long p, bool& capped) const {
  const mpfr_prec_t prec = working_precision(p);
  const Dyadic tolerance = ldexp(Dyadic(1L), -static_cast<long>(p));
  if (const auto* q = std::get_if<Rational>(&source_)) {
    return {exact_if_dyadic(*q, p, true), exact_if_dyadic(*q, p, false), prec};
  }
  if (const auto* r = std::get_if<RationalRange>(&source_)) {
    DyadicInterval iv(exact_if_dyadic(r->lo, p, true), exact_if_dyadic(r->hi, p, false), prec);
    if (tolerance < iv.width()) capped = true;
    return iv;
  }
  DyadicInterval iv = std::get<Oracle>(source_)(p);
  if (tolerance < iv.width()) throw OracleError("oracle answered wider than 2^-" + std::to_string(p));
  return iv.with_precision(std::max(prec, iv.precision()));
}

Entry Entry::negated() const {
  if (const auto* q = std::get_if<Rational>(&source_)) return Entry(Rational(-*q));
  if (const auto* r = std::get_if<RationalRange>(&source_)) return interval(-r->hi, -r->lo);
  Oracle inner = std::get<Oracle>(source_);
  return oracle([inner](unsigned long p) { return -inner(p); });
}

std::string Entry::to_string() const {
  if (const auto* q = std::get_if<Rational>(&source_)) return q->get_str();
  if (const auto* r = std::get_if<RationalRange>(&source_)) return "[" + r->lo.get_str() + "," + r->hi.get_str() + "]";
  throw InstanceError("oracle entries have no textual form");
}

bool operator==(const Entry& a, const Entry& b) {
  if (a.is_exact() && b.is_exact()) return a.value() == b.value();
  if (a.is_interval() && b.is_interval()) return a.range().lo == b.range().lo && a.range().hi == b.range().hi;
  return false;
}

bool LoopInstance::is_rational() const {
  auto exact = [](const Entry& e) { return e.is_exact(); };
  return std::all_of(a.entries.begin(), a.entries.end(), exact) &&
         std::all_of(b_matrix.entries.begin(), b_matrix.entries.end(), exact) &&
         std::all_of(b.begin(), b.end(), exact) && std::all_of(eta.begin(), eta.end(), exact);
}

void LoopInstance::validate() const {
  if (a.rows == 0) throw DimensionError("state dimension n must be at least 1");
  if (a.cols != a.rows) throw DimensionError("A must be square");
  if (b_matrix.rows == 0) throw DimensionError("constraint count m must be at least 1");
  if (b_matrix.cols != a.rows) throw DimensionError("B must have n columns");
  if (a.entries.size() != a.rows * a.cols || b_matrix.entries.size() != b_matrix.rows * b_matrix.cols) {
    throw DimensionError("matrix entry count does not match its shape");
  }
  if (kind == InstanceKind::Affine) {
    if (b.size() != n()) throw DimensionError("b must have length n");
    if (eta.size() != m()) throw DimensionError("eta must have length m");
  } else if (!b.empty() || !eta.empty()) {
    throw DimensionError("linear instances carry no b or eta");
  }
}

Entry parse_entry(std::string_view text) {
  std::string s(text);
  std::smatch match;
  if (std::regex_match(s, match, kInterval)) {
    return Entry::interval(parse_scalar(match[1].str()), parse_scalar(match[2].str()));
  }
  return Entry(parse_scalar(s));
}

LoopInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw ParseError("missing string field \"kind\"");
  if (!doc.contains("A")) throw ParseError("missing field \"A\"");
  if (!doc.contains("B")) throw ParseError("missing field \"B\"");

  LoopInstance inst;
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "linear") {
    inst.kind = InstanceKind::Linear;
  } else if (kind == "affine") {
    inst.kind = InstanceKind::Affine;
  } else {
    throw ParseError("unknown kind \"" + kind + "\"");
  }
  inst.a = matrix_from_json(doc["A"], "A");
  inst.b_matrix = matrix_from_json(doc["B"], "B");
  if (inst.kind == InstanceKind::Affine) {
    if (!doc.contains("b") || !doc.contains("eta")) throw ParseError("affine instance needs \"b\" and \"eta\"");
    inst.b = vector_from_json(doc["b"], "b");
    inst.eta = vector_from_json(doc["eta"], "eta");
  } else if (doc.contains("b") || doc.contains("eta")) {
    throw ParseError("linear instance must not carry \"b\" or \"eta\"");
  }
  inst.validate();
  return inst;
}

std::string serialize_instance(const LoopInstance& inst, int indent) {
  json doc;
  doc["kind"] = inst.kind == InstanceKind::Linear ? "linear" : "affine";
  doc["A"] = matrix_to_json(inst.a);
  doc["B"] = matrix_to_json(inst.b_matrix);
  if (inst.kind == InstanceKind::Affine) {
    doc["b"] = vector_to_json(inst.b);
    doc["eta"] = vector_to_json(inst.eta);
  }
  return doc.dump(indent);
}

LoopInstance homogenise(const LoopInstance& affine) {
  if (affine.kind != InstanceKind::Affine) throw std::invalid_argument("homogenise: instance is not affine");
  affine.validate();
  const std::size_t n = affine.n();
  const std::size_t m = affine.m();
  LoopInstance out;
  out.kind = InstanceKind::Linear;
  out.a = EntryMatrix(n + 1, n + 1);
  out.b_matrix = EntryMatrix(m + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.a(i, j) = affine.a(i, j);
    out.a(i, n) = affine.b[i];
  }
  out.a(n, n) = Entry(Rational(1));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.b_matrix(i, j) = affine.b_matrix(i, j);
    out.b_matrix(i, n) = affine.eta[i].negated();
  }
  out.b_matrix(m, n) = Entry(Rational(1));
  return out;
}

HomogenisedData homogenise(const IntervalMatrix& a, const IntervalVector& b, const IntervalMatrix& b_matrix,
                           const IntervalVector& eta) {
  const std::size_t n = a.rows();
  const std::size_t m = b_matrix.rows();
  if (b.size() != n || eta.size() != m || b_matrix.cols() != n) throw DimensionMismatch("homogenise: shape mismatch");
  const mpfr_prec_t prec = std::max(a.precision(), b_matrix.precision());
  HomogenisedData out{IntervalMatrix(n + 1, n + 1, prec), IntervalMatrix(m + 1, n + 1, prec)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.a(i, j) = a(i, j);
    out.a(i, n) = b[i];
  }
  out.a(n, n) = DyadicInterval(1L, prec);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.b_matrix(i, j) = b_matrix(i, j);
    out.b_matrix(i, n) = -eta[i];
  }
  out.b_matrix(m, n) = DyadicInterval(1L, prec);
  return out;
}

RefinedInstance refine(const LoopInstance& inst, unsigned long p) {
  RefinedInstance out;
  out.kind = inst.kind;
  out.precision = p;
  out.a = refine_matrix(inst.a, p, out.precision_capped);
  out.b_matrix = refine_matrix(inst.b_matrix, p, out.precision_capped);
  out.b = refine_vector(inst.b, p, out.precision_capped);
  out.eta = refine_vector(inst.eta, p, out.precision_capped);
  return out;
}

}  // namespace linloop
