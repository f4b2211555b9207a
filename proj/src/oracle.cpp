#include "linloop/oracle.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace linloop::oracle {

namespace {

std::size_t bits(const Integer& z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

bool too_large(const RationalVector& x) {
  return std::any_of(x.begin(), x.end(), [](const Rational& q) {
    return bits(q.get_num()) > kMaxSimulationBits || bits(q.get_den()) > kMaxSimulationBits;
  });
}

RationalVector zeros(std::size_t n) { return RationalVector(n, Rational(0)); }

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t p = row;
    while (p < m.rows && m(p, col) == 0) ++p;
    if (p == m.rows) continue;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(row, j), m(p, j));
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col) / m(row, col);
      for (std::size_t j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Rational dyadic_round(const Rational& q, unsigned long p) {
  Rational scaled = q;
  mpq_mul_2exp(scaled.get_mpq_t(), scaled.get_mpq_t(), p);
  Integer z;
  mpz_fdiv_q(z.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
  Rational out(z);
  mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), p);
  return out;
}

Rational max_abs(const RationalVector& v) {
  Rational m(0);
  for (const auto& x : v) m = std::max(m, Rational(abs(x)));
  return m;
}

// Rational point of (a, b) within 2^-p of an odd-multiplicity root of chi.
Rational bisect_root(const RationalVector& chi, Rational a, Rational b, unsigned long p) {
  int sa = sgn(evaluate(chi, a));
  Rational eps(1);
  mpq_div_2exp(eps.get_mpq_t(), eps.get_mpq_t(), p);
  while (b - a > eps) {
    Rational mid = (a + b) / 2;
    int sm = sgn(evaluate(chi, mid));
    if (sm == 0) return mid;
    if (sm == sa) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return (a + b) / 2;
}

// Approximate unit-scale eigenvector for lambda close to an eigenvalue.
std::optional<RationalVector> eigenvector_near(const RationalMatrix& a, const Rational& lambda, unsigned long p) {
  RationalMatrix shifted = a;
  for (std::size_t i = 0; i < a.rows; ++i) shifted(i, i) -= lambda;
  if (auto exact = null_vector(shifted)) return exact;
  RationalVector w(a.rows, Rational(1));
  for (int iter = 0; iter < 2; ++iter) {
    auto next = solve(shifted, w);
    if (!next) return std::nullopt;
    Rational scale = max_abs(*next);
    if (scale == 0) return std::nullopt;
    w.clear();
    for (const auto& x : *next) w.push_back(dyadic_round(x / scale, p));
  }
  return w;
}

int strict_sign(const RationalVector& y) {
  if (std::all_of(y.begin(), y.end(), [](const Rational& q) { return q > 0; })) return 1;
  if (std::all_of(y.begin(), y.end(), [](const Rational& q) { return q < 0; })) return -1;
  return 0;
}

std::string describe(const SimulationResult& r) {
  switch (r.status) {
    case SimulationStatus::EscapedAt: return "escaped at step " + std::to_string(r.steps);
    case SimulationStatus::StillInside: return "inside after " + std::to_string(r.steps) + " steps";
    case SimulationStatus::SizeLimitExceeded: return "size limit after " + std::to_string(r.steps) + " steps";
  }
  return "";
}

bool contains(const DyadicInterval& x, const Rational& q) { return x.contains(q); }

}  // namespace

RationalMatrix::RationalMatrix(std::size_t r, std::size_t c, std::vector<Rational> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (data.size() != r * c) throw PreconditionError("matrix entry count does not match its shape");
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_entries(const EntryMatrix& m) {
  RationalMatrix out(m.rows, m.cols);
  for (std::size_t k = 0; k < m.entries.size(); ++k) {
    if (!m.entries[k].is_exact()) throw PreconditionError("instance entry is not an exact rational");
    out.data[k] = m.entries[k].value();
  }
  return out;
}

RationalVector from_entries(const std::vector<Entry>& v) {
  RationalVector out;
  for (const auto& e : v) {
    if (!e.is_exact()) throw PreconditionError("instance entry is not an exact rational");
    out.push_back(e.value());
  }
  return out;
}

RationalVector mat_vec(const RationalMatrix& m, const RationalVector& x) {
  if (m.cols != x.size()) throw PreconditionError("matrix-vector shape mismatch");
  RationalVector y = zeros(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) y[i] += m(i, j) * x[j];
  }
  return y;
}

RationalMatrix mat_mul(const RationalMatrix& x, const RationalMatrix& y) {
  if (x.cols != y.rows) throw PreconditionError("matrix product shape mismatch");
  RationalMatrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      if (x(i, k) == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += x(i, k) * y(k, j);
    }
  }
  return out;
}

Rational dot(const RationalVector& x, const RationalVector& y) {
  Rational s(0);
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

RationalVector char_poly(const RationalMatrix& a) {
  const std::size_t n = a.rows;
  RationalVector c(n + 1, Rational(0));
  c[n] = 1;
  RationalMatrix m = RationalMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix am = mat_mul(a, m);
    Rational trace(0);
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / static_cast<long>(k);
    m = am;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k];
  }
  return c;
}

Rational evaluate(const RationalVector& poly, const Rational& x) {
  Rational acc(0);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& rhs) {
  const std::size_t n = m.rows;
  RationalMatrix aug(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n) = rhs[i];
  }
  auto pivots = eliminate(aug);
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug(i, n) / aug(i, i);
  return x;
}

std::optional<RationalVector> null_vector(const RationalMatrix& m) {
  RationalMatrix r = m;
  auto pivots = eliminate(r);
  if (pivots.size() == m.cols) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t k = 0; k <= pivots.size(); ++k, ++free_col) {
    if (k == pivots.size() || pivots[k] != free_col) break;
  }
  RationalVector v = zeros(m.cols);
  v[free_col] = 1;
  for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, free_col) / r(k, pivots[k]);
  return v;
}

bool inside(const RationalMatrix& b_matrix, const RationalVector& eta, const RationalVector& x, Boundary boundary) {
  RationalVector y = mat_vec(b_matrix, x);
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (boundary == Boundary::Open ? y[j] <= eta[j] : y[j] < eta[j]) return false;
  }
  return true;
}

SimulationResult simulate_escape(const RationalMatrix& a, const RationalVector& b, const RationalMatrix& b_matrix,
                                 const RationalVector& eta, const RationalVector& x, std::size_t kmax,
                                 Boundary boundary) {
  if (a.rows != a.cols || a.cols != x.size() || b.size() != x.size() || b_matrix.cols != x.size() ||
      eta.size() != b_matrix.rows) {
    throw PreconditionError("simulation data shapes disagree");
  }
  if (kmax < 1) throw PreconditionError("step limit must be at least 1");
  if (!inside(b_matrix, eta, x, boundary)) throw PreconditionError("start point is not inside the polyhedron");
  RationalVector point = x;
  for (std::size_t k = 1; k <= kmax; ++k) {
    point = mat_vec(a, point);
    for (std::size_t i = 0; i < point.size(); ++i) point[i] += b[i];
    if (!inside(b_matrix, eta, point, boundary)) return {SimulationStatus::EscapedAt, k};
    if (too_large(point)) return {SimulationStatus::SizeLimitExceeded, k};
  }
  return {SimulationStatus::StillInside, kmax};
}

SimulationResult simulate_escape(const RationalMatrix& a, const RationalMatrix& b_matrix, const RationalVector& x,
                                 std::size_t kmax, Boundary boundary) {
  return simulate_escape(a, zeros(a.rows), b_matrix, zeros(b_matrix.rows), x, kmax, boundary);
}

SimulationResult simulate_escape(const LoopInstance& inst, const RationalVector& x, std::size_t kmax,
                                 Boundary boundary) {
  inst.validate();
  auto a = RationalMatrix::from_entries(inst.a);
  auto bm = RationalMatrix::from_entries(inst.b_matrix);
  if (inst.kind == InstanceKind::Linear) return simulate_escape(a, bm, x, kmax, boundary);
  return simulate_escape(a, from_entries(inst.b), bm, from_entries(inst.eta), x, kmax, boundary);
}

const char* answer_name(Answer a) { return a == Answer::Trapped ? "trapped" : "escaping"; }

Answer decide_1x1(const Rational& a, const RationalVector& b_column) {
  if (a <= 0 || b_column.empty()) return Answer::Escaping;
  const int s = sgn(b_column.front());
  if (s == 0) return Answer::Escaping;
  for (const auto& bj : b_column) {
    if (sgn(bj) != s) return Answer::Escaping;
  }
  return Answer::Trapped;
}

bool is_boundary_1x1(const Rational& a, const RationalVector& b_column) {
  bool has_pos = false;
  bool has_neg = false;
  bool has_zero = false;
  for (const auto& bj : b_column) {
    if (bj > 0) has_pos = true;
    if (bj < 0) has_neg = true;
    if (bj == 0) has_zero = true;
  }
  // Mixed strict signs or a < 0 keep P(B) empty or the orbit sign-flipping
  // under every small perturbation.
  if ((has_pos && has_neg) || a < 0) return false;
  return a == 0 || has_zero;
}

RationalVector perturb_constraint(const RationalVector& v, const RationalVector& b1, const RationalVector& b2,
                                  const Rational& eps) {
  if (v.size() != b1.size() || v.size() != b2.size()) throw PreconditionError("vectors differ in length");
  if (eps <= 0) throw PreconditionError("eps must be positive");
  const Rational b11 = dot(b1, b1);
  const Rational b22 = dot(b2, b2);
  const Rational b12 = dot(b1, b2);
  if (b11 == 0 || b22 == 0 || b12 * b12 == b11 * b22) throw PreconditionError("B1 and B2 are linearly dependent");
  if (dot(b1, v) < 0 || dot(b2, v) > 0) throw PreconditionError("requires B1.v >= 0 and B2.v <= 0");

  RationalVector out = v;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational u1 = b1[i] - b12 / b22 * b2[i];
    Rational u2 = b2[i] - b12 / b11 * b1[i];
    out[i] += eps / 4 * u1 / b11 - eps / 4 * u2 / b22;
  }
  if (!(dot(b1, out) > 0 && dot(b2, out) < 0)) throw std::logic_error("perturbation lost strict signs");
  return out;
}

std::vector<LoopInstance> sample_instances(std::size_t n, std::size_t m, InstanceKind kind, std::size_t count,
                                           std::uint64_t seed) {
  if (n == 0 || m == 0 || count == 0) throw PreconditionError("n, m and count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-256, 256);
  auto draw = [&] { return Entry(Rational(dist(rng), 256)); };

  std::vector<LoopInstance> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    LoopInstance inst;
    inst.kind = kind;
    inst.a = EntryMatrix(n, n);
    inst.b_matrix = EntryMatrix(m, n);
    for (auto& e : inst.a.entries) e = draw();
    for (auto& e : inst.b_matrix.entries) e = draw();
    if (kind == InstanceKind::Affine) {
      for (std::size_t i = 0; i < n; ++i) inst.b.push_back(draw());
      for (std::size_t j = 0; j < m; ++j) inst.eta.push_back(draw());
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<std::string> write_samples(const std::vector<LoopInstance>& instances, std::uint64_t seed,
                                       const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  std::vector<std::string> paths;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    fs::path path = fs::path(directory) / (std::to_string(seed) + "_" + std::to_string(i) + ".json");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    file << serialize_instance(instances[i], 2) << "\n";
    paths.push_back(path.string());
  }
  return paths;
}

AuditResult audit_trapped(const LoopInstance& inst, const Certificate& cert, std::size_t steps) {
  AuditResult result;
  const auto a = RationalMatrix::from_entries(inst.a);
  const auto bm = RationalMatrix::from_entries(inst.b_matrix);
  const bool affine = inst.kind == InstanceKind::Affine;
  const RationalVector b = affine ? from_entries(inst.b) : zeros(a.rows);
  const RationalVector eta = affine ? from_entries(inst.eta) : zeros(bm.rows);
  const std::size_t n = a.rows;

  RationalMatrix a_minus_i = a;
  for (std::size_t i = 0; i < n; ++i) a_minus_i(i, i) -= 1;
  std::optional<RationalVector> fixed;
  if (affine) {
    if (auto s = solve(a_minus_i, b)) {
      fixed = RationalVector();
      for (const auto& x : *s) fixed->push_back(-x);
    }
  }

  if (cert.formula == Formula::AffineTrappedFixedPoint) {
    if (!fixed || !cert.fixed_point) {
      result.detail = "fixed point does not exist exactly";
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!contains(cert.fixed_point->fixed_point[i], (*fixed)[i])) {
        result.detail = "certificate enclosure misses the exact fixed point";
        return result;
      }
    }
    if (!inside(bm, eta, *fixed, Boundary::Open)) {
      result.detail = "exact fixed point violates a strict constraint";
      return result;
    }
    auto sim = simulate_escape(a, b, bm, eta, *fixed, steps, Boundary::Closed);
    result.points = 1;
    result.passed = sim.status == SimulationStatus::StillInside;
    result.detail = "fixed point " + describe(sim);
    return result;
  }

  if (!cert.sign_change) {
    result.detail = "certificate has no sign-change evidence";
    return result;
  }
  if (affine && !fixed) {
    result.detail = "skipped: 1 is an exact eigenvalue, no affine witness construction";
    result.passed = true;
    return result;
  }
  const RationalVector chi = char_poly(a);
  const Rational lo = cert.sign_change->a.to_rational();
  const Rational hi = cert.sign_change->b.to_rational();
  if (sgn(evaluate(chi, lo)) * sgn(evaluate(chi, hi)) >= 0) {
    result.detail = "exact characteristic polynomial has no sign change on the certified bracket";
    return result;
  }

  std::string last;
  for (unsigned long p = 64; p <= 8192; p *= 2) {
    Rational lambda = bisect_root(chi, lo, hi, p);
    auto v = eigenvector_near(a, lambda, p);
    if (!v) continue;
    int s = strict_sign(mat_vec(bm, *v));
    if (s == 0) {
      last = "approximate eigenvector is not strictly signed at " + std::to_string(p) + " bits";
      continue;
    }
    if (s < 0) {
      for (auto& x : *v) x = -x;
    }
    RationalVector start = *v;
    if (affine) {
      // x* + t v with t large enough to start strictly inside.
      RationalVector bv = mat_vec(bm, *v);
      RationalVector bx = mat_vec(bm, *fixed);
      Rational t(0);
      for (std::size_t j = 0; j < bv.size(); ++j) t = std::max(t, Rational((eta[j] - bx[j]) / bv[j]));
      t = 2 * t + 1;
      for (std::size_t i = 0; i < n; ++i) start[i] = (*fixed)[i] + t * (*v)[i];
    }
    auto sim = simulate_escape(a, b, bm, eta, start, steps, Boundary::Closed);
    result.points = 1;
    last = "eigenvector witness at " + std::to_string(p) + " bits " + describe(sim);
    if (sim.status == SimulationStatus::StillInside) {
      result.passed = true;
      result.detail = last;
      return result;
    }
  }
  result.detail = last.empty() ? "no eigenvector approximation found" : last;
  return result;
}

AuditResult audit_escaping(const LoopInstance& inst, std::size_t points, std::size_t steps, std::uint64_t seed) {
  AuditResult result;
  const auto a = RationalMatrix::from_entries(inst.a);
  const auto bm = RationalMatrix::from_entries(inst.b_matrix);
  const bool affine = inst.kind == InstanceKind::Affine;
  const RationalVector b = affine ? from_entries(inst.b) : zeros(a.rows);
  const RationalVector eta = affine ? from_entries(inst.eta) : zeros(bm.rows);

  std::mt19937_64 rng(seed);
  const long range = affine ? 1024 : 256;
  std::uniform_int_distribution<long> dist(-range, range);
  std::size_t draws = 0;
  std::size_t escaped = 0;
  while (result.points < points && draws < 200 * points) {
    ++draws;
    RationalVector x;
    for (std::size_t i = 0; i < a.rows; ++i) x.emplace_back(dist(rng), 256);
    for (auto& q : x) q.canonicalize();
    if (!inside(bm, eta, x, Boundary::Open)) continue;
    ++result.points;
    auto sim = simulate_escape(a, b, bm, eta, x, steps, Boundary::Open);
    if (sim.status == SimulationStatus::EscapedAt) {
      ++escaped;
    } else if (sim.status == SimulationStatus::SizeLimitExceeded) {
      ++result.inconclusive;
    } else {
      std::ostringstream msg;
      msg << "start point (";
      for (std::size_t i = 0; i < x.size(); ++i) msg << (i ? "," : "") << x[i].get_str();
      msg << ") " << describe(sim);
      result.detail = msg.str();
      return result;
    }
  }
  result.passed = true;
  result.detail = std::to_string(escaped) + " of " + std::to_string(result.points) + " sampled points escaped";
  if (result.inconclusive) result.detail += ", " + std::to_string(result.inconclusive) + " hit the size guard";
  return result;
}

AuditResult audit_verdict(const LoopInstance& inst, const Verdict& verdict) {
  switch (verdict.outcome) {
    case Outcome::RobustEscaping: return audit_escaping(inst);
    case Outcome::RobustTrapped: return audit_trapped(inst, *verdict.certificate);
    case Outcome::Unknown: break;
  }
  return {true, "unknown verdict, nothing to audit", 0, 0};
}

}  // namespace linloop::oracle
