#include "linloop/decide.hpp"

#include <sstream>

#include "json.hpp"

namespace linloop {

namespace {

using nlohmann::json;

json interval_json(const DyadicInterval& x) { return json::array({x.lo().to_string(), x.hi().to_string()}); }

json intervals_json(const IntervalVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(interval_json(x));
  return out;
}

Dyadic dyadic_from_json(const json& j) {
  Rational q(j.get<std::string>(), 10);
  q.canonicalize();
  const auto& den = q.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) throw ParseError("certificate value is not dyadic");
  auto shift = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
  return Dyadic(q.get_num(), -shift);
}

DyadicInterval interval_from_json(const json& j, mpfr_prec_t prec) {
  return {dyadic_from_json(j.at(0)), dyadic_from_json(j.at(1)), prec};
}

IntervalVector intervals_from_json(const json& j, mpfr_prec_t prec) {
  IntervalVector out;
  for (const auto& x : j) out.push_back(interval_from_json(x, prec));
  return out;
}

bool same(const DyadicInterval& x, const DyadicInterval& y) { return x.lo() == y.lo() && x.hi() == y.hi(); }

bool same(const IntervalVector& x, const IntervalVector& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!same(x[i], y[i])) return false;
  }
  return true;
}

bool same(const std::vector<RealSegment>& x, const std::vector<RealSegment>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i].lo == y[i].lo && x[i].hi == y[i].hi)) return false;
  }
  return true;
}

CheckResult escaping_round(const RefinedInstance& d, unsigned beta) {
  return d.kind == InstanceKind::Linear ? escaping_linear_round(d.a, d.b_matrix, beta)
                                        : escaping_affine_round(d.a, d.b, d.b_matrix, d.eta, beta);
}

CheckResult trapped_round(const RefinedInstance& d, unsigned beta) {
  return d.kind == InstanceKind::Linear ? trapped_linear_round(d.a, d.b_matrix, beta)
                                        : trapped_affine_round(d.a, d.b, d.b_matrix, d.eta, beta);
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::RobustEscaping: return "robust_escaping";
    case Outcome::RobustTrapped: return "robust_trapped";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

Verdict decide(const LoopInstance& inst, unsigned max_budget) {
  inst.validate();
  Verdict verdict;
  for (unsigned beta = 0; beta <= max_budget; ++beta) {
    const RefinedInstance data = refine(inst, BudgetSchedule::precision(beta));
    CheckResult escaping = escaping_round(data, beta);
    CheckResult trapped = trapped_round(data, beta);

    verdict.stats.rounds = beta + 1;
    verdict.stats.precision_bits = data.precision;
    verdict.stats.precision_capped = verdict.stats.precision_capped || data.precision_capped;
    for (const auto* r : {&escaping, &trapped}) {
      verdict.stats.boxes += r->certificate.cover.boxes;
      verdict.stats.max_depth = std::max(verdict.stats.max_depth, r->certificate.cover.max_depth);
    }

    if (escaping.verified() && trapped.verified()) {
      throw InternalContradiction("escaping and trapped formulas both verified in round " + std::to_string(beta));
    }
    if (escaping.verified() || trapped.verified()) {
      verdict.outcome = escaping.verified() ? Outcome::RobustEscaping : Outcome::RobustTrapped;
      verdict.budget_used = beta;
      verdict.certificate = escaping.verified() ? escaping.certificate : trapped.certificate;
      return verdict;
    }
  }
  verdict.outcome = Outcome::Unknown;
  verdict.budget_used = max_budget;
  return verdict;
}

bool replay_certificate(const LoopInstance& inst, const Certificate& cert) {
  const RefinedInstance d = refine(inst, cert.precision);
  const mpfr_prec_t prec = working_precision(cert.precision);
  const CoverLimits limits{cert.depth_limit, prec, BudgetSchedule::max_boxes(cert.budget)};
  const bool linear = d.kind == InstanceKind::Linear;

  switch (cert.formula) {
    case Formula::LinearEscaping:
    case Formula::AffineEscaping: {
      if (linear != (cert.formula == Formula::LinearEscaping)) return false;
      IntervalMatrix a = d.a;
      IntervalMatrix b_matrix = d.b_matrix;
      Dyadic threshold(0L);
      if (!linear) {
        HomogenisedData hom = homogenise(d.a, d.b, d.b_matrix, d.eta);
        a = std::move(hom.a);
        b_matrix = std::move(hom.b_matrix);
        threshold = Dyadic(1L);
      }
      if (!same(real_spectrum_above(a, threshold, prec), cert.segments)) return false;
      return cover_verify(cert.segments, a, some_row_negative(b_matrix), limits).verified();
    }
    case Formula::LinearTrapped:
    case Formula::AffineTrappedEigen: {
      if (linear != (cert.formula == Formula::LinearTrapped) || !cert.sign_change) return false;
      const auto& sc = *cert.sign_change;
      const Dyadic threshold(linear ? 0L : 1L);
      if (!(threshold < sc.a)) return false;
      SignWitness w = odd_root_witness(char_poly(d.a), sc.a, sc.b);
      if (!w.verified) return false;
      std::vector<RealSegment> bracket{RealSegment{sc.a, sc.b}};
      return cover_verify(bracket, d.a, strictly_signed(d.b_matrix), limits).verified();
    }
    case Formula::AffineTrappedFixedPoint: {
      if (linear || !cert.fixed_point) return false;
      if (!verify_value_not_in_spectrum(d.a, Dyadic(1L), prec)) return false;
      try {
        IntervalVector solution = interval_solve(d.a - IntervalMatrix::identity(d.a.rows(), prec), d.b);
        if (!same(solution, cert.fixed_point->solution)) return false;
        IntervalVector margins = mat_vec(d.b_matrix, solution);
        for (std::size_t j = 0; j < margins.size(); ++j) {
          margins[j] += d.eta[j];
          if (!margins[j].is_negative()) return false;
        }
        return true;
      } catch (const SingularAtThisPrecision&) {
        return false;
      }
    }
  }
  return false;
}

std::string certificate_to_json(const Certificate& cert, int indent) {
  json doc;
  doc["formula"] = formula_name(cert.formula);
  doc["budget"] = cert.budget;
  doc["precision_bits"] = cert.precision;
  doc["depth_limit"] = cert.depth_limit;
  doc["cover"] = {{"boxes", cert.cover.boxes},
                  {"max_depth", cert.cover.max_depth},
                  {"working_precision", cert.cover.precision}};
  json segments = json::array();
  for (const auto& s : cert.segments) segments.push_back(json::array({s.lo.to_string(), s.hi.to_string()}));
  doc["segments"] = std::move(segments);
  if (cert.sign_change) {
    const auto& sc = *cert.sign_change;
    doc["sign_change"] = {{"a", sc.a.to_string()},
                          {"b", sc.b.to_string()},
                          {"value_at_a", interval_json(sc.value_at_a)},
                          {"value_at_b", interval_json(sc.value_at_b)}};
  }
  if (cert.fixed_point) {
    const auto& fp = *cert.fixed_point;
    doc["fixed_point"] = {{"solution", intervals_json(fp.solution)},
                          {"fixed_point", intervals_json(fp.fixed_point)},
                          {"margins", intervals_json(fp.margins)}};
  }
  return doc.dump(indent);
}

Certificate certificate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid certificate JSON: ") + e.what());
  }
  try {
    Certificate cert;
    auto formula = formula_from_name(doc.at("formula").get<std::string>());
    if (!formula) throw ParseError("unknown certificate formula");
    cert.formula = *formula;
    cert.budget = doc.at("budget").get<unsigned>();
    cert.precision = doc.at("precision_bits").get<unsigned long>();
    cert.depth_limit = doc.at("depth_limit").get<int>();
    cert.cover.boxes = doc.at("cover").at("boxes").get<std::size_t>();
    cert.cover.max_depth = doc.at("cover").at("max_depth").get<int>();
    cert.cover.precision = doc.at("cover").at("working_precision").get<mpfr_prec_t>();
    for (const auto& s : doc.at("segments")) cert.segments.push_back({dyadic_from_json(s.at(0)), dyadic_from_json(s.at(1))});
    const mpfr_prec_t prec = working_precision(cert.precision);
    if (doc.contains("sign_change")) {
      const auto& sc = doc["sign_change"];
      cert.sign_change = SignChangeEvidence{dyadic_from_json(sc.at("a")), dyadic_from_json(sc.at("b")),
                                            interval_from_json(sc.at("value_at_a"), prec),
                                            interval_from_json(sc.at("value_at_b"), prec)};
    }
    if (doc.contains("fixed_point")) {
      const auto& fp = doc["fixed_point"];
      cert.fixed_point = FixedPointEvidence{intervals_from_json(fp.at("solution"), prec),
                                            intervals_from_json(fp.at("fixed_point"), prec),
                                            intervals_from_json(fp.at("margins"), prec)};
    }
    return cert;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

std::string verdict_to_json(const Verdict& v, int indent) {
  json doc;
  doc["verdict"] = outcome_name(v.outcome);
  doc["budget_used"] = v.budget_used;
  if (v.certificate) doc["certificate"] = json::parse(certificate_to_json(*v.certificate));
  doc["stats"] = {{"rounds", v.stats.rounds},
                  {"boxes", v.stats.boxes},
                  {"precision_bits", v.stats.precision_bits},
                  {"max_depth", v.stats.max_depth},
                  {"precision_capped", v.stats.precision_capped}};
  return doc.dump(indent);
}

std::string verdict_to_text(const Verdict& v) {
  std::ostringstream out;
  out << outcome_name(v.outcome) << "\n";
  out << "budget_used: " << v.budget_used << "\n";
  if (v.certificate) {
    const auto& c = *v.certificate;
    out << "formula: " << formula_name(c.formula) << "\n";
    out << "precision_bits: " << c.precision << "  depth_limit: " << c.depth_limit
        << "  cover_boxes: " << c.cover.boxes << "\n";
    if (c.sign_change) {
      out << "sign_change: (" << c.sign_change->a.to_string() << ", " << c.sign_change->b.to_string() << ")\n";
    }
    if (c.fixed_point) {
      out << "fixed_point:";
      for (const auto& x : c.fixed_point->fixed_point) out << " " << x.to_string();
      out << "\n";
    }
  }
  out << "rounds: " << v.stats.rounds << "  boxes: " << v.stats.boxes << "  precision_bits: " << v.stats.precision_bits
      << "  max_depth: " << v.stats.max_depth << (v.stats.precision_capped ? "  (precision capped by input)" : "")
      << "\n";
  return out.str();
}

}  // namespace linloop
