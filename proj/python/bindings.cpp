#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "linloop/decide.hpp"
#include "linloop/oracle.hpp"
#include "linloop/spectral.hpp"

namespace py = pybind11;
using namespace linloop;

namespace {

Rational scalar(const std::string& text) {
  Entry e = parse_entry(text);
  if (!e.is_exact()) throw ParseError("expected an exact number, got \"" + text + "\"");
  return e.value();
}

oracle::RationalVector scalars(const std::vector<std::string>& texts) {
  oracle::RationalVector out;
  for (const auto& t : texts) out.push_back(scalar(t));
  return out;
}

std::string decide_json(const std::string& instance, unsigned max_budget) {
  LoopInstance inst = parse_instance(instance);
  Verdict v;
  {
    py::gil_scoped_release release;
    v = decide(inst, max_budget);
  }
  return verdict_to_json(v);
}

py::tuple simulate(const std::string& instance, const std::vector<std::string>& point, std::size_t steps,
                   bool closed) {
  auto r = oracle::simulate_escape(parse_instance(instance), scalars(point), steps,
                                   closed ? oracle::Boundary::Closed : oracle::Boundary::Open);
  const char* status = r.status == oracle::SimulationStatus::EscapedAt     ? "escaped_at"
                       : r.status == oracle::SimulationStatus::StillInside ? "still_inside"
                                                                           : "size_limit";
  return py::make_tuple(status, r.steps);
}

std::vector<std::pair<std::string, std::string>> char_poly_enclosure(const std::vector<std::vector<std::string>>& rows,
                                                                     long prec) {
  const std::size_t n = rows.size();
  IntervalMatrix a(n, n, prec);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw DimensionMismatch("matrix must be square");
    for (std::size_t j = 0; j < n; ++j) a(i, j) = DyadicInterval::enclose(scalar(rows[i][j]), prec);
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : char_poly(a).coefficients) out.emplace_back(c.lo().to_string(), c.hi().to_string());
  return out;
}

py::list roots(const std::vector<std::string>& ascending, long prec) {
  IntervalPolynomial p;
  for (const auto& c : ascending) p.coefficients.push_back(DyadicInterval::enclose(scalar(c), prec));
  py::list out;
  for (const auto& d : root_enclosures(p, prec)) {
    py::dict disk;
    disk["re"] = d.center_re.lo().to_double();
    disk["im"] = d.center_im.lo().to_double();
    disk["radius"] = d.radius.to_double();
    disk["count"] = d.count;
    out.append(disk);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Validated robust escape analysis for linear and affine loops";

  py::register_exception<InstanceError>(m, "InstanceError", PyExc_ValueError);
  py::register_exception<oracle::PreconditionError>(m, "PreconditionError", PyExc_ValueError);

  m.def("decide_json", &decide_json, py::arg("instance"), py::arg("max_budget") = 8,
        "Verdict JSON for an instance given as instance-file text.");
  m.def(
      "replay_certificate",
      [](const std::string& instance, const std::string& certificate) {
        return replay_certificate(parse_instance(instance), certificate_from_json(certificate));
      },
      py::arg("instance"), py::arg("certificate"));
  m.def(
      "homogenise", [](const std::string& instance) { return serialize_instance(homogenise(parse_instance(instance))); },
      py::arg("instance"));
  m.def(
      "normalise", [](const std::string& instance) { return serialize_instance(parse_instance(instance)); },
      py::arg("instance"));
  m.def("simulate", &simulate, py::arg("instance"), py::arg("point"), py::arg("steps"), py::arg("closed") = false);
  m.def(
      "sample_instances",
      [](std::size_t n, std::size_t m_, const std::string& kind, std::size_t count, std::uint64_t seed) {
        if (kind != "linear" && kind != "affine") throw ParseError("kind must be \"linear\" or \"affine\"");
        std::vector<std::string> out;
        for (const auto& inst : oracle::sample_instances(
                 n, m_, kind == "affine" ? InstanceKind::Affine : InstanceKind::Linear, count, seed)) {
          out.push_back(serialize_instance(inst));
        }
        return out;
      },
      py::arg("n"), py::arg("m"), py::arg("kind"), py::arg("count"), py::arg("seed"));
  m.def(
      "decide_1x1",
      [](const std::string& a, const std::vector<std::string>& b) {
        return std::string(oracle::answer_name(oracle::decide_1x1(scalar(a), scalars(b))));
      },
      py::arg("a"), py::arg("b"));
  m.def("char_poly", &char_poly_enclosure, py::arg("matrix"), py::arg("precision") = 53,
        "Interval coefficients (lo, hi), lowest degree first, as exact fraction strings.");
  m.def("root_enclosures", &roots, py::arg("coefficients"), py::arg("precision") = 53);
}
