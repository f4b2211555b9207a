#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "linloop/decide.hpp"
#include "linloop/oracle.hpp"

using namespace linloop;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

oracle::RationalVector parse_point(const std::string& csv) {
  oracle::RationalVector x;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Entry e = parse_entry(item);
    if (!e.is_exact()) throw ParseError("point coordinates must be exact numbers");
    x.push_back(e.value());
  }
  return x;
}

int analyze(const std::string& file, unsigned max_budget, const std::string& format, const std::string& cert_path) {
  LoopInstance inst = parse_instance(read_file(file));
  Verdict v = decide(inst, max_budget);
  if (format == "json") {
    std::cout << verdict_to_json(v, 2) << "\n";
  } else {
    std::cout << verdict_to_text(v);
  }
  if (!cert_path.empty() && v.certificate) {
    std::ofstream out(cert_path);
    if (!out) throw std::runtime_error("cannot write " + cert_path);
    out << certificate_to_json(*v.certificate, 2) << "\n";
  }
  return v.outcome == Outcome::Unknown ? 2 : 0;
}

int simulate(const std::string& file, const std::string& point, std::size_t steps) {
  LoopInstance inst = parse_instance(read_file(file));
  auto x = parse_point(point);
  if (x.size() != inst.n()) throw DimensionError("point has " + std::to_string(x.size()) + " coordinates, want " +
                                                 std::to_string(inst.n()));
  auto r = oracle::simulate_escape(inst, x, steps);
  switch (r.status) {
    case oracle::SimulationStatus::EscapedAt: std::cout << "escaped_at " << r.steps << "\n"; break;
    case oracle::SimulationStatus::StillInside: std::cout << "still_inside_after " << r.steps << "\n"; break;
    case oracle::SimulationStatus::SizeLimitExceeded: std::cout << "size_limit_at " << r.steps << "\n"; break;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust escape analysis for linear and affine loops"};
  app.require_subcommand(1);

  std::string file;
  unsigned max_budget = 8;
  std::string format = "text";
  std::string cert_path;
  auto* analyze_cmd = app.add_subcommand("analyze", "Decide robust escaping / trapped");
  analyze_cmd->add_option("file", file, "Instance file")->required();
  analyze_cmd->add_option("--max-budget", max_budget, "Largest budget to try")->capture_default_str();
  analyze_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  analyze_cmd->add_option("--emit-certificate", cert_path, "Write the certificate as JSON");

  std::string sim_file;
  std::string point;
  std::size_t steps = 1000;
  auto* simulate_cmd = app.add_subcommand("simulate", "Exact orbit simulation from a start point");
  simulate_cmd->add_option("file", sim_file, "Instance file")->required();
  simulate_cmd->add_option("--point", point, "Comma-separated start point")->required();
  simulate_cmd->add_option("--steps", steps, "Step limit")->capture_default_str();

  std::size_t dim = 2;
  std::size_t constraints = 2;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string kind = "linear";
  auto* sample_cmd = app.add_subcommand("sample", "Write seeded random instances");
  sample_cmd->add_option("--dim", dim)->required();
  sample_cmd->add_option("--constraints", constraints)->required();
  sample_cmd->add_option("--count", count)->required();
  sample_cmd->add_option("--seed", seed)->required();
  sample_cmd->add_option("--out", out_dir)->required();
  sample_cmd->add_option("--kind", kind)->check(CLI::IsMember({"linear", "affine"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze_cmd) return analyze(file, max_budget, format, cert_path);
    if (*simulate_cmd) return simulate(sim_file, point, steps);
    if (*sample_cmd) {
      auto instances = oracle::sample_instances(dim, constraints,
                                                kind == "affine" ? InstanceKind::Affine : InstanceKind::Linear, count, seed);
      for (const auto& path : oracle::write_samples(instances, seed, out_dir)) std::cout << path << "\n";
      return 0;
    }
  } catch (const InternalContradiction& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
