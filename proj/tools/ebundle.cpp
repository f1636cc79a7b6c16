#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ebundle/cli.hpp"
#include "json.hpp"

using namespace ebundle;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const InvalidInput*>(&e)) return "InvalidInput";
  if (dynamic_cast<const InternalInconsistency*>(&e)) return "InternalInconsistency";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "Exception";
}

int run_analyze(const std::string& file, bool json, const std::string& twist_text) {
  JobDescription job = parse_job(slurp(file));
  std::optional<Divisor> twist;
  if (!twist_text.empty()) twist = parse_divisor(job.curve, twist_text);
  Report r = cmd_analyze(job, twist);
  std::cout << (json ? report_json(r) + "\n" : report_text(r));
  return exit_code(r);
}

int run_spectral(const std::string& file, bool json) {
  Report r = cmd_analyze(parse_job(slurp(file)));
  if (json) {
    nlohmann::ordered_json j;
    j["mark"] = r.mark;
    j["verdict"] = r.verdict;
    j["reason"] = r.reason;
    j["spectral_divisor"] = r.spectral;
    j["split_field"] = r.split_field;
    j["spectral_points"] = r.spectral_points;
    std::cout << j.dump(2) << "\n";
  } else if (r.semistable()) {
    std::cout << r.spectral << "\n";
    if (r.spectral_points != r.spectral) std::cout << "over " << r.split_field << ": " << r.spectral_points << "\n";
  } else {
    std::cout << r.verdict << " (" << r.reason << ")\n";
  }
  return exit_code(r);
}

int run_rr(const std::string& file, bool json) {
  JobDescription job = parse_job(slurp(file));
  if (!job.divisor) throw InvalidInput("rr needs a 'divisor' line");
  RRBasis B = rr_basis(job.curve, *job.divisor);
  if (json) {
    nlohmann::ordered_json j;
    j["divisor"] = job.divisor->to_string();
    j["degree"] = job.divisor->degree();
    j["dimension"] = B.dimension();
    j["basis"] = nlohmann::ordered_json::array();
    for (const auto& f : B.basis) j["basis"].push_back(f.to_string());
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "L(" << job.divisor->to_string() << ") has dimension " << B.dimension() << "\n";
    for (const auto& f : B.basis) std::cout << "  " << f.to_string() << "\n";
  }
  return 0;
}

int run_sweep(const std::string& file, bool json, const std::vector<std::string>& slot_specs, int threads) {
  std::vector<Slot> slots;
  for (const auto& s : slot_specs) slots.push_back(parse_slot(s));
  SweepResult res = cmd_sweep(slurp(file), slots, threads);
  std::cout << (json ? sweep_json(res) + "\n" : sweep_text(res));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semistability and splitting type of degree-zero bundles on elliptic curves over finite fields"};
  app.require_subcommand(1);
  bool json = false;
  std::string file, twist;
  std::vector<std::string> slots;
  int threads = 0;

  auto* analyze = app.add_subcommand("analyze", "Decide semistability and report the splitting type");
  analyze->add_option("file", file, "Job file")->required();
  analyze->add_flag("--json", json, "Machine-readable report");
  analyze->add_option("--twist", twist, "Twist divisor, e.g. \"1*inf + 1*(0,0) + 1*(1,0)\"");

  auto* spectral = app.add_subcommand("spectral", "Print the spectral divisor");
  spectral->add_option("file", file, "Job file")->required();
  spectral->add_flag("--json", json, "Machine-readable output");

  auto* rr = app.add_subcommand("rr", "Print a basis of L(D) for the job's divisor line");
  rr->add_option("file", file, "Job file")->required();
  rr->add_flag("--json", json, "Machine-readable output");

  auto* sweep = app.add_subcommand("sweep", "Analyze every instantiation of a template job");
  sweep->add_option("file", file, "Template job with {name} slots")->required();
  sweep->add_option("--slot", slots, "name=lo..hi or name=v1,v2,...")->required();
  sweep->add_flag("--json", json, "Machine-readable output");
  sweep->add_option("--threads", threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return run_analyze(file, json, twist);
    if (*spectral) return run_spectral(file, json);
    if (*rr) return run_rr(file, json);
    if (*sweep) return run_sweep(file, json, slots, threads);
  } catch (const std::exception& e) {
    if (json)
      std::cout << error_json(error_kind(e), e.what()) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
