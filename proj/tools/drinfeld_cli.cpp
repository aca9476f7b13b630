#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "drinfeld/cli/commands.hpp"

namespace {

using namespace drinfeld;
using namespace drinfeld::cli;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot open job file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::string job_path;
  std::vector<std::string> points;
  std::string place;
  std::string b;
  int level = -1;
  int n_max = 0;
  long long seed = -1;
  int count = -1;
};

JobSpec load(const Overrides& o) {
  JobSpec job = parse_job_text(read_file(o.job_path));
  if (!o.points.empty()) job.points = o.points;
  if (!o.place.empty()) job.place = o.place;
  if (!o.b.empty()) job.b = o.b;
  if (o.level >= 0) job.level = o.level;
  if (o.n_max > 0) job.n_max = o.n_max;
  if (o.seed >= 0) job.seed = static_cast<std::uint64_t>(o.seed);
  if (o.count >= 0) job.count = o.count;
  return job;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights, torsion and Lehmer-type bounds for Drinfeld modules over F_q(t)"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Print the report as JSON");

  Overrides o;
  bool inject_bug = false;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("job", o.job_path, "Job file (JSON), or - for stdin")->required();
    sub->add_option("--point", o.points, "Point(s), overriding the job");
    sub->add_option("--insep-level", o.level, "Work in K^{1/p^n}, points in the extension variable")->check(CLI::NonNegativeNumber);
    sub->add_option("--n-max", o.n_max, "Iteration budget for local heights")->check(CLI::PositiveNumber);
    sub->add_flag("--json", as_json, "Print the report as JSON");
    return sub;
  };
  CLI::App* reduction = add("reduction", "Bad places and Newton data");
  CLI::App* height = add("height", "Global height with local breakdown and certificates");
  CLI::App* local = add("local-height", "Local height at one place");
  local->add_option("--place", o.place, "Place: 'inf' or a monic irreducible polynomial");
  CLI::App* torsion = add("torsion", "Enumerate the torsion submodule of K");
  CLI::App* kernel = add("kernel", "Roots of phi_b in K");
  kernel->add_option("--b", o.b, "The polynomial b(t)");
  CLI::App* lehmer = add("lehmer", "Lehmer-type lower bounds");
  CLI::App* insep = add("insep-height", "Height in K^{1/p^n}");
  CLI::App* dichotomy = add("dichotomy", "Key dichotomy branch certificate");
  CLI::App* verify = add("verify", "Run the randomized invariant suite");
  verify->add_option("--seed", o.seed, "Random seed")->check(CLI::NonNegativeNumber);
  verify->add_option("--count", o.count, "Cases per property")->check(CLI::NonNegativeNumber);
  verify->add_flag("--inject-bug", inject_bug, "Negate M_v everywhere (harness self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  Output out;
  try {
    const JobSpec job = load(o);
    if (reduction->parsed()) out = cmd_reduction(job);
    else if (height->parsed()) out = cmd_height(job);
    else if (local->parsed()) out = cmd_local_height(job);
    else if (torsion->parsed()) out = cmd_torsion(job);
    else if (kernel->parsed()) out = cmd_kernel(job);
    else if (lehmer->parsed()) out = cmd_lehmer(job);
    else if (insep->parsed()) out = cmd_insep_height(job);
    else if (dichotomy->parsed()) out = cmd_dichotomy(job);
    else if (verify->parsed()) out = cmd_verify(job, inject_bug);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return kInputError;
  } catch (const BudgetExhausted& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  if (as_json) {
    std::cout << out.data.dump(2) << "\n";
  } else {
    std::cout << out.text;
  }
  return out.exit_code;
}
