#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "soliton/error.hpp"
#include "soliton/verify.hpp"

using namespace soliton;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

bool usage_error(ErrorCode code) {
  return code == ErrorCode::invalid_params || code == ErrorCode::unknown_model ||
         code == ErrorCode::rho_unsupported || code == ErrorCode::dimension_too_low;
}

int report_error(const Error& e) {
  std::cerr << "soliton_forge: " << e.what() << "\n";
  return usage_error(e.code()) ? kUsage : kFail;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::invalid_params, "cannot write " + path);
  os << text;
}

struct BryantArgs {
  int dim = 3;
  std::optional<double> a;
  double rho = 0.0;
  double rmax = 1000.0;
  double tol = 1e-10;
  std::string out = "profile";
};

int cmd_bryant(const BryantArgs& args) {
  const double a = args.a.value_or(-1.0 / args.dim);
  auto profile = std::make_shared<SolitonProfile>(integrate_profile(args.dim, a, args.rho, args.rmax, args.tol));
  const auto s = profile_chart(profile);
  std::ofstream csv(args.out + ".csv", std::ios::binary);
  if (!csv) throw Error(ErrorCode::invalid_params, "cannot write " + args.out + ".csv");
  write_profile_csv(csv, s);
  write_text(args.out + ".json", dump(profile_summary(*profile)));
  return kPass;
}

struct VerifyArgs {
  VerifySpec spec;
  std::vector<std::string> tolerances;
  std::string out;
};

int cmd_verify(VerifyArgs& args) {
  for (const auto& item : args.tolerances) {
    const auto eq = item.find('=');
    double v = 0.0;
    try {
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument(item);
      std::size_t used = 0;
      v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      std::cerr << "soliton_forge: --tolerance expects identity=value, got " << item << "\n";
      return kUsage;
    }
    args.spec.tolerances[item.substr(0, eq)] = v;
  }
  const auto report = run_verify(args.spec);
  write_text(args.out, dump(report));
  if (!args.out.empty() && args.out != "-") {
    for (const auto& r : report.reports)
      std::cout << (meets_expectation(r) ? "ok    " : "FAIL  ") << r.case_name << ' ' << r.identity << ' '
                << r.max_abs_residual << " (tol " << r.tolerance << (r.expected_failure ? ", expected failure" : "")
                << ")\n";
    std::cout << "overall_pass " << (report.overall_pass ? "true" : "false") << "\n";
  }
  return report.overall_pass ? kPass : kFail;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string plot_dir;
};

int cmd_report(const ReportArgs& args) {
  if (args.inputs.empty()) {
    std::cerr << "soliton_forge: report needs at least one input\n";
    return kUsage;
  }
  std::vector<RunReport> runs;
  for (const auto& path : args.inputs) {
    std::ifstream is(path, std::ios::binary);
    try {
      if (!is) throw std::runtime_error("cannot open");
      runs.push_back(json::parse(is).get<RunReport>());
    } catch (const std::exception& e) {
      std::cerr << "soliton_forge: " << path << ": " << e.what() << "\n";
      return kUsage;
    }
  }
  write_text(args.out, dump(merge_reports(runs)));
  if (!args.plot_dir.empty()) {
    std::filesystem::create_directories(args.plot_dir);
    std::set<std::string> done;
    for (const auto& run : runs) {
      const auto& spec = run.spec;
      if (spec.model != "bryant" && spec.model != "expander") continue;
      const auto s = model(spec.model, spec.params);
      const auto label = model_label(spec, s.dim()) + "_rmax" + std::to_string(static_cast<long>(spec.params.rmax));
      if (!done.insert(label).second) continue;
      std::ofstream os(std::filesystem::path(args.plot_dir) / (label + ".csv"), std::ios::binary);
      write_plot_csv(os, *s.profile());
    }
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of gradient Ricci soliton identities"};
  app.require_subcommand(1);

  BryantArgs bryant;
  auto* b = app.add_subcommand("bryant", "integrate a rotationally symmetric profile");
  b->add_option("--dim", bryant.dim, "dimension n >= 3")->required();
  b->add_option("--a", bryant.a, "f''(0) <= 0 (default -1/n)");
  b->add_option("--rho", bryant.rho, "0 (steady) or -0.5 (expanding)");
  b->add_option("--rmax", bryant.rmax, "outer radius");
  b->add_option("--tol", bryant.tol, "integrator tolerance")->check(CLI::PositiveNumber);
  b->add_option("--out", bryant.out, "output prefix for <out>.csv and <out>.json");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "run a verification suite on a model");
  v->add_option("--model", verify.spec.model, "registry name")->required()->check(CLI::IsMember(model_names()));
  v->add_option("--dim", verify.spec.params.dim, "dimension (0 for the model default)");
  v->add_option("--a", verify.spec.params.a, "center value f''(0) for bryant / expander");
  v->add_option("--linear", verify.spec.params.linear, "line-cigar linear coefficient");
  v->add_option("--rmax", verify.spec.params.rmax, "profile outer radius")->check(CLI::PositiveNumber);
  v->add_option("--tol", verify.spec.params.tol, "profile integrator tolerance")->check(CLI::PositiveNumber);
  v->add_option("--suite", verify.spec.suite, "suite name")->check(CLI::IsMember(suite_names()));
  v->add_option("--seed", verify.spec.seed, "sample grid seed");
  v->add_option("--tolerance", verify.tolerances, "identity=value override")->take_all();
  v->add_option("--out", verify.out, "report JSON path (stdout when omitted)");
  v->add_flag("--timings", verify.spec.timings, "record wall-clock time per suite");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "merge reports into a residual matrix");
  r->add_option("inputs", report.inputs, "RunReport JSON files");
  r->add_option("--out", report.out, "merged JSON path (stdout when omitted)");
  r->add_option("--plot-dir", report.plot_dir, "directory for per-profile plot CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*b) return cmd_bryant(bryant);
    if (*v) return cmd_verify(verify);
    return cmd_report(report);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "soliton_forge: " << e.what() << "\n";
    return kFail;
  }
}
