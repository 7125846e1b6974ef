// Command-line front end. Talks to the library through the C interface only.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "haantjes.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int die(const std::string& message) {
  std::fprintf(stderr, "error: %s\n", message.c_str());
  return kExitUsage;
}

bool split_param(const std::string& text, std::string& name, double& value) {
  std::size_t eq = text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  name = text.substr(0, eq);
  std::string rhs = text.substr(eq + 1);
  if (rhs.empty()) return false;
  char* end = nullptr;
  value = std::strtod(rhs.c_str(), &end);
  return end != nullptr && *end == '\0';
}

int run_verify(const std::string& model_arg, const std::string& suite, int samples,
               unsigned long long seed, double tol, const std::string& format,
               const std::vector<std::string>& params) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (const std::string& p : params) {
    std::string name;
    double value = 0.0;
    if (!split_param(p, name, value)) {
      return die("--param expects name=value with a numeric value, got '" + p + "'");
    }
    names.push_back(name);
    values.push_back(value);
  }
  std::vector<const char*> name_ptrs;
  for (const std::string& n : names) name_ptrs.push_back(n.c_str());

  hj_model* model = nullptr;
  hj_status status;
  const std::string builtin_prefix = "builtin:";
  if (model_arg.rfind(builtin_prefix, 0) == 0) {
    status = hj_model_open_builtin(model_arg.substr(builtin_prefix.size()).c_str(),
                                   name_ptrs.empty() ? nullptr : name_ptrs.data(),
                                   values.empty() ? nullptr : values.data(), name_ptrs.size(),
                                   &model);
  } else {
    status = hj_model_open_file(model_arg.c_str(), name_ptrs.empty() ? nullptr : name_ptrs.data(),
                                values.empty() ? nullptr : values.data(), name_ptrs.size(),
                                &model);
  }
  if (status != HJ_OK) return die(hj_last_error());

  hj_verify_options options;
  options.suite = suite.c_str();
  options.samples = samples;
  options.seed = seed;
  options.tol = tol;

  hj_report* report = nullptr;
  status = hj_verify(model, &options, &report);
  if (status != HJ_OK) {
    hj_model_free(model);
    return die(hj_last_error());
  }

  char* rendered = nullptr;
  status = hj_report_render(report, format.c_str(), &rendered);
  if (status != HJ_OK) {
    hj_report_free(report);
    hj_model_free(model);
    return die(hj_last_error());
  }
  std::fputs(rendered, stdout);
  hj_string_free(rendered);

  int exit_code = hj_report_passed(report) ? kExitPass : kExitFail;
  hj_report_free(report);
  hj_model_free(model);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and numerically verify Haantjes structures of Hamiltonian systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hj_version()));

  std::string model_arg;
  std::string suite = "all";
  int samples = 100;
  unsigned long long seed = 7;
  double tol = 0.0;
  std::string format = "text";
  std::vector<std::string> params;

  CLI::App* verify = app.add_subcommand("verify", "Run verification suites against a model");
  verify->add_option("model", model_arg, "Model file path, or builtin:<id> (builtin:calogero3, builtin:goldfish)")
      ->required();
  verify->add_option("--suite", suite,
                     "Checks to run: structure, chains, involution, killing, independence, all")
      ->capture_default_str();
  verify->add_option("--samples", samples, "Number of sampled phase-space points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--seed", seed, "Seed for sampling and probe fields")->capture_default_str();
  verify->add_option("--tol", tol, "Override the default tolerance of every asserted check")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--format", format, "Report style: text or machine")
      ->check(CLI::IsMember({"text", "machine"}))
      ->capture_default_str();
  verify->add_option("--param", params, "Bind a model parameter, name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  return run_verify(model_arg, suite, samples, seed, tol, format, params);
}
