#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ksv/harness.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

void apply_caps(ksv::SizeCaps& caps, const std::string& spec) {
  for (const auto& kv : split(spec, ',')) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ksv::Error(ksv::ErrorKind::InvalidConfig, "caps entry needs key=value: " + kv);
    const std::string key = kv.substr(0, eq);
    int value = 0;
    try {
      value = std::stoi(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw ksv::Error(ksv::ErrorKind::InvalidConfig, "caps value is not an integer: " + kv);
    }
    if (key == "max_block") caps.max_block = value;
    else if (key == "max_blocks") caps.max_blocks = value;
    else if (key == "max_module_dim") caps.max_module_dim = value;
    else if (key == "max_group_order") caps.max_group_order = value;
    else if (key == "instances_per_suite") caps.instances_per_suite = value;
    else throw ksv::Error(ksv::ErrorKind::InvalidConfig, "unknown cap " + key);
  }
}

void seed_from_env(std::uint64_t& seed) {
  const char* env = std::getenv("VERIFY_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ksv::Error(ksv::ErrorKind::InvalidConfig, "VERIFY_SEED is not an integer");
  seed = v;
}

struct Common {
  std::uint64_t seed = 1;
  std::string suites;
  std::string caps;
  int instances = 0;
  int jobs = 1;
  bool faults = false;
  double tol = 1e-8;
  CLI::Option* suites_opt = nullptr;
};

ksv::SuiteConfig make_config(const Common& c) {
  ksv::SuiteConfig cfg;
  cfg.seed = c.seed;
  seed_from_env(cfg.seed);
  if (c.suites_opt && c.suites_opt->count() > 0) cfg.suites = split(c.suites, ',');
  if (!c.caps.empty()) apply_caps(cfg.caps, c.caps);
  if (c.instances > 0) cfg.caps.instances_per_suite = c.instances;
  cfg.jobs = c.jobs;
  cfg.inject_faults = c.faults;
  cfg.tolerance.ctol = c.tol;
  ksv::validate(cfg);
  return cfg;
}

void add_common(CLI::App* app, Common& c) {
  c.suites_opt = app->add_option("--suites", c.suites, "comma-separated subset of suites; \"\" selects none");
  app->add_option("--caps", c.caps, "size caps as key=value,... (max_block, max_blocks, max_module_dim, "
                                    "max_group_order, instances_per_suite)");
  app->add_option("--instances", c.instances, "instances per suite");
  app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--inject-faults", c.faults, "corrupt every instance by 0.1");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual checks for KSGNS dilations, PosCor categories and equivariant correspondences"};
  app.require_subcommand(1);

  Common gen_opts;
  std::string out_dir;
  auto* gen = app.add_subcommand("gen", "write seeded instance files");
  gen->add_option("--seed", gen_opts.seed, "master seed");
  gen->add_option("--out", out_dir, "output directory")->required();
  add_common(gen, gen_opts);

  Common run_opts;
  std::string in_dir, format = "text", report_file;
  auto* run = app.add_subcommand("run", "run the suites and print a report");
  auto* run_seed = run->add_option("--seed", run_opts.seed, "master seed");
  auto* run_in = run->add_option("--in", in_dir, "instance directory written by gen");
  run_seed->excludes(run_in);
  run->add_option("--tol", run_opts.tol, "pass tolerance ctol")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  run->add_option("--report", report_file, "also write the report to this file");
  add_common(run, run_opts);

  int demo_n = 3;
  std::uint64_t demo_seed = 1;
  auto* demo = app.add_subcommand("demo", "worked examples");
  auto* gns = demo->add_subcommand("gns", "GNS of an automorphism-invariant state on M_n");
  gns->add_option("--n", demo_n, "matrix size")->check(CLI::Range(2, 6));
  gns->add_option("--seed", demo_seed, "seed");
  demo->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      const ksv::SuiteConfig cfg = make_config(gen_opts);
      ksv::generate(cfg, out_dir);
      std::cout << "wrote " << cfg.suites.size() << " suites x " << cfg.caps.instances_per_suite << " instances to "
                << out_dir << "\n";
      return 0;
    }
    if (*run) {
      const ksv::SuiteConfig cfg = make_config(run_opts);
      const ksv::Report report = in_dir.empty() ? ksv::run(cfg) : ksv::run_directory(cfg, in_dir);
      const std::string text = ksv::report_emit(report, format == "json" ? ksv::Format::Json : ksv::Format::Text);
      std::cout << text;
      if (!report_file.empty()) {
        std::ofstream f(report_file);
        if (!(f << text)) throw ksv::Error(ksv::ErrorKind::IoError, "cannot write " + report_file);
      }
      return report.all_pass() ? 0 : 1;
    }
    if (*gns) {
      const ksv::GnsDemo d = ksv::gns_demo(demo_n, demo_seed);
      std::cout << "A = M_" << d.n << ", state invariant under an automorphism of order " << d.order << "\n"
                << "GNS space dimension   " << d.dim << "\n"
                << "reconstruction        " << d.reconstruction << "\n"
                << "unitarity of U~       " << d.unitarity << "\n"
                << "covariance            " << d.covariance << "\n"
                << "||U~ - I||            " << d.nontriviality << "\n";
      const double tol = 1e-8;
      const bool ok = d.reconstruction <= tol * 2 && d.unitarity <= tol * 2 && d.covariance <= tol * 2 &&
                      d.nontriviality > 0.1 && d.dim == d.n * d.n;
      std::cout << (ok ? "PASS" : "FAIL") << "\n";
      return ok ? 0 : 1;
    }
  } catch (const ksv::Error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
