#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ksv/generators.hpp"
#include "ksv/serialize.hpp"

namespace ksv {

const std::vector<std::string>& all_suites();

struct SuiteConfig {
  std::uint64_t seed = 1;
  Tolerance tolerance;
  SizeCaps caps;
  std::vector<std::string> suites = all_suites();
  int jobs = 1;
  bool inject_faults = false;  // corrupt every generated instance by 0.1
};

/// Throws InvalidConfig for unknown suites, non-positive caps or jobs.
void validate(const SuiteConfig& config);

struct CheckRecord {
  std::string suite;
  std::uint64_t instance_seed = 0;
  std::string check_name;
  std::string paper_anchor;
  double residual = 0;
  double threshold = 0;
  bool pass = false;
  double wall_time = 0;  // seconds for the whole instance
};

/// pass is residual ≤ threshold; NaN never passes.
CheckRecord make_record(std::string suite, std::uint64_t seed, std::string check, std::string anchor,
                        double residual, double threshold);

struct Report {
  std::vector<CheckRecord> records;

  std::size_t total() const { return records.size(); }
  std::size_t passed() const;
  double max_residual() const;  // over finite residuals
  bool all_pass() const { return passed() == total(); }
};

/// Instance document for one suite: {"suite", "seed", "faulted", "modules", "payload"}.
io::json generate_instance(const std::string& suite, std::uint64_t seed, const SizeCaps& caps,
                           const Tolerance& tol = {});
/// Same instance with one component perturbed by 0.1 so that the suite's theorem fails.
io::json inject_fault(const io::json& instance, const Tolerance& tol = {});
/// Runs every check of the instance's suite. Exceptions become failing records.
std::vector<CheckRecord> run_instance(const io::json& instance, const Tolerance& tol = {});

/// Instance seeds for a suite, derived by counter from the master seed.
std::vector<std::uint64_t> instance_seeds(const SuiteConfig& config, const std::string& suite);

/// Writes DIR/<suite>/<k>.json and DIR/config.json.
void generate(const SuiteConfig& config, const std::filesystem::path& out);
Report run(const SuiteConfig& config);
/// Runs the instance files below dir (restricted to config.suites).
Report run_directory(const SuiteConfig& config, const std::filesystem::path& dir);

io::json config_to_json(const SuiteConfig& c);
SuiteConfig config_from_json(const io::json& j);

enum class Format { Json, Text };
std::string report_emit(const Report& r, Format f);
Report report_parse(const std::string& json_text);

}  // namespace ksv
