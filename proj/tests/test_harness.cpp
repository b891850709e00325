#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "ksv/error.hpp"
#include "ksv/harness.hpp"

using namespace ksv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ksv_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

SuiteConfig small(std::vector<std::string> suites, int instances) {
  SuiteConfig c;
  c.seed = 17;
  c.suites = std::move(suites);
  c.caps.instances_per_suite = instances;
  return c;
}

std::string without_time(const Report& r) {
  std::ostringstream out;
  for (const auto& x : r.records)
    out << x.suite << ' ' << x.instance_seed << ' ' << x.check_name << ' ' << x.residual << ' ' << x.pass << '\n';
  return out.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("generation is deterministic") {
  const SuiteConfig c = small({"ksgns", "equivariant"}, 3);
  const fs::path a = scratch("gen_a"), b = scratch("gen_b");
  generate(c, a);
  generate(c, b);
  int files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    ++files;
    CHECK(slurp(e.path()) == slurp(b / fs::relative(e.path(), a)));
  }
  CHECK(files == 1 + 2 * 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("ksgns instances certify") {
  const SuiteConfig c = small({"ksgns"}, 10);
  const Report r = run(c);
  std::set<std::uint64_t> seeds;
  int cp_pass = 0;
  for (const auto& x : r.records) {
    seeds.insert(x.instance_seed);
    if (x.check_name == "complete_positivity" && x.pass) ++cp_pass;
  }
  CHECK(seeds.size() == 10);
  CHECK(cp_pass == 10);
  CHECK(r.all_pass());
}

TEST_CASE("group order cap 1 gives plain KSGNS inputs") {
  SizeCaps caps;
  caps.max_group_order = 1;
  const io::json inst = generate_instance("equivariant", 5, caps);
  CHECK(inst.at("payload").at("c").at("group").at("table").size() == 1);
  for (const auto& rec : run_instance(inst)) CHECK(rec.pass);
}

TEST_CASE("runs by seed and from files agree") {
  const SuiteConfig c = small({"ksgns", "lift", "uniqueness"}, 2);
  const fs::path dir = scratch("agree");
  generate(c, dir);
  const Report a = run(c), b = run_directory(c, dir);
  CHECK(without_time(a) == without_time(b));
  CHECK(without_time(a) == without_time(run(c)));
  fs::remove_all(dir);
}

TEST_CASE("empty suite list") {
  const Report r = run(small({}, 3));
  CHECK(r.total() == 0);
  CHECK(r.all_pass());
  const io::json j = io::json::parse(report_emit(r, Format::Json));
  CHECK(j.at("records").empty());
  CHECK(j.at("summary").at("total") == 0);
}

TEST_CASE("report formats") {
  Report r;
  r.records.push_back(make_record("ksgns", 1, "reconstruction", "KSGNS Construction", 1e-12, 1e-8));
  r.records.push_back(make_record("ksgns", 1, "hermiticity", "KSGNS Construction", 0.25, 1e-8));
  r.records.push_back(make_record("ksgns", 2, "error:NotCP", "KSGNS Construction",
                                  std::numeric_limits<double>::infinity(), 0));
  CHECK_FALSE(r.records[1].pass);
  CHECK_FALSE(make_record("s", 0, "c", "a", std::numeric_limits<double>::quiet_NaN(), 1.0).pass);
  const std::string text = report_emit(r, Format::Text);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("hermiticity") != std::string::npos);
  CHECK(text.find("2.500e-01") != std::string::npos);

  const std::string j1 = report_emit(r, Format::Json);
  const Report back = report_parse(j1);
  CHECK(back.total() == 3);
  CHECK(report_emit(back, Format::Json) == j1);
  CHECK_THROWS_AS(report_parse("{"), Error);
}

TEST_CASE("fault injection is flagged with the theorem name") {
  for (const auto& suite : all_suites()) {
    SizeCaps caps;
    const io::json inst = generate_instance(suite, derive_seed(3, suite, 0), caps);
    for (const auto& rec : run_instance(inst)) CHECK_MESSAGE(rec.pass, suite << " " << rec.check_name);
    const io::json bad = inject_fault(inst);
    CHECK(bad.at("faulted") == true);
    bool flagged = false;
    for (const auto& rec : run_instance(bad)) {
      if (rec.pass) continue;
      flagged = true;
      CHECK_FALSE(rec.paper_anchor.empty());
    }
    CHECK_MESSAGE(flagged, suite);
  }
}

TEST_CASE("broken instances fail without aborting the run") {
  const SuiteConfig c = small({"ksgns"}, 3);
  const fs::path dir = scratch("broken");
  generate(c, dir);
  {
    std::ofstream f(dir / "ksgns" / "1.json");
    f << "{ not json";
  }
  const Report r = run_directory(c, dir);
  int errors = 0, passing = 0;
  std::set<std::string> instances;
  for (const auto& x : r.records) {
    if (x.check_name.rfind("error:", 0) == 0) ++errors;
    else if (x.pass) ++passing;
  }
  CHECK(errors == 1);
  CHECK(passing > 0);
  CHECK_FALSE(r.all_pass());

  io::json inst = generate_instance("ksgns", 1, SizeCaps{});
  inst["payload"]["phi"]["images"] = io::json::array();
  const auto recs = run_instance(inst);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].check_name.rfind("error:", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("configuration") {
  SuiteConfig c = small({"ksgns"}, 2);
  const SuiteConfig back = config_from_json(config_to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.suites == c.suites);
  CHECK(back.caps.instances_per_suite == 2);

  c.suites = {"nope"};
  CHECK_THROWS_AS(validate(c), Error);
  c = small({"ksgns"}, 0);
  CHECK_THROWS_AS(validate(c), Error);
  c = small({"ksgns"}, 1);
  c.caps.max_module_dim = 40;
  try {
    validate(c);
    FAIL("expected InvalidConfig");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::InvalidConfig);
  }
  c = small({"ksgns"}, 1);
  c.jobs = 0;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK_THROWS_AS(run_directory(small({"ksgns"}, 1), "/nonexistent/ksv"), Error);
}

TEST_CASE("instance seeds are counter-derived") {
  const SuiteConfig c = small({"ksgns", "lift"}, 4);
  const auto s1 = instance_seeds(c, "ksgns");
  SuiteConfig reordered = c;
  reordered.suites = {"lift", "ksgns"};
  CHECK(instance_seeds(reordered, "ksgns") == s1);
  CHECK(s1.size() == 4);
  CHECK(std::set<std::uint64_t>(s1.begin(), s1.end()).size() == 4);
}

}
