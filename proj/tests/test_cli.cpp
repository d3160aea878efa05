#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <sturmian/cli.hpp>

using namespace sturmian;
using cli::Json;
namespace fs = std::filesystem;

namespace {

const std::string tool = STURMIAN_CLI_PATH;
const fs::path source = STURMIAN_SOURCE_DIR;

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("sturmian_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args) {
  fs::path err = scratch() / "stderr.txt";
  std::string cmd = "'" + tool + "' " + args + " 2>'" + err.string() + "'";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string manifest(const std::string& name) { return "'" + (source / "tests" / "manifests" / name).string() + "'"; }

}  // namespace

TEST_CASE("stutter manifest matches the golden report", "[cli]") {
  fs::path out = scratch() / "stutter.json";
  Run r = run("--manifest " + manifest("stutter_fibonacci.json") + " --out '" + out.string() + "'");
  REQUIRE(r.code == 0);
  CHECK(slurp(out) == slurp(source / "tests" / "golden" / "stutter_fibonacci.json"));

  Json j = Json::parse(slurp(out));
  CHECK(j["schema_version"] == cli::SCHEMA_VERSION);
  const Json& recs = j["result"]["records"];
  REQUIRE(recs.size() == 5);
  const std::vector<std::string> rs{"1", "3", "8", "21", "55"};
  const std::vector<std::size_t> ss{4, 15, 44, 120, 319};
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(recs[n]["n"] == n);
    CHECK(recs[n]["r"] == rs[n]);
    CHECK(recs[n]["s"] == ss[n]);
    CHECK(recs[n]["s1"] == true);
    CHECK(recs[n]["s2"] == true);
    CHECK(recs[n]["s4"] == true);
    CHECK(recs[n]["classification"]["unexplained"] == 0);
  }
  // the library call gives the same report
  cli::Outcome o = cli::run(Json::parse(slurp(source / "tests" / "manifests" / "stutter_fibonacci.json")));
  CHECK(cli::dump(o.report) == slurp(out));
}

TEST_CASE("every manifest is byte-identical across runs", "[cli]") {
  for (const auto& e : fs::directory_iterator(source / "tests" / "manifests")) {
    if (e.path().extension() != ".json") continue;
    fs::path a = scratch() / "a.json", b = scratch() / "b.json";
    Run r1 = run("--manifest '" + e.path().string() + "' --out '" + a.string() + "'");
    Run r2 = run("--manifest '" + e.path().string() + "' --out '" + b.string() + "'");
    INFO(e.path().filename().string());
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
  }
}

TEST_CASE("errors map to documented exit codes", "[cli]") {
  Run bad = run("cf --theta 'quad:(3-sqrt(5'");
  CHECK(bad.code == 3);
  Json e = Json::parse(bad.err);
  CHECK(e["error"] == "ParseError");
  CHECK(e["exit_code"] == 3);

  fs::path empty = scratch() / "empty.json";
  std::ofstream(empty) << "{}";
  Run r = run("--manifest '" + empty.string() + "'");
  CHECK(r.code == 4);
  CHECK(Json::parse(r.err)["error"] == "ValidationError");

  CHECK(run("--no-such-flag").code == 2);
  Run rat = run("rotor invert --lambda 1/2 --theta 2/5 --tol 1/1000");
  CHECK(rat.code == cli::exit_code(ErrorKind::PreconditionViolated));

  std::set<int> codes;
  for (int k = 0; k <= static_cast<int>(ErrorKind::UnknownKind); ++k) codes.insert(cli::exit_code(static_cast<ErrorKind>(k)));
  CHECK(codes.size() == static_cast<std::size_t>(ErrorKind::UnknownKind) + 1);
  CHECK(codes.count(0) == 0);
  CHECK(codes.count(1) == 0);
  CHECK(codes.count(2) == 0);
}

TEST_CASE("stutter report feeds keyineq", "[cli]") {
  fs::path st = scratch() / "st.json";
  REQUIRE(run("stutter --digits fibonacci --n-max 4 --prefix 20000 --out '" + st.string() + "'").code == 0);
  Run k = run("keyineq --beta 2 --stutter-report '" + st.string() + "' --json");
  REQUIRE(k.code == 0);
  Json j = Json::parse(k.out);
  const Json& recs = j["result"]["records"];
  REQUIRE(recs.size() == 5);
  std::string u = fibonacci_word(100).to_string();
  for (const auto& x : recs) {
    std::size_t rr = std::stoul(x["r"].get<std::string>());
    CHECK(x["holds_alt"] == true);
    CHECK(x["holds"] == (u[rr] == '0'));
  }
  Run bad = run("keyineq --beta 2 --stutter-report '" + (source / "tests" / "manifests" / "cf_golden.json").string() + "'");
  CHECK(bad.code == 4);
}

TEST_CASE("export projects reports to CSV", "[cli]") {
  fs::path st = scratch() / "st.json";
  REQUIRE(run("--manifest " + manifest("stutter_fibonacci.json") + " --out '" + st.string() + "'").code == 0);
  Run c = run("export --report '" + st.string() + "' --kind stutter_trend");
  REQUIRE(c.code == 0);
  Json rep = Json::parse(slurp(st));
  std::istringstream lines(c.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,r_n,s_n,spread,log_r_n");
  for (const auto& x : rep["result"]["records"]) {
    REQUIRE(std::getline(lines, line));
    std::string spread = std::to_string(x["pairs"].back().get<long>() - x["pairs"].front().get<long>());
    char expect[256];
    std::snprintf(expect, sizeof expect, "%ld,%s,%ld,%s,%.12f", x["n"].get<long>(), x["r"].get<std::string>().c_str(),
                  x["s"].get<long>(), spread.c_str(), std::log(std::stod(x["r"].get<std::string>())));
    CHECK(line == expect);
  }

  fs::path at = scratch() / "at.json", csv = scratch() / "at.csv";
  REQUIRE(run("rotor attractor --lambda 1/2 --theta 'quad:(3-sqrt(5))/2' --burn-in 20 -n 50 --prec 128 --out '" +
              at.string() + "' --csv '" + csv.string() + "'")
              .code == 0);
  std::string text = slurp(csv);
  CHECK(text.rfind("index,point\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 51);
  Run again = run("export --report '" + at.string() + "' --kind attractor");
  CHECK(again.out == text);
  CHECK(Json::parse(slurp(at))["result"]["itinerary_is_intercept_coding"] == true);

  Run wrong = run("export --report '" + at.string() + "' --kind stutter_trend");
  CHECK(wrong.code == 4);
  Run unknown = run("export --report '" + at.string() + "' --kind histogram");
  CHECK(unknown.code == 5);
  CHECK(Json::parse(unknown.err)["error"] == "UnknownKind");
}

TEST_CASE("staircase sweep is monotone", "[cli]") {
  cli::Outcome o = cli::run(Json::parse(slurp(source / "tests" / "manifests" / "rotor_staircase.json")));
  REQUIRE(o.csv);
  const Json& pts = o.report["result"]["points"];
  REQUIRE(pts.size() == 25);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double a = std::stod(pts[i - 1]["rotation_number"]["mid"].get<std::string>());
    double b = std::stod(pts[i]["rotation_number"]["mid"].get<std::string>());
    CHECK(b >= a - 2.0 / 2000);
  }
}

TEST_CASE("subcommands produce reports", "[cli]") {
  Run cf = run("cf --theta 'quad:(3-sqrt(5))/2' -n 20 --denominators 4 --json");
  REQUIRE(cf.code == 0);
  Json j = Json::parse(cf.out)["result"];
  CHECK(j["quotients"][0] == "2");
  for (std::size_t i = 1; i < 20; ++i) CHECK(j["quotients"][i] == "1");
  CHECK(j["positive_side_denominators"] == Json::array({"1", "3", "8", "21"}));

  Run code = run("code --theta 'quad:(3-sqrt(5))/2' --x 'quad:(3-sqrt(5))/2' -n 200 --json");
  REQUIRE(code.code == 0);
  CHECK(Json::parse(code.out)["result"]["word"] == fibonacci_word(200).to_string());

  Run h = run("heights --alg 3/2 --json");
  REQUIRE(h.code == 0);
  CHECK(Json::parse(h.out)["result"]["weil_height"]["mid"].get<std::string>().rfind("3", 0) == 0);

  Run rel = run("--prec 200 relation --values '[\"1\", \"quad:(0+1*sqrt(2))/1\", \"quad:(3+2*sqrt(2))/1\"]' --json");
  REQUIRE(rel.code == 0);
  CHECK(Json::parse(rel.out)["result"]["coefficients"] == Json::array({"3", "2", "-1"}));

  Run rn = run("rotor rotnum --lambda 1/2 --delta 4/5 -n 1000 --json");
  REQUIRE(rn.code == 0);
  double mid = std::stod(Json::parse(rn.out)["result"]["rotation_number"]["mid"].get<std::string>());
  CHECK(std::abs(mid - 0.5) <= 1e-3);

  Run text = run("eval --digits fibonacci --beta 2 --prec 64");
  REQUIRE(text.code == 0);
  CHECK(text.out.find("0.580393114277417") != std::string::npos);
}
