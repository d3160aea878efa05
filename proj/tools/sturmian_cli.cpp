#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include <sturmian/cli.hpp>

using namespace sturmian;
using cli::Json;

namespace {

// options that land in "inputs"; values starting with [ or { are read as JSON
struct Inputs {
  std::map<std::string, std::string> values;

  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option(flag, values[key], help);
  }

  Json to_json() const {
    Json in = Json::object();
    for (const auto& [k, v] : values) {
      if (v.empty()) continue;
      if (v.front() == '[' || v.front() == '{') in[k] = cli::parse_manifest(v);
      else in[k] = v;
    }
    return in;
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ValidationError, "cannot write '" + path + "'");
  out << text;
}

void print_summary(const Json& report) {
  std::cout << report["command"].get<std::string>() << "\n";
  for (const auto& [k, v] : report["result"].items()) {
    std::cout << "  " << k << ": ";
    if (v.is_object() && v.contains("mid")) std::cout << v["mid"].get<std::string>() << " +/- " << v["rad"].get<std::string>();
    else if (v.is_object() && v.contains("re"))
      std::cout << v["re"]["mid"].get<std::string>() << " + " << v["im"]["mid"].get<std::string>() << "i +/- "
                << v["re"]["rad"].get<std::string>();
    else if (v.is_array()) std::cout << "[" << v.size() << " items]";
    else if (v.is_string()) std::cout << (v.get<std::string>().size() > 72 ? v.get<std::string>().substr(0, 72) + "..." : v.get<std::string>());
    else if (v.is_object()) std::cout << "{...}";
    else std::cout << v.dump();
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sturmian words, Sturmian numbers and contracted rotations"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  long prec = 256;
  bool as_json = false;
  std::string manifest, out_json, out_csv, out_meta;
  app.add_option("--prec", prec, "working precision in bits");
  app.add_flag("--json", as_json, "print the JSON report on stdout");
  app.add_option("--manifest", manifest, "run a JSON experiment manifest");
  app.add_option("--out", out_json, "write the JSON report here");
  app.add_option("--csv", out_csv, "write CSV plot data here");
  app.add_option("--meta", out_meta, "write run metadata (timing) here");

  std::map<CLI::App*, std::pair<std::string, Inputs>> subs;
  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& command, const std::string& help) {
    CLI::App* s = parent->add_subcommand(name, help);
    subs[s].first = command;
    return s;
  };
  auto opt = [&](CLI::App* s, const std::string& flag, const std::string& key, const std::string& help) {
    subs[s].second.add(s, flag, key, help);
  };

  CLI::App* cf = sub(&app, "cf", "cf", "continued fraction of theta");
  opt(cf, "--theta", "theta", "literal in (0,1)");
  opt(cf, "-n", "n", "number of partial quotients");
  opt(cf, "--denominators", "denominators", "count of positive-side denominators");

  CLI::App* code = sub(&app, "code", "code", "theta-coding or the Fibonacci word");
  opt(code, "--theta", "theta", "slope");
  opt(code, "--x", "x", "intercept");
  opt(code, "--origin", "origin", "index origin (0 or 1)");
  opt(code, "-n", "n", "length");
  opt(code, "--word", "word", "'fibonacci' instead of a coding");
  opt(code, "--complexity-max", "complexity_max", "count factors up to this length");

  CLI::App* st = sub(&app, "stutter", "stutter", "stuttering witness");
  opt(st, "--digits", "digits", "'fibonacci' or JSON {specs, coefficients} / {word}");
  opt(st, "--w", "w", "repetition weight");
  opt(st, "--n-max", "n_max", "last record index");
  opt(st, "--prefix", "prefix", "prefix length");
  opt(st, "--shifts", "shifts", "JSON list of shifts (raw mode)");
  opt(st, "--d", "d", "pair budget (raw mode)");

  CLI::App* ev = sub(&app, "eval", "eval", "Sturmian number sum u_n beta^-n");
  opt(ev, "--digits", "digits", "'fibonacci' or JSON digit source");
  opt(ev, "--beta", "beta", "base literal");

  CLI::App* ki = sub(&app, "keyineq", "keyineq", "inequality check on stutter records");
  opt(ki, "--digits", "digits", "'fibonacci' or JSON digit source");
  opt(ki, "--beta", "beta", "base literal");
  opt(ki, "--stutter-report", "stutter_report", "JSON report from the stutter subcommand");
  opt(ki, "--n-max", "n_max", "records to compute when no report is given");
  opt(ki, "--prefix", "prefix", "prefix length for computed records");
  opt(ki, "--max-prec", "max_prec", "precision ceiling");

  CLI::App* rel = sub(&app, "relation", "relation", "integer relation search");
  opt(rel, "--values", "values", "JSON list of literals or {sturmian: {digits, beta}}");
  opt(rel, "--bound", "bound", "coefficient bound");
  opt(rel, "--over-base", "over_base", "JSON {beta, t}");

  CLI::App* he = sub(&app, "heights", "heights", "Weil height and gap split");
  opt(he, "--alg", "alg", "algebraic literal");
  opt(he, "--poly", "poly", "sparse polynomial c@e,...");
  opt(he, "--beta", "beta", "algebraic literal");
  opt(he, "--d0", "d0", "gap start");
  opt(he, "--d1", "d1", "gap end");

  CLI::App* rotor = app.add_subcommand("rotor", "contracted rotations");
  rotor->require_subcommand(1);
  CLI::App* rn = sub(rotor, "rotnum", "rotor rotnum", "rotation number enclosure");
  opt(rn, "--lambda", "lambda", "slope");
  opt(rn, "--delta", "delta", "offset");
  opt(rn, "-n", "n", "iterations");
  opt(rn, "--delta-min", "delta_min", "staircase sweep start");
  opt(rn, "--delta-max", "delta_max", "staircase sweep end");
  opt(rn, "--steps", "steps", "staircase sweep steps");
  CLI::App* inv = sub(rotor, "invert", "rotor invert", "offset for a rotation number");
  opt(inv, "--lambda", "lambda", "slope");
  opt(inv, "--theta", "theta", "irrational rotation number");
  opt(inv, "--tol", "tol", "bracket width");
  opt(inv, "--max-iter", "max_iter", "orbit length ceiling");
  CLI::App* at = sub(rotor, "attractor", "rotor attractor", "orbit of 0 after burn-in");
  opt(at, "--lambda", "lambda", "slope");
  opt(at, "--theta", "theta", "rotation number");
  opt(at, "--delta", "delta", "offset instead of theta");
  opt(at, "--tol", "tol", "offset width");
  opt(at, "--burn-in", "burn_in", "discarded iterations");
  opt(at, "-n", "n", "points");
  CLI::App* de = sub(rotor, "decompose", "rotor decompose", "y = z + xi_0 - xi_{-x}");
  opt(de, "--lambda", "lambda", "slope");
  opt(de, "--theta", "theta", "rotation number");
  opt(de, "--tol", "tol", "offset width");
  opt(de, "--burn-in", "burn_in", "first orbit index");
  opt(de, "--count", "count", "number of points");
  opt(de, "--symbols", "symbols", "itinerary length");
  opt(de, "--points", "points", "JSON list of rational points instead");

  CLI::App* ex = sub(&app, "export", "export", "CSV plot data from a report");
  opt(ex, "--report", "report", "JSON report path");
  opt(ex, "--kind", "kind", "staircase | attractor | stutter_trend");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  try {
    Json request;
    if (!manifest.empty()) {
      std::ifstream in(manifest);
      if (!in) fail(ErrorKind::ValidationError, "cannot read manifest '" + manifest + "'");
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      request = cli::parse_manifest(text);
      if (request.is_object() && request.contains("outputs")) {
        const Json& o = request["outputs"];
        if (out_json.empty() && o.contains("json")) out_json = o["json"].get<std::string>();
        if (out_csv.empty() && o.contains("csv")) out_csv = o["csv"].get<std::string>();
        if (out_meta.empty() && o.contains("meta")) out_meta = o["meta"].get<std::string>();
      }
    } else {
      CLI::App* chosen = nullptr;
      for (auto& [s, v] : subs)
        if (s->parsed()) chosen = s;
      if (!chosen) {
        std::cout << app.help();
        return 2;
      }
      request["command"] = subs[chosen].first;
      request["inputs"] = subs[chosen].second.to_json();
      request["precision"] = prec;
    }
    cli::Outcome o = cli::run(request);
    std::string text = cli::dump(o.report);
    if (!out_json.empty()) write_file(out_json, text);
    if (!out_csv.empty() && o.csv) write_file(out_csv, *o.csv);
    if (!out_meta.empty()) {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      write_file(out_meta, cli::dump(Json{{"elapsed_ms", ms}}));
    }
    if (as_json) std::cout << text;
    else if (o.report["command"] == "export" && out_csv.empty()) std::cout << *o.csv;
    else print_summary(o.report);
    return 0;
  } catch (const Error& e) {
    std::cerr << cli::error_json(e.kind(), e.what()).dump() << "\n";
    return cli::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << Json{{"schema_version", cli::SCHEMA_VERSION}, {"error", "Internal"}, {"exit_code", 1}, {"message", e.what()}}.dump()
              << "\n";
    return 1;
  }
}
