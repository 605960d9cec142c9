// eisen: measure Eisenstein-completed Hecke algebras and compare with closed-form predictions.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eisen/analysis.hpp"
#include "eisen/predict.hpp"
#include "eisen/reference_cases.hpp"
#include "eisen/report.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  long long p = 0;
  long long level = 0;
  std::string eps;
  std::string eps_order;
  double sturm_factor = 1.0;
  std::string cache_dir;
  std::string kpoly;
  std::string format = "json";
  std::string output;
  std::string generators;
  std::string case_name;
  long long bound = 0;
  bool no_uw = false;
  int verbose = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, sep))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::vector<int> parse_signs(const std::string& text) {
  std::vector<int> out;
  for (auto& t : split(text, ',')) {
    if (t == "+1" || t == "1" || t == "+") out.push_back(1);
    else if (t == "-1" || t == "-") out.push_back(-1);
    else throw UsageError("bad sign '" + t + "' (expected +1 or -1)");
  }
  return out;
}

// Signs are aligned to ascending primes unless --eps-order names the primes explicitly.
eisen::EpsilonSetting make_setting(const RunConfig& c) {
  if (c.p <= 0) throw UsageError("--p is required");
  if (c.level <= 1) throw UsageError("--level must be at least 2");
  std::vector<eisen::i64> primes;
  try {
    primes = eisen::factor_squarefree(c.level);
  } catch (const eisen::Error& e) {
    throw UsageError(e.what());
  }
  std::sort(primes.begin(), primes.end());
  auto signs = parse_signs(c.eps);
  if (signs.size() != primes.size())
    throw UsageError("--eps has " + std::to_string(signs.size()) + " signs but the level has " +
                     std::to_string(primes.size()) + " prime factors");
  eisen::EpsilonSetting s{c.p, {}, {}};
  if (c.eps_order.empty()) {
    s.primes = primes;
    s.eps = signs;
  } else {
    for (auto& t : split(c.eps_order, ',')) {
      long long q = 0;
      try {
        q = std::stoll(t);
      } catch (const std::exception&) {
        throw UsageError("bad prime '" + t + "' in --eps-order");
      }
      s.primes.push_back(q);
    }
    auto sorted = s.primes;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != primes) throw UsageError("--eps-order must list the prime factors of the level");
    s.eps = signs;
  }
  try {
    s.validate();
  } catch (const eisen::Error& e) {
    throw UsageError(e.what());
  }
  return s;
}

std::optional<eisen::KFieldOracle> load_oracle(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return eisen::KFieldOracle::load(path);
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw eisen::Error(eisen::ErrorKind::BadInput, "cannot write " + c.output);
  out << text;
}

int cmd_analyze(const RunConfig& c) {
  auto s = make_setting(c);
  eisen::AnalysisOptions opt;
  opt.engine.sturm_factor = c.sturm_factor;
  opt.compare_uw = !c.no_uw;
  if (!c.cache_dir.empty()) opt.cache_dir = c.cache_dir;
  opt.generators = split(c.generators, ',');
  eisen::Analyzer an(opt);
  auto rec = an.analyze(s);
  if (c.verbose)
    std::cerr << "analysis took " << std::fixed << std::setprecision(2) << rec.seconds << " s, Sturm cap "
              << rec.cap << "\n";
  if (!rec.stable) std::cerr << "warning: doubling the Sturm cap changed the localized space\n";
  if (c.format == "json") emit(c, eisen::to_json(rec).dump(2) + "\n");
  else if (c.format == "tsv") emit(c, eisen::tsv_header() + "\n" + eisen::tsv_row(rec) + "\n");
  else emit(c, eisen::text_report(rec));
  return 0;
}

int cmd_predict(const RunConfig& c) {
  auto s = make_setting(c);
  auto oracle = load_oracle(c.kpoly);
  auto r = eisen::predict_structure(s, oracle ? &*oracle : nullptr);
  if (r.s && !r.delta)
    std::cerr << "warning: delta needs field polynomials (--kpoly); dependent fields are unknown\n";
  emit(c, eisen::to_json(r).dump(2) + "\n");
  return 0;
}

int cmd_good_primes(const RunConfig& c) {
  if (c.bound < 2) throw UsageError("--bound must be at least 2");
  auto s = make_setting(c);
  auto oracle = load_oracle(c.kpoly);
  auto scan = eisen::scan_good_primes(s, c.bound, oracle ? &*oracle : nullptr);
  eisen::Json j;
  j["p"] = s.p;
  j["N"] = s.level();
  j["bound"] = c.bound;
  j["criterion"] = scan.criterion;
  j["good"] = scan.found;
  j["truncated"] = scan.truncated;
  if (c.verbose) {
    eisen::Json rej = eisen::Json::array();
    for (auto& [Q, why] : scan.rejected) rej.push_back({{"primes", Q}, {"diagnostics", why}});
    j["rejected"] = rej;
  }
  j["notes"] = scan.notes;
  emit(c, j.dump(2) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& c) {
  std::vector<const eisen::ReferenceCase*> cases;
  if (c.case_name.empty() || c.case_name == "all") {
    for (auto& rc : eisen::reference_cases()) cases.push_back(&rc);
  } else {
    for (auto& name : split(c.case_name, ',')) {
      auto* rc = eisen::find_reference_case(name);
      if (!rc) throw UsageError("unknown case '" + name + "'");
      cases.push_back(rc);
    }
  }
  auto oracle = c.kpoly.empty() ? eisen::KFieldOracle::bundled() : eisen::KFieldOracle::load(c.kpoly);
  eisen::AnalysisOptions opt;
  opt.engine.sturm_factor = c.sturm_factor;
  if (!c.cache_dir.empty()) opt.cache_dir = c.cache_dir;
  eisen::Analyzer an(opt);
  bool all = true;
  std::ostringstream o;
  for (auto* rc : cases) {
    auto rep = eisen::verify_case(*rc, an, &oracle);
    all &= rep.pass();
    o << std::left << std::setw(10) << rep.name << (rep.pass() ? " PASS" : " FAIL") << "  " << std::fixed
      << std::setprecision(1) << rep.seconds << " s\n";
    for (auto& ch : rep.checks)
      if (c.verbose || !ch.pass)
        o << "    " << (ch.pass ? "ok   " : "FAIL ") << ch.what << ": expected " << ch.expected << ", measured "
          << ch.measured << "\n";
  }
  emit(c, o.str());
  return all ? 0 : 1;
}

// Options are declared unbound and read back from the selected subcommand, since CLI11 resets
// variables shared between subcommands that were not run.
template <class T>
void read_opt(CLI::App* sub, const std::string& name, T& out) {
  auto* o = sub->get_option_no_throw(name);
  if (o && o->count() > 0) out = o->as<T>();
}

RunConfig read_config(CLI::App* sub) {
  RunConfig c;
  read_opt(sub, "--p", c.p);
  read_opt(sub, "--level", c.level);
  read_opt(sub, "--eps", c.eps);
  read_opt(sub, "--eps-order", c.eps_order);
  read_opt(sub, "--sturm-factor", c.sturm_factor);
  read_opt(sub, "--cache-dir", c.cache_dir);
  read_opt(sub, "--kpoly", c.kpoly);
  read_opt(sub, "--format", c.format);
  read_opt(sub, "--output", c.output);
  read_opt(sub, "--generators", c.generators);
  read_opt(sub, "--case", c.case_name);
  read_opt(sub, "--bound", c.bound);
  auto count = [&](const std::string& name) {
    auto* o = sub->get_option_no_throw(name);
    return o ? (int)o->count() : 0;
  };
  c.no_uw = count("--no-uw") > 0;
  c.verbose = count("--verbose");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eisenstein-completed Hecke algebras of squarefree level"};
  app.require_subcommand(1);

  auto setting_flags = [](CLI::App* sub) {
    sub->add_option("--p", "residue characteristic, a prime > 3")->required()->type_name("INT");
    sub->add_option("--level", "squarefree level N")->required()->type_name("INT");
    sub->add_option("--eps", "Atkin-Lehner signs, comma separated, aligned to ascending primes")->required();
    sub->add_option("--eps-order", "primes the signs refer to, comma separated");
  };
  auto common_flags = [](CLI::App* sub) {
    sub->add_option("--output,-o", "write to a file instead of stdout");
    sub->add_flag("-v,--verbose", "more detail");
  };

  auto* analyze = app.add_subcommand("analyze", "measure the local Hecke algebras");
  setting_flags(analyze);
  common_flags(analyze);
  analyze->add_option("--sturm-factor", "multiple of the Sturm bound used for generators")->check(CLI::PositiveNumber);
  analyze->add_option("--cache-dir", "Hecke matrix cache (default: $EISEN_CACHE_DIR)");
  analyze->add_option("--generators", "presentation generators, e.g. T2-3,T11-12");
  analyze->add_option("--format", "json, tsv or text")->check(CLI::IsMember({"json", "tsv", "text"}));
  analyze->add_flag("--no-uw", "skip the U/w comparison");

  auto* predict = app.add_subcommand("predict", "closed-form predictions");
  setting_flags(predict);
  common_flags(predict);
  predict->add_option("--kpoly", "field polynomial file");

  auto* good = app.add_subcommand("good-primes", "scan for good sets of primes");
  setting_flags(good);
  common_flags(good);
  good->add_option("--bound", "largest prime scanned")->required()->type_name("INT");
  good->add_option("--kpoly", "field polynomial file");

  auto* verify = app.add_subcommand("verify-paper", "run the bundled worked examples");
  common_flags(verify);
  verify->add_option("--case", "case name, comma separated list, or all");
  verify->add_option("--kpoly", "field polynomial file (default: bundled)");
  verify->add_option("--sturm-factor", "multiple of the Sturm bound")->check(CLI::PositiveNumber);
  verify->add_option("--cache-dir", "Hecke matrix cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return cmd_analyze(read_config(analyze));
    if (*predict) return cmd_predict(read_config(predict));
    if (*good) return cmd_good_primes(read_config(good));
    if (*verify) return cmd_verify(read_config(verify));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ConversionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const eisen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
