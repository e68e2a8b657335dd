#include "sumset/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "sumset/bounds_lab.hpp"
#include "sumset/construct_int.hpp"
#include "sumset/construct_zpn.hpp"
#include "sumset/errors.hpp"
#include "sumset/report_io.hpp"

namespace sumset {

namespace {

struct Options {
  std::string deltas;
  std::string pattern;
  std::string file;
  std::string set;
  std::string out;
  std::string format = "json";
  std::int64_t p = 0;
  std::int64_t constant = 60;
  std::optional<int> horizon;
  std::optional<std::int64_t> ambient;
  std::optional<std::int64_t> budget;
  int window = 0;
  int k = 0;
  int range = 0;
  int n_max = 0;
  int k_max = 0;
  int threads = 1;
};

std::string seq(const std::vector<std::int64_t>& xs) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  os << ')';
  return os.str();
}

Deltas parse_deltas(const std::string& text) { return Deltas{parse_int_list(text)}; }

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int construct_int() {
    const Deltas d = parse_deltas(o_.deltas);
    const auto cert = construct_and_verify(d, o_.constant);
    emit(dump(to_json(cert)));
    err_ << "verified: measured " << seq(cert.measured) << " = target\n";
    return kExitOk;
  }

  int construct_zpn() {
    if (o_.p < 2 || o_.p > 65521 || !is_prime(o_.p))
      throw DomainError("p = " + std::to_string(o_.p) + " is not a supported prime");
    const Deltas d = parse_deltas(o_.deltas);
    const auto cert = build_and_verify_zp(static_cast<std::uint32_t>(o_.p), d);
    emit(dump(to_json(cert)));
    err_ << "verified with M = " << cert.m_used << " (" << cert.meta["separation"].get<std::string>()
         << " separation, " << cert.meta["matrix"].get<std::string>() << " matrix)\n";
    return kExitOk;
  }

  int compact() {
    const auto cert = compact_sign_sets(SignPattern::parse(o_.pattern));
    emit(dump(to_json(cert)));
    err_ << "signs match " << o_.pattern << "; measured " << seq(cert.measured)
         << (cert.verified ? "" : " (not exactly +-1)") << '\n';
    return kExitOk;
  }

  int verify() {
    const auto cert = read_json_file(o_.file);
    VerifyResult r;
    try {
      r = verify_certificate(cert, o_.horizon);
    } catch (const DomainError& e) {
      err_ << "verification failed: " << e.what() << '\n';
      return kExitVerification;
    } catch (const nlohmann::json::exception& e) {
      err_ << "verification failed: malformed certificate: " << e.what() << '\n';
      return kExitVerification;
    }
    nlohmann::ordered_json j;
    j["kind"] = r.kind;
    j["H"] = r.horizon;
    j["target"] = r.target;
    j["measured"] = r.measured;
    j["verified"] = r.ok;
    emit(dump(j));
    if (!r.ok) {
      err_ << "verification failed: target " << seq(r.target) << " but measured " << seq(r.measured) << '\n';
      return kExitVerification;
    }
    return kExitOk;
  }

  int search_nu() {
    require(o_.horizon.has_value(), "--H is required");
    const auto r = sumset::search_nu(*o_.horizon, o_.n_max, search_options());
    emit_report(r);
    if (r.tail && !r.tail->absent) {
      err_ << "forbidden tail pattern found\n";
      return kExitVerification;
    }
    return kExitOk;
  }

  int search_kappa() {
    require(o_.horizon.has_value(), "--H is required");
    const auto r = sumset::search_kappa(*o_.horizon, o_.k_max, o_.n_max, search_options());
    emit_report(r);
    return kExitOk;
  }

  int khovanskii() {
    require(o_.format == "json", "khovanskii only writes json");
    const IntSet a(parse_int_list(o_.set));
    const auto c = khovanskii_fit(a, o_.window, o_.ambient);
    emit(dump(to_json(c)));
    if (!c.fits) {
      err_ << "no affine fit from h = " << c.h_start << " through " << c.window_end << '\n';
      return kExitVerification;
    }
    return kExitOk;
  }

  int census() {
    require(o_.horizon.has_value(), "--H is required");
    const auto r = sumset::census(o_.k, *o_.horizon, o_.range, budget());
    emit(o_.format == "csv" ? to_csv(r) : dump(to_json(r)));
    return kExitOk;
  }

 private:
  static void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
  }

  std::int64_t budget() const {
    if (o_.budget) {
      require(*o_.budget > 0, "--budget must be positive");
      return *o_.budget;
    }
    return default_budget();
  }

  SearchOptions search_options() const {
    require(o_.threads >= 1 && o_.threads <= 256, "--threads must be in [1, 256]");
    return {o_.threads, budget()};
  }

  void emit_report(const SearchReport& r) {
    emit(o_.format == "csv" ? to_csv(r) : dump(to_json(r)));
    if (!r.exhaustive) err_ << "warning: budget exhausted, report is partial\n";
  }

  void emit(const std::string& text) {
    if (o_.out.empty() || o_.out == "-")
      out_ << text;
    else
      write_text(o_.out, text);
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sumset constructions, certificates and searches"};
  app.name("sumset");
  app.require_subcommand(1, 1);

  auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_search = [&](CLI::App* c) {
    c->add_option("--threads", o.threads, "worker threads");
    c->add_option("--budget", o.budget, "growth-sequence evaluation budget (default SUMSET_BUDGET or 1e7)");
    add_format(c);
    add_out(c);
  };

  auto* construct = app.add_subcommand("construct", "build and verify a pair A, B with given deltas");
  construct->require_subcommand(1, 1);
  auto* c_int = construct->add_subcommand("int", "sets of integers");
  c_int->add_option("--deltas", o.deltas, "comma-separated m_1..m_H")->required();
  c_int->add_option("--constant", o.constant, "range constant c in N = c H^2 sum|m|");
  add_out(c_int);
  auto* c_zpn = construct->add_subcommand("zpn", "subsets of (Z/pZ)^N");
  c_zpn->add_option("--p", o.p, "prime modulus")->required();
  c_zpn->add_option("--deltas", o.deltas, "comma-separated m_1..m_H")->required();
  add_out(c_zpn);

  auto* compact = app.add_subcommand("compact", "small sets with a prescribed sign pattern");
  compact->add_option("--pattern", o.pattern, "string over {+,-}")->required();
  add_out(compact);

  auto* verify = app.add_subcommand("verify", "recompute the deltas of a stored certificate");
  verify->add_option("--file", o.file, "certificate JSON")->required();
  verify->add_option("--H", o.horizon, "number of folds to check (default: stored H)");
  add_out(verify);

  auto* search = app.add_subcommand("search", "exhaustive sign-pattern searches");
  search->require_subcommand(1, 1);
  auto* s_nu = search->add_subcommand("nu", "patterns realized inside [0, N]");
  s_nu->add_option("--H", o.horizon, "pattern length")->required();
  s_nu->add_option("--Nmax", o.n_max, "largest N")->required();
  add_search(s_nu);
  auto* s_kappa = search->add_subcommand("kappa", "patterns realized by sets of size <= k");
  s_kappa->add_option("--H", o.horizon, "pattern length")->required();
  s_kappa->add_option("--kmax", o.k_max, "largest set size")->required();
  s_kappa->add_option("--Nmax", o.n_max, "diameter cap")->required();
  add_search(s_kappa);

  auto* khov = app.add_subcommand("khovanskii", "affine fit of |hA| from h = N-2");
  khov->add_option("--set", o.set, "comma-separated elements")->required();
  khov->add_option("--window", o.window, "last h checked")->required();
  khov->add_option("--N", o.ambient, "ambient bound, A in [0, N] (default: diameter)");
  add_format(khov);
  add_out(khov);

  auto* cen = app.add_subcommand("census", "distinct growth sequences of k-subsets of [0, R]");
  cen->add_option("--k", o.k, "set size")->required();
  cen->add_option("--H", o.horizon, "number of folds")->required();
  cen->add_option("--R", o.range, "range bound")->required();
  cen->add_option("--budget", o.budget, "enumeration budget");
  add_format(cen);
  add_out(cen);

  std::vector<const char*> argv{"sumset"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Runner run(o, out, err);
  try {
    if (c_int->parsed()) return run.construct_int();
    if (c_zpn->parsed()) return run.construct_zpn();
    if (compact->parsed()) return run.compact();
    if (verify->parsed()) return run.verify();
    if (s_nu->parsed()) return run.search_nu();
    if (s_kappa->parsed()) return run.search_kappa();
    if (khov->parsed()) return run.khovanskii();
    if (cen->parsed()) return run.census();
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const std::overflow_error& e) {
    err << "capacity: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace sumset
