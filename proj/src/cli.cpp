#include "varkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "varkit/checker.hpp"
#include "varkit/oracle.hpp"
#include "varkit/parser.hpp"
#include "varkit/report.hpp"

namespace varkit {

namespace {

struct Style {
  bool color = false;
  std::string paint(std::string_view text, const char* code) const {
    if (!color) return std::string(text);
    return std::string("\x1b[") + code + "m" + std::string(text) + "\x1b[0m";
  }
  std::string good(std::string_view t) const { return paint(t, "32"); }
  std::string bad(std::string_view t) const { return paint(t, "31"); }
  std::string warn(std::string_view t) const { return paint(t, "33"); }
};

Style style_from_env() {
  const char* v = std::getenv("VARKIT_COLOR");
  return Style{v != nullptr && std::string_view(v) == "1"};
}

// Reads and parses FILE. Diagnostics go to `err`; returns nullptr when the
// file cannot be used.
std::shared_ptr<const Signature> load(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "varkit: cannot read '" << path << "'\n";
    return nullptr;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  ParseResult r = parse(buf.str());
  for (const auto& d : r.diagnostics) err << path << ":" << d.to_string() << "\n";
  if (r.has_errors()) return nullptr;
  return std::make_shared<const Signature>(std::move(r.signature));
}

std::vector<const TypeConDecl*> user_datatypes(const Signature& sig) {
  std::vector<const TypeConDecl*> out;
  for (const TypeConDecl* d : sig.datatypes())
    if (!d->builtin) out.push_back(d);
  return out;
}

std::string describe_failure(const Failure& f) {
  std::string out = f.code;
  if (!f.variable.empty()) out += " on " + f.variable;
  if (!f.rule.empty()) out += " (" + f.rule + ")";
  if (!f.message.empty()) out += ": " + f.message;
  return out;
}

void print_reports(std::ostream& out, const Style& st, const DatatypeResult& dt) {
  out << dt.name << ": " << (dt.accepted() ? st.good("accepted") : st.bad("rejected")) << "\n";
  for (const auto& r : dt.reports) {
    out << "  " << r.constructor << ": ";
    if (r.accepted) {
      out << st.good("accepted");
      if (r.witness) out << " with " << r.witness->to_string();
    } else {
      out << st.bad("rejected");
      if (r.failure) out << " " << describe_failure(*r.failure);
    }
    out << "\n";
  }
}

std::vector<DatatypeResult> check_all(const std::shared_ptr<const Signature>& sig) {
  Checker checker(sig);
  std::vector<DatatypeResult> results;
  for (const TypeConDecl* d : user_datatypes(*sig)) {
    DatatypeResult r;
    r.name = d->name;
    r.reports = checker.check_datatype(d->name);
    results.push_back(std::move(r));
  }
  return results;
}

struct OracleOptions {
  int depth = 3;
  int slack = 1;
  std::size_t cap = OracleConfig{}.cap;
  bool serial = false;
};

void add_oracle_options(CLI::App* cmd, OracleOptions& o) {
  cmd->add_option("--depth", o.depth, "Depth bound for the quantified types")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  cmd->add_option("--slack", o.slack, "Extra depth allowed for witnesses")
      ->check(CLI::Range(0, 4))
      ->capture_default_str();
  cmd->add_option("--cap", o.cap, "Maximum universe size")->capture_default_str();
  cmd->add_flag("--serial", o.serial, "Use the single-threaded reference loop");
}

int cmd_check(const std::string& file, bool json, std::ostream& out, std::ostream& err) {
  auto sig = load(file, err);
  if (!sig) return kExitError;
  const auto results = check_all(sig);
  const bool ok = std::all_of(results.begin(), results.end(),
                              [](const DatatypeResult& r) { return r.accepted(); });
  if (json) {
    out << report_json(file, results);
  } else {
    const Style st = style_from_env();
    for (const auto& r : results) print_reports(out, st, r);
  }
  return ok ? kExitOk : kExitRejected;
}

// Runs the oracle constructor by constructor. Returns the per-constructor
// violations, indexed like the datatype's constructors.
std::vector<std::optional<Violation>> run_oracle(Oracle& oracle, const TypeConDecl& d,
                                                 bool serial) {
  std::vector<std::optional<Violation>> out;
  for (const auto& k : d.constructors)
    out.push_back(oracle.constructor_req(d.name, k, d.param_variances, !serial));
  return out;
}

int cmd_oracle(const std::string& file, const OracleOptions& o, bool json, std::ostream& out,
               std::ostream& err) {
  auto sig = load(file, err);
  if (!sig) return kExitError;
  try {
    Oracle oracle(sig, OracleConfig{o.depth, o.slack, o.cap});
    auto results = check_all(sig);
    const Style st = style_from_env();
    bool any = false;
    for (auto& r : results) {
      const TypeConDecl& d = sig->at(r.name);
      const auto found = run_oracle(oracle, d, o.serial);
      r.oracle_ran = true;
      for (const auto& v : found)
        if (v && !r.violation) r.violation = v;
      any = any || r.violation.has_value();
      if (json) continue;
      if (r.violation) {
        out << r.name << ": " << st.bad("violation") << "\n";
        for (const auto& v : found)
          if (v) out << "  " << v->to_string() << "\n";
      } else {
        out << r.name << ": " << st.good("no violation") << " up to depth " << o.depth
            << " (witness depth " << oracle.witness_depth() << ")\n";
      }
    }
    if (json) out << report_json(file, results);
    return any ? kExitRejected : kExitOk;
  } catch (const OverflowError& e) {
    err << "varkit: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_diff(const std::string& file, const OracleOptions& o, std::ostream& out,
             std::ostream& err) {
  auto sig = load(file, err);
  if (!sig) return kExitError;
  try {
    Oracle oracle(sig, OracleConfig{o.depth, o.slack, o.cap});
    const auto results = check_all(sig);
    const Style st = style_from_env();
    bool mismatch = false;
    for (const auto& r : results) {
      const TypeConDecl& d = sig->at(r.name);
      const auto found = run_oracle(oracle, d, o.serial);
      out << r.name << ":\n";
      for (std::size_t i = 0; i < r.reports.size(); ++i) {
        const CheckReport& rep = r.reports[i];
        const auto& v = found[i];
        out << "  " << rep.constructor << ": ";
        if (rep.accepted && v) {
          mismatch = true;
          out << st.bad("MISMATCH") << " accepted but " << v->to_string() << "\n";
        } else if (!rep.accepted && !v) {
          out << st.warn("inconclusive") << " rejected, no violation up to depth " << o.depth
              << "\n";
          err << "varkit: warning: " << r.name << "." << rep.constructor
              << " rejected without an oracle violation at depth " << o.depth << "\n";
        } else {
          out << st.good("agree") << (rep.accepted ? " accepted" : " rejected") << "\n";
        }
      }
    }
    return mismatch ? kExitMismatch : kExitOk;
  } catch (const OverflowError& e) {
    err << "varkit: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_maxvar(const std::string& file, const std::string& name, bool json, std::ostream& out,
               std::ostream& err) {
  auto sig = load(file, err);
  if (!sig) return kExitError;
  const TypeConDecl* d = sig->find(name);
  if (!d || !d->is_datatype() || d->builtin) {
    err << "varkit: '" << name << "' is not a datatype declared in " << file << "\n";
    return kExitError;
  }
  const std::size_t n = d->params.size();
  if (n > 6) {
    err << "varkit: maxvar supports at most 6 parameters\n";
    return kExitError;
  }

  std::vector<std::vector<Variance>> accepted;
  std::vector<Variance> combo(n);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= kAllVariances.size();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      combo[i] = kAllVariances[rest % kAllVariances.size()];
      rest /= kAllVariances.size();
    }
    Signature trial = *sig;
    trial.find_mutable(name)->param_variances = combo;
    Checker checker(std::make_shared<const Signature>(std::move(trial)));
    const auto reports = checker.check_datatype(name);
    if (std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.accepted; }))
      accepted.push_back(combo);
  }

  // Pointwise leq-minimal accepted annotations: nothing accepted is strictly
  // more permissive.
  auto pointwise_leq = [](const std::vector<Variance>& a, const std::vector<Variance>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!leq(a[i], b[i])) return false;
    return true;
  };
  std::vector<std::vector<Variance>> best;
  for (const auto& a : accepted) {
    const bool dominated = std::any_of(accepted.begin(), accepted.end(), [&](const auto& b) {
      return b != a && pointwise_leq(b, a);
    });
    if (!dominated) best.push_back(a);
  }

  auto render = [&](const std::vector<Variance>& vs) {
    Context g;
    for (std::size_t i = 0; i < n; ++i) g.set(d->params[i], vs[i]);
    return g.to_string();
  };
  if (json) {
    nlohmann::ordered_json j;
    j["version"] = kReportVersion;
    j["file"] = file;
    j["datatype"] = name;
    j["params"] = d->params;
    auto encode = [&](const std::vector<std::vector<Variance>>& list) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& vs : list) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Variance v : vs) row.push_back(std::string(json_name(v)));
        arr.push_back(std::move(row));
      }
      return arr;
    };
    j["accepted"] = encode(accepted);
    j["most_permissive"] = encode(best);
    out << j.dump(2) << "\n";
  } else {
    out << name << ": " << accepted.size() << " of " << total << " annotations accepted\n";
    out << "  accepted:";
    for (const auto& a : accepted) out << " " << render(a);
    out << "\n  most permissive:";
    for (const auto& a : best) out << " " << render(a);
    out << "\n";
  }
  return accepted.empty() ? kExitRejected : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance annotation checker for datatypes with existential constraints",
               "varkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string file, type_name;
  bool json = false;
  OracleOptions oracle_opts;

  auto* check = app.add_subcommand("check", "Check the variance annotations of every datatype");
  check->add_option("file", file, "Declaration file")->required();
  check->add_flag("--json", json, "Emit a JSON report");

  auto* oracle = app.add_subcommand("oracle", "Search for semantic violations by enumeration");
  oracle->add_option("file", file, "Declaration file")->required();
  add_oracle_options(oracle, oracle_opts);
  oracle->add_flag("--json", json, "Emit a JSON report");

  auto* diff = app.add_subcommand("diff", "Compare checker verdicts with the oracle");
  diff->add_option("file", file, "Declaration file")->required();
  add_oracle_options(diff, oracle_opts);

  auto* tables = app.add_subcommand("tables", "Print the variance operation tables");

  auto* maxvar = app.add_subcommand("maxvar", "List the annotations the checker accepts");
  maxvar->add_option("file", file, "Declaration file")->required();
  maxvar->add_option("type", type_name, "Datatype name")->required();
  maxvar->add_flag("--json", json, "Emit JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*check) return cmd_check(file, json, out, err);
    if (*oracle) return cmd_oracle(file, oracle_opts, json, out, err);
    if (*diff) return cmd_diff(file, oracle_opts, out, err);
    if (*tables) {
      out << variance_tables();
      return kExitOk;
    }
    if (*maxvar) return cmd_maxvar(file, type_name, json, out, err);
  } catch (const std::exception& e) {
    err << "varkit: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace varkit
