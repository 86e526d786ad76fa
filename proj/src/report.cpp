#include "varkit/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace varkit {

using nlohmann::ordered_json;

bool DatatypeResult::accepted() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const CheckReport& r) { return r.accepted; });
}

std::string context_json_name(Variance v) { return std::string(json_name(v)); }

namespace {

ordered_json context_json(const Context& g) {
  ordered_json out = ordered_json::object();
  for (const auto& [x, v] : g) out[x] = context_json_name(v);
  return out;
}

ordered_json types_json(const std::vector<TypeExpr>& ts) {
  ordered_json out = ordered_json::array();
  for (const auto& t : ts) out.push_back(t.to_string());
  return out;
}

ordered_json violation_json(const Violation& v) {
  ordered_json out;
  out["constructor"] = v.constructor;
  out["sigma"] = types_json(v.sigma);
  out["sigma_prime"] = types_json(v.sigma_prime);
  out["rho"] = types_json(v.rho);
  out["depth"] = v.depth;
  out["witness_depth"] = v.witness_depth;
  out["reason"] = v.reason;
  return out;
}

}  // namespace

std::string report_json(const std::string& file, const std::vector<DatatypeResult>& results) {
  ordered_json root;
  root["version"] = kReportVersion;
  root["file"] = file;
  root["datatypes"] = ordered_json::array();
  for (const auto& dt : results) {
    ordered_json d;
    d["name"] = dt.name;
    d["accepted"] = dt.accepted();
    d["constructors"] = ordered_json::array();
    for (const auto& r : dt.reports) {
      ordered_json c;
      c["name"] = r.constructor;
      c["accepted"] = r.accepted;
      if (r.witness) c["witness_context"] = context_json(*r.witness);
      const bool has_violation = dt.violation && dt.violation->constructor == r.constructor;
      if (r.failure || has_violation) {
        ordered_json f;
        if (r.failure) {
          f["code"] = r.failure->code;
          if (!r.failure->variable.empty()) f["variable"] = r.failure->variable;
          if (!r.failure->rule.empty()) f["rule"] = r.failure->rule;
        } else {
          f["code"] = "ORACLE";
        }
        if (has_violation) f["oracle_violation"] = violation_json(*dt.violation);
        if (r.failure) f["message"] = r.failure->message;
        c["failure"] = std::move(f);
      }
      c["sound_mode"] = r.sound_mode;
      if (r.accepted) {
        ordered_json parts = ordered_json::array();
        for (const auto& g : r.constraint_contexts) parts.push_back(context_json(g));
        c["constraint_contexts"] = std::move(parts);
      }
      d["constructors"].push_back(std::move(c));
    }
    if (dt.oracle_ran) d["oracle"] = dt.violation ? "violation" : "none";
    root["datatypes"].push_back(std::move(d));
  }
  return root.dump(2) + "\n";
}

}  // namespace varkit
