#ifndef VARKIT_REPORT_HPP
#define VARKIT_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "varkit/checker.hpp"
#include "varkit/oracle.hpp"

namespace varkit {

inline constexpr int kReportVersion = 1;

struct DatatypeResult {
  std::string name;
  std::vector<CheckReport> reports;
  // Filled by the oracle-backed commands.
  std::optional<Violation> violation;
  bool oracle_ran = false;

  bool accepted() const;
};

// {version, file, datatypes: [{name, accepted, constructors: [{name, accepted,
// witness_context?, failure?: {code, variable?, rule?, oracle_violation?}}]}]}
// Extra keys (sound_mode, constraint_contexts, message) follow the fixed ones.
std::string report_json(const std::string& file, const std::vector<DatatypeResult>& results);

std::string context_json_name(Variance v);

}  // namespace varkit

#endif  // VARKIT_REPORT_HPP
