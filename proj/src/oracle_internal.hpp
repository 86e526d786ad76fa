#ifndef VARKIT_ORACLE_INTERNAL_HPP
#define VARKIT_ORACLE_INTERNAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "varkit/oracle.hpp"

namespace varkit {

// A constructor compiled for the Req loop.
struct Oracle::Prepared {
  std::string datatype;
  std::string constructor;
  std::vector<std::string> existentials;
  std::vector<Variance> variances;           // per parameter
  std::vector<ConstraintKind> kinds;         // per parameter
  std::vector<Pattern> rhs;                  // per parameter
  std::optional<Pattern> argument;
  // Existentials that occur in some pattern. The others cannot influence the
  // outcome, so the loop pins them to the first universe element.
  std::vector<std::size_t> live;
  std::size_t work = 0;                      // |U|^|live|
};

}  // namespace varkit

#endif  // VARKIT_ORACLE_INTERNAL_HPP
