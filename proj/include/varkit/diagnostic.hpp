#ifndef VARKIT_DIAGNOSTIC_HPP
#define VARKIT_DIAGNOSTIC_HPP

#include <string>
#include <string_view>

namespace varkit {

struct SourceSpan {
  int line = 0;  // 1-based; 0 when unknown
  int column = 0;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

enum class Severity { Error, Warning, Info };

// Stable diagnostic codes.
namespace codes {
inline constexpr std::string_view kSyntax = "E_SYNTAX";
inline constexpr std::string_view kDuplicate = "E_DUPLICATE";
inline constexpr std::string_view kUnknown = "E_UNKNOWN";
inline constexpr std::string_view kArity = "E_ARITY";
inline constexpr std::string_view kScope = "E_SCOPE";
inline constexpr std::string_view kConstraint = "E_CONSTRAINT";
inline constexpr std::string_view kAxiom = "E_AXIOM";
inline constexpr std::string_view kCodomain = "E_CODOMAIN";
inline constexpr std::string_view kZip = "R_ZIP";
inline constexpr std::string_view kClosure = "R_CLOSURE";
inline constexpr std::string_view kVariance = "R_VARIANCE";
}  // namespace codes

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::string variable;  // optional payload
  std::string rule;      // optional payload

  // "LINE:COL: error[CODE]: message"
  std::string to_string() const;
};

std::string_view severity_name(Severity s);

}  // namespace varkit

#endif  // VARKIT_DIAGNOSTIC_HPP
