#ifndef VARKIT_PARSER_HPP
#define VARKIT_PARSER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "varkit/diagnostic.hpp"
#include "varkit/types.hpp"

namespace varkit {

struct ParseResult {
  Signature signature;  // built-ins plus everything that parsed
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const;
};

// Parses a .vt file and runs well_formed() on the result. Never throws on
// malformed input: every problem becomes a Diagnostic and parsing resumes at
// the next declaration keyword.
//
//   base NAME [noup] [nodown]
//   axiom NAME <= NAME
//   abstract NAME(V a, ...) [noup] [nodown]        V is one of + - = ~
//   type NAME(V a, ...) =
//     | K                                          constant constructor
//     | K of T                                     plain constructor
//     | K of exists b c [a = T, a >= T, a <= T]. T
//     | K : T -> NAME(T1, ..., Tn)                 codomain form
//
// Types: `->` (right associative) binds looser than `*` (left associative).
// `#` starts a comment that runs to the end of the line.
ParseResult parse(std::string_view source);

// Prints every non-builtin declaration in a form parse() reads back to an
// equal Signature. Constructors are always printed in the explicit form.
std::string pretty(const Signature& sig);
std::string pretty_constructor(const TypeConDecl& owner, const ConstructorDecl& k);

}  // namespace varkit

#endif  // VARKIT_PARSER_HPP
