#ifndef VARKIT_TESTS_FIXTURES_HPP
#define VARKIT_TESTS_FIXTURES_HPP

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "varkit/types.hpp"

namespace varkit::testing {

std::string corpus_dir();  // .../corpus
std::string golden_dir();  // .../tests/golden
std::string read_file(const std::string& path);

// Parses a file or a snippet and throws if it has errors.
std::shared_ptr<const Signature> load_signature(const std::string& path);
std::shared_ptr<const Signature> signature_from(const std::string& source);

// Built-ins plus an irrelevant former `ghost(~x)` and a contravariant one
// `sink(-x)`, so random types exercise every composition.
std::shared_ptr<const Signature> judgment_signature();

// Random type over the signature's non-datatype formers and the given
// variables. depth counts constructor nesting as TypeExpr::depth does.
TypeExpr random_type(std::mt19937_64& rng, const Signature& sig,
                     const std::vector<std::string>& vars, int depth);

// Files under corpus/curated, sorted.
std::vector<std::string> curated_files();

}  // namespace varkit::testing

#endif
