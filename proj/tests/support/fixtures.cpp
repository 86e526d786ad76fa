#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "varkit/parser.hpp"

namespace varkit::testing {

std::string corpus_dir() { return VARKIT_SOURCE_DIR "/corpus"; }
std::string golden_dir() { return VARKIT_SOURCE_DIR "/tests/golden"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const Signature> signature_from(const std::string& source) {
  ParseResult r = parse(source);
  if (r.has_errors()) {
    std::string msg = "unexpected diagnostics:";
    for (const auto& d : r.diagnostics) msg += "\n  " + d.to_string();
    throw std::runtime_error(msg);
  }
  return std::make_shared<const Signature>(std::move(r.signature));
}

std::shared_ptr<const Signature> load_signature(const std::string& path) {
  return signature_from(read_file(path));
}

std::shared_ptr<const Signature> judgment_signature() {
  static const auto sig = signature_from("abstract ghost(~x)\nabstract sink(-x)\n");
  return sig;
}

TypeExpr random_type(std::mt19937_64& rng, const Signature& sig,
                     const std::vector<std::string>& vars, int depth) {
  std::vector<const TypeConDecl*> leaves, formers;
  for (const auto& d : sig.decls()) {
    if (d.is_datatype()) continue;
    (d.arity() == 0 ? leaves : formers).push_back(&d);
  }
  if (depth <= 1 || rng() % 3 == 0) {
    if (!vars.empty() && rng() % 4 != 0) return TypeExpr::var(vars[rng() % vars.size()]);
    return TypeExpr::app(leaves[rng() % leaves.size()]->name);
  }
  const TypeConDecl* f = formers[rng() % formers.size()];
  TypeExpr t = TypeExpr::app(f->name);
  for (std::size_t i = 0; i < f->arity(); ++i) t.args.push_back(random_type(rng, sig, vars, depth - 1));
  return t;
}

std::vector<std::string> curated_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir() + "/curated"))
    if (e.path().extension() == ".vt") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace varkit::testing
