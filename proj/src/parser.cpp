#include "varkit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <tuple>

namespace varkit {

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

namespace {

struct Token {
  enum class Kind { Ident, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  int column = 0;

  SourceSpan span() const { return {line, column, static_cast<int>(text.size())}; }
  bool is(std::string_view s) const { return kind != Kind::End && text == s; }
};

const std::set<std::string, std::less<>> kKeywords = {"base", "axiom", "abstract", "type",
                                                      "of",   "exists", "noup",   "nodown"};
const std::set<std::string, std::less<>> kItemKeywords = {"base", "axiom", "abstract", "type"};

struct SyntaxError {
  Diagnostic diag;
};

std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\''))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    static constexpr std::string_view two[] = {"->", ">=", "<="};
    bool matched = false;
    for (auto s : two)
      if (src.substr(i, 2) == s) {
        t.kind = Token::Kind::Symbol;
        t.text = std::string(s);
        advance(2);
        matched = true;
        break;
      }
    if (!matched && std::string_view("()[],|.=*+-~:").find(c) != std::string_view::npos) {
      t.kind = Token::Kind::Symbol;
      t.text = std::string(1, c);
      advance(1);
      matched = true;
    }
    if (matched) {
      out.push_back(std::move(t));
      continue;
    }
    diags.push_back({Severity::Error, std::string(codes::kSyntax),
                     "unexpected character '" + std::string(1, c) + "'", {line, col, 1}, {}, {}});
    advance(1);
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, ParseResult& out) : toks_(std::move(toks)), out_(out) {}

  void run() {
    prescan();
    while (!peek().is_end()) {
      try {
        item();
      } catch (const SyntaxError& e) {
        out_.diagnostics.push_back(e.diag);
        recover();
      }
    }
    for (const auto& [lo, hi] : axioms_) out_.signature.add_axiom(lo, hi);
  }

 private:
  struct Cursor {
    const Token& t;
    bool is_end() const { return t.kind == Token::Kind::End; }
  };

  Cursor peek(std::size_t k = 0) const {
    return {toks_[std::min(pos_ + k, toks_.size() - 1)]};
  }
  const Token& cur() const { return toks_[std::min(pos_, toks_.size() - 1)]; }
  const Token& take() {
    const Token& t = cur();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool accept(std::string_view s) {
    if (cur().kind == Token::Kind::Symbol && cur().text == s) {
      take();
      return true;
    }
    return false;
  }
  bool accept_keyword(std::string_view s) {
    if (cur().kind == Token::Kind::Ident && cur().text == s) {
      take();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const Token& at, const std::string& msg,
                         std::string_view code = codes::kSyntax) const {
    throw SyntaxError{{Severity::Error, std::string(code), msg, at.span(), {}, {}}};
  }
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail(cur(), "expected '" + std::string(s) + "', found " + describe(cur()));
  }
  const Token& ident(std::string_view what) {
    if (cur().kind != Token::Kind::Ident || kKeywords.count(cur().text))
      fail(cur(), "expected " + std::string(what) + ", found " + describe(cur()));
    return take();
  }
  bool at_item_start() const {
    return cur().kind == Token::Kind::Ident && kItemKeywords.count(cur().text);
  }
  void recover() {
    if (cur().kind != Token::Kind::End) take();
    while (cur().kind != Token::Kind::End && !at_item_start()) take();
  }

  // Names declared anywhere in the file, so codomain-form constructors can
  // tell type variables from forward references.
  void prescan() {
    for (const auto& d : out_.signature.decls()) declared_.insert(d.name);
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i)
      if (toks_[i].kind == Token::Kind::Ident &&
          (toks_[i].text == "base" || toks_[i].text == "abstract" || toks_[i].text == "type") &&
          toks_[i + 1].kind == Token::Kind::Ident)
        declared_.insert(toks_[i + 1].text);
  }

  void item() {
    const Token& kw = cur();
    if (kw.kind != Token::Kind::Ident || !kItemKeywords.count(kw.text))
      fail(kw, "expected a declaration (base, axiom, abstract or type), found " + describe(kw));
    take();
    if (kw.text == "base") return base_decl(kw);
    if (kw.text == "axiom") return axiom_decl();
    if (kw.text == "abstract") return abstract_decl(kw);
    return type_decl(kw);
  }

  void flags(TypeConDecl& d) {
    while (true) {
      if (accept_keyword("noup")) {
        d.upward_closed = false;
      } else if (accept_keyword("nodown")) {
        d.downward_closed = false;
      } else {
        return;
      }
    }
  }

  void add(TypeConDecl d, const Token& name) {
    std::string n = d.name;
    if (!out_.signature.add(std::move(d)))
      out_.diagnostics.push_back({Severity::Error, std::string(codes::kDuplicate),
                                  "type constructor '" + n + "' is already declared", name.span(),
                                  {}, {}});
  }

  void base_decl(const Token&) {
    const Token& name = ident("a base type name");
    TypeConDecl d;
    d.name = name.text;
    d.kind = TypeKind::Base;
    d.span = name.span();
    flags(d);
    add(std::move(d), name);
  }

  void axiom_decl() {
    const Token& lo = ident("a base type name");
    expect("<=");
    const Token& hi = ident("a base type name");
    axioms_.emplace_back(lo.text, hi.text);
  }

  void params(TypeConDecl& d) {
    if (!accept("(")) return;
    if (accept(")")) return;
    do {
      const Token& vt = cur();
      std::optional<Variance> v;
      if (vt.kind == Token::Kind::Symbol) v = parse_variance(vt.text);
      if (!v) fail(vt, "expected a variance (+, -, = or ~), found " + describe(vt));
      take();
      d.param_variances.push_back(*v);
      d.params.push_back(ident("a parameter name").text);
    } while (accept(","));
    expect(")");
  }

  void abstract_decl(const Token&) {
    const Token& name = ident("a type name");
    TypeConDecl d;
    d.name = name.text;
    d.kind = TypeKind::Abstract;
    d.span = name.span();
    params(d);
    flags(d);
    add(std::move(d), name);
  }

  void type_decl(const Token&) {
    const Token& name = ident("a type name");
    TypeConDecl d;
    d.name = name.text;
    d.kind = TypeKind::Datatype;
    d.span = name.span();
    params(d);
    expect("=");
    std::set<std::string> seen;
    bool first = true;
    // Constructors are parsed one by one so that one bad constructor does not
    // lose the rest of the declaration.
    while (true) {
      const bool bar = accept("|");
      if (!bar && !first) break;
      if (!bar && cur().kind != Token::Kind::Ident) break;
      if (!bar && at_item_start()) break;
      first = false;
      try {
        ConstructorDecl k = constructor(d);
        if (!seen.insert(k.name).second)
          out_.diagnostics.push_back({Severity::Error, std::string(codes::kDuplicate),
                                      "constructor '" + k.name + "' is declared twice in '" +
                                          d.name + "'",
                                      k.span, {}, {}});
        else
          d.constructors.push_back(std::move(k));
      } catch (const SyntaxError& e) {
        out_.diagnostics.push_back(e.diag);
        while (cur().kind != Token::Kind::End && !at_item_start() &&
               !(cur().kind == Token::Kind::Symbol && cur().text == "|"))
          take();
      }
    }
    add(std::move(d), name);
  }

  using VarTest = std::function<bool(const std::string&)>;

  TypeExpr type(const VarTest& is_var) {
    TypeExpr lhs = product(is_var);
    if (accept("->")) return TypeExpr::arrow(std::move(lhs), type(is_var));
    return lhs;
  }
  TypeExpr product(const VarTest& is_var) {
    TypeExpr lhs = atom(is_var);
    while (accept("*")) lhs = TypeExpr::product(std::move(lhs), atom(is_var));
    return lhs;
  }
  TypeExpr atom(const VarTest& is_var) {
    if (accept("(")) {
      TypeExpr t = type(is_var);
      expect(")");
      return t;
    }
    const Token& name = ident("a type");
    if (accept("(")) {
      TypeExpr t = TypeExpr::app(name.text);
      if (!accept(")")) {
        do {
          t.args.push_back(type(is_var));
        } while (accept(","));
        expect(")");
      }
      return t;
    }
    if (is_var(name.text)) return TypeExpr::var(name.text);
    return TypeExpr::app(name.text);
  }

  static bool contains(const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  }

  ConstructorDecl constructor(const TypeConDecl& owner) {
    const Token& name = ident("a constructor name");
    const SourceSpan span = name.span();
    const std::string kname = name.text;
    if (accept_keyword("of")) {
      if (cur().is("exists") || cur().is("[")) {
        ConstructorDecl k = explicit_form(owner, kname);
        k.span = span;
        return k;
      }
      TypeExpr arg = type([&](const std::string& x) { return contains(owner.params, x); });
      ConstructorDecl k = encode_plain_constructor(kname, owner.params, std::move(arg));
      k.span = span;
      return k;
    }
    if (accept(":")) {
      ConstructorDecl k = codomain_form(owner, kname, span);
      k.span = span;
      return k;
    }
    ConstructorDecl k = encode_plain_constructor(kname, owner.params, std::nullopt);
    k.span = span;
    return k;
  }

  ConstructorDecl explicit_form(const TypeConDecl& owner, const std::string& kname) {
    ConstructorDecl k;
    k.name = kname;
    if (accept_keyword("exists"))
      while (cur().kind == Token::Kind::Ident && !kKeywords.count(cur().text))
        k.existentials.push_back(take().text);
    // Parameters are in scope syntactically so that misuse is reported as a
    // scoping error rather than as an unknown type.
    VarTest is_var = [&](const std::string& x) {
      return contains(k.existentials, x) || contains(owner.params, x);
    };
    if (accept("[")) {
      if (!accept("]")) {
        do {
          const Token& p = ident("a parameter name");
          ConstraintKind kind;
          if (accept("=")) {
            kind = ConstraintKind::Eq;
          } else if (accept(">=")) {
            kind = ConstraintKind::Sup;
          } else if (accept("<=")) {
            kind = ConstraintKind::Sub;
          } else {
            fail(cur(), "expected '=', '>=' or '<=', found " + describe(cur()));
          }
          TypeExpr rhs = type(is_var);
          auto it = std::find(owner.params.begin(), owner.params.end(), p.text);
          if (it == owner.params.end()) {
            out_.diagnostics.push_back({Severity::Error, std::string(codes::kConstraint),
                                        "'" + p.text + "' is not a parameter of '" + owner.name +
                                            "'",
                                        p.span(), p.text, {}});
            continue;
          }
          k.constraints.push_back(
              {static_cast<std::size_t>(it - owner.params.begin()), kind, std::move(rhs)});
        } while (accept(","));
        expect("]");
      }
    }
    if (accept(".")) k.argument = type(is_var);
    return k;
  }

  // K : A -> NAME(T1..Tn). A bare variable that is the whole of exactly one
  // codomain argument becomes the plain existential _e<i>; all other
  // variables keep their names.
  ConstructorDecl codomain_form(const TypeConDecl& owner, const std::string& kname,
                                SourceSpan span) {
    TypeExpr full = type([&](const std::string& x) { return !declared_.count(x); });
    std::vector<TypeExpr> spine;
    const TypeExpr* t = &full;
    while (!t->is_var() && t->name == kArrow && t->args.size() == 2) {
      spine.push_back(t->args[0]);
      t = &t->args[1];
    }
    const TypeExpr cod = *t;
    std::optional<TypeExpr> arg;
    if (!spine.empty()) {
      TypeExpr a = spine.back();
      for (std::size_t i = spine.size() - 1; i-- > 0;) a = TypeExpr::arrow(spine[i], std::move(a));
      arg = std::move(a);
    }
    if (cod.is_var() || cod.name != owner.name || cod.args.size() != owner.params.size())
      throw SyntaxError{{Severity::Error, std::string(codes::kCodomain),
                         "constructor '" + kname + "' must return '" + owner.name + "' applied to " +
                             std::to_string(owner.params.size()) + " argument(s), found '" +
                             cod.to_string() + "'",
                         span, {}, {}}};

    std::map<std::string, std::string> rename;
    for (std::size_t i = 0; i < cod.args.size(); ++i) {
      const TypeExpr& a = cod.args[i];
      if (!a.is_var()) continue;
      const auto bare = std::count_if(cod.args.begin(), cod.args.end(), [&](const TypeExpr& b) {
        return b.is_var() && b.name == a.name;
      });
      if (bare == 1) rename[a.name] = "_e" + std::to_string(i);
    }
    std::function<TypeExpr(const TypeExpr&)> ren = [&](const TypeExpr& x) {
      if (x.is_var()) {
        auto it = rename.find(x.name);
        return TypeExpr::var(it == rename.end() ? x.name : it->second);
      }
      TypeExpr o = TypeExpr::app(x.name);
      for (const auto& c : x.args) o.args.push_back(ren(c));
      return o;
    };

    ConstructorDecl k;
    k.name = kname;
    for (std::size_t i = 0; i < cod.args.size(); ++i)
      k.constraints.push_back({i, ConstraintKind::Eq, ren(cod.args[i])});
    if (arg) k.argument = ren(*arg);
    for (const auto& c : k.constraints)
      for (const auto& x : free_vars(c.rhs))
        if (!contains(k.existentials, x)) k.existentials.push_back(x);
    if (k.argument)
      for (const auto& x : free_vars(*k.argument))
        if (!contains(k.existentials, x)) k.existentials.push_back(x);
    return k;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseResult& out_;
  std::set<std::string, std::less<>> declared_;
  std::vector<std::pair<std::string, std::string>> axioms_;
};

}  // namespace

ParseResult parse(std::string_view source) {
  ParseResult out;
  out.signature = Signature::with_builtins();
  std::vector<Token> toks = lex(source, out.diagnostics);
  Parser(std::move(toks), out).run();
  auto wf = well_formed(out.signature);
  out.diagnostics.insert(out.diagnostics.end(), wf.begin(), wf.end());
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return std::tie(a.span.line, a.span.column) <
                            std::tie(b.span.line, b.span.column);
                   });
  return out;
}

}  // namespace varkit
