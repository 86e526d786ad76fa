#include "varkit/variance.hpp"

#include <algorithm>

namespace varkit {

namespace {

constexpr int idx(Variance v) { return static_cast<int>(v); }

}  // namespace

std::string_view symbol(Variance v) {
  switch (v) {
    case Variance::Cov: return "+";
    case Variance::Contra: return "-";
    case Variance::Inv: return "=";
    case Variance::Irr: return "~";
  }
  return "?";
}

std::string_view json_name(Variance v) {
  return v == Variance::Irr ? std::string_view("join") : symbol(v);
}

std::optional<Variance> parse_variance(std::string_view s) {
  if (s == "+") return Variance::Cov;
  if (s == "-") return Variance::Contra;
  if (s == "=") return Variance::Inv;
  if (s == "~" || s == "join") return Variance::Irr;
  return std::nullopt;
}

Variance compose(Variance v, Variance w) {
  if (v == Variance::Irr || w == Variance::Irr) return Variance::Irr;
  if (v == Variance::Inv || w == Variance::Inv) return Variance::Inv;
  return v == w ? Variance::Cov : Variance::Contra;
}

bool leq(Variance v, Variance w) {
  return v == w || v == Variance::Irr || w == Variance::Inv;
}

Variance glb(Variance v, Variance w) {
  if (leq(v, w)) return v;
  if (leq(w, v)) return w;
  return Variance::Irr;
}

Variance lub(Variance v, Variance w) {
  if (leq(v, w)) return w;
  if (leq(w, v)) return v;
  return Variance::Inv;
}

std::optional<Variance> zip(Variance v, Variance w) {
  if (v == Variance::Irr) return w;
  if (w == Variance::Irr) return v;
  if (v == Variance::Inv && w == Variance::Inv) return Variance::Inv;
  return std::nullopt;
}

VarianceSet VarianceSet::up_closure(Variance v) {
  VarianceSet s;
  for (Variance w : kAllVariances)
    if (leq(v, w)) s.insert(w);
  return s;
}

int VarianceSet::size() const {
  int n = 0;
  for (unsigned b = bits_; b; b &= b - 1) ++n;
  return n;
}

std::vector<Variance> VarianceSet::members() const {
  std::vector<Variance> out;
  for (Variance v : kAllVariances)
    if (contains(v)) out.push_back(v);
  return out;
}

std::string VarianceSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (Variance v : members()) {
    if (!first) out += ",";
    out += symbol(v);
    first = false;
  }
  return out + "}";
}

VarianceSet zip_sets(VarianceSet x, VarianceSet y) {
  static const auto table = [] {
    std::array<std::array<std::uint8_t, 16>, 16> t{};
    for (unsigned a = 0; a < 16; ++a)
      for (unsigned b = 0; b < 16; ++b) {
        VarianceSet out;
        for (Variance v : kAllVariances)
          for (Variance w : kAllVariances)
            if (VarianceSet::from_bits(a).contains(v) && VarianceSet::from_bits(b).contains(w))
              if (auto z = zip(v, w)) out.insert(*z);
        t[a][b] = out.bits();
      }
    return t;
  }();
  return VarianceSet::from_bits(table[x.bits()][y.bits()]);
}

// ---------------------------------------------------------------------------
// Context

Context::Context(std::initializer_list<std::pair<std::string, Variance>> entries) {
  for (const auto& [k, v] : entries) set(k, v);
}

void Context::set(const std::string& var, Variance v) {
  for (auto& [k, w] : entries_)
    if (k == var) {
      w = v;
      return;
    }
  entries_.emplace_back(var, v);
}

std::optional<Variance> Context::find(std::string_view var) const {
  for (const auto& [k, w] : entries_)
    if (k == var) return w;
  return std::nullopt;
}

Variance Context::at(std::string_view var) const {
  if (auto v = find(var)) return *v;
  throw StructuralError("variable '" + std::string(var) + "' is not bound in context " + to_string());
}

bool Context::operator==(const Context& o) const {
  if (size() != o.size()) return false;
  for (const auto& [k, v] : entries_) {
    auto w = o.find(k);
    if (!w || *w != v) return false;
  }
  return true;
}

std::string Context::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ", ";
    out += symbol(entries_[i].second);
    out += entries_[i].first;
  }
  return out + ")";
}

namespace {

void require_same_domain(const Context& g1, const Context& g2) {
  bool same = g1.size() == g2.size();
  for (const auto& [k, v] : g1)
    if (!g2.contains(k)) same = false;
  if (!same)
    throw StructuralError("context domains differ: " + g1.to_string() + " vs " + g2.to_string());
}

template <typename F>
Context pointwise(const Context& g1, const Context& g2, F f) {
  require_same_domain(g1, g2);
  Context out;
  for (const auto& [k, v] : g1) out.set(k, f(v, g2.at(k)));
  return out;
}

}  // namespace

bool context_leq(const Context& g1, const Context& g2) {
  require_same_domain(g1, g2);
  return std::all_of(g1.begin(), g1.end(),
                     [&](const auto& e) { return leq(e.second, g2.at(e.first)); });
}

std::optional<Context> context_zip(const Context& g1, const Context& g2) {
  require_same_domain(g1, g2);
  Context out;
  for (const auto& [k, v] : g1) {
    auto z = zip(v, g2.at(k));
    if (!z) return std::nullopt;
    out.set(k, *z);
  }
  return out;
}

Context context_lub(const Context& g1, const Context& g2) { return pointwise(g1, g2, lub); }
Context context_glb(const Context& g1, const Context& g2) { return pointwise(g1, g2, glb); }

// ---------------------------------------------------------------------------
// ContextBox

VarianceSet ContextBox::get(std::string_view var) const {
  auto it = entries_.find(var);
  return it == entries_.end() ? VarianceSet::full() : it->second;
}

void ContextBox::set(const std::string& var, VarianceSet s) {
  if (s.is_full())
    entries_.erase(var);
  else
    entries_[var] = s;
}

void ContextBox::restrict(const std::string& var, VarianceSet s) { set(var, get(var) & s); }

bool ContextBox::has_empty() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const auto& e) { return e.second.empty(); });
}

bool ContextBox::contains(const Context& g) const {
  for (const auto& [k, s] : entries_) {
    auto v = g.find(k);
    if (!v) {
      if (s.empty()) return false;
      continue;
    }
    if (!s.contains(*v)) return false;
  }
  for (const auto& [k, v] : g)
    if (!get(k).contains(v)) return false;
  return true;
}

bool ContextBox::subset_of(const ContextBox& o) const {
  for (const auto& [k, s] : entries_)
    if (!s.subset_of(o.get(k))) return false;
  for (const auto& [k, s] : o.entries_)
    if (!get(k).subset_of(s)) return false;
  return true;
}

bool ContextBox::operator==(const ContextBox& o) const { return entries_ == o.entries_; }

std::string ContextBox::to_string() const {
  std::string out = "[";
  bool first = true;
  for (const auto& [k, s] : entries_) {
    if (!first) out += ", ";
    out += k + "->" + s.to_string();
    first = false;
  }
  return out + "]";
}

ContextBox box_zip(const ContextBox& b1, const ContextBox& b2) {
  ContextBox out;
  for (const auto& [k, s] : b1.entries()) out.set(k, zip_sets(s, b2.get(k)));
  for (const auto& [k, s] : b2.entries())
    if (!b1.entries().count(k)) out.set(k, zip_sets(VarianceSet::full(), s));
  return out;
}

ContextBox box_intersect(const ContextBox& b1, const ContextBox& b2) {
  ContextBox out = b1;
  for (const auto& [k, s] : b2.entries()) out.restrict(k, s);
  return out;
}

namespace {

template <typename Op>
void render_table(std::string& out, std::string_view title, Op op) {
  constexpr int kLabel = 8;
  out += title;
  out.append(kLabel - title.size(), ' ');
  for (Variance w : kAllVariances) {
    out += "  ";
    out += symbol(w);
  }
  out += '\n';
  for (Variance v : kAllVariances) {
    out += symbol(v);
    out.append(kLabel - 1, ' ');
    for (Variance w : kAllVariances) {
      const std::optional<Variance> r = op(v, w);
      out += "  ";
      out += r ? symbol(*r) : std::string_view(".");
    }
    out += '\n';
  }
}

}  // namespace

std::string variance_tables() {
  std::string out;
  render_table(out, "compose", [](Variance v, Variance w) { return std::optional(compose(v, w)); });
  out += '\n';
  render_table(out, "zip", [](Variance v, Variance w) { return zip(v, w); });
  return out;
}

}  // namespace varkit
