#ifndef VARKIT_VARIANCE_HPP
#define VARKIT_VARIANCE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace varkit {

// The four variances. The order relation is the "coarser-than" order on the
// relations they denote: Irr is the bottom, Inv the top, Cov and Contra are
// incomparable.
enum class Variance : std::uint8_t { Cov = 0, Contra = 1, Inv = 2, Irr = 3 };

// Printing order used by the tables: =, +, -, ~.
inline constexpr std::array<Variance, 4> kAllVariances = {
    Variance::Inv, Variance::Cov, Variance::Contra, Variance::Irr};

// ASCII symbol: "+", "-", "=", "~".
std::string_view symbol(Variance v);
// JSON spelling: "+", "-", "=", "join".
std::string_view json_name(Variance v);
std::optional<Variance> parse_variance(std::string_view s);

Variance compose(Variance v, Variance w);
bool leq(Variance v, Variance w);

// Greatest lower bound in leq. Called "join" in some presentations because the
// order is reversed with respect to the denoted relations.
Variance glb(Variance v, Variance w);
// Least upper bound in leq ("meet" in the reversed naming).
Variance lub(Variance v, Variance w);

// Partial merge of the demands of two occurrences of one variable. Defined iff
// one side is Irr or both are Inv.
std::optional<Variance> zip(Variance v, Variance w);

// The variance read in the opposite direction: rel(flip(v), a, b) iff
// rel(v, b, a).
inline Variance flip(Variance v) { return compose(Variance::Contra, v); }

// A subset of the four variances, stored as a 4-bit mask.
class VarianceSet {
 public:
  constexpr VarianceSet() = default;
  static constexpr VarianceSet from_bits(std::uint8_t bits) {
    VarianceSet s;
    s.bits_ = bits & 0xF;
    return s;
  }
  static constexpr VarianceSet full() { return from_bits(0xF); }
  static constexpr VarianceSet single(Variance v) {
    return from_bits(static_cast<std::uint8_t>(1u << static_cast<unsigned>(v)));
  }
  // Every variance w with leq(v, w).
  static VarianceSet up_closure(Variance v);

  constexpr bool contains(Variance v) const {
    return (bits_ >> static_cast<unsigned>(v)) & 1u;
  }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_full() const { return bits_ == 0xF; }
  constexpr std::uint8_t bits() const { return bits_; }
  int size() const;
  void insert(Variance v) { bits_ |= single(v).bits_; }

  constexpr VarianceSet operator&(VarianceSet o) const { return from_bits(bits_ & o.bits_); }
  constexpr VarianceSet operator|(VarianceSet o) const { return from_bits(bits_ | o.bits_); }
  constexpr bool subset_of(VarianceSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool operator==(const VarianceSet&) const = default;

  // Members in kAllVariances order.
  std::vector<Variance> members() const;
  std::string to_string() const;  // e.g. "{+,=}"

 private:
  std::uint8_t bits_ = 0;
};

// { zip(a, b) defined : a in x, b in y }
VarianceSet zip_sets(VarianceSet x, VarianceSet y);

// Raised for domain mismatches between contexts and similar misuse.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Assignment of a variance to each variable. Keeps insertion order, which is
// the positional order used by rel_context; equality ignores order.
class Context {
 public:
  Context() = default;
  Context(std::initializer_list<std::pair<std::string, Variance>> entries);

  void set(const std::string& var, Variance v);
  std::optional<Variance> find(std::string_view var) const;
  Variance at(std::string_view var) const;  // throws StructuralError
  bool contains(std::string_view var) const { return find(var).has_value(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<std::pair<std::string, Variance>>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const Context& o) const;
  std::string to_string() const;  // e.g. "(+b, =c)"

 private:
  std::vector<std::pair<std::string, Variance>> entries_;
};

// Pointwise leq. Throws StructuralError when the domains differ.
bool context_leq(const Context& g1, const Context& g2);
// Pointwise zip; nullopt if undefined at some variable. Throws on domain mismatch.
std::optional<Context> context_zip(const Context& g1, const Context& g2);
Context context_lub(const Context& g1, const Context& g2);
Context context_glb(const Context& g1, const Context& g2);

// A product of variance sets, one per variable. Variables absent from the map
// range over the full set.
class ContextBox {
 public:
  ContextBox() = default;
  ContextBox(std::initializer_list<std::pair<const std::string, VarianceSet>> entries)
      : entries_(entries) {}

  VarianceSet get(std::string_view var) const;
  void set(const std::string& var, VarianceSet s);
  // Narrow var to s (intersection with the current set).
  void restrict(const std::string& var, VarianceSet s);

  bool has_empty() const;
  bool contains(const Context& g) const;
  // Pointwise inclusion over the union of both domains.
  bool subset_of(const ContextBox& o) const;
  const std::map<std::string, VarianceSet, std::less<>>& entries() const { return entries_; }
  bool operator==(const ContextBox& o) const;
  std::string to_string() const;

 private:
  std::map<std::string, VarianceSet, std::less<>> entries_;
};

ContextBox box_zip(const ContextBox& b1, const ContextBox& b2);
ContextBox box_intersect(const ContextBox& b1, const ContextBox& b2);

// The compose and zip tables in plain ASCII, separated by a blank line. Rows
// and columns follow kAllVariances; undefined zip cells print as '.'.
std::string variance_tables();

}  // namespace varkit

#endif  // VARKIT_VARIANCE_HPP
