#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace coql::schema {

struct Value;

/// Local identity of an item: one value per identity field.
using Segment = std::vector<Value>;

/// Root-first sequence of identity segments.
struct ComplexIdentity {
  std::vector<Segment> segments;

  std::size_t size() const { return segments.size(); }
  friend bool operator==(const ComplexIdentity&, const ComplexIdentity&);
};

struct Null {
  friend bool operator==(Null, Null) { return true; }
};

/// Field and expression values. Text is stored with trailing blanks removed.
struct Value : std::variant<Null, bool, std::int64_t, double, std::string, ComplexIdentity> {
  using variant::variant;

  bool is_null() const { return std::holds_alternative<Null>(*this); }
  bool is_number() const {
    return std::holds_alternative<std::int64_t>(*this) || std::holds_alternative<double>(*this);
  }
  double as_double() const;

  friend bool operator==(const Value&, const Value&);
};

/// Display form: numbers in shortest round-trip form, identities as
/// `seg/seg/...`, multi-field segments as `(a,b)`.
std::string to_text(const Value& value);
std::string to_text(const ComplexIdentity& identity);
std::string to_text(const Segment& segment);

/// Injective, type-tagged encoding used as an index key.
std::string encode_key(const Segment& segment);

std::string rtrim(std::string text);

}  // namespace coql::schema
