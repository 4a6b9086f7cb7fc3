#include "coql/schema/value.hpp"

#include <charconv>
#include <system_error>

namespace coql::schema {

bool operator==(const ComplexIdentity& a, const ComplexIdentity& b) { return a.segments == b.segments; }

bool operator==(const Value& a, const Value& b) {
  return static_cast<const Value::variant&>(a) == static_cast<const Value::variant&>(b);
}

double Value::as_double() const {
  if (auto i = std::get_if<std::int64_t>(this)) return static_cast<double>(*i);
  return std::get<double>(*this);
}

namespace {

std::string number_text(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, end);
}

void append_key(std::string& out, const Value& v) {
  struct Visitor {
    std::string& out;
    void operator()(Null) const { out += "n;"; }
    void operator()(bool b) const { out += b ? "b1;" : "b0;"; }
    void operator()(std::int64_t i) const { out += "i" + std::to_string(i) + ";"; }
    void operator()(double d) const { out += "d" + number_text(d) + ";"; }
    void operator()(const std::string& s) const { out += "s" + std::to_string(s.size()) + ":" + s; }
    void operator()(const ComplexIdentity& id) const {
      out += "c" + std::to_string(id.segments.size()) + "[";
      for (const auto& seg : id.segments) out += encode_key(seg);
      out += "]";
    }
  };
  std::visit(Visitor{out}, static_cast<const Value::variant&>(v));
}

}  // namespace

std::string encode_key(const Segment& segment) {
  std::string out = "{" + std::to_string(segment.size()) + ":";
  for (const auto& v : segment) append_key(out, v);
  return out + "}";
}

std::string rtrim(std::string text) {
  while (!text.empty() && text.back() == ' ') text.pop_back();
  return text;
}

std::string to_text(const Segment& segment) {
  if (segment.size() == 1) return to_text(segment.front());
  std::string out = "(";
  for (std::size_t i = 0; i < segment.size(); ++i) {
    if (i) out += ',';
    out += to_text(segment[i]);
  }
  return out + ")";
}

std::string to_text(const ComplexIdentity& identity) {
  std::string out;
  for (std::size_t i = 0; i < identity.segments.size(); ++i) {
    if (i) out += '/';
    out += to_text(identity.segments[i]);
  }
  return out;
}

std::string to_text(const Value& value) {
  struct Visitor {
    std::string operator()(Null) const { return "NULL"; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return number_text(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const ComplexIdentity& id) const { return to_text(id); }
  };
  return std::visit(Visitor{}, static_cast<const Value::variant&>(value));
}

}  // namespace coql::schema
