#pragma once

// Minimal deterministic JSON emitter: insertion-ordered keys, doubles fixed
// to 17 significant digits, so identical inputs give byte-identical output.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace condeg::jsonio {

inline std::string num(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string num(long long v) { return std::to_string(v); }

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

class Array {
 public:
  void push(const std::string& rendered) { items_.push_back(rendered); }
  void push_num(double v) { items_.push_back(num(v)); }
  std::string str() const {
    std::string out = "[";
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (i) out += ", ";
      out += items_[i];
    }
    out += "]";
    return out;
  }
  bool empty() const { return items_.empty(); }

 private:
  std::vector<std::string> items_;
};

class Object {
 public:
  Object& add_raw(const std::string& k, const std::string& rendered) {
    kv_.emplace_back(k, rendered);
    return *this;
  }
  Object& add(const std::string& k, double v) { return add_raw(k, num(v)); }
  Object& add(const std::string& k, int v) {
    return add_raw(k, std::to_string(v));
  }
  Object& add(const std::string& k, long long v) {
    return add_raw(k, std::to_string(v));
  }
  Object& add(const std::string& k, bool v) {
    return add_raw(k, v ? "true" : "false");
  }
  Object& add(const std::string& k, const std::string& v) {
    return add_raw(k, quote(v));
  }
  Object& add(const std::string& k, const char* v) {
    return add_raw(k, quote(v));
  }
  std::string str(int indent = 0) const {
    std::string pad(indent, ' ');
    std::string in(indent + 2, ' ');
    std::string out = "{\n";
    for (std::size_t i = 0; i < kv_.size(); ++i) {
      out += in + quote(kv_[i].first) + ": " + kv_[i].second;
      if (i + 1 < kv_.size()) out += ",";
      out += "\n";
    }
    out += pad + "}";
    return out;
  }

 private:
  std::vector<std::pair<std::string, std::string>> kv_;
};

}  // namespace condeg::jsonio
