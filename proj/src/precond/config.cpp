#include "normalkit/precond/config.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace normalkit::precond {

namespace {

struct KindRule {
  std::set<std::string> variants;  // empty: no bare argument allowed
  std::set<std::string> keys;      // allowed option keys
};

const std::map<std::string, KindRule>& rules() {
  static const std::map<std::string, KindRule> r = {
      {"identity", {}},
      {"qr-r", {}},
      {"rq-r", {}},
      {"polar-left", {}},
      {"polar-right", {}},
      {"factor", {{"trid"}, {}}},
      {"direct", {{"cholesky", "banded-lu"}, {}}},
      {"inner-cg", {{}, {"tol", "max"}}},
      {"gmg", {{}, {"levels", "omega", "smooth", "pre", "post"}}},
  };
  return r;
}

double parse_double(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  double d = 0.0;
  in >> d;
  if (!in || !in.eof()) throw ConfigError("preconditioner option " + key + ": not a number: " + value);
  return d;
}

}  // namespace

double PrecondSpec::number(const std::string& key, double fallback) const {
  const auto it = options.find(key);
  return it == options.end() ? fallback : parse_double(key, it->second);
}

Index PrecondSpec::integer(const std::string& key, Index fallback) const {
  const auto it = options.find(key);
  if (it == options.end()) return fallback;
  Index v = 0;
  const auto& s = it->second;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError("preconditioner option " + key + ": not an integer: " + s);
  }
  return v;
}

std::string PrecondSpec::to_string() const {
  std::string s = kind;
  if (!variant.empty()) return s + ":" + variant;
  if (options.empty()) return s;
  s += ':';
  bool first = true;
  for (const auto& [k, v] : options) {
    if (!first) s += ',';
    s += k + "=" + v;
    first = false;
  }
  return s;
}

PrecondSpec parse_precond(const std::string& text) {
  PrecondSpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  const auto rule = rules().find(spec.kind);
  if (rule == rules().end()) throw ConfigError("unknown preconditioner: " + spec.kind);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (colon != std::string::npos && rest.empty()) throw ConfigError("empty argument in: " + text);

  if (!rule->second.variants.empty()) {
    if (!rule->second.variants.count(rest)) {
      throw ConfigError("preconditioner " + spec.kind + " needs one of its variants, got '" + rest + "'");
    }
    spec.variant = rest;
    return spec;
  }
  if (rest.empty()) return spec;
  if (rule->second.keys.empty()) throw ConfigError("preconditioner " + spec.kind + " takes no options");
  std::istringstream in(rest);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw ConfigError("malformed option '" + item + "' in " + text);
    }
    const std::string key = item.substr(0, eq);
    if (!rule->second.keys.count(key)) throw ConfigError("unknown option '" + key + "' for " + spec.kind);
    spec.options[key] = item.substr(eq + 1);
  }
  // Validate numeric values eagerly.
  for (const auto& [k, v] : spec.options) {
    if (k == "levels" || k == "smooth" || k == "pre" || k == "post" || k == "max") {
      (void)spec.integer(k, 0);
    } else {
      (void)spec.number(k, 0.0);
    }
  }
  return spec;
}

}  // namespace normalkit::precond
