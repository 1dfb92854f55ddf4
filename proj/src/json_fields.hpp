#pragma once

// Field-by-field reader for JSON objects that records every violation instead of stopping at
// the first one. Paths in messages use dotted notation ("params.temperature").

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace qthermo::detail {

class FieldReader {
 public:
  FieldReader(const nlohmann::json& object, std::string path, std::vector<std::string>& problems)
      : object_(object), path_(std::move(path)), problems_(problems) {
    if (!object_.is_object()) report("", "must be a JSON object");
  }

  bool ok() const { return object_.is_object(); }
  const nlohmann::json& raw() const { return object_; }
  std::string field_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void report(const std::string& key, const std::string& message) {
    const std::string where = key.empty() ? (path_.empty() ? std::string("document") : path_) : field_path(key);
    problems_.push_back(where + ": " + message);
  }

  bool has(const std::string& key) const { return ok() && object_.contains(key); }

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) {
    if (!ok()) return;
    std::set<std::string> names(allowed.begin(), allowed.end());
    for (const auto& [key, value] : object_.items()) {
      if (!names.count(key)) report(key, "unknown field");
    }
  }

  enum class Bound { any, positive, non_negative };

  std::optional<double> number(const std::string& key, std::optional<double> fallback,
                               Bound bound = Bound::any) {
    if (!has(key)) {
      if (!fallback) report(key, "is required");
      return fallback;
    }
    const auto& v = object_.at(key);
    if (!v.is_number()) {
      report(key, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      report(key, "must be finite");
      return std::nullopt;
    }
    if (bound == Bound::positive && !(x > 0.0)) {
      report(key, "must be positive, got " + v.dump());
      return std::nullopt;
    }
    if (bound == Bound::non_negative && !(x >= 0.0)) {
      report(key, "must be non-negative, got " + v.dump());
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::uint64_t> count(const std::string& key, std::optional<std::uint64_t> fallback) {
    if (!has(key)) {
      if (!fallback) report(key, "is required");
      return fallback;
    }
    const auto& v = object_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      report(key, "must be a non-negative integer");
      return std::nullopt;
    }
    return v.get<std::uint64_t>();
  }

  std::optional<bool> flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = object_.at(key);
    if (!v.is_boolean()) {
      report(key, "must be true or false");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<std::string> choice(const std::string& key, std::optional<std::string> fallback,
                                    std::initializer_list<const char*> options) {
    if (!has(key)) {
      if (!fallback) report(key, "is required");
      return fallback;
    }
    const auto& v = object_.at(key);
    std::string listing;
    for (const char* o : options) listing += (listing.empty() ? "" : "|") + std::string(o);
    if (!v.is_string()) {
      report(key, "must be one of " + listing);
      return std::nullopt;
    }
    const auto s = v.get<std::string>();
    for (const char* o : options) {
      if (s == o) return s;
    }
    report(key, "must be one of " + listing + ", got \"" + s + "\"");
    return std::nullopt;
  }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& v = object_.at(key);
    if (!v.is_string()) {
      report(key, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key, bool required) {
    if (!has(key)) {
      if (required) report(key, "is required");
      return std::nullopt;
    }
    return as_numbers(object_.at(key), field_path(key));
  }

  std::optional<std::vector<double>> as_numbers(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array()) {
      problems_.push_back(where + ": must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number() || !std::isfinite(item.get<double>())) {
        problems_.push_back(where + ": must contain only finite numbers");
        return std::nullopt;
      }
      out.push_back(item.get<double>());
    }
    return out;
  }

  std::vector<std::string>& problems() { return problems_; }

 private:
  const nlohmann::json& object_;
  std::string path_;
  std::vector<std::string>& problems_;
};

}  // namespace qthermo::detail
