#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riskq/distortion.hpp"
#include "riskq/distribution.hpp"
#include "riskq/young.hpp"

namespace riskq::io {

// ---- parsing (schemas documented in the README) ---------------------------
Distribution parseDistribution(const std::string& json_text);
DistortionFn parseDistortion(const std::string& json_text);
YoungFn parseYoung(const std::string& json_text);

// One sample per line, optional single header line; builds an empirical law.
Distribution parseCsvSamples(const std::string& csv_text);

// ---- deterministic JSON output --------------------------------------------
// Keys are emitted in sorted order and doubles with 17 significant digits,
// so identical inputs produce byte-identical output.

std::string formatDouble(double v);

class JsonArray;

class JsonObject {
 public:
  JsonObject& set(const std::string& key, double v);
  JsonObject& set(const std::string& key, bool v);
  JsonObject& set(const std::string& key, const char* v);
  JsonObject& set(const std::string& key, const std::string& v);
  JsonObject& set(const std::string& key, std::int64_t v);
  JsonObject& set(const std::string& key, std::uint64_t v);
  JsonObject& set(const std::string& key, const JsonObject& v);
  JsonObject& set(const std::string& key, const JsonArray& v);
  std::string dump() const;

 private:
  std::map<std::string, std::string> fields_;  // pre-rendered values
};

class JsonArray {
 public:
  JsonArray& push(double v);
  JsonArray& push(const std::string& v);
  JsonArray& push(const JsonObject& v);
  JsonArray& push(const JsonArray& v);
  std::string dump() const;

 private:
  std::vector<std::string> items_;
};

}  // namespace riskq::io
