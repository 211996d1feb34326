#include "riskq/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "riskq/fixtures.hpp"

namespace riskq::io {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw ValidationError(std::string(what) + ": malformed JSON");
  if (!j.is_object())
    throw ValidationError(std::string(what) + ": expected a JSON object");
  return j;
}

double needNum(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(std::string(what) + ": missing numeric field '" +
                          key + "'");
  return j[key].get<double>();
}

std::vector<double> needVec(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array())
    throw ValidationError(std::string(what) + ": missing array field '" + key +
                          "'");
  std::vector<double> out;
  for (const auto& e : j[key]) {
    if (!e.is_number())
      throw ValidationError(std::string(what) + ": non-numeric entry in '" +
                            key + "'");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string needType(const json& j, const char* what) {
  if (!j.contains("type") || !j["type"].is_string())
    throw ValidationError(std::string(what) + ": missing 'type'");
  return j["type"].get<std::string>();
}

}  // namespace

Distribution parseDistribution(const std::string& text) {
  json j = parse(text, "distribution");
  std::string type = needType(j, "distribution");
  if (type == "empirical")
    return Distribution::empirical(needVec(j, "samples", "empirical"));
  if (type == "discrete")
    return Distribution::discrete(needVec(j, "points", "discrete"),
                                  needVec(j, "probs", "discrete"));
  if (type == "uniform")
    return Distribution::uniform(needNum(j, "a", type.c_str()),
                                 needNum(j, "b", type.c_str()));
  if (type == "exponential")
    return Distribution::exponential(needNum(j, "rate", type.c_str()));
  if (type == "pareto")
    return Distribution::pareto(needNum(j, "scale", type.c_str()),
                                needNum(j, "shape", type.c_str()));
  if (type == "normal")
    return Distribution::normal(needNum(j, "mean", type.c_str()),
                                needNum(j, "sd", type.c_str()));
  if (type == "two_point")
    return Distribution::twoPoint(needNum(j, "x0", type.c_str()),
                                  needNum(j, "x1", type.c_str()),
                                  needNum(j, "p", type.c_str()));
  if (type == "quantile_pw") {
    std::string interp = j.value("interp", std::string("step"));
    if (interp != "step" && interp != "linear")
      throw ValidationError("quantile_pw: interp must be 'step' or 'linear'");
    // array entries may be the strings "inf"/"-inf" at the step edges
    std::vector<double> values;
    if (!j.contains("values") || !j["values"].is_array())
      throw ValidationError("quantile_pw: missing array field 'values'");
    for (const auto& e : j["values"]) {
      if (e.is_number()) values.push_back(e.get<double>());
      else if (e.is_string() && e.get<std::string>() == "inf") values.push_back(kInf);
      else if (e.is_string() && e.get<std::string>() == "-inf") values.push_back(-kInf);
      else throw ValidationError("quantile_pw: bad value entry");
    }
    return Distribution::piecewiseQuantile(
        needVec(j, "breaks", "quantile_pw"), std::move(values),
        interp == "step" ? QuantileInterp::Step : QuantileInterp::Linear);
  }
  if (type == "fixture") {
    std::string name = j.value("name", std::string());
    if (name == "cone_x") return fixtures::coneX();
    if (name == "cone_xy") return fixtures::coneXY();
    throw ValidationError("fixture: unknown name '" + name + "'");
  }
  throw ValidationError("distribution: unknown type '" + type + "'");
}

DistortionFn parseDistortion(const std::string& text) {
  json j = parse(text, "distortion");
  std::string type = needType(j, "distortion");
  if (type == "identity") return DistortionFn::identity();
  if (type == "var") return DistortionFn::dirac(needNum(j, "beta", "var"));
  if (type == "tvar") return DistortionFn::tvarClamp(needNum(j, "alpha", "tvar"));
  if (type == "power") return DistortionFn::power(needNum(j, "gamma", "power"));
  if (type == "example_cone") return DistortionFn::exampleCone();
  if (type == "example_fatou") return DistortionFn::exampleFatou();
  if (type == "mixture") {
    std::vector<DistortionAtom> atoms;
    if (j.contains("atoms")) {
      for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2)
          throw ValidationError("mixture: atoms must be [location, mass] pairs");
        atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
    }
    std::vector<DistortionSegment> segs;
    if (j.contains("segments")) {
      for (const auto& s : j["segments"]) {
        DistortionSegment seg{needNum(s, "lo", "segment"),
                              needNum(s, "hi", "segment"),
                              {0, 0, 0, 0}};
        auto coeffs = needVec(s, "coeffs", "segment");
        if (coeffs.size() > 4)
          throw ValidationError("segment: density degree must be <= 3");
        for (size_t i = 0; i < coeffs.size(); ++i) seg.coef[i] = coeffs[i];
        segs.push_back(seg);
      }
    }
    bool concave = j.value("concave", false);
    return DistortionFn::mixture(std::move(atoms), std::move(segs), concave);
  }
  throw ValidationError("distortion: unknown type '" + type + "'");
}

YoungFn parseYoung(const std::string& text) {
  json j = parse(text, "young");
  std::string type = needType(j, "young");
  if (type == "identity") return YoungFn::identity();
  if (type == "power") return YoungFn::power(needNum(j, "c", "power"));
  if (type == "pwlinear")
    return YoungFn::piecewiseLinear(needVec(j, "kinks", "pwlinear"),
                                    needVec(j, "slopes", "pwlinear"));
  if (type == "expm1") return YoungFn::expMinusOne();
  throw ValidationError("young: unknown type '" + type + "'");
}

Distribution parseCsvSamples(const std::string& csv_text) {
  std::vector<double> samples;
  std::istringstream in(csv_text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    try {
      size_t pos = 0;
      double v = std::stod(line, &pos);
      while (pos < line.size() && line[pos] == ' ') ++pos;
      if (pos != line.size()) throw std::invalid_argument("trailing");
      samples.push_back(v);
    } catch (const std::exception&) {
      if (first) {  // a single header line is allowed
        first = false;
        continue;
      }
      throw ValidationError("csv: unparsable sample line: " + line);
    }
    first = false;
  }
  return Distribution::empirical(std::move(samples));
}

// ---------------------------------------------------------------------------

std::string formatDouble(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string quote(const std::string& s) {
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
  out += '"';
  return out;
}
}  // namespace

JsonObject& JsonObject::set(const std::string& key, double v) {
  fields_[key] = formatDouble(v);
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, bool v) {
  fields_[key] = v ? "true" : "false";
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, const char* v) {
  fields_[key] = quote(v);
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, const std::string& v) {
  fields_[key] = quote(v);
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, std::int64_t v) {
  fields_[key] = std::to_string(v);
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, std::uint64_t v) {
  fields_[key] = std::to_string(v);
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, const JsonObject& v) {
  fields_[key] = v.dump();
  return *this;
}
JsonObject& JsonObject::set(const std::string& key, const JsonArray& v) {
  fields_[key] = v.dump();
  return *this;
}

std::string JsonObject::dump() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : fields_) {
    if (!first) out += ',';
    first = false;
    out += quote(k);
    out += ':';
    out += v;
  }
  out += '}';
  return out;
}

JsonArray& JsonArray::push(double v) {
  items_.push_back(formatDouble(v));
  return *this;
}
JsonArray& JsonArray::push(const std::string& v) {
  items_.push_back(quote(v));
  return *this;
}
JsonArray& JsonArray::push(const JsonObject& v) {
  items_.push_back(v.dump());
  return *this;
}
JsonArray& JsonArray::push(const JsonArray& v) {
  items_.push_back(v.dump());
  return *this;
}

std::string JsonArray::dump() const {
  std::string out = "[";
  for (size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ',';
    out += items_[i];
  }
  out += ']';
  return out;
}

}  // namespace riskq::io
