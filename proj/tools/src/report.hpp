#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "itrd/errors.hpp"

namespace itrd::cli {

// Machine-readable result document. nlohmann's default object keeps keys
// lexicographically sorted, which gives the stable layout the integration
// tests byte-compare. Wall time is real measured time, so it goes only to
// the terminal copy; files written with --out stay deterministic.
struct MetricsReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json series = nlohmann::json::object();  // demo only
  double wall_time_s = 0.0;

  nlohmann::json to_json(bool include_wall_time) const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["results"] = results;
    if (!series.empty()) doc["series"] = series;
    if (include_wall_time) doc["wall_time_s"] = wall_time_s;
    return doc;
  }

  void write_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw itrd::ParseError(path + ": cannot open file for writing");
    out << to_json(false).dump(2) << '\n';
    out.flush();
    if (!out) throw itrd::ParseError(path + ": write failed");
  }
};

}  // namespace itrd::cli
