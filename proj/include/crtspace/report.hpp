#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace crtspace {

using Json = nlohmann::ordered_json;

// Common wrapper for every machine-readable report the tool emits.
struct ReportEnvelope {
  std::string command;
  Json inputs = Json::object();
  std::optional<std::uint64_t> seed;
  Json results = Json::object();
  std::int64_t elapsed_ms = 0;
  int format_version = 1;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["inputs"] = inputs;
    if (seed)
      j["seed"] = *seed;
    else
      j["seed"] = nullptr;
    j["results"] = results;
    j["elapsed_ms"] = elapsed_ms;
    j["format_version"] = format_version;
    return j;
  }

  // Serialization with the timing field removed; two runs of the same
  // command and seed must agree byte for byte on this form.
  std::string reproducible_dump() const {
    Json j = to_json();
    j.erase("elapsed_ms");
    return j.dump(2);
  }
};

}  // namespace crtspace
