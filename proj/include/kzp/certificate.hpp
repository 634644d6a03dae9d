#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace kzp {

enum class Status { Pass, Fail, NotApplicable, Error };
std::string to_string(Status s);

struct Certificate {
  std::string check;
  nlohmann::json params = nlohmann::json::object();
  Status status = Status::Pass;
  nlohmann::json witness;  // null unless the check failed or errored
  nlohmann::json detail = nlohmann::json::object();
  uint64_t seed = 0;
  std::optional<double> timing_ms;

  bool passed() const { return status == Status::Pass || status == Status::NotApplicable; }
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  nlohmann::json to_json() const;

  void fail_with(nlohmann::json w) {
    status = Status::Fail;
    if (witness.is_null()) witness = std::move(w);
  }
};

inline Certificate make_certificate(std::string name, uint64_t seed = 0) {
  Certificate c;
  c.check = std::move(name);
  c.seed = seed;
  return c;
}

}  // namespace kzp
