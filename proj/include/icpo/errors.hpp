#pragma once

#include <stdexcept>
#include <string>

namespace icpo {

struct InvalidResponse : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidLogProb : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyGroup : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidTemperature : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidTau : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidOmega : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidStep : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct InvalidGroupSize : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EmptyBatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidNoise : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& message)
      : std::runtime_error("config key '" + key + "': " + message), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace icpo
