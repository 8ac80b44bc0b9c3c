#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace critl3 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedField : Error {
  using Error::Error;
};

struct GridMismatch : Error {
  using Error::Error;
};

struct InvalidArgument : Error {
  using Error::Error;
};

struct RadiusTooLarge : Error {
  using Error::Error;
};

struct EmptyHistory : Error {
  using Error::Error;
};

struct NonUniformTimeGrid : Error {
  using Error::Error;
};

struct UndefinedRatio : Error {
  using Error::Error;
};

struct HorizonNotFound : Error {
  using Error::Error;
};

struct IterationBlowUp : Error {
  using Error::Error;
};

struct StepRejected : Error {
  StepRejected(const std::string& what, double suggested)
      : Error(what), suggested_dt(suggested) {}
  double suggested_dt;
};

struct ExperimentIncomplete : Error {
  ExperimentIncomplete(const std::string& what, std::string failing_stage)
      : Error(what), stage(std::move(failing_stage)) {}
  std::string stage;
};

struct MisconfiguredFamily : Error {
  using Error::Error;
};

struct UnknownPreset : Error {
  using Error::Error;
};

struct ConfigError : Error {
  explicit ConfigError(std::vector<std::string> v);
  std::vector<std::string> violations;
};

struct OutputError : Error {
  using Error::Error;
};

}  // namespace critl3
