#pragma once

#include <stdexcept>
#include <string>

namespace dps {

// Malformed or inconsistent data: unreadable input files, shape mismatches,
// schedules that do not fit the run. CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dps
