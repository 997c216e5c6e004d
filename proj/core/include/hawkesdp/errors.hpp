#pragma once

#include <stdexcept>
#include <string>

namespace hawkesdp {

// Linear-algebra or sampling breakdowns: singular systems, failed power
// iteration, non-stationary models. The CLI maps this to exit code 2.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user input: malformed files, inconsistent configuration. Exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hawkesdp
