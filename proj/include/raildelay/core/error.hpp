#pragma once

#include <stdexcept>
#include <string>

namespace raildelay {

/// Raised for malformed or inconsistent user input (files, configs, flags).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace raildelay
