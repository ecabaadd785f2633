// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The stin authors
#pragma once

#include <stdexcept>
#include <string>

namespace stin {

// Bad configuration value or schema problem. field() names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stin
