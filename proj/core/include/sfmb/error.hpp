#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfmb {

/// Invalid scenario or plan input. `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A realization produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::size_t cell, std::size_t step, std::string variable)
      : std::runtime_error("non-finite " + variable + " at cell " + std::to_string(cell) +
                           ", step " + std::to_string(step)),
        cell_(cell),
        step_(step),
        variable_(std::move(variable)) {}

  std::size_t cell() const noexcept { return cell_; }
  std::size_t step() const noexcept { return step_; }
  const std::string& variable() const noexcept { return variable_; }

 private:
  std::size_t cell_;
  std::size_t step_;
  std::string variable_;
};

}  // namespace sfmb
