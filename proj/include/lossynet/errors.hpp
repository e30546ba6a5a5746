#pragma once

#include <stdexcept>
#include <string>

namespace lossynet {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration text could not be parsed or validated. Carries the
/// offending section and key when known.
class ConfigError : public Error {
 public:
  ConfigError(std::string section, std::string key, const std::string& what)
      : Error(format(section, key, what)), section_(std::move(section)), key_(std::move(key)) {}

  const std::string& section() const noexcept { return section_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& section, const std::string& key,
                            const std::string& what) {
    std::string out;
    if (!section.empty()) out += "[" + section + "]";
    if (!section.empty() && !key.empty()) out += " ";
    out += key;
    if (!out.empty()) out += ": ";
    return out + what;
  }

  std::string section_;
  std::string key_;
};

/// A numerical procedure failed or the requested quantity does not exist.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An input violated a structural precondition the algorithm depends on.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lossynet
