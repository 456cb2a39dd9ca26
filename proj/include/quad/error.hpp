#pragma once
#include <stdexcept>
#include <string>
#include <string_view>

namespace quad {

enum class ErrorKind {
  NotDMR,
  NonPositive,
  OutOfRange,
  MalformedRanking,
  InsufficientDevices,
  InvalidInstance,
  DomainError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotDMR: return "NotDMR";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MalformedRanking: return "MalformedRanking";
    case ErrorKind::InsufficientDevices: return "InsufficientDevices";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace quad
