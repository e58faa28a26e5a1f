#pragma once

#include <stdexcept>
#include <string>

namespace spin7 {

enum class ErrorKind { Input, Domain, Derivation, Integration, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error input_error(const std::string& m) { return Error(ErrorKind::Input, m); }
inline Error domain_error(const std::string& m) { return Error(ErrorKind::Domain, m); }
inline Error derivation_error(const std::string& m) { return Error(ErrorKind::Derivation, m); }
inline Error internal_error(const std::string& m) { return Error(ErrorKind::Internal, m); }

}  // namespace spin7
