#ifndef TEXWARP_ERRORS_HPP
#define TEXWARP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace texwarp {

enum class Errc {
  InvalidArgument,
  NegativeDeterminant,
  SingularValueMismatch,
  RankDeficient,
  DomainError,
  NotPositiveDefinite,
  RankMismatch,
  EmptyInput,
  ConstructionFailed,
  Inconsistent,
  Singular,
  ValidationFailed,
  DegenerateInput,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace texwarp

#endif
