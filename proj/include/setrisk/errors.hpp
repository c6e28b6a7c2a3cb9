#ifndef SETRISK_ERRORS_HPP
#define SETRISK_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace setrisk {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SETRISK_DEFINE_ERROR(Name)                   \
  class Name : public Error {                        \
   public:                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

SETRISK_DEFINE_ERROR(DimensionMismatch);
SETRISK_DEFINE_ERROR(NotACone);
SETRISK_DEFINE_ERROR(EmptySetError);
SETRISK_DEFINE_ERROR(ShapeMismatch);
SETRISK_DEFINE_ERROR(NonpositivePrice);
SETRISK_DEFINE_ERROR(InvalidRates);
SETRISK_DEFINE_ERROR(InvalidEligibleSpace);
SETRISK_DEFINE_ERROR(DegenerateEligibleCone);
SETRISK_DEFINE_ERROR(UnionNotSupported);
SETRISK_DEFINE_ERROR(AxiomViolation);
SETRISK_DEFINE_ERROR(EmptyDualSet);
SETRISK_DEFINE_ERROR(LambdaOutOfRange);
SETRISK_DEFINE_ERROR(InvalidDualVariable);
SETRISK_DEFINE_ERROR(EmptyDualFamily);
SETRISK_DEFINE_ERROR(PreconditionViolated);
SETRISK_DEFINE_ERROR(NoArbitrageViolated);
SETRISK_DEFINE_ERROR(InvalidProcess);
SETRISK_DEFINE_ERROR(InvalidTree);

#undef SETRISK_DEFINE_ERROR

/// Malformed model text. `path` is a JSON pointer into the document, or "line:column".
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& what)
      : Error("ParseError at " + path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Well-formed model describing an invalid market; carries every violated invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error("ValidationError: " + join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace setrisk

#endif  // SETRISK_ERRORS_HPP
