#ifndef PEQ_ERROR_HPP
#define PEQ_ERROR_HPP

#include <stdexcept>
#include <string>

namespace peq {

// Verification failure with a machine-readable code and a first witness.
class AxiomError : public std::runtime_error {
public:
  AxiomError(std::string code, std::string witness)
      : std::runtime_error(code + ": " + witness),
        code_(std::move(code)),
        witness_(std::move(witness)) {}

  const std::string& code() const { return code_; }
  const std::string& witness() const { return witness_; }

private:
  std::string code_;
  std::string witness_;
};

}  // namespace peq

#endif
