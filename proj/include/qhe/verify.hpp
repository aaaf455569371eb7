#ifndef QHE_VERIFY_HPP
#define QHE_VERIFY_HPP

#include <stdexcept>
#include <string>

/// Self-check suites behind the CLI's --verify flag. Each suite re-derives a
/// module's core invariants at small fixed sizes (at most m = d = 3) in well
/// under a second, throwing VerificationError on the first violation.
namespace qhe::verify {

class VerificationError : public std::runtime_error {
  public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

void verify_fock();
void verify_crypto();
void verify_evaluate();
void verify_secinfo();

/// All four suites in dependency order.
void verify_all();

}  // namespace qhe::verify

#endif
