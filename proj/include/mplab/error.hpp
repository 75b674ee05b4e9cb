#pragma once

#include <stdexcept>
#include <string>

namespace mplab {

// Raised for inputs outside an operation's domain (n = 0, non-coprime pair,
// composite "prime", ...). The CLI maps it to exit status 1.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// factorize() ran out of its effort budget with a composite left over.
class IncompleteFactorization : public DomainError {
public:
    IncompleteFactorization(const std::string& what, std::string cofactor)
        : DomainError(what), cofactor_(std::move(cofactor)) {}

    const std::string& cofactor() const noexcept { return cofactor_; }

private:
    std::string cofactor_;
};

}  // namespace mplab
