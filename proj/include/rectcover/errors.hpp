#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rectcover {

// Four entries (r1,c1) (r1,c2) (r2,c1) (r2,c2) that are all zero, r1<r2, c1<c2.
struct ZeroBlockWitness {
    std::size_t r1 = 0;
    std::size_t r2 = 0;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    friend bool operator==(const ZeroBlockWitness&, const ZeroBlockWitness&) = default;
};

// A structural property the construction guarantees was violated. Seeing this
// on a built instance means an implementation bug, not bad input.
class structural_error : public std::runtime_error {
public:
    structural_error(const std::string& msg, ZeroBlockWitness w)
        : std::runtime_error(msg), witness(w) {}
    ZeroBlockWitness witness;
};

// A cover that was planned with a sufficient primorial failed verification.
class cover_verification_error : public std::runtime_error {
public:
    cover_verification_error(const std::string& msg, std::size_t r, std::size_t c)
        : std::runtime_error(msg), row(r), col(c) {}
    std::size_t row;
    std::size_t col;
};

// Input exceeds a configured size guard; caller should degrade, not crash.
class size_guard_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Maximal-rectangle enumeration outgrew its cap.
class enumeration_overflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rectcover
