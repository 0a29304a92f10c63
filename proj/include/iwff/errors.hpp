#pragma once
#include <stdexcept>
#include <string>
#include <cstdint>

namespace iwff {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-contract input (bad modulus, reducible polynomial given
// as irreducible, singular curve model, mismatched contexts, ...).
struct InvalidInput : Error {
    using Error::Error;
};

// A requested exhaustive enumeration would exceed the configured cap.
struct EnumerationTooLarge : Error {
    EnumerationTooLarge(const std::string& what, uint64_t size, uint64_t cap)
        : Error(what + ": enumeration size " + std::to_string(size) +
                " exceeds cap " + std::to_string(cap)),
          size(size), cap(cap) {}
    uint64_t size, cap;
};

struct DivisionByZero : Error {
    using Error::Error;
};

// A result is indistinguishable from zero (or otherwise uncertifiable) at the
// working precision.  `bound` is the certified lower bound on the valuation,
// in uniformizer units.
struct PrecisionLoss : Error {
    PrecisionLoss(const std::string& msg, int64_t bound)
        : Error(msg + " (valuation >= " + std::to_string(bound) +
                " uniformizer units)"),
          bound(bound) {}
    int64_t bound;
};

// Hensel lifting preconditions fail (no simple root, p=2 strong condition
// violated, repeated unit root mod p, non-monic input, ...).
struct LiftFails : Error {
    using Error::Error;
};

// The abelian variety is not ordinary, or its unit-root factor does not split
// into linear factors over the chosen coefficient ring.
struct NotOrdinary : Error {
    using Error::Error;
};

// An element expected to be a unit of the group ring / series ring is not.
struct NotAUnit : Error {
    using Error::Error;
};

// Series truncation too short to certify a Weierstrass degree or similar.
struct InsufficientTruncation : Error {
    using Error::Error;
};

// An evaluation hit a genuine pole, or a denominator could not be certified
// nonzero at the working precision.  `genuine` distinguishes the two when the
// caller supplied exact data.
struct PoleOrPrecision : Error {
    PoleOrPrecision(const std::string& msg, bool genuine, int64_t bound)
        : Error(msg), genuine(genuine), bound(bound) {}
    bool genuine;
    int64_t bound;
};

// Point counts inconsistent with the claimed model (functional-equation or
// recount mismatch).
struct BadModel : Error {
    using Error::Error;
};

// A presentation determinant is indistinguishable from zero at the working
// precision, so the module cannot be certified torsion.
struct NotTorsionAtPrecision : Error {
    explicit NotTorsionAtPrecision(int64_t bound)
        : Error("determinant indistinguishable from zero at precision"
                " (valuation >= " + std::to_string(bound) + ")"),
          bound(bound) {}
    int64_t bound;
};

// A characteristic-element factor fits none of the recognized part types at
// the working precision.  `index` points at the offending factor.
struct Unclassified : Error {
    Unclassified(const std::string& msg, int index)
        : Error(msg + " (factor " + std::to_string(index) + ")"), index(index) {}
    int index;
};

// A configuration asks for something outside the supported v1 surface.
struct Unsupported : Error {
    using Error::Error;
};

// A chosen family of submodules is not stable under the system maps.
struct InvalidSubmoduleFamily : Error {
    using Error::Error;
};

}  // namespace iwff
