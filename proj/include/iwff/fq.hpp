#pragma once
#include <cstdint>
#include <vector>
#include <string>
#include <functional>
#include "iwff/errors.hpp"

namespace iwff {

using i64 = int64_t;
using u64 = uint64_t;
using i128 = __int128;

// Default ceiling for exhaustive enumerations (field elements, point counts,
// monic-polynomial sieves).  Anything above throws EnumerationTooLarge.
constexpr u64 kDefaultEnumCap = 10'000'000;

i64 mod_pow(i64 base, u64 exp, i64 mod);
i64 mod_inv(i64 a, i64 mod);  // inverse mod a prime
bool is_prime(i64 n);

// An element of F_{p^a}: `a` coefficients in [0,p), little-endian in the
// image of x.  Plain data; all arithmetic goes through the owning FqField.
struct FqElem {
    std::vector<i64> c;
    bool operator==(const FqElem&) const = default;
};

// F_q = F_p[x]/(modulus), q = p^a.  The canonical modulus for each (p, a) is
// the first monic irreducible of degree a when coefficient vectors are
// ordered by their base-p integer value (constant coefficient least
// significant).  For a = 1 the modulus is x and elements are residues mod p.
class FqField {
public:
    FqField(i64 p, int a);
    FqField(i64 p, std::vector<i64> modulus);  // monic, validated irreducible

    i64 p() const { return p_; }
    int degree() const { return a_; }
    u64 q() const { return q_; }
    const std::vector<i64>& modulus() const { return mod_; }

    FqElem zero() const;
    FqElem one() const;
    FqElem from_int(i64 n) const;          // image of an integer (prime field)
    FqElem gen() const;                    // image of x
    FqElem element(std::vector<i64> coeffs) const;  // reduced mod p, length a

    bool is_zero(const FqElem& x) const;
    FqElem add(const FqElem& x, const FqElem& y) const;
    FqElem sub(const FqElem& x, const FqElem& y) const;
    FqElem neg(const FqElem& x) const;
    FqElem mul(const FqElem& x, const FqElem& y) const;
    FqElem inv(const FqElem& x) const;     // DivisionByZero on 0
    FqElem pow(const FqElem& x, u64 n) const;

    FqElem frobenius(const FqElem& x) const;   // x^p
    i64 trace_to_prime(const FqElem& x) const; // absolute trace, in [0,p)

    // Quadratic character for odd q: 0 on zero, +1 on nonzero squares,
    // -1 on non-squares.  Unsupported for p = 2.
    int quadratic_character(const FqElem& x) const;

    // Multiplicative order of a nonzero element (divides q-1).
    u64 mult_order(const FqElem& x) const;

    // Enumeration by index: element_from_index(i) for i in [0, q) walks all
    // elements (base-p digits of i).  incr steps an element in place and
    // returns false after wrapping back to zero.
    FqElem element_from_index(u64 idx) const;
    bool incr(FqElem& x) const;
    void check_enum(u64 cap = kDefaultEnumCap) const;

    // If the element lies in the prime field, returns its residue in [0,p).
    // InvalidInput otherwise.
    i64 as_prime_residue(const FqElem& x) const;

    std::string to_string(const FqElem& x) const;

private:
    i64 p_;
    int a_;
    u64 q_;
    std::vector<i64> mod_;  // monic degree a, little-endian, length a+1
    void reduce(std::vector<i64>& v) const;
};

// A compatible embedding F_{p^d} -> F_{p^a} for d | a, fixed by sending the
// small field's generator to the least root (in enumeration order) of the
// small modulus inside the big field.  Commutes with arithmetic and with
// d-fold frobenius structure by construction; tests verify both.
class FqEmbedding {
public:
    FqEmbedding(const FqField& from, const FqField& to,
                u64 cap = kDefaultEnumCap);
    FqElem map(const FqElem& x) const;
    const FqField& from() const { return *from_; }
    const FqField& to() const { return *to_; }

private:
    const FqField* from_;
    const FqField* to_;
    std::vector<FqElem> gen_powers_;  // images of x^0..x^{d-1}
};

// Dense polynomials over F_q, little-endian coefficients.  Used for model
// validation (squarefreeness) and for the monic-irreducible sieve that backs
// the place-count oracle.
struct FqPoly {
    std::vector<FqElem> c;
};

FqPoly fqpoly_make(const FqField& F, std::vector<FqElem> coeffs);
FqPoly fqpoly_from_ints(const FqField& F, const std::vector<i64>& coeffs);
int fqpoly_deg(const FqField& F, const FqPoly& f);  // -1 for zero
FqElem fqpoly_eval(const FqField& F, const FqPoly& f, const FqElem& x);
FqPoly fqpoly_add(const FqField& F, const FqPoly& f, const FqPoly& g);
FqPoly fqpoly_mul(const FqField& F, const FqPoly& f, const FqPoly& g);
FqPoly fqpoly_rem(const FqField& F, FqPoly f, const FqPoly& g);
FqPoly fqpoly_gcd(const FqField& F, FqPoly f, FqPoly g);  // monic gcd
FqPoly fqpoly_derivative(const FqField& F, const FqPoly& f);
bool fqpoly_squarefree(const FqField& F, const FqPoly& f);

}  // namespace iwff
