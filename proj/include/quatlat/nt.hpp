#pragma once

// Integer and prime-field helpers shared by the lattice and order code.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace quatlat {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;
using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;

namespace nt {

bool is_probable_prime(const mpz_class& n);

// Full factorization of |n| (n != 0) as ascending (prime, exponent) pairs.
// Trial division up to trial_bound, then Pollard-Brent rho. Throws
// Error(FactoringIncomplete) carrying the cofactor if rho gives up.
std::vector<std::pair<mpz_class, unsigned>> factor(const mpz_class& n,
                                                   unsigned long trial_bound = 1000000);

mpz_class lcm_of_denominators(const QVec& v);

// Fraction-free Gaussian elimination.
mpz_class det(ZMat m);
mpq_class det(const QMat& m);

// Polynomials over F_p, coefficients low to high, no trailing zeros.
using FpPoly = std::vector<std::uint64_t>;

FpPoly fp_reduce(const ZVec& poly, std::uint64_t p);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p);
FpPoly fp_mod(const FpPoly& a, const FpPoly& m, std::uint64_t p);
FpPoly fp_div(const FpPoly& a, const FpPoly& m, std::uint64_t p);
FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint64_t p);

struct FpFactorDegree {
  unsigned multiplicity;  // exponent of the irreducible factor
  unsigned degree;        // degree of the irreducible factor
};

// Multiplicities and degrees of the irreducible factors of f mod p, sorted.
std::vector<FpFactorDegree> fp_factor_degrees(const ZVec& f, std::uint64_t p);

// Product of the distinct irreducible factors of f mod p (monic).
FpPoly fp_squarefree_kernel(const ZVec& f, std::uint64_t p);

// Basis of the left kernel {x : x M = 0} of a rows x cols matrix over F_p,
// returned in reduced echelon form.
std::vector<std::vector<std::uint64_t>> fp_left_kernel(
    const std::vector<std::vector<std::uint64_t>>& m, std::size_t cols, std::uint64_t p);

// Row echelon basis of the span of the given vectors over F_p.
std::vector<std::vector<std::uint64_t>> fp_row_basis(std::vector<std::vector<std::uint64_t>> rows,
                                                     std::uint64_t p);

std::uint64_t fp_inv(std::uint64_t a, std::uint64_t p);
std::uint64_t fp_mod_mpz(const mpz_class& a, std::uint64_t p);

}  // namespace nt
}  // namespace quatlat
