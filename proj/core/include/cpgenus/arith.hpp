#pragma once

#include <cstdint>
#include <vector>

#include "cpgenus/linalg.hpp"

namespace cpgenus::arith {

using linalg::Int;

bool is_prime(const Int& n);
bool is_prime(std::uint64_t n);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t mod);
// Smallest primitive root modulo the prime p (1 for p = 2).
std::uint64_t primitive_root(std::uint64_t p);
// Multiplicative order of a modulo the prime p.
std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p);
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace cpgenus::arith
