#include "cpgenus/arith.hpp"

#include "cpgenus/errors.hpp"

namespace cpgenus::arith {

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1 % mod, b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t mod) {
  Int r;
  Int aa = static_cast<unsigned long>(a), mm = static_cast<unsigned long>(mod);
  if (!mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t())) throw DomainError("inverse_mod: not invertible");
  return r.get_ui();
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> f;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    f.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) f.push_back(n);
  return f;
}

std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw DomainError("multiplicative_order: not a unit");
  std::uint64_t ord = p - 1;
  for (auto q : prime_factors(p - 1))
    while (ord % q == 0 && powmod(a, ord / q, p) == 1) ord /= q;
  return ord;
}

std::uint64_t primitive_root(std::uint64_t p) {
  if (!is_prime(p)) throw DomainError("primitive_root: modulus is not prime");
  if (p == 2) return 1;
  for (std::uint64_t g = 2; g < p; ++g)
    if (multiplicative_order(g, p) == p - 1) return g;
  throw InvariantError("primitive_root: none found");
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k <= n; ++k)
    if (is_prime(k)) out.push_back(k);
  return out;
}

}  // namespace cpgenus::arith
