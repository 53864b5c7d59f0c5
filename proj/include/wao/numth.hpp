#pragma once

#include <map>
#include <vector>

namespace wao {

// Elementary arithmetic over Z. Inputs are machine integers; products that
// could overflow go through __int128.

bool is_prime(long long n);
std::vector<long long> primes_up_to(long long bound);
/// Prime factorization of |n| (n != 0), ascending primes.
std::map<long long, int> factorize(long long n);
int valuation(long long n, long long p);
long long powmod(long long b, long long e, long long m);
long long mod(long long a, long long m);
long long inverse_mod(long long a, long long m);
/// Multiplicative order of a modulo m (gcd(a, m) = 1).
long long multiplicative_order(long long a, long long m);

/// Legendre symbol (a|p) for an odd prime p; 0 if p | a.
int legendre(long long a, long long p);
/// Kronecker symbol (a|n), n > 0.
int kronecker(long long a, long long n);
long long least_nonresidue(long long p);
long long primitive_root(long long p);
/// Squarefree part, keeping the sign.
long long squarefree_part(long long n);

/// Hilbert symbol (a, b)_v for v = 0 (the real place) or a prime.
int hilbert_symbol(long long a, long long b, long long v);

}  // namespace wao
