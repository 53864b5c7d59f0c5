#include "wao/numth.hpp"

#include <cstdlib>
#include <stdexcept>

#include "wao/exactlat.hpp"

namespace wao {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long long> primes_up_to(long long bound) {
  std::vector<long long> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(bound) + 1, true);
  for (long long i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (long long j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

std::map<long long, int> factorize(long long n) {
  if (n == 0) throw PreconditionError("factorize: zero");
  std::map<long long, int> out;
  unsigned long long m = n < 0 ? 0ull - static_cast<unsigned long long>(n) : n;
  for (unsigned long long d = 2; d * d <= m; ++d)
    while (m % d == 0) {
      ++out[static_cast<long long>(d)];
      m /= d;
    }
  if (m > 1) ++out[static_cast<long long>(m)];
  return out;
}

int valuation(long long n, long long p) {
  if (n == 0) throw PreconditionError("valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

long long mod(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long powmod(long long b, long long e, long long m) {
  if (m == 1) return 0;
  __int128 r = 1, x = mod(b, m);
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<long long>(r);
}

long long inverse_mod(long long a, long long m) {
  long long r0 = mod(a, m), r1 = m, s0 = 1, s1 = 0;
  while (r1 != 0) {
    long long q = r0 / r1, t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw PreconditionError("inverse_mod: not invertible");
  return mod(s0, m);
}

long long multiplicative_order(long long a, long long m) {
  if (m == 1) return 1;
  long long x = mod(a, m), k = 1;
  while (x != 1) {
    x = static_cast<long long>(static_cast<__int128>(x) * mod(a, m) % m);
    ++k;
    if (k > m) throw PreconditionError("multiplicative_order: not a unit");
  }
  return k;
}

int legendre(long long a, long long p) {
  long long r = mod(a, p);
  if (r == 0) return 0;
  return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

int kronecker(long long a, long long n) {
  if (n <= 0) throw PreconditionError("kronecker: n must be positive");
  int result = 1;
  for (auto [p, e] : factorize(n)) {
    int s;
    if (p == 2) {
      if (a % 2 == 0)
        s = 0;
      else {
        long long r = mod(a, 8);
        s = (r == 1 || r == 7) ? 1 : -1;
      }
    } else {
      s = legendre(a, p);
    }
    for (int i = 0; i < e; ++i) result *= s;
  }
  return result;
}

long long least_nonresidue(long long p) {
  for (long long u = 2; u < p; ++u)
    if (legendre(u, p) == -1) return u;
  throw PreconditionError("least_nonresidue: no nonresidue");
}

long long primitive_root(long long p) {
  if (p == 2) return 1;
  auto f = factorize(p - 1);
  for (long long g = 2; g < p; ++g) {
    bool ok = true;
    for (auto [q, e] : f)
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  throw PreconditionError("primitive_root: none found");
}

long long squarefree_part(long long n) {
  if (n == 0) throw PreconditionError("squarefree_part: zero");
  long long r = n < 0 ? -1 : 1;
  for (auto [p, e] : factorize(n))
    if (e % 2) r *= p;
  return r;
}

int hilbert_symbol(long long a, long long b, long long v) {
  if (a == 0 || b == 0) throw PreconditionError("hilbert_symbol: arguments must be nonzero");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (!is_prime(v)) throw PreconditionError("hilbert_symbol: place must be 0 or a prime");
  const long long p = v;
  int alpha = valuation(a, p), beta = valuation(b, p);
  long long u = a, w = b;
  for (int i = 0; i < alpha; ++i) u /= p;
  for (int i = 0; i < beta; ++i) w /= p;
  if (p != 2) {
    int s = 1;
    if ((alpha % 2) && (beta % 2) && mod(p, 4) == 3) s = -s;
    if (beta % 2) s *= legendre(u, p);
    if (alpha % 2) s *= legendre(w, p);
    return s;
  }
  auto eps = [](long long x) { return mod(x, 4) == 3 ? 1 : 0; };
  auto omega = [](long long x) {
    long long r = mod(x, 8);
    return (r == 3 || r == 5) ? 1 : 0;
  };
  int e = eps(u) * eps(w) + (alpha % 2) * omega(w) + (beta % 2) * omega(u);
  return e % 2 ? -1 : 1;
}

}  // namespace wao
