// Small shared utilities: constants, rationals, hashing, parallel map.
#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnlab {

inline constexpr double kPi = 3.14159265358979323846;

// Reduced fraction a/b with b >= 1. Used wherever the math needs p*b in Z
// (cell problems, epsilon-problems, affine slopes).
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_zero() const { return num == 0; }
  Rational negated() const { return Rational(-num, den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  // Parses "a/b" or a plain integer "a".
  static Rational parse(const std::string& text);
};

// FNV-1a, used for deterministic config/table fingerprints.
inline std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ull) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), seed);
}

std::string to_hex(std::uint64_t value);

// Exact round-trip serialization for doubles (hexfloat).
std::string double_to_hex(double value);
double double_from_hex(const std::string& text);

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results are the
// caller's responsibility (write to disjoint slots); order of completion is
// unspecified, assignment of indices is dynamic.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

inline bool is_power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace pnlab
