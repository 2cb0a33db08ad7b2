#pragma once
// Small deterministic utilities shared across the library: a seedable RNG with
// platform-independent output, a 64-bit FNV-1a digest for golden/replay tests,
// an exact dyadic value type for the metric, and a minimal expected-or-error
// result wrapper (std::expected is C++23; we target C++20).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace obsca {

// --- deterministic RNG ------------------------------------------------------
// splitmix64: tiny, well-mixed, and identical on every platform. The standard
// library's engines are portable but its distributions are not, so bounded
// draws are implemented here directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n) by rejection; n must be positive.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % n;
  }

  // Uniform in [lo, hi] inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::uint64_t state_;
};

// --- FNV-1a 64-bit digest ----------------------------------------------------
class Fnv1a {
 public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ull;
    }
  }
  void update(const std::string& s) { update(s.data(), s.size()); }
  std::uint64_t value() const { return hash_; }

  static std::uint64_t of(const std::string& s) {
    Fnv1a h;
    h.update(s);
    return h.value();
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

std::string hex64(std::uint64_t v);

// --- exact dyadic values ------------------------------------------------------
// Represents 0 or 2^(-exp) with exp >= 0. The configuration metric only ever
// takes such values, so all proof-certificate comparisons stay exact.
struct Dyadic {
  bool zero = true;
  int exp = 0;  // k in 2^(-k), k >= 0; meaningful only when !zero

  static Dyadic zero_value() { return {true, 0}; }
  // The value 2^e for a true exponent e <= 0 (so pow2(-3) is 1/8).
  static Dyadic pow2(int e) {
    if (e > 0) throw std::invalid_argument("Dyadic::pow2: exponent must be <= 0");
    return {false, -e};
  }
  bool is_zero() const { return zero; }

  // Larger dyadic = smaller exponent. zero < everything nonzero.
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.zero == b.zero && (a.zero || a.exp == b.exp);
  }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    if (a.zero) return !b.zero;
    if (b.zero) return false;
    return a.exp > b.exp;
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) {
    return a < b || a == b;
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return b <= a; }

  double approx() const;
  std::string to_string() const;  // "0" or "2^-k"
};

// --- minimal expected-or-error -------------------------------------------------
struct Error {
  std::string message;
  // Optional lattice position the error points at (kept as raw ints to avoid
  // a dependency on the grid header).
  bool has_position = false;
  std::int32_t x = 0;
  std::int32_t y = 0;

  static Error at(std::string message, std::int32_t x, std::int32_t y) {
    return Error{std::move(message), true, x, y};
  }
  std::string describe() const {
    if (!has_position) return message;
    return message + " at (" + std::to_string(x) + ", " + std::to_string(y) + ")";
  }
};

template <class T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}        // NOLINT(google-explicit-constructor)
  Result(Error error) : error_(std::move(error)) {}    // NOLINT(google-explicit-constructor)

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw std::runtime_error("Result::value on error: " + error_->message);
    return *value_;
  }
  T& value() & {
    if (!ok()) throw std::runtime_error("Result::value on error: " + error_->message);
    return *value_;
  }
  T&& take() && {
    if (!ok()) throw std::runtime_error("Result::take on error: " + error_->message);
    return std::move(*value_);
  }
  const Error& error() const {
    if (ok()) throw std::runtime_error("Result::error on success");
    return *error_;
  }

 private:
  std::optional<T> value_;
  std::optional<Error> error_;
};

}  // namespace obsca
