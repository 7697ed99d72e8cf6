// Exponent arithmetic modulo a prime q. Every group element in the
// simulated pairing is represented by its exponent, so this is the layer
// all signature algebra bottoms out in.
#pragma once

#include <cstdint>
#include <stdexcept>

namespace aggsig {

bool is_prime_u64(std::uint64_t n);

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  std::uint64_t s = a + b;  // a,b < q <= 2^63, no overflow
  return s >= q ? s - q : s;
}

// A value in Z_q. Arithmetic requires both operands to share q.
class Scalar {
 public:
  Scalar() : value_(0), q_(0) {}
  Scalar(std::uint64_t value, std::uint64_t q) : value_(value % q), q_(q) {}

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return q_; }

  Scalar operator+(const Scalar& o) const {
    check(o);
    return Scalar(add_mod(value_, o.value_, q_), q_);
  }
  Scalar operator-(const Scalar& o) const {
    check(o);
    return Scalar(add_mod(value_, q_ - o.value_, q_), q_);
  }
  Scalar operator*(const Scalar& o) const {
    check(o);
    return Scalar(mul_mod(value_, o.value_, q_), q_);
  }
  Scalar negated() const { return Scalar(value_ == 0 ? 0 : q_ - value_, q_); }

  bool is_zero() const { return value_ == 0; }
  bool operator==(const Scalar& o) const { return value_ == o.value_ && q_ == o.q_; }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

 private:
  void check(const Scalar& o) const {
    if (q_ != o.q_) throw std::invalid_argument("scalar modulus mismatch");
  }
  std::uint64_t value_;
  std::uint64_t q_;
};

}  // namespace aggsig
