#pragma once

#include <cstdint>

#include "flagrig/flag.hpp"
#include "flagrig/gradedaut.hpp"

namespace flagrig {

/// Deterministic splitmix64 stream; one seed drives every randomized suite so
/// runs are byte-for-byte reproducible.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi], inclusive.
    long next_int(long lo, long hi) {
        return lo + static_cast<long>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool next_bool() { return (next_u64() & 1u) != 0; }

  private:
    uint64_t state_;
};

/// Random rational with |numerator| and denominator bounded by `bound`
/// (bounded coefficients keep exact arithmetic fast in the suites).
Rational random_rational(Rng& rng, long bound = 1000);
Rational random_positive_rational_le_one(Rng& rng, long bound = 1000);

Scalar random_scalar(Rng& rng, Field f, long bound = 1000);
Scalar random_nonzero_scalar(Rng& rng, Field f, long bound = 1000);

LieElement random_lie(Rng& rng, int n, Field f, long bound = 1000);
GroupElement random_group(Rng& rng, int n, Field f, long bound = 1000);
Mat random_invertible(Rng& rng, int n, Field f, long bound = 20);
Mat random_lower_unipotent(Rng& rng, int n, Field f, long bound = 20);

/// Random quaternion automorphism triple, generated as conjugation by a
/// random nonzero quaternion (every valid triple arises this way).
HSpec random_hspec(Rng& rng, Field f);

/// Random certificate in normalized form (lambda_n = 1).
AutCertificate random_certificate(Rng& rng, int n, Field f, long bound = 20);

Flag random_flag_in_chart(Rng& rng, int n, Field f, long bound = 20);
/// Flag with W_1 inside W_{n-1}^+, hence outside the chart.
Flag random_flag_outside_chart(Rng& rng, int n, Field f, long bound = 20);

} // namespace flagrig
