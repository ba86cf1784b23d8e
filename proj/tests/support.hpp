#pragma once

#include <cstdint>
#include <random>

#include "ocular/image.hpp"

namespace ocular::test {

inline Bgr8Image uniform(int w, int h, Pixel3 bgr) { return Bgr8Image(w, h, bgr); }

inline BinaryMask random_mask(int w, int h, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  return BinaryMask::from_predicate(w, h, [&](int, int) { return coin(rng); });
}

}  // namespace ocular::test

// Asserts that `expr` throws ocular::Error carrying `expected`.
#define CHECK_ERROR_CODE(expr, expected)                                   \
  do {                                                                     \
    bool thrown_ = false;                                                  \
    try {                                                                  \
      (void)(expr);                                                        \
    } catch (const ::ocular::Error& e_) {                                  \
      thrown_ = true;                                                      \
      CHECK_MESSAGE(e_.code() == (expected), ::ocular::to_string(e_.code())); \
    }                                                                      \
    CHECK_MESSAGE(thrown_, "expected " #expected);                         \
  } while (0)
