#include <random>

#include "doctest.h"
#include "ocular/colorspace.hpp"
#include "ocular/phantom.hpp"
#include "ocular/redness.hpp"
#include "support.hpp"

using namespace ocular;
using namespace ocular::redness;

TEST_SUITE("redness") {
  TEST_CASE("score endpoints and midpoint") {
    CHECK(redness_score(120, 4).score == 0.0);
    CHECK(redness_score(150, 4).score == 10.0);
    CHECK(redness_score(135, 0).score == doctest::Approx(5.0));
  }

  TEST_CASE("score bounds at 135 with sigma 6") {
    const ScoreBounds s = redness_score(135, 6);
    CHECK(s.score == doctest::Approx(5.0));
    CHECK(s.lo == doctest::Approx(3.0));
    CHECK(s.hi == doctest::Approx(7.0));
  }

  TEST_CASE("triage bands") {
    const Triage mild = redness_triage(3.66);
    CHECK(mild.band == Band::Mild);
    CHECK(mild.label == "mild");
    CHECK(mild.guidance == "monitor");
    CHECK(redness_triage(0.0).band == Band::Normal);
    CHECK(redness_triage(2.05).band == Band::Normal);
    CHECK(redness_triage(2.06).band == Band::Mild);
    CHECK(redness_triage(4.05).band == Band::Mild);
    CHECK(redness_triage(7.05).band == Band::Moderate);
    CHECK(redness_triage(7.06).band == Band::Severe);
    CHECK(redness_triage(10.0).band == Band::Severe);
  }

  TEST_CASE("score is monotone, bounded by its interval and saturates") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> a(100, 170), s(0, 15);
    for (int i = 0; i < 500; ++i) {
      const double a1 = a(rng), a2 = a(rng), sigma = s(rng);
      const ScoreBounds b1 = redness_score(a1, sigma), b2 = redness_score(a2, sigma);
      if (a1 <= a2) CHECK(b1.score <= b2.score);
      CHECK(b1.lo <= b1.score);
      CHECK(b1.score <= b1.hi);
    }
    for (double eps : {1e-9, 0.5, 30.0}) {
      CHECK(redness_score(120 - eps, 0).score == 0.0);
      CHECK(redness_score(150 + eps, 0).score == 10.0);
    }
  }

  TEST_CASE("patch of known a is recovered within one count") {
    for (double target : {125.0, 135.0, 145.0}) {
      const Pixel3 patch = phantom::lab_to_bgr({88.0, target - 128.0, 0.0});
      Bgr8Image img(40, 30, Pixel3{40, 40, 40});
      for (int y = 5; y < 25; ++y)
        for (int x = 5; x < 35; ++x) img(x, y) = patch;
      const RednessResult r = redness_analyze(img);
      CHECK(std::abs(r.weighted_mean_a - target) <= 1.0);
      CHECK(r.mask_pixels == 600);
      CHECK(r.sigma_a == 0.0);
    }
  }

  TEST_CASE("weighting by luminance") {
    // Two bright tones with different a; the brighter one pulls the mean.
    const Pixel3 p1 = phantom::lab_to_bgr({95.0, 2.0, 0.0});
    const Pixel3 p2 = phantom::lab_to_bgr({70.0, 20.0, 0.0});
    Bgr8Image img(40, 10, Pixel3{20, 20, 20});
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 20; ++x) img(x, y) = x < 10 ? p1 : p2;
    const Lab8Image lab = colorspace::bgr_to_lab8(img);
    const Pixel3 l1 = lab(0, 0), l2 = lab(19, 0);
    const RednessResult r = redness_analyze(img);
    const double expect = (double(l1.c0) * l1.c1 + double(l2.c0) * l2.c1) / (double(l1.c0) + l2.c0);
    REQUIRE(r.mask_pixels == 200);
    CHECK(r.weighted_mean_a == doctest::Approx(expect));
    const double plain = (l1.c1 + l2.c1) / 2.0;
    CHECK(r.sigma_a == doctest::Approx(std::sqrt(((l1.c1 - expect) * (l1.c1 - expect) +
                                                  (l2.c1 - expect) * (l2.c1 - expect)) / 2.0)));
    CHECK(r.weighted_mean_a != doctest::Approx(plain));
  }

  TEST_CASE("too little sclera is rejected") {
    Bgr8Image img(20, 20, Pixel3{30, 30, 30});
    for (int x = 0; x < 7; ++x)
      for (int y = 0; y < 7; ++y) img(x, y) = Pixel3{240, 240, 240};
    CHECK_ERROR_CODE(redness_analyze(img), ErrorCode::InsufficientSclera);
  }
}
