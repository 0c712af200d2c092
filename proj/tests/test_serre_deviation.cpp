#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mertens/errors.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/serre_deviation.hpp"

using namespace mertens;

TEST_CASE("b_deviation examples") {
  CHECK(b_deviation(1.0, 101) == 0.0);
  CHECK(b_deviation(0.8, 5) == doctest::Approx(-0.44721).epsilon(1e-5));
  CHECK(b_deviation(1.2, 5) == doctest::Approx(0.44721).epsilon(1e-5));
}

TEST_CASE("closed_form_b examples with exact-count oracles") {
  const double r5 = std::sqrt(5.0);
  CHECK(closed_form_b(VarietySpec::proj(1), 5) == doctest::Approx(1.0 / r5).epsilon(1e-14));
  CHECK(closed_form_b(VarietySpec::proj(1), 5) == doctest::Approx(b_deviation(6.0 / 5.0, 5)).epsilon(1e-14));
  CHECK(closed_form_b(VarietySpec::affine(9), 13) == 0.0);
  CHECK(closed_form_b(VarietySpec::gl(2), 5) == doctest::Approx(-0.51877).epsilon(1e-5));
  CHECK(closed_form_b(VarietySpec::gl(2), 5) == doctest::Approx(b_deviation(480.0 / 625.0, 5)).epsilon(1e-14));
  CHECK(closed_form_b(VarietySpec::sl(2), 5) == doctest::Approx(-0.089443).epsilon(1e-5));
  CHECK(closed_form_b(VarietySpec::sl(2), 5) == doctest::Approx(b_deviation(120.0 / 125.0, 5)).epsilon(1e-14));
  CHECK(closed_form_b(VarietySpec::gl(1), 5) == doctest::Approx(-1.0 / r5).epsilon(1e-14));
}

TEST_CASE("closed forms exist only for the supported families") {
  CHECK(has_closed_form_b(VarietySpec::proj(3)));
  CHECK(has_closed_form_b(VarietySpec::gl(2)));
  CHECK_FALSE(has_closed_form_b(VarietySpec::gl(3)));
  CHECK_FALSE(has_closed_form_b(VarietySpec::sl(3)));
  CHECK_FALSE(has_closed_form_b(VarietySpec::circle()));
  CHECK_THROWS_AS(closed_form_b(VarietySpec::sp(2), 7), UnsupportedError);
  CHECK_THROWS_AS(closed_form_b(VarietySpec::elliptic(1, 1), 7), UnsupportedError);
}

TEST_CASE("generic path equals closed forms for 5 <= p <= 10^4, with signs") {
  const VarietySpec specs[] = {VarietySpec::proj(1), VarietySpec::proj(2), VarietySpec::proj(4),
                               VarietySpec::affine(1), VarietySpec::affine(3), VarietySpec::gl(1),
                               VarietySpec::gl(2), VarietySpec::sl(2)};
  for (const auto& spec : specs) {
    const auto report = scan_deviations(spec, 1e4);
    for (const auto& s : report.samples) {
      if (s.p < 5) continue;
      CHECK(std::fabs(s.b - closed_form_b(spec, s.p)) < 1e-10);
    }
    const auto n = report.samples.size();
    if (std::holds_alternative<variety::Projective>(spec.kind())) CHECK(report.signs.positive == n);
    if (std::holds_alternative<variety::Affine>(spec.kind())) CHECK(report.signs.zero == n);
    if (!std::holds_alternative<variety::Projective>(spec.kind()) &&
        !std::holds_alternative<variety::Affine>(spec.kind())) {
      CHECK(report.signs.negative == n);
    }
  }
}

TEST_CASE("defining identity ratio = 1 + b / sqrt(p)") {
  for (const auto& spec : {VarietySpec::gl(3), VarietySpec::sp(2), VarietySpec::circle(), VarietySpec::elliptic(2, 3)}) {
    for (const auto& s : scan_deviations(spec, 5000).samples) {
      CHECK(std::fabs(s.ratio - (1.0 + s.b / std::sqrt(static_cast<double>(s.p)))) <= 1e-15 * s.ratio);
    }
  }
}

TEST_CASE("scan_deviations examples") {
  const auto affine = scan_deviations(VarietySpec::affine(2), 100);
  CHECK(affine.empirical_B == 0.0);
  CHECK(affine.signs.zero == 25);

  const auto gl1 = scan_deviations(VarietySpec::gl(1), 1e4);
  CHECK(gl1.empirical_B == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(gl1.samples.front().p == 2);
  CHECK(std::fabs(gl1.samples.front().b) == gl1.empirical_B);
  CHECK(gl1.signs.negative == gl1.samples.size());

  CHECK_THROWS_AS(scan_deviations(VarietySpec::gl(1), 4), std::invalid_argument);
}

TEST_CASE("synthetic unbounded deviation") {
  CHECK(synthetic_unbounded_b(0, 2) == doctest::Approx(1.12246).epsilon(1e-5));
  CHECK(synthetic_unbounded_b(0, 1'000'003) == doctest::Approx(10.0).epsilon(1e-5));
  CHECK(synthetic_unbounded_b(0, 7) == synthetic_unbounded_b(5, 7));
  // Generic definition with A(p) = p^d + p^(d - 1/3).
  for (unsigned d : {0u, 1u, 3u}) {
    for (std::uint64_t p : {2ull, 13ull, 1009ull}) {
      const double pd = std::pow(static_cast<double>(p), d);
      const double A = pd + std::pow(static_cast<double>(p), d - 1.0 / 3.0);
      CHECK(b_deviation(A / pd, p) == doctest::Approx(synthetic_unbounded_b(d, p)).epsilon(1e-10));
    }
  }
  const auto report = scan_synthetic(2, 1000);
  CHECK(report.tag == "synthetic:2");
  CHECK(report.signs.positive == report.samples.size());
}

TEST_CASE("ec_b_and_theta examples") {
  const auto s = ec_b_and_theta(EcCurve(1, 1), 5);
  CHECK(*s.trace == -3);
  CHECK(*s.theta == doctest::Approx(2.306111).epsilon(1e-6));
  CHECK(*s.theta == doctest::Approx(std::acos(-3.0 / (2.0 * std::sqrt(5.0)))).epsilon(1e-15));
  CHECK(s.b == doctest::Approx(4.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(s.ratio == doctest::Approx(9.0 / 5.0).epsilon(1e-15));

  const auto t = ec_b_and_theta(EcCurve(1, 0), 7);
  CHECK(*t.trace == 0);
  CHECK(*t.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(t.b == doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));

  CHECK_THROWS_AS(ec_b_and_theta(EcCurve(1, 1), 31), BadReductionError);
}

TEST_CASE("elliptic window and angle identity for several curves") {
  for (const auto& curve : {EcCurve(1, 1), EcCurve(1, 0), EcCurve(0, -1), EcCurve(-1, 0), EcCurve(2, 3)}) {
    const auto report = scan_deviations(VarietySpec::elliptic(curve.a4(), curve.a6()), 2e4);
    CHECK(report.samples.size() + report.skipped_bad.size() == primes_up_to(20'000).size());
    for (const auto& s : report.samples) {
      CHECK(s.b > -2.0);
      CHECK(s.b < 3.0);
      CHECK(static_cast<std::uint64_t>(*s.trace * *s.trace) <= 4 * s.p);
      CHECK(std::fabs(s.b - (1.0 / std::sqrt(static_cast<double>(s.p)) - 2.0 * std::cos(*s.theta))) < 1e-10);
      CHECK(*s.theta >= 0.0);
      CHECK(*s.theta <= std::numbers::pi);
    }
  }
}

TEST_CASE("serial and parallel scans agree") {
  const auto spec = VarietySpec::elliptic(0, -1);
  const auto a = scan_deviations(spec, 3e4, Execution::serial);
  const auto b = scan_deviations(spec, 3e4, Execution::parallel);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].b == b.samples[i].b);
  CHECK(a.skipped_bad == b.skipped_bad);
  CHECK(a.empirical_B == b.empirical_B);
}

TEST_CASE("bounded catalog deviations versus the unbounded synthetic sequence") {
  for (const auto& spec : {VarietySpec::gl(1), VarietySpec::gl(2), VarietySpec::sl(2), VarietySpec::proj(1),
                           VarietySpec::proj(5), VarietySpec::proj(10)}) {
    double worst = 0.0;
    for (const auto& s : scan_deviations(spec, 1e6).samples) {
      if (s.p >= 5) worst = std::max(worst, std::fabs(s.b));
    }
    CAPTURE(to_string(spec));
    CHECK(worst < 1.0);
  }
  CHECK(scan_synthetic(0, 1e6 + 100).empirical_B > 10.0);
}
