#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlfb/errors.hpp"
#include "nlfb/reaction.hpp"

using namespace nlfb;

TEST_CASE("logistic values") {
    const Reaction f = Reaction::logistic();
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 0.0);
    CHECK(f(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f(1.5) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(f.f_prime_zero() == 1.0);
    CHECK(f.positive_zero() == 1.0);
    CHECK(f.k0() == 2.0);
}

TEST_CASE("perturbed families share the linearization, shift the zero") {
    const Reaction up = Reaction::logistic_upper(0.1);
    const Reaction lo = Reaction::logistic_lower(0.1);
    CHECK(up.f_prime_zero() == 1.0);
    CHECK(lo.f_prime_zero() == 1.0);
    CHECK(up.positive_zero() == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(lo.positive_zero() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(std::abs(up(1.1)) <= 1e-14);
    CHECK(std::abs(lo(0.9)) <= 1e-14);

    CHECK(Reaction::logistic_upper(0.05).positive_zero() == doctest::Approx(1.05));
    CHECK(Reaction::logistic_lower(0.05).positive_zero() == doctest::Approx(0.95));
}

TEST_CASE("zeros are exact and f(u)/u strictly decreases") {
    for (const Reaction& f : {Reaction::logistic(), Reaction::logistic_upper(0.2),
                              Reaction::logistic_lower(0.2)}) {
        CHECK(f(0.0) == 0.0);
        CHECK(std::abs(f(f.positive_zero())) <= 1e-14);
        double prev = 1e300;
        for (double u = 0.1; u <= 2.0001; u += 0.1) {
            const double ratio = f(u) / u;
            CHECK(ratio < prev);
            prev = ratio;
        }
        // negative beyond k0
        CHECK(f(f.k0()) < 0.0);
        CHECK(f(f.k0() + 1.0) < 0.0);
        CHECK(f.validate_kpp());
    }
    const Reaction f = Reaction::logistic();
    CHECK(f(0.2) / 0.2 == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(f(0.8) / 0.8 == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("perturbed reactions sandwich the logistic term") {
    const Reaction f = Reaction::logistic();
    const Reaction f1 = Reaction::logistic_upper(0.15);
    const Reaction f2 = Reaction::logistic_lower(0.15);
    for (double u = 0.0; u <= 2.0001; u += 0.01) {
        CHECK(f2(u) <= f(u) + 1e-15);
        CHECK(f(u) <= f1(u) + 1e-15);
        if (u > 1e-9) {
            CHECK(f2(u) < f(u));
            CHECK(f(u) < f1(u));
        }
    }
    CHECK(f2(0.0) == f(0.0));
    CHECK(f(0.0) == f1(0.0));
}

TEST_CASE("domain and parameter validation") {
    CHECK_THROWS_AS(Reaction::logistic()(-0.5), NumericError);
    CHECK_THROWS_AS(Reaction::logistic_upper(0.0), ConfigError);
    CHECK_THROWS_AS(Reaction::logistic_upper(1.0), ConfigError);
    CHECK_THROWS_AS(Reaction::logistic_lower(-0.1), ConfigError);
    CHECK_THROWS_AS(Reaction::logistic_lower(1.5), ConfigError);
    // raw() is the unchecked fast path used inside steppers
    CHECK(Reaction::logistic().raw(-1e-18) == doctest::Approx(-1e-18));
}
