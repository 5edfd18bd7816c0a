#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "fdlink/constellation.hpp"

using namespace fdlink;

TEST_CASE("qpsk pins") {
    const Constellation c = Constellation::make(4);
    CHECK(c.pam_levels() == 2);
    CHECK(c.bits_per_pam() == 1);
    CHECK(c.bits_per_symbol() == 2);
    CHECK(c.kappa() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(c.levels()[0] == doctest::Approx(-c.kappa()));
    CHECK(c.levels()[1] == doctest::Approx(c.kappa()));
    CHECK(c.label_bit(0, 0) == 1);
    CHECK(c.label_bit(1, 0) == 0);

    const uint8_t zero = 0, one = 1;
    const cplx s = c.qam_map(&zero, &one);
    CHECK(s.real() == doctest::Approx(c.kappa()));
    CHECK(s.imag() == doctest::Approx(-c.kappa()));
}

TEST_CASE("16qam labels along ascending levels") {
    const Constellation c = Constellation::make(16);
    const int want[4][2] = {{1, 0}, {1, 1}, {0, 1}, {0, 0}};
    for (int g = 0; g < 4; ++g)
        for (int b = 0; b < 2; ++b) CHECK(c.label_bit(g, b) == want[g][b]);
}

TEST_CASE("unit symbol energy") {
    for (int j : {4, 16, 64}) {
        const Constellation c = Constellation::make(j);
        double rail = 0.0;
        for (double l : c.levels()) rail += l * l;
        rail /= c.pam_levels();
        CHECK(2.0 * rail == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("gray chain, sign bit and negation mirror") {
    for (int j : {4, 16, 64}) {
        const Constellation c = Constellation::make(j);
        const int m = c.pam_levels();
        const int bp = c.bits_per_pam();
        for (int g = 0; g < m; ++g) {
            CHECK(c.label_bit(g, 0) == (c.levels()[g] < 0 ? 1 : 0));
            if (g > 0) {
                int diff = 0;
                for (int b = 0; b < bp; ++b)
                    diff += c.label_bit(g, b) != c.label_bit(g - 1, b);
                CHECK(diff == 1);
            }
            // Negating a level flips exactly the sign bit.
            CHECK(c.label_bit(m - 1 - g, 0) == 1 - c.label_bit(g, 0));
            for (int b = 1; b < bp; ++b)
                CHECK(c.label_bit(m - 1 - g, b) == c.label_bit(g, b));
        }
    }
}

TEST_CASE("bit and level maps invert each other") {
    for (int j : {4, 16, 64}) {
        const Constellation c = Constellation::make(j);
        const int m = c.pam_levels();
        const int bp = c.bits_per_pam();
        for (int g = 0; g < m; ++g) {
            uint8_t bits[3] = {0, 0, 0};
            for (int b = 0; b < bp; ++b)
                bits[b] = static_cast<uint8_t>(c.label_bit(g, b));
            CHECK(c.level_of_bits(bits) == g);
            CHECK(c.pam_map(bits) == doctest::Approx(c.levels()[g]).epsilon(1e-15));
            for (int b = 0; b < bp; ++b)
                CHECK(c.pam_bit(c.levels()[g], b) == c.label_bit(g, b));
        }
    }
}

TEST_CASE("invalid orders and levels are rejected") {
    CHECK_THROWS_AS(Constellation::make(8), std::invalid_argument);
    CHECK_THROWS_AS(Constellation::make(0), std::invalid_argument);
    const Constellation c = Constellation::make(4);
    CHECK_THROWS_AS(c.pam_bit(0.123, 0), std::invalid_argument);
}
