#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lmmbic/random.hpp"

#include <cmath>

using lmmbic::Philox4x64;
using lmmbic::RandomStream;

// Reference blocks from numpy.random.Philox (4x64, 10 rounds). numpy bumps
// the counter before each block, so its counter c corresponds to block c+1.
TEST_CASE("philox matches numpy reference blocks") {
    const auto zero = Philox4x64::generate({1, 0, 0, 0}, {0, 0});
    CHECK(zero[0] == 0x02f4ba6408e4d89bULL);
    CHECK(zero[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(zero[2] == 0x1c8667a55d902e79ULL);
    CHECK(zero[3] == 0x907d7a052fd5b4dcULL);

    const Philox4x64::Key key{0x1234, 0x5678};
    const auto b1 = Philox4x64::generate({1, 0, 0, 0}, key);
    CHECK(b1[0] == 0x7af1ec3cbd0ad88aULL);
    CHECK(b1[1] == 0x009cd89c3efe261fULL);
    CHECK(b1[2] == 0x0b019d81fcae091cULL);
    CHECK(b1[3] == 0x61331f09223ecda9ULL);
    const auto b3 = Philox4x64::generate({3, 0, 0, 0}, key);
    CHECK(b3[0] == 0xd57220a35efd2c93ULL);
    CHECK(b3[3] == 0x18d17c0e0c80f77aULL);
}

TEST_CASE("streams are reproducible and separated by id") {
    RandomStream a(42, {1, 2, 3});
    RandomStream b(42, {1, 2, 3});
    RandomStream c(42, {1, 2, 4});
    RandomStream d(43, {1, 2, 3});
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        same_c += va == c.next_u64();
        same_d += va == d.next_u64();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniform and normal moments") {
    RandomStream rng(7, {9, 0, 0});
    constexpr int kDraws = 200000;
    double su = 0, suu = 0, sn = 0, snn = 0;
    double umin = 1, umax = 0;
    for (int i = 0; i < kDraws; ++i) {
        const double u = rng.uniform();
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        su += u;
        suu += u * u;
        const double z = rng.normal();
        REQUIRE(std::isfinite(z));
        sn += z;
        snn += z * z;
    }
    CHECK(umin >= 0.0);
    CHECK(umax < 1.0);
    CHECK(su / kDraws == doctest::Approx(0.5).epsilon(0.01));
    CHECK(suu / kDraws - std::pow(su / kDraws, 2) == doctest::Approx(1.0 / 12).epsilon(0.02));
    CHECK(std::abs(sn / kDraws) < 0.01);
    CHECK(snn / kDraws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derive_seed depends on every part and on order") {
    using lmmbic::derive_seed;
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
    CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
    CHECK(derive_seed(1, 2) != derive_seed(1, 2, 0));
}
