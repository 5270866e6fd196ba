#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "zonogini/numeric.hpp"
#include "zonogini/rng.hpp"

using namespace zonogini;

TEST_CASE("kahan sum recovers what naive summation loses") {
    // 1 followed by many tiny values that individually vanish against 1.
    KahanSum acc;
    acc.add(1.0);
    for (int i = 0; i < 1000000; ++i) acc.add(1e-18);
    CHECK(acc.value() == doctest::Approx(1.0 + 1e-12).epsilon(1e-14));
}

TEST_CASE("exact accumulator sums are independent of input order") {
    rng::Stream stream(99);
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) {
        // mix of wildly different magnitudes
        xs.push_back(std::ldexp(stream.next_open_unit(), (i % 120) - 60));
    }
    ExactNonNegSum forward;
    for (double x : xs) forward.add(x);

    std::vector<double> shuffled = xs;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        const std::size_t j =
            static_cast<std::size_t>(stream.next_unit() * static_cast<double>(i));
        std::swap(shuffled[i - 1], shuffled[j]);
    }
    ExactNonNegSum backward;
    for (auto it = shuffled.rbegin(); it != shuffled.rend(); ++it) backward.add(*it);

    CHECK(forward.value() == backward.value());  // bitwise
}

TEST_CASE("exact accumulator merge equals sequential accumulation") {
    rng::Stream stream(7);
    ExactNonNegSum whole, left, right;
    for (int i = 0; i < 2000; ++i) {
        const double x = stream.next_open_unit() * std::ldexp(1.0, i % 40);
        whole.add(x);
        (i % 2 == 0 ? left : right).add(x);
    }
    left.merge(right);
    CHECK(whole.value() == left.value());
}

TEST_CASE("exact accumulator handles subnormals and huge values") {
    ExactNonNegSum acc;
    acc.add(5e-324);  // smallest subnormal
    acc.add(5e-324);
    CHECK(acc.value() == 1e-323);

    ExactNonNegSum big;
    big.add(8e307);
    big.add(8e307);
    CHECK(big.value() == 1.6e308);

    ExactNonNegSum mixed;
    mixed.add(1.0);
    mixed.add(5e-324);
    CHECK(mixed.value() == 1.0);  // faithful rounding of 1 + 2^-1074
}

TEST_CASE("normal quantile inverts the normal CDF") {
    for (double p : {1e-9, 1e-4, 0.1, 0.25, 0.5, 0.75, 0.9, 0.9999, 1.0 - 1e-9}) {
        CAPTURE(p);
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
    }
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK_THROWS_AS(normal_quantile(0.0), Error);
    CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("counter rng is a pure function of key and counter") {
    rng::Stream a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // derive() separates streams
    CHECK(rng::derive(1, 2, 3) != rng::derive(1, 3, 2));
    CHECK(rng::derive(1, 2) != rng::derive(2, 1));
}

TEST_CASE("unit draws stay inside their intervals") {
    rng::Stream s(5);
    for (int i = 0; i < 10000; ++i) {
        const double open = s.next_open_unit();
        CHECK(open > 0.0);
        CHECK(open < 1.0);
        const double half = s.next_unit();
        CHECK(half >= 0.0);
        CHECK(half < 1.0);
    }
}
