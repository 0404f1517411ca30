#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"

#include "rwspt/errors.hpp"
#include "rwspt/multiset.hpp"

using rwspt::Bag;
using rwspt::ValidationError;

using IntBag = Bag<int>;

TEST_CASE("bag add and multiplicity") {
    IntBag b;
    CHECK(b.empty());
    CHECK(b.total() == 0);
    b.add(3);
    b.add(3, 2);
    b.add(7, 5);
    CHECK(b.multiplicity(3) == 3);
    CHECK(b.multiplicity(7) == 5);
    CHECK(b.multiplicity(42) == 0);
    CHECK(b.total() == 8);
    CHECK(b.distinct() == 2);
}

TEST_CASE("adding zero copies is a no-op") {
    IntBag b;
    b.add(1, 0);
    CHECK(b.empty());
    CHECK(b.multiplicity(1) == 0);
}

TEST_CASE("subtract removes entries that reach zero") {
    IntBag b{{1, 2}, {2, 1}};
    b.subtract(1);
    CHECK(b.multiplicity(1) == 1);
    b.subtract(1);
    CHECK(b.multiplicity(1) == 0);
    CHECK(b.distinct() == 1);
    CHECK_THROWS_AS(b.subtract(1), ValidationError);
    CHECK_THROWS_AS(b.subtract(9), ValidationError);
}

TEST_CASE("multiplicity overflow is rejected") {
    IntBag b;
    b.add(1, std::numeric_limits<std::uint64_t>::max());
    CHECK_THROWS_AS(b.add(1, 1), ValidationError);
}

TEST_CASE("leq is pointwise") {
    IntBag small{{1, 1}, {2, 2}};
    IntBag big{{1, 2}, {2, 2}, {3, 1}};
    CHECK(small.leq(big));
    CHECK(!big.leq(small));
    CHECK(IntBag{}.leq(small));
    CHECK(small.leq(small));
}

TEST_CASE("plus and minus") {
    IntBag a{{1, 2}, {2, 1}};
    IntBag b{{2, 1}, {3, 4}};
    const IntBag sum = a.plus(b);
    CHECK(sum.multiplicity(1) == 2);
    CHECK(sum.multiplicity(2) == 2);
    CHECK(sum.multiplicity(3) == 4);
    const IntBag back = sum.minus(b);
    CHECK(back == a);
    CHECK_THROWS_AS(a.minus(b), ValidationError); // a lacks 3s
}

TEST_CASE("iteration is sorted by element") {
    IntBag b{{5, 1}, {1, 1}, {3, 1}};
    std::vector<int> seen;
    for (const auto& [e, n] : b) seen.push_back(e);
    CHECK(seen == std::vector<int>{1, 3, 5});
}
