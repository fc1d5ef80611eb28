#include <doctest.h>

#include <random>

#include <stdexcept>

#include "termsq/ordinal.hpp"

using namespace termsq;

namespace {

Ordinal w(std::uint64_t coef) { return Ordinal::monomial(1, coef); }

Ordinal randomOrdinal(std::mt19937_64& rng, std::uint32_t maxExp,
                      std::uint64_t maxCoef) {
  std::vector<Ordinal::Monomial> ms;
  for (std::int32_t e = maxExp; e >= 0; --e) {
    const std::uint64_t c = rng() % (maxCoef + 1);
    if (c) ms.push_back({static_cast<std::uint32_t>(e), c});
  }
  return Ordinal(std::move(ms));
}

}  // namespace

TEST_CASE("cnf addition absorbs and concatenates") {
  CHECK(add(add(w(1), Ordinal::nat(3)), add(w(2), Ordinal::nat(5))) ==
        add(w(3), Ordinal::nat(5)));
  CHECK(add(Ordinal::omegaSq(), add(w(1), Ordinal::nat(1))).toString() ==
        "w^2+w+1");
  const Ordinal a = add(Ordinal::omegaSq(), Ordinal::nat(7));
  CHECK(add(a, Ordinal()) == a);
}

TEST_CASE("decompose splits the finite tail") {
  const auto [lim1, fin1] =
      decompose(add(add(Ordinal::omegaSq(), w(1)), Ordinal::nat(4)));
  CHECK(lim1 == add(Ordinal::omegaSq(), w(1)));
  CHECK(fin1 == 4);
  const auto [lim2, fin2] = decompose(Ordinal::nat(7));
  CHECK(lim2.isZero());
  CHECK(fin2 == 7);
  const auto [lim3, fin3] = decompose(w(1));
  CHECK(lim3 == w(1));
  CHECK(fin3 == 0);
}

TEST_CASE("addressable enumerations are exact and ordered") {
  auto names = [](const std::vector<Ordinal>& os) {
    std::vector<std::string> out;
    for (const Ordinal& o : os) out.push_back(o.toString());
    return out;
  };
  CHECK(names(addressable(w(1), 3)) ==
        std::vector<std::string>{"0", "1", "2", "3"});
  CHECK(names(addressable(w(2), 1)) ==
        std::vector<std::string>{"0", "1", "w", "w+1"});
  CHECK(names(addressable(Ordinal::omegaSq(), 1)) ==
        std::vector<std::string>{"0", "1", "w", "w+1"});
  for (const auto& bound : {w(5), Ordinal::omegaSq()}) {
    const auto os = addressable(bound, 3);
    for (std::size_t i = 1; i < os.size(); ++i) CHECK(os[i - 1] < os[i]);
    for (const Ordinal& o : os) CHECK(o < bound);
  }
}

TEST_CASE("addition laws") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 500; ++i) {
    const Ordinal a = randomOrdinal(rng, 3, 5);
    const Ordinal b = randomOrdinal(rng, 3, 5);
    const Ordinal c = randomOrdinal(rng, 3, 5);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    if (b < c) CHECK(add(a, b) < add(a, c));
    // Sums below w^4 stay below w^4.
    CHECK(add(a, b).degree() <= 3);
  }
}

TEST_CASE("left subtraction inverts addition") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 500; ++i) {
    const Ordinal a = randomOrdinal(rng, 3, 5);
    const Ordinal b = randomOrdinal(rng, 3, 5);
    const Ordinal c = add(a, b);
    CHECK(add(a, leftSubtract(a, c)) == c);
    if (a <= b) CHECK(add(a, leftSubtract(a, b)) == b);
  }
  CHECK_THROWS_AS(leftSubtract(w(2), w(1)), std::invalid_argument);
}

TEST_CASE("limits and comparisons") {
  CHECK(w(1).isLimit());
  CHECK(Ordinal::omegaSq().isLimit());
  CHECK_FALSE(Ordinal::nat(3).isLimit());
  CHECK_FALSE(Ordinal().isLimit());
  CHECK_FALSE(add(w(1), Ordinal::nat(1)).isLimit());
  CHECK(Ordinal::nat(3) < w(1));
  CHECK(w(5) < Ordinal::omegaSq());
}

TEST_CASE("decompose round trips through addition") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 300; ++i) {
    const Ordinal a = randomOrdinal(rng, 3, 5);
    const auto [lim, fin] = decompose(a);
    CHECK(add(lim, Ordinal::nat(fin)) == a);
    CHECK((lim.isZero() || lim.isLimit()));
  }
}
