#include "doctest.h"
#include "kzp/fields.hpp"
#include "kzp/matrix.hpp"
#include "kzp/rng.hpp"
#include "kzp/upoly.hpp"

using namespace kzp;

TEST_CASE("prime field inverses") {
  auto F7 = Field::prime(7);
  CHECK(F7->inv(3) == 5);
  CHECK(F7->inv(1) == 1);
  CHECK_THROWS_AS(F7->inv(0), Error);
  for (Elt a = 1; a < 7; ++a) CHECK(F7->mul(a, F7->inv(a)) == 1);
}

TEST_CASE("degree one extension is the prime field with modulus x") {
  auto F = build_extension(5, 1);
  CHECK(F->degree() == 1);
  CHECK(F->modulus() == std::vector<uint64_t>{0, 1});
  CHECK(F == Field::prime(5));
}

TEST_CASE("F_25 modulus is found by exhaustive scan") {
  // Oracle: a monic quadratic over F_5 is irreducible iff it has no root.
  std::vector<uint64_t> first;
  for (uint64_t c0 = 0; c0 < 5 && first.empty(); ++c0)
    for (uint64_t c1 = 0; c1 < 5 && first.empty(); ++c1) {
      bool root = false;
      for (uint64_t x = 0; x < 5; ++x)
        if ((x * x + c1 * x + c0) % 5 == 0) root = true;
      if (!root) first = {c0, c1, 1};
    }
  auto F = build_extension(5, 2);
  CHECK(F->modulus() == first);
  CHECK(F->modulus() == std::vector<uint64_t>{1, 1, 1});
}

TEST_CASE("high-degree extension modulus starts at constant term 1") {
  // The scan skips every candidate with zero constant term, so F_{11^12}
  // is found without walking the 11^11 reducible prefix.
  auto F = build_extension(11, 12);
  CHECK(F->order() == 3138428376721ULL);
  CHECK(F->modulus().front() == 1);
  CHECK(F->modulus().back() == 1);
}

TEST_CASE("inverse and frobenius of t in F_5[t]/(t^2+t+1)") {
  auto F = build_extension(5, 2);
  Elt t = F->generator();
  CHECK(F->format(F->inv(t)) == "4t+4");
  // t^3 = 1 in this field, so t^5 = t^2 = -t - 1.
  CHECK(F->format(F->frobenius(t)) == "4t+4");
  CHECK(F->frobenius(F->from_int(4)) == 4);
  CHECK(F->frobenius(0) == 0);
}

TEST_CASE("composite characteristic is rejected") {
  CHECK_THROWS_AS(build_extension(4, 2), Error);
  try {
    build_extension(6, 1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPrime);
  }
}

TEST_CASE("field axioms and Frobenius automorphism across table regimes") {
  for (auto [p, k] : std::vector<std::pair<int, int>>{{5, 2}, {13, 2}, {7, 4}, {13, 3}, {5, 9}}) {
    auto F = build_extension(p, k);
    Rng rng(uint64_t(p * 100 + k));
    for (int it = 0; it < 50; ++it) {
      Elt a = rng.below(F->order()), b = rng.below(F->order()), c = rng.below(F->order());
      CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
      CHECK(F->add(a, F->neg(a)) == 0);
      CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
      CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
      if (a) {
        CHECK(F->pow(a, F->order() - 1) == 1);
        CHECK(F->mul(a, F->inv(a)) == 1);
      }
      // The prime subfield is exactly the Frobenius-fixed set.
      CHECK((F->frobenius(a) == a) == F->in_prime_subfield(a));
    }
  }
}

TEST_CASE("FieldElement refuses mixed fields") {
  auto a = FieldElement::of_int(Field::prime(5), 2);
  auto b = FieldElement::of_int(Field::prime(7), 2);
  CHECK_THROWS_AS(a + b, Error);
  CHECK((a * a).value() == 4);
}

TEST_CASE("root finding and factor degrees") {
  auto F = Field::prime(13);
  // (x-2)^2 (x-5)(x^2+2) ; x^2+2 irreducible mod 13 since -2 is a non-residue.
  UPoly f = UPoly(F, {11, 1}) * UPoly(F, {11, 1}) * UPoly(F, {8, 1}) * UPoly(F, {2, 0, 1});
  auto r = roots_with_multiplicity(f);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == std::pair<Elt, int>{2, 2});
  CHECK(r[1] == std::pair<Elt, int>{5, 1});
  CHECK(factor_degrees(f) == std::vector<int>{1, 2});
  auto L = build_extension(13, 2);
  Embedding emb(F, L);
  auto rl = roots_with_multiplicity(f.mapped(L, emb));
  CHECK(rl.size() == 4);
}

TEST_CASE("embedding respects arithmetic") {
  auto F = build_extension(5, 2);
  auto L = build_extension(5, 4);
  Embedding e(F, L);
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    Elt a = rng.below(25), b = rng.below(25);
    CHECK(e(F->mul(a, b)) == L->mul(e(a), e(b)));
    CHECK(e(F->add(a, b)) == L->add(e(a), e(b)));
  }
}

TEST_CASE("matrix rank, kernel and characteristic polynomial") {
  auto F = Field::prime(7);
  FMatrix m(F, 3, 3);
  int vals[9] = {1, 2, 3, 2, 4, 6, 0, 1, 1};
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = F->from_int(vals[i]);
  CHECK(m.rank() == 2);
  auto ker = m.kernel();
  REQUIRE(ker.size() == 1);
  for (auto x : m.apply(ker[0])) CHECK(x == 0);
  CHECK(m.det() == 0);
  // Oracle: charpoly(m)(m) = 0 (Cayley-Hamilton) and constant term = -det.
  Rng rng(9);
  for (int it = 0; it < 20; ++it) {
    FMatrix a(F, 4, 4);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 4; ++j) a(i, j) = rng.below(7);
    UPoly c = a.charpoly();
    CHECK(c.degree() == 4);
    CHECK(c.coeff(0) == a.det());
    FMatrix acc(F, 4, 4), pw = FMatrix::identity(F, 4);
    for (int d = 0; d <= 4; ++d) {
      acc = acc + pw.scale(c.coeff(size_t(d)));
      pw = pw * a;
    }
    CHECK(acc.is_zero());
  }
}
