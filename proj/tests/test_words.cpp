#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "mobius/braid.hpp"
#include "mobius/freegroup.hpp"
#include "mobius/geometry.hpp"
#include "mobius/rng.hpp"

using namespace mobius;

TEST_CASE("free reduction and multiplication") {
  const BraidWord b = BraidWord::gen(BraidGen::B);
  CHECK((b * b.inverse()).empty());
  CHECK((b * b) == BraidWord::A(1));
  const BraidWord w =
      BraidWord::gen(BraidGen::R2) * BraidWord::gen(BraidGen::R3);
  CHECK(w.size() == 2);
}

TEST_CASE("purity by B parity") {
  CHECK(BraidWord::gen(BraidGen::R2).is_pure());
  CHECK_FALSE(BraidWord::gen(BraidGen::B).is_pure());
  CHECK(BraidWord::A(1).is_pure());
  CHECK(BraidWord::A(-3).is_pure());
}

TEST_CASE("serialization round trip") {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    BraidWord w;
    const int len = rng.uniform_int(12);
    for (int k = 0; k < len; ++k) {
      w.push(static_cast<BraidGen>(rng.uniform_int(3)),
             rng.uniform_int(2) ? 1 : -1);
    }
    CHECK(BraidWord::parse(w.str()) == w);
  }
  CHECK(BraidWord::parse("e").empty());
  CHECK(BraidWord::parse("BbR2r3").size() == 2);
}

TEST_CASE("strand forgetting homomorphisms") {
  const BraidWord r2 = BraidWord::gen(BraidGen::R2);
  const BraidWord r3 = BraidWord::gen(BraidGen::R3);
  const BraidWord a = BraidWord::A(1);
  CHECK(h1(r2) == 1);
  CHECK(h1(a) == 0);
  CHECK(h2(r3) == 1);
  CHECK(h2(a) == 0);
  CHECK(h2(r2) == 0);
  CHECK(h1(r3) == 0);
  CHECK_THROWS_AS(h1(BraidWord::gen(BraidGen::B)), DomainError);
  // conjugation by B exchanges the strand roles
  const BraidWord b = BraidWord::gen(BraidGen::B);
  const BraidWord conj = b * r2 * b.inverse();
  CHECK(h1(conj) == 0);
  CHECK(h2(conj) == 1);
  // homomorphism property on random pure pairs
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    BraidWord u, v;
    for (int k = 0; k < 6; ++k) {
      u.push(static_cast<BraidGen>(rng.uniform_int(3)),
             rng.uniform_int(2) ? 1 : -1);
      v.push(static_cast<BraidGen>(rng.uniform_int(3)),
             rng.uniform_int(2) ? 1 : -1);
    }
    if (!u.is_pure()) u.push(BraidGen::B, 1);
    if (!v.is_pure()) v.push(BraidGen::B, 1);
    CHECK(h1(u * v) == h1(u) + h1(v));
    CHECK(h2(u * v) == h2(u) + h2(v));
  }
  CHECK(h_sum_homogenized(b) == doctest::Approx(0.0));
  CHECK(h_sum_homogenized(r2) == doctest::Approx(1.0));
}

TEST_CASE("free group words and endomorphisms") {
  FreeWord w;
  w.push(FreeGen::Gc, 1);
  w.push(FreeGen::G1, 1);
  w.push(FreeGen::G1, -1);
  CHECK(w.size() == 1);
  CHECK(FreeWord::parse(w.str()) == w);

  FreeEndo e = FreeEndo::identity();
  CHECK(e.is_identity());
  // swap-ish endo: c -> c, 1 -> 2, 2 -> 1
  FreeEndo s;
  s.image[0] = FreeWord::parse("c");
  s.image[1] = FreeWord::parse("2");
  s.image[2] = FreeWord::parse("1");
  CHECK(compose(s, s).is_identity());
  const FreeWord img = s.apply(FreeWord::parse("c 1 -2"));
  CHECK(img == FreeWord::parse("c 2 -1"));
}
