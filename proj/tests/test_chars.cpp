#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "divext/chars.hpp"

using namespace divext;
using namespace divext::chars;
using divext::gf::FqElem;

TEST_CASE("validity is the divisibility condition") {
    auto k = gf::make_field(3, 1, 2, 1);  // q = 3, d = 2, q^d-1 = 8

    // a = d: any M valid.
    for (uint64_t M = 0; M < 8; ++M) CHECK(validate(Character{k, 2, RootOfUnity::trivial(), M}).ok);

    // a = 1: valid M are exactly the multiples of (q^d-1)/(q-1) = 4.
    for (uint64_t M = 0; M < 8; ++M) {
        bool ok = validate(Character{k, 1, RootOfUnity::trivial(), M}).ok;
        CHECK(ok == (M % 4 == 0));
    }
    CHECK(validate(Character{k, 1, RootOfUnity::trivial(), 2}).reason != "");

    // alpha denominator must be prime to p
    CHECK(!validate(Character{k, 1, RootOfUnity::make(1, 3), 0}).ok);
    CHECK(validate(Character{k, 1, RootOfUnity::make(1, 8), 0}).ok);
}

TEST_CASE("restriction: surface coordinate transforms, values do not") {
    auto k = gf::make_field(3, 1, 2, 1);
    // a = 1 -> a' = 2 at d = 2: m' = (q+1) m.
    for (uint64_t m = 0; m < 2; ++m) {
        auto c = character_from_surface(k, 1, RootOfUnity::make(1, 2), m);
        auto res = restrict_char(c, 2);
        CHECK(res.M == c.M);
        CHECK(res.surface_m() == (4 * m) % 8);
        CHECK(res.alpha == c.alpha.power(2));
    }

    auto c = character_from_surface(k, 1, RootOfUnity::make(1, 4), 1);
    CHECK(restrict_char(c, 1) == c);
    CHECK_THROWS(restrict_char(character_from_surface(k, 2, RootOfUnity::trivial(), 1), 1));

    // Pointwise: evaluate(Res c, n, x) = evaluate(c, (a'/a) n, x); transitivity on a 6-divisor tower.
    auto k6 = gf::make_field(5, 1, 6, 1);
    auto c6 = make_character(k6, 1, RootOfUnity::make(1, 4), (k6->order / (k6->q - 1)) % k6->order);
    for (int a2 : {2, 3, 6}) {
        auto r = restrict_char(c6, a2);
        for (int64_t nn = 0; nn < 3; ++nn)
            for (uint32_t x = 1; x < 30; ++x)
                CHECK(evaluate(r, nn, FqElem{k6.get(), x}) == evaluate(c6, a2 * nn, FqElem{k6.get(), x}));
    }
    CHECK(restrict_char(restrict_char(c6, 2), 6) == restrict_char(c6, 6));
}

TEST_CASE("conjugation") {
    auto k = gf::make_field(3, 1, 2, 1);
    for (uint64_t m = 0; m < 8; ++m) {
        auto c = make_character(k, 2, RootOfUnity::trivial(), m);
        CHECK(conjugate(c, 0) == c);
        // d=2 example: chi_{2,1,m}^varpi = chi_{2,1,qm}
        CHECK(conjugate(c, 1).M == (3 * m) % 8);
        // conjugate(. , d) is the identity
        CHECK(conjugate(c, k->d) == c);
    }

    // Oracle: chi^{varpi^i}(x) = chi(sigma^{-i}(x)) on enumerated elements.
    for (auto params : {std::tuple{2, 1, 3, 1}, {3, 1, 2, 1}, {2, 2, 3, 2}}) {
        auto [p, f, d, r] = params;
        auto kk = gf::make_field(p, f, d, r);
        auto c = make_character(kk, d, RootOfUnity::make(1, 2 + (p == 2)), 3 % kk->order);
        for (int i = 0; i < d; ++i) {
            auto cc = conjugate(c, i);
            for (uint32_t x = 1; x < kk->size; ++x)
                CHECK(evaluate(cc, 1, FqElem{kk.get(), x}) ==
                      evaluate(c, 1, gf::sigma(FqElem{kk.get(), x}, -i)));
        }
        // group action: composing i and j equals i + j
        CHECK(conjugate(conjugate(c, 1), 2) == conjugate(c, 3));
    }
}

TEST_CASE("tensor, dual, evaluate") {
    auto k = gf::make_field(3, 1, 2, 1);
    auto c = make_character(k, 2, RootOfUnity::make(1, 8), 5);
    CHECK(tensor(c, dual(c)) == trivial_character(k, 2));
    CHECK(dual(trivial_character(k, 1)) == trivial_character(k, 1));

    auto c2 = make_character(k, 2, RootOfUnity::make(3, 8), 2);
    for (uint32_t x = 1; x < k->size; ++x) {
        CHECK(evaluate(tensor(c, c2), 1, FqElem{k.get(), x}) ==
              evaluate(c, 1, FqElem{k.get(), x}) * evaluate(c2, 1, FqElem{k.get(), x}));
    }
    for (uint32_t x = 1; x < k->size; ++x)
        CHECK(evaluate(trivial_character(k, 1), 2, FqElem{k.get(), x}).is_trivial());
    CHECK(evaluate(c, 1, FqElem{k.get(), 1}) == c.alpha);

    // multiplicativity in the element
    for (uint32_t x = 1; x < k->size; ++x)
        for (uint32_t y = 1; y < k->size; ++y)
            CHECK(evaluate(c, 0, FqElem{k.get(), k->mul(x, y)}) ==
                  evaluate(c, 0, FqElem{k.get(), x}) * evaluate(c, 0, FqElem{k.get(), y}));

    CHECK_THROWS(evaluate(c, 1, FqElem{k.get(), 0}));
    CHECK_THROWS(tensor(c, trivial_character(k, 1)));
}

TEST_CASE("eta characters") {
    // d=2, r=1, q=p: M = q - 1.
    auto k = gf::make_field(5, 1, 2, 1);
    CHECK(eta_character(k, 0, false).M == 4);
    CHECK(eta_character(k, 0, true).M == (k->order - 4) % k->order);

    for (auto params : {std::tuple{2, 1, 3, 1}, {3, 1, 2, 1}, {5, 1, 2, 1}, {2, 2, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto kk = gf::make_field(p, f, d, r);
        std::set<uint64_t> Ms;
        for (int i = 0; i < kk->n; ++i) {
            auto e = eta_character(kk, i, false);
            CHECK(exponent_order(kk, e.M) == d);  // order exactly d
            CHECK(dual(e) == eta_character(kk, i, true));
            Ms.insert(e.M);
            // varpi-conjugation permutes the eta basis: i -> i - rf
            CHECK(conjugate(e, 1) == eta_character(kk, i - static_cast<int64_t>(r) * f, false));
        }
        CHECK(Ms.size() == static_cast<size_t>(kk->n));  // pairwise distinct
    }
}

TEST_CASE("double cosets and the Mackey reduction") {
    CHECK(double_cosets(1, 4) == std::vector<int>{0});
    CHECK(double_cosets(3, 3) == std::vector<int>{0, 1, 2});
    CHECK(double_cosets(2, 3) == std::vector<int>{0});

    auto k = gf::make_field(3, 1, 2, 1);
    auto triv = trivial_irrep(k);
    auto entries = reduce_pair(triv, triv);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].level == 1);
    CHECK(entries[0].c.is_trivial());

    // list length = gcd(a, a'); (pi, pi) always has one trivial entry
    auto chi = make_character(k, 2, RootOfUnity::trivial(), 1);
    auto kap = make_character(k, 2, RootOfUnity::make(1, 8), 0);
    auto pi = make_irrep(chi, kap);
    auto diag = reduce_pair(pi, pi);
    REQUIRE(diag.size() == 2);
    CHECK(diag[0].c.is_trivial());
    CHECK(!diag[1].c.is_trivial());
}

TEST_CASE("irrep classification and canonical forms") {
    auto k = gf::make_field(3, 1, 2, 1);
    auto kap = trivial_character(k, 2);
    auto pi1 = make_irrep(make_character(k, 2, RootOfUnity::trivial(), 1), kap);
    auto pi3 = make_irrep(make_character(k, 2, RootOfUnity::trivial(), 3), kap);
    auto pi2 = make_irrep(make_character(k, 2, RootOfUnity::trivial(), 2), kap);

    CHECK(irrep_iso(pi1, pi1));
    CHECK(irrep_iso(pi1, pi3));  // m and qm orbits identified (3 = 3*1 mod 8)
    CHECK(!irrep_iso(pi1, pi2));

    auto kap2 = make_irrep(make_character(k, 2, RootOfUnity::trivial(), 1),
                           make_character(k, 2, RootOfUnity::make(1, 2), 0));
    CHECK(!irrep_iso(pi1, kap2));  // differing kappa

    // canonical is idempotent and detects isomorphism
    CHECK(canonical(canonical(pi3)) == canonical(pi3));
    CHECK(canonical(pi1) == canonical(pi3));

    // order-a condition is enforced
    CHECK_THROWS(make_irrep(make_character(k, 2, RootOfUnity::trivial(), 0), kap));  // order 1, not 2
    CHECK_THROWS(make_irrep(make_character(k, 2, RootOfUnity::make(1, 2), 1), kap)); // alpha nontrivial

    // twisting by a level-1 character preserves levels and validity
    auto rho = character_from_surface(k, 1, RootOfUnity::make(1, 2), 1);
    auto tw = twist(pi1, rho);
    CHECK(tw.level() == 2);
    CHECK(irrep_iso(twist(tw, dual(rho)), pi1));
}

TEST_CASE("all chi_{a',alpha',0} arise from level-1 restrictions") {
    for (auto params : {std::tuple{3, 1, 2, 1}, {2, 1, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto k = gf::make_field(p, f, d, r);
        for (int a2 = 1; a2 <= d; ++a2) {
            if (d % a2) continue;
            for (int64_t den : {1, 2, 5}) {
                if (gcd_i64(den, p) != 1) continue;
                auto alpha2 = RootOfUnity::make(1, den);
                auto lifted = make_character(k, 1, alpha2.root(a2), 0);
                auto res = restrict_char(lifted, a2);
                CHECK(res.alpha == alpha2);
                CHECK(res.M == 0);
            }
        }
    }
}

TEST_CASE("serialization round trips") {
    auto k = gf::make_field(3, 1, 2, 1);
    auto c = make_character(k, 2, RootOfUnity::make(3, 8), 5);
    CHECK(character_from_json(k, character_to_json(c)) == c);
    auto pi = make_irrep(make_character(k, 2, RootOfUnity::trivial(), 1),
                         make_character(k, 2, RootOfUnity::make(1, 4), 0));
    auto back = irrep_from_json(k, irrep_to_json(pi));
    CHECK(back == pi);
}
