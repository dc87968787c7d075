#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "divext/dalg.hpp"

using namespace divext;
using namespace divext::dalg;
using divext::gf::FqElem;

namespace {

DAlgElem random_elem(const AlgebraPtr& A, std::mt19937_64& rng, bool unit) {
    DAlgElem x = zero(A);
    for (int i = 0; i < A->N; ++i) {
        uint32_t c = static_cast<uint32_t>(rng() % A->k->size);
        if (i == 0 && unit && c == 0) c = 1;
        x = add(x, from_digit(A, FqElem{A->k.get(), c}, i));
    }
    return x;
}

DAlgElem random_i1(const AlgebraPtr& A, std::mt19937_64& rng) {
    DAlgElem x = one(A);
    for (int i = 1; i < A->N; ++i)
        x = add(x, from_digit(A, FqElem{A->k.get(), static_cast<uint32_t>(rng() % A->k->size)}, i));
    return x;
}

}  // namespace

TEST_CASE("twist law respects a nontrivial Brauer invariant (r = 2)") {
    auto F = gf::make_field(2, 1, 3, 2);  // sigma = x -> x^{q^2}
    auto A = make_algebra(F, Mode::EqualChar, 6);
    auto w = uniformizer(A);
    for (uint32_t c = 0; c < F->size; ++c) {
        FqElem x{F.get(), c};
        CHECK(mul(w, teichmuller(A, x)) == mul(teichmuller(A, sigma(x, 1)), w));
        CHECK(sigma(x, 1).v == F->pow(x.v, 4));  // q^r = 4
    }
    CHECK(pow(w, F->d) == pi_elem(A));
}

TEST_CASE("twist law and uniformizer relations") {
    for (auto mode : {Mode::EqualChar, Mode::MixedCharUnramified}) {
        auto F = mode == Mode::EqualChar ? gf::make_field(2, 1, 3, 1) : gf::make_field(5, 1, 2, 1);
        auto A = make_algebra(F, mode, 6);
        auto w = uniformizer(A);

        // varpi [c] = [sigma(c)] varpi for every c, and varpi^d = pi_F.
        for (uint32_t c = 0; c < F->size; ++c) {
            FqElem x{F.get(), c};
            CHECK(mul(w, teichmuller(A, x)) == mul(teichmuller(A, sigma(x, 1)), w));
        }
        CHECK(pow(w, F->d) == pi_elem(A));
        CHECK(valuation(pi_elem(A)) == F->d);

        // [c][c'] = [cc']
        for (uint32_t c = 0; c < F->size; ++c)
            for (uint32_t c2 = 0; c2 < F->size; ++c2) {
                FqElem x{F.get(), c}, y{F.get(), c2};
                CHECK(mul(teichmuller(A, x), teichmuller(A, y)) == teichmuller(A, x * y));
            }

        // digit / teichmuller round trip
        for (int i = 0; i < A->N; ++i)
            for (uint32_t c = 0; c < F->size; ++c) {
                auto u = from_digit(A, FqElem{F.get(), c}, i);
                if (valuation(u) < A->N) CHECK(digit(u, i).v == c);
            }
    }
}

TEST_CASE("ring axioms on random triples, both modes, several precisions") {
    for (auto mode : {Mode::EqualChar, Mode::MixedCharUnramified}) {
        auto F = mode == Mode::EqualChar ? gf::make_field(3, 1, 2, 1) : gf::make_field(7, 1, 2, 1);
        for (int N : {2, 3, 6, 9}) {
            auto A = make_algebra(F, mode, N);
            std::mt19937_64 rng(42);
            for (int trial = 0; trial < 25; ++trial) {
                auto x = random_elem(A, rng, false);
                auto y = random_elem(A, rng, false);
                auto z = random_elem(A, rng, false);
                CHECK(mul(mul(x, y), z) == mul(x, mul(y, z)));
                CHECK(mul(x, add(y, z)) == add(mul(x, y), mul(x, z)));
                CHECK(mul(add(x, y), z) == add(mul(x, z), mul(y, z)));
                CHECK(add(x, y) == add(y, x));
            }
        }
    }
}

TEST_CASE("inverses and powers") {
    auto F = gf::make_field(2, 1, 3, 1);
    auto A = make_algebra(F, Mode::EqualChar, 6);
    auto g = gf::generator(F);

    auto u = add(one(A), from_digit(A, g, 1));  // 1 + [g] varpi
    CHECK(mul(inv(u), u) == one(A));
    CHECK(mul(u, inv(u)) == one(A));
    CHECK(pow(u, -2) == inv(mul(u, u)));
    CHECK(commutator(u, u) == one(A));

    CHECK_THROWS(inv(uniformizer(A)));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto x = random_elem(A, rng, true);
        CHECK(mul(x, inv(x)) == one(A));
    }

    // precision mismatch is an error
    auto A4 = make_algebra(F, Mode::EqualChar, 4);
    CHECK_THROWS(mul(one(A), one(A4)));
}

TEST_CASE("char-p binomial and commutator digit formula (equal characteristic)") {
    auto F = gf::make_field(2, 1, 3, 1);
    auto A = make_algebra(F, Mode::EqualChar, 6);
    auto g = gf::generator(F);

    // (1 + [g] varpi)^2 = 1 + [g sigma(g)] varpi^2 in characteristic 2.
    auto u = add(one(A), from_digit(A, g, 1));
    CHECK(pow(u, 2) == add(one(A), from_digit(A, g * sigma(g, 1), 2)));

    // (1+x)^p = 1 + x^p exactly.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        auto x = sub(random_i1(A, rng), one(A));
        CHECK(pow(add(one(A), x), F->p) == add(one(A), pow(x, F->p)));
    }

    // q_2([1+[x]varpi, 1+[y]varpi]) = x sigma(y) - sigma(x) y, exhaustively.
    for (uint32_t xv = 0; xv < F->size; ++xv)
        for (uint32_t yv = 0; yv < F->size; ++yv) {
            FqElem x{F.get(), xv}, y{F.get(), yv};
            auto c = commutator(add(one(A), from_digit(A, x, 1)), add(one(A), from_digit(A, y, 1)));
            FqElem expect = x * sigma(y, 1) - sigma(x, 1) * y;
            if (expect.is_zero()) {
                CHECK(valuation(sub(c, one(A))) >= 3);
            } else {
                CHECK(digit(sub(c, one(A)), 2) == expect);
            }
        }
}

TEST_CASE("commutator digit formula (mixed characteristic)") {
    auto F = gf::make_field(5, 1, 2, 1);
    auto A = make_algebra(F, Mode::MixedCharUnramified, 6);
    for (uint32_t xv = 0; xv < F->size; ++xv)
        for (uint32_t yv = 0; yv < F->size; ++yv) {
            FqElem x{F.get(), xv}, y{F.get(), yv};
            auto c = commutator(add(one(A), from_digit(A, x, 1)), add(one(A), from_digit(A, y, 1)));
            FqElem expect = x * sigma(y, 1) - sigma(x, 1) * y;
            if (expect.is_zero()) {
                CHECK(valuation(sub(c, one(A))) >= 3);
            } else {
                CHECK(digit(sub(c, one(A)), 2) == expect);
            }
        }
}

TEST_CASE("reduced norm") {
    for (auto mode : {Mode::EqualChar, Mode::MixedCharUnramified}) {
        auto F = mode == Mode::EqualChar ? gf::make_field(2, 1, 3, 1) : gf::make_field(5, 1, 2, 1);
        auto A = make_algebra(F, mode, 6);

        // Nrd restricted to Teichmuller lifts is the field norm.
        for (uint32_t c = 1; c < F->size; ++c) {
            auto nm = gf::norm_trace(FqElem{F.get(), c}, 1).first;
            CHECK(reduced_norm(teichmuller(A, FqElem{F.get(), c})) == A->g_teich(nm.v));
        }

        // Nrd(c) = c^d on central elements (Teichmuller lifts of k_F).
        for (auto cc : gf::subfield_elements(*F, 1)) {
            if (cc.is_zero()) continue;
            CHECK(reduced_norm(teichmuller(A, cc)) == A->g_teich(F->pow(cc.v, F->d)));
        }

        std::mt19937_64 rng(13);
        for (int trial = 0; trial < 30; ++trial) {
            auto x = random_elem(A, rng, true);
            auto y = random_elem(A, rng, true);
            CHECK(reduced_norm(mul(x, y)) == A->g_mul(reduced_norm(x), reduced_norm(y)));
        }

        // Nrd(I_1) lands in 1 + pi O_F; Nrd(1 + varpi^i u) = 1 mod pi^{ceil(i/d)}.
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_i1(A, rng);
            auto w = reduced_norm(x);
            CHECK(A->g_digit(w, 0) == 1);
            CHECK(A->g_in_F(w));
        }
        for (int i = 1; i < A->N; ++i) {
            for (int trial = 0; trial < 10; ++trial) {
                auto x = one(A);
                for (int j = i; j < A->N; ++j)
                    x = add(x, from_digit(A, FqElem{F.get(), static_cast<uint32_t>(rng() % F->size)}, j));
                auto w = A->g_sub(reduced_norm(x), A->g_one());
                CHECK(A->g_val(w) >= (i + F->d - 1) / F->d);
            }
        }
    }
}

TEST_CASE("mixed characteristic p-th powers land in I_{d+1}") {
    auto F = gf::make_field(5, 1, 2, 1);
    auto A = make_algebra(F, Mode::MixedCharUnramified, 8);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto z = random_i1(A, rng);
        auto w = pow(z, F->p);
        CHECK(valuation(sub(w, one(A))) >= F->d + 1);
    }
}

TEST_CASE("serialization round trip and truncation") {
    for (auto mode : {Mode::EqualChar, Mode::MixedCharUnramified}) {
        auto F = mode == Mode::EqualChar ? gf::make_field(2, 1, 3, 1) : gf::make_field(5, 1, 2, 1);
        auto A = make_algebra(F, mode, 6);
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_elem(A, rng, false);
            CHECK(from_json(A, to_json(x)) == x);
        }
        auto A3 = make_algebra(F, mode, 3);
        for (int trial = 0; trial < 20; ++trial) {
            auto x = random_elem(A3, rng, false);
            CHECK(truncate_to(A3, lift_to(A, x)) == x);
        }
    }
}
