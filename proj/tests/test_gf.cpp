#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "divext/gf.hpp"
#include "divext/linalg.hpp"

using namespace divext;
using namespace divext::gf;

TEST_CASE("make_field forced sizes and determinism") {
    auto F8 = make_field(2, 1, 3, 1);
    CHECK(F8->size == 8);
    CHECK(F8->q == 2);
    auto F9 = make_field(3, 1, 2, 1);
    CHECK(F9->size == 9);
    CHECK(F9->q == 3);

    // Double construction gives bitwise-identical specs.
    auto A = make_field(2, 1, 3, 1);
    CHECK(A->modulus == F8->modulus);
    CHECK(A->generator == F8->generator);
    CHECK(A->exp_ == F8->exp_);
    CHECK(A->log_ == F8->log_);

    CHECK_THROWS(make_field(4, 1, 3, 1));   // p not prime
    CHECK_THROWS(make_field(3, 1, 3, 1));   // gcd(p, d) != 1
    CHECK_THROWS(make_field(2, 1, 4, 2));   // gcd(r, d) != 1
    CHECK_THROWS(make_field(2, 5, 5, 1, 1 << 10));  // cap exceeded
}

TEST_CASE("sigma is the q^r-power generator of Gal(k_D/k_F)") {
    auto F = make_field(2, 1, 3, 1);
    FqElem g = generator(F);
    CHECK(sigma(g, F->d) == g);
    CHECK(sigma(g, 1) == g * g);  // q = 2
    for (auto c : subfield_elements(*F, 1)) CHECK(sigma(c, 1) == c);

    // Fixed points of sigma are exactly the q elements of k_F.
    for (auto params : {std::tuple{2, 1, 3, 1}, {3, 1, 2, 1}, {2, 2, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto K = make_field(p, f, d, r);
        uint64_t fixed = 0;
        for (uint32_t v = 0; v < K->size; ++v)
            if (K->sigma(v, 1) == v) ++fixed;
        CHECK(fixed == K->q);
        // sigma iterated d times is the identity
        for (uint32_t v = 0; v < K->size; ++v) {
            uint32_t w = v;
            for (int i = 0; i < K->d; ++i) w = K->sigma(w, 1);
            CHECK(w == v);
        }
    }
}

TEST_CASE("norm and trace to intermediate subfields") {
    auto F = make_field(2, 1, 3, 1);
    FqElem g = generator(F);
    CHECK(norm_trace(g, 1).first.v == 1);  // g^7 = 1

    // Multiplicativity of the norm over all pairs (field is tiny).
    for (uint32_t a = 0; a < F->size; ++a)
        for (uint32_t b = 0; b < F->size; ++b) {
            FqElem x{F.get(), a}, y{F.get(), b};
            CHECK(norm_trace(x * y, 1).first == norm_trace(x, 1).first * norm_trace(y, 1).first);
        }

    // Norm exponent identity on nonzero x, and codomain checks.
    for (auto params : {std::tuple{3, 1, 2, 1}, {2, 2, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto K = make_field(p, f, d, r);
        for (int a = 1; a <= K->d; ++a) {
            if (K->d % a) continue;
            uint64_t e = K->order / (ipow_u64(K->q, a) - 1);
            for (uint32_t v = 1; v < K->size; ++v) {
                auto [nm, tr] = norm_trace(FqElem{K.get(), v}, a);
                CHECK(nm.v == K->pow(v, static_cast<int64_t>(e)));
                CHECK(K->in_subfield(nm.v, a));
                CHECK(K->in_subfield(tr.v, a));
            }
        }
    }

    // Trace surjects onto F_{q^a}: d = 2, q = 3, full enumeration of 9 elements.
    auto K = make_field(3, 1, 2, 1);
    std::set<uint32_t> traces;
    for (uint32_t v = 0; v < K->size; ++v) traces.insert(norm_trace(FqElem{K.get(), v}, 1).second.v);
    std::set<uint32_t> kF;
    for (auto c : subfield_elements(*K, 1)) kF.insert(c.v);
    CHECK(traces == kF);

    CHECK_THROWS(norm_trace(g, 2));  // 2 does not divide 3
}

TEST_CASE("hilbert 90, both versions, against exhaustive oracles") {
    auto F = make_field(2, 1, 3, 1);
    FqElem one{F.get(), 1}, zero{F.get(), 0};
    CHECK(hilbert90(one, H90Mode::Mult) == one);
    CHECK(hilbert90(zero, H90Mode::Add) == zero);

    FqElem g = generator(F);
    FqElem c = g / sigma(g, 1);
    FqElem x = hilbert90(c, H90Mode::Mult);
    CHECK(x / sigma(x, 1) == c);
    // Exhaustive oracle: solution set is exactly x * k_F^x, so q - 1 solutions.
    int count = 0;
    for (uint32_t v = 1; v < F->size; ++v)
        if (F->div(v, F->sigma(v, 1)) == c.v) ++count;
    CHECK(count == static_cast<int>(F->q) - 1);

    for (auto params : {std::tuple{2, 1, 3, 1}, {3, 1, 2, 1}, {2, 2, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto K = make_field(p, f, d, r);
        // every valid c solved, and solution-set cardinalities are q-1 / q
        for (uint32_t v = 1; v < K->size; ++v) {
            FqElem cc{K.get(), v};
            if (norm_trace(cc, 1).first.v == 1) {
                FqElem s = hilbert90(cc, H90Mode::Mult);
                CHECK(s / sigma(s, 1) == cc);
                int cnt = 0;
                for (uint32_t w = 1; w < K->size; ++w)
                    if (K->div(w, K->sigma(w, 1)) == v) ++cnt;
                CHECK(cnt == static_cast<int>(K->q) - 1);
            }
        }
        for (uint32_t v = 0; v < K->size; ++v) {
            FqElem cc{K.get(), v};
            if (norm_trace(cc, 1).second.v == 0) {
                FqElem s = hilbert90(cc, H90Mode::Add);
                CHECK(sigma(s, 1) - s == cc);
                int cnt = 0;
                for (uint32_t w = 0; w < K->size; ++w)
                    if (K->sub(K->sigma(w, 1), w) == v) ++cnt;
                CHECK(cnt == static_cast<int>(K->q));
            }
        }
    }

    // In F_9/F_3 the generator has norm g^4 != 1.
    auto K9 = make_field(3, 1, 2, 1);
    CHECK_THROWS(hilbert90(generator(K9), H90Mode::Mult));
}

TEST_CASE("phi maps and image bases") {
    auto F = make_field(2, 1, 3, 1);
    FqElem g = generator(F);
    FqElem zero{F.get(), 0}, one{F.get(), 1};

    CHECK(phi_image_basis(1, zero).empty());

    // y = 1: image is ker(Tr_{k_D/k_F}); compare spans.
    auto basis1 = phi_image_basis(1, one);
    linalg::FpSpan im(F->p, F->n);
    for (auto b : basis1)
        for (auto c : subfield_elements(*F, 1))
            if (c.v) im.insert(F->digits(F->mul(c.v, b.v)));
    linalg::FpSpan ker(F->p, F->n);
    for (uint32_t v = 0; v < F->size; ++v)
        if (norm_trace(FqElem{F.get(), v}, 1).second.v == 0) ker.insert(F->digits(v));
    CHECK(im.equals(ker));

    // d=3, q=2, y=g, i=1: image has 4 elements (codimension one in F_8).
    std::set<uint32_t> vals;
    for (uint32_t v = 0; v < F->size; ++v) vals.insert(phi_map(1, g, FqElem{F.get(), v}).v);
    CHECK(vals.size() == 4);

    // Codimension one over k_F for every nonzero y and small i; k_F-linearity in x.
    for (auto params : {std::tuple{2, 1, 3, 1}, {3, 1, 2, 1}, {2, 2, 3, 1}}) {
        auto [p, f, d, r] = params;
        auto K = make_field(p, f, d, r);
        for (uint32_t yv = 1; yv < K->size; ++yv) {
            for (int64_t i = 0; i <= 2 * K->d; ++i) {
                auto basis = phi_image_basis(i, FqElem{K.get(), yv});
                CHECK(static_cast<int>(basis.size()) == K->d - 1);
            }
        }
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            uint32_t yv = static_cast<uint32_t>(rng() % K->size);
            uint32_t xv = static_cast<uint32_t>(rng() % K->size);
            uint32_t xw = static_cast<uint32_t>(rng() % K->size);
            auto cs = subfield_elements(*K, 1);
            uint32_t cv = cs[rng() % cs.size()].v;
            int64_t i = static_cast<int64_t>(rng() % 5);
            FqElem y{K.get(), yv};
            FqElem lhs = phi_map(i, y, FqElem{K.get(), K->add(K->mul(cv, xv), xw)});
            FqElem rhs = FqElem{K.get(), K->mul(cv, phi_map(i, y, FqElem{K.get(), xv}).v)} +
                         phi_map(i, y, FqElem{K.get(), xw});
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("dlog basics") {
    auto F = make_field(3, 1, 2, 1);
    CHECK(dlog(FqElem{F.get(), 1}) == 0);
    CHECK(dlog(generator(F)) == 1);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        uint32_t a = 1 + static_cast<uint32_t>(rng() % F->order);
        uint32_t b = 1 + static_cast<uint32_t>(rng() % F->order);
        FqElem x{F.get(), F->exp_[a - 1]}, y{F.get(), F->exp_[b - 1]};
        CHECK((dlog(x) + dlog(y)) % F->order == dlog(x * y));
    }
    CHECK_THROWS(dlog(FqElem{F.get(), 0}));
}
