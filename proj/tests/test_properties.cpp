#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "filtra/faithful.hpp"
#include "filtra/inertia.hpp"
#include "filtra/lie.hpp"
#include "filtra/prefilter.hpp"

#include "property_generators.hpp"

using namespace filtra;
using namespace propgen;

namespace {

constexpr int kCases = 200;

} // namespace

TEST_CASE("closures of random partial maps are valid filters") {
    std::mt19937 rng(9001);
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 256);
        auto gam = lower_central(b);
        Monoid m = random_direct_monoid(rng);
        Filter<PcBackend> full = weight_filter(b, gam, m, rng);
        Prefilter<PcBackend> p{m, b, {}};
        // a random downward-closed ball around 0, plus the full domain option
        if (rng() % 2) {
            for (int s = 0; s < m.n; ++s) p.at[s] = full.values[static_cast<size_t>(s)];
        } else {
            int radius = 1 + static_cast<int>(rng() % 2);
            for (int s = 0; s < m.n; ++s) {
                auto c = m.coords(s);
                int deg = 0;
                for (int x : c) deg += x;
                if (deg <= radius) p.at[s] = full.values[static_cast<size_t>(s)];
            }
        }
        REQUIRE(validate_prefilter(p).valid);
        Filter<PcBackend> f = close(p);
        CHECK(validate_filter(f).valid);
    }
}

TEST_CASE("boundaries of valid filters are valid and pointwise below") {
    std::mt19937 rng(9002);
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 1024);
        auto gam = lower_central(b);
        Monoid m = random_direct_monoid(rng);
        Filter<PcBackend> f = weight_filter(b, gam, m, rng);
        REQUIRE(validate_filter(f).valid);
        Filter<PcBackend> d = boundary(f);
        CHECK(validate_filter(d).valid);
        for (int s = 0; s < m.n; ++s)
            CHECK(b.leq(d.values[static_cast<size_t>(s)], f.values[static_cast<size_t>(s)]));
    }
}

TEST_CASE("single refresh steps stay valid and keep the untouched values") {
    std::mt19937 rng(9003);
    int done = 0;
    for (int it = 0; it < 20 * kCases && done < kCases; ++it) {
        CAPTURE(it);
        InertCase ic = inert_case(rng);
        REQUIRE(validate_filter(ic.f).valid);
        Filter<PcBackend> lf = lift_filter(ic.f, ic.lift_bounds);
        auto rep = b_sequence(lf);
        if (rep.inert.empty()) continue;
        const Subgroup& H = rep.inert[0]; // ascending order: minimal
        Filter<PcBackend> r = refresh_once(lf, H);
        ++done;
        CHECK(validate_filter(r).valid); // includes [nu_s, nu_t] <= nu_{s+t}
        for (int s = 0; s < lf.m.n; ++s) {
            CHECK(lf.backend.leq(r.values[static_cast<size_t>(s)],
                                 lf.values[static_cast<size_t>(s)]));
            if (!lf.backend.eq(lf.values[static_cast<size_t>(s)], H))
                CHECK(lf.backend.eq(r.values[static_cast<size_t>(s)],
                                    lf.values[static_cast<size_t>(s)]));
        }
        for (const auto& v : lf.values) CHECK(contains_value(r.values, lf.backend, v));
    }
    REQUIRE(done == kCases);
}

TEST_CASE("full refreshes remove all inertia and keep the image") {
    std::mt19937 rng(9004);
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        InertCase ic = inert_case(rng);
        Filter<PcBackend> theta = refresh_all(ic.f);
        CHECK(validate_filter(theta).valid);
        CHECK(b_sequence(theta).inert.empty());
        for (const auto& v : ic.f.values) CHECK(contains_value(theta.values, ic.b, v));
    }
}

TEST_CASE("inert-free filters give surjective coordinate maps") {
    std::mt19937 rng(9005);
    int done = 0;
    for (int it = 0; it < 20 * kCases && done < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 128);
        auto gam = lower_central(b);
        Monoid m = random_direct_monoid(rng);
        Filter<PcBackend> f = weight_filter(b, gam, m, rng);
        if (!b_sequence(f).inert.empty()) continue;
        // keep only truncation-exact filters: a nontrivial value stranded at
        // the saturated corner has no layer to surface through
        std::vector<int> mx(static_cast<size_t>(m.dim()));
        for (int k = 0; k < m.dim(); ++k)
            mx[static_cast<size_t>(k)] = m.factors[static_cast<size_t>(k)].size() - 1;
        if (b.order(f.values[static_cast<size_t>(m.index(mx))]) != 1) continue;
        ++done;
        GradedLieRing L = associated_lie(f);
        BijectionCertificate cert = pi_map(f, L, graded_basis(L));
        CHECK(cert.surjective);
    }
    REQUIRE(done == kCases);
}

TEST_CASE("fully faithful chain filters are bijective onto the group") {
    std::mt19937 rng(9006);
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 1024);
        auto gam = lower_central(b);
        Filter<PcBackend> f = chain_filter(b, gam);
        REQUIRE(is_fully_faithful(f).fully_faithful);
        GradedLieRing L = associated_lie(f);
        BijectionCertificate cert = pi_map(f, L, graded_basis(L));
        CHECK(cert.surjective);
        CHECK(cert.injective);
        CHECK(cert.ring_order == b.order(b.top()));
    }
}

TEST_CASE("filtered generating sets force distributivity and pass to the boundary") {
    std::mt19937 rng(9007);
    int nonvacuous = 0;
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        struct Case {
            Filter<PcBackend> f;
            std::vector<Elt> X;
        };
        Case cs = [&]() -> Case {
            if (it % 5 != 0) {
                PcBackend b = random_group(rng, 256);
                Filter<PcBackend> f = chain_filter(b, lower_central(b));
                std::vector<Elt> X = f.backend.G->enumerate_elements(f.backend.top());
                return {std::move(f), std::move(X)};
            }
            // cyclic groups with the grid pattern of the order-60 example
            static const long long primes[] = {2, 3, 5, 7};
            long long a = primes[rng() % 4], c = primes[rng() % 4], d = primes[rng() % 4];
            long long bb = primes[rng() % 4];
            while (bb == a) bb = primes[rng() % 4];
            BuiltinGroup bg = cyclic_group(a * bb * c * d);
            PcBackend b{bg.g};
            Monoid m = make_monoid({{3, 1}, {3, 1}}, OrderKind::Direct);
            auto sub = [&](long long k) { return b.G->subgroup({b.G->word({{1, k}})}, false); };
            Filter<PcBackend> f{m, b, {}};
            f.values.assign(static_cast<size_t>(m.n), b.bottom());
            f.values[static_cast<size_t>(m.index({0, 0}))] = b.top();
            f.values[static_cast<size_t>(m.index({1, 0}))] = sub(a);
            f.values[static_cast<size_t>(m.index({0, 1}))] = sub(bb);
            f.values[static_cast<size_t>(m.index({2, 0}))] = sub(a * c);
            f.values[static_cast<size_t>(m.index({0, 2}))] = sub(bb * c);
            // one element per meet of incomparable values, plus the deepest one
            std::vector<Elt> X;
            for (long long k : {a * bb, a * c, bb * c, a * bb * c})
                X.push_back(b.G->word({{1, k}}));
            return {std::move(f), std::move(X)};
        }();
        REQUIRE(validate_filter(cs.f).valid);
        GensetVerdict v = is_filtered(cs.X, cs.f);
        if (v.filtered) ++nonvacuous;
        if (!v.filtered) continue; // the implication has nothing to say
        CHECK(is_distributive(lattice_closure(cs.f), cs.f.backend).distributive);
        CHECK(is_filtered(cs.X, boundary(cs.f)).filtered);
    }
    CHECK(nonvacuous >= kCases / 2);
}

TEST_CASE("subgroup arithmetic matches brute-force element closures") {
    std::mt19937 rng(9008);
    int done = 0;
    for (int it = 0; it < 20 * kCases && done < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 128);
        Subgroup A = b.G->subgroup({random_element(b, rng), random_element(b, rng)}, true);
        Subgroup B = b.G->subgroup({random_element(b, rng)}, true);
        auto ea = b.G->enumerate_elements(A);
        auto eb = b.G->enumerate_elements(B);
        if (ea.size() * eb.size() > 20000) continue;
        ++done;

        // join: closure of the union
        std::vector<Elt> seed = ea;
        seed.insert(seed.end(), eb.begin(), eb.end());
        std::set<Elt> join_set = closure_of(b, seed);
        Subgroup J = b.join(A, B);
        CHECK(b.order(J) == join_set.size());
        for (const Elt& x : join_set) CHECK(b.G->membership(x, J));

        // meet: common elements
        std::set<Elt> sb(eb.begin(), eb.end());
        std::vector<Elt> common;
        for (const Elt& x : ea)
            if (sb.count(x)) common.push_back(x);
        Subgroup M = b.meet(A, B);
        CHECK(b.order(M) == common.size());
        for (const Elt& x : common) CHECK(b.G->membership(x, M));

        // commutator: closure of all pairwise commutators
        std::set<Elt> distinct;
        for (const Elt& x : ea)
            for (const Elt& y : eb) distinct.insert(b.G->commutator(x, y));
        std::set<Elt> comm_set = closure_of(b, {distinct.begin(), distinct.end()});
        Subgroup C = b.comm(A, B);
        CHECK(b.order(C) == comm_set.size());
        for (const Elt& x : comm_set) CHECK(b.G->membership(x, C));
    }
    REQUIRE(done == kCases);
}

TEST_CASE("the lower-central filter recovers the group order up to class four") {
    std::mt19937 rng(9009);
    for (int it = 0; it < kCases; ++it) {
        CAPTURE(it);
        PcBackend b = random_group(rng, 1024);
        auto gam = lower_central(b);
        REQUIRE(b.order(gam.back()) == 1);
        REQUIRE(gam.size() <= 5); // class <= 4 across the whole pool
        GradedLieRing L = associated_lie(chain_filter(b, gam));
        CHECK(L.total_order() == b.order(b.top()));
    }
}
