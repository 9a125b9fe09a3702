#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "example_filters.hpp"
#include "filtra/faithful.hpp"

using namespace filtra;
using fixtures::NamedFilter;

namespace {

Elt power(const BuiltinGroup& bg, long long k) { return bg.g.word({{1, k}}); }

std::vector<Elt> powers(const BuiltinGroup& bg, const std::vector<long long>& ks) {
    std::vector<Elt> out;
    for (long long k : ks) out.push_back(power(bg, k));
    return out;
}

bool same_elements(const PcGroup& g, std::vector<Elt> a, std::vector<Elt> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

std::vector<Elt> unit_elements(const PcGroup& g, int count) {
    std::vector<Elt> out;
    for (int i = 0; i < count; ++i) {
        Elt e(static_cast<size_t>(g.n()), 0);
        e[static_cast<size_t>(i)] = 1;
        out.push_back(e);
    }
    return out;
}

/// Heisenberg filter phi_(i,j) = gamma_(i+j) over the direct-ordered square.
Filter<PcBackend> heis_closure_filter(const BuiltinGroup& bg) {
    Monoid m = make_monoid({{3, 1}, {3, 1}}, OrderKind::Direct);
    PcBackend b{bg.g};
    Filter<PcBackend> f{m, b, {}};
    for (int s = 0; s < m.n; ++s) {
        auto c = m.coords(s);
        int deg = c[0] + c[1];
        f.values.push_back(deg <= 1 ? bg.named.at("G")
                                    : deg == 2 ? bg.named.at("Z") : bg.named.at("1"));
    }
    return f;
}

} // namespace

TEST_CASE("generating-set verdicts over the order-60 cyclic filter") {
    NamedFilter nf = fixtures::z60();
    const BuiltinGroup& bg = nf.group;

    SECTION("{2,3,10,15} is weakly filtered but not filtered") {
        auto v = is_filtered(powers(bg, {2, 3, 10, 15}), nf.filter);
        CHECK(v.weakly_filtered);
        CHECK_FALSE(v.filtered);
    }
    SECTION("{2,3} misses the deeper values") {
        auto v = is_weakly_filtered(powers(bg, {2, 3}), nf.filter);
        CHECK_FALSE(v.weakly_filtered);
        CHECK_FALSE(v.witnesses.empty());
    }
    SECTION("the full enumeration is always weakly filtered") {
        auto all = bg.g.enumerate_elements(bg.g.full_group());
        CHECK(is_weakly_filtered(all, nf.filter).weakly_filtered);
    }
    SECTION("{6,10,15,30} is filtered") {
        auto v = is_filtered(powers(bg, {6, 10, 15, 30}), nf.filter);
        CHECK(v.weakly_filtered);
        CHECK(v.filtered);
        CHECK(v.witnesses.empty());
    }
    SECTION("{2,3,5,6,10,15,30} fails with the documented witness sets") {
        auto v = is_filtered(powers(bg, {2, 3, 5, 6, 10, 15, 30}), nf.filter);
        CHECK(v.weakly_filtered);
        CHECK_FALSE(v.filtered);
        CHECK(same_elements(bg.g, v.product_side, powers(bg, {5, 10, 15, 30})));
        CHECK(same_elements(bg.g, v.union_side, powers(bg, {10, 15, 30})));
    }
    SECTION("the filter itself is not faithful") {
        auto rep = is_faithful_filter(nf.filter);
        CHECK_FALSE(rep.faithful);
        CHECK_FALSE(rep.witnesses.empty());
    }
}

TEST_CASE("the Heisenberg central-series filter is fully faithful") {
    NamedFilter nf = fixtures::heis_gamma();
    std::vector<Elt> X = unit_elements(nf.group.g, 3);

    auto fv = is_filtered(X, nf.filter);
    CHECK(fv.filtered);
    auto gv = is_faithful_genset(X, nf.filter);
    CHECK(gv.faithful);

    CHECK(is_faithful_filter(nf.filter).faithful);
    auto ff = is_fully_faithful(nf.filter);
    CHECK(ff.faithful);
    CHECK(ff.no_inert);
    CHECK(ff.boundary_fixed_at_zero);
    CHECK(ff.fully_faithful);

    auto full = is_full(nf.filter);
    CHECK(full.full);
    CHECK_FALSE(full.degenerate);
    CHECK(full.spot_checks_run);
}

TEST_CASE("bijection certificate for the Heisenberg central series") {
    NamedFilter nf = fixtures::heis_gamma();
    GradedLieRing L = associated_lie(nf.filter);
    BijectionCertificate cert = pi_map(nf.filter, L, graded_basis(L));
    CHECK(cert.ring_order == 27);
    CHECK(cert.group_order == 27);
    CHECK(cert.surjective);
    CHECK(cert.injective);
    CHECK(cert.lifts_are_pcgs);
    CHECK(cert.no_inert);
    REQUIRE(cert.lifts.size() == 3);
}

TEST_CASE("all 96 graded bases match all 96 filtered pcgs") {
    NamedFilter nf = fixtures::heis_gamma();
    auto rep = basis_pcgs_correspondence(nf.filter);
    CHECK(rep.bases_checked == 96);
    CHECK(rep.distinct_pcgs == 96);
    CHECK(rep.all_lifts_filtered_pcgs);
    CHECK(rep.round_trips);
    CHECK(rep.witnesses.empty());
}

TEST_CASE("correspondence edge cases") {
    SECTION("a rank-one component over F2 pairs one basis with one pcgs") {
        BuiltinGroup bg = cyclic_group(2);
        Monoid m = make_monoid({{2, 1}}, OrderKind::Direct);
        Filter<PcBackend> f = fixtures::place(m, bg, {{{0}, "G"}, {{1}, "G"}}, "1");
        auto rep = basis_pcgs_correspondence(f);
        CHECK(rep.bases_checked == 1);
        CHECK(rep.distinct_pcgs == 1);
        CHECK(rep.all_lifts_filtered_pcgs);
        CHECK(rep.round_trips);
    }
    SECTION("non-fully-faithful input is rejected") {
        try {
            basis_pcgs_correspondence(fixtures::z60().filter);
            FAIL("expected PreconditionFailed");
        } catch (const Error& e) {
            CHECK(e.code() == "PreconditionFailed");
        }
    }
}

TEST_CASE("the merged Heisenberg filter loses faithfulness but stays surjective") {
    BuiltinGroup bg = heisenberg(3);
    Filter<PcBackend> f = heis_closure_filter(bg);
    REQUIRE(validate_filter(f).valid);

    SECTION("the degree-one generator occupies two layers") {
        Elt x(static_cast<size_t>(bg.g.n()), 0);
        x[0] = 1;
        auto v = is_faithful_genset({x}, f);
        CHECK_FALSE(v.faithful);
        REQUIRE(v.ambiguous.size() == 1);
        const auto& at = v.ambiguous[0].second;
        REQUIRE(at.size() == 2);
        CHECK(std::count(at.begin(), at.end(), f.m.index({1, 0})) == 1);
        CHECK(std::count(at.begin(), at.end(), f.m.index({0, 1})) == 1);
    }
    SECTION("the filter-level antichain identity also fails") {
        CHECK_FALSE(is_faithful_filter(f).faithful);
        CHECK_FALSE(is_fully_faithful(f).fully_faithful);
    }
    SECTION("pi is onto but collapses: 2187 ring elements, 27 group elements") {
        GradedLieRing L = associated_lie(f);
        BijectionCertificate cert = pi_map(f, L, graded_basis(L));
        CHECK(cert.ring_order == 2187);
        CHECK(cert.group_order == 27);
        CHECK(cert.surjective);
        CHECK_FALSE(cert.injective);
        CHECK_FALSE(cert.lifts_are_pcgs);
    }
}

TEST_CASE("the unrepaired unitriangular grid blocks every faithful generating set") {
    NamedFilter nf = fixtures::ut52(false);
    const PcGroup& g = nf.group.g;
    // the only element of gamma4 - 1 occupies both (2,2) and (3,1)
    auto deep = g.enumerate_elements(nf.named("gamma4"));
    REQUIRE(deep.size() == 2);
    int hits = 0;
    for (const Elt& w : deep) {
        if (g.c.is_id(w)) continue;
        ++hits;
        auto v = is_faithful_genset({w}, nf.filter);
        CHECK_FALSE(v.faithful);
        REQUIRE(v.ambiguous.size() == 1);
        const auto& at = v.ambiguous[0].second;
        CHECK(std::count(at.begin(), at.end(), nf.filter.m.index({2, 2})) == 1);
        CHECK(std::count(at.begin(), at.end(), nf.filter.m.index({3, 1})) == 1);
    }
    CHECK(hits == 1);
}

TEST_CASE("the repaired unitriangular filter accepts the elementary matrices") {
    NamedFilter nf = fixtures::ut52(true);
    std::vector<Elt> X = unit_elements(nf.group.g, nf.group.g.n());
    REQUIRE(X.size() == 10);
    auto v = is_filtered(X, nf.filter);
    CHECK(v.weakly_filtered);
    CHECK(v.filtered);

    SECTION("yet the filter itself is not faithful") {
        auto rep = is_faithful_filter(nf.filter);
        CHECK_FALSE(rep.faithful);
        CHECK_FALSE(is_fully_faithful(nf.filter).fully_faithful);
    }
    SECTION("pi is onto but 2^11 > 2^10") {
        GradedLieRing L = associated_lie(nf.filter);
        BijectionCertificate cert = pi_map(nf.filter, L, graded_basis(L));
        CHECK(cert.ring_order == 2048);
        CHECK(cert.group_order == 1024);
        CHECK(cert.surjective);
        CHECK_FALSE(cert.injective);
        CHECK_FALSE(cert.lifts_are_pcgs);
    }
}

TEST_CASE("degenerate fullness of a zero ring") {
    SECTION("trivial beyond zero with trivial boundary is vacuously full") {
        BuiltinGroup bg = cyclic_group(2);
        Monoid m = make_monoid({{2, 1}}, OrderKind::Direct);
        Filter<PcBackend> f = fixtures::place(m, bg, {{{0}, "G"}}, "1");
        auto rep = is_full(f);
        CHECK(rep.degenerate);
        CHECK(rep.full);
    }
    SECTION("a zero ring over a nontrivial boundary is degenerate and not full") {
        NamedFilter nf = fixtures::heis_lex();
        auto rep = is_full(boundary(nf.filter));
        CHECK(rep.degenerate);
        CHECK_FALSE(rep.full);
    }
}
