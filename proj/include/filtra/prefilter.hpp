#ifndef FILTRA_PREFILTER_HPP
#define FILTRA_PREFILTER_HPP

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "filtra/filter.hpp"

namespace filtra {

/// A prefilter: a partial, order-reversing, normal-valued map on a
/// downward-closed generating subset of the monoid.
template <class B>
struct Prefilter {
    Monoid m;
    B backend;
    std::map<int, typename B::Sub> at; // domain X by monoid index
};

template <class B>
FilterReport validate_prefilter(const Prefilter<B>& p) {
    FilterReport rep;
    auto fail = [&](const std::string& w) {
        rep.valid = false;
        rep.witnesses.push_back(w);
    };
    const Monoid& m = p.m;
    if (!p.at.count(0)) fail("0 is not in the domain");
    // the domain generates the whole monoid
    std::set<int> gen;
    for (auto& [x, v] : p.at) gen.insert(x);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(gen.begin(), gen.end());
        for (int a : cur)
            for (auto& [x, v] : p.at)
                if (gen.insert(m.add(a, x)).second) grew = true;
    }
    if (static_cast<int>(gen.size()) != m.n) fail("domain does not generate the monoid");
    // downward closed
    for (auto& [x, v] : p.at)
        for (int y = 0; y < m.n; ++y)
            if (m.leq(y, x) && !p.at.count(y))
                fail("domain not downward closed: " + m.str(y) + " below " + m.str(x));
    for (auto& [x, v] : p.at)
        if (!p.backend.normal(v)) fail("value at " + m.str(x) + " is not normal");
    for (auto& [x, vx] : p.at)
        for (auto& [y, vy] : p.at)
            if (m.lt(x, y) && !p.backend.leq(vy, vx))
                fail("not order reversing between " + m.str(x) + " and " + m.str(y));
    return rep;
}

/// Closure: at each index, the product of iterated commutators over all
/// part sequences drawn from the domain.  Explored as a worklist over
/// (index, commutator value) states, deduplicated by subgroup key, so all
/// orderings and unbounded lengths are covered up to stabilization.
///
/// Incomparable directions interact beyond the parts they contribute: for
/// each pair x, y in the domain with neither below the other, the index
/// x + y additionally receives the derived subgroup of the join of the two
/// values, clipped below every domain value under x + y.  This is what makes
/// the closure of independently placed chains agree with the characteristic
/// series they generate jointly.
template <class B>
Filter<B> close(const Prefilter<B>& p, int class_hint = 0, size_t state_cap = 200000) {
    const B& b = p.backend;
    const Monoid& m = p.m;
    Filter<B> out{m, b, {}};
    out.values.assign(static_cast<size_t>(m.n), b.bottom());
    auto join_in = [&](int s, const typename B::Sub& v) {
        out.values[static_cast<size_t>(s)] = b.join(out.values[static_cast<size_t>(s)], v);
    };
    join_in(0, p.at.at(0));

    struct Part {
        int s;
        typename B::Sub v;
        int len;
    };
    std::vector<Part> parts;
    for (auto& [x, v] : p.at)
        if (x != 0) parts.push_back({x, v, 1});
    for (auto i = p.at.begin(); i != p.at.end(); ++i)
        for (auto j = std::next(i); j != p.at.end(); ++j) {
            if (i->first == 0 || j->first == 0) continue;
            if (!m.incomparable(i->first, j->first)) continue;
            int s0 = m.add(i->first, j->first);
            typename B::Sub J = b.join(i->second, j->second);
            typename B::Sub v0 = b.comm(J, J);
            for (auto& [z, vz] : p.at)
                if (m.leq(z, s0)) v0 = b.meet(v0, vz);
            parts.push_back({s0, v0, 2});
        }

    std::set<std::pair<int, std::string>> seen;
    std::deque<Part> work;
    for (const Part& pt : parts)
        if (seen.insert({pt.s, b.key(pt.v)}).second) work.push_back(pt);
    while (!work.empty()) {
        Part st = work.front();
        work.pop_front();
        join_in(st.s, st.v);
        if (b.order(st.v) == 1) continue;                  // deeper commutators stay trivial
        if (class_hint > 0 && st.len >= class_hint) continue;
        for (const Part& pt : parts) {
            int s2 = m.add(st.s, pt.s);
            typename B::Sub v2 = b.comm(st.v, pt.v);
            if (seen.insert({s2, b.key(v2)}).second) {
                if (seen.size() > state_cap)
                    throw Error("FixpointCapExceeded",
                                "closure state space exceeded " + std::to_string(state_cap));
                work.push_back({s2, v2, st.len + pt.len});
            }
        }
    }
    return out;
}

/// A monoid extension: new saturating factors appended to an existing monoid,
/// ordered independently of the old block structure.
struct MonoidExtension {
    Monoid extended;
    std::vector<int> embed; // old index -> extended index
};

inline MonoidExtension extend_monoid(const Monoid& m, const std::vector<Factor>& extra) {
    std::vector<Factor> factors = m.factors;
    std::vector<std::vector<int>> blocks = m.blocks;
    for (const Factor& f : extra) {
        blocks.push_back({static_cast<int>(factors.size())});
        factors.push_back(f);
    }
    MonoidExtension ext;
    ext.extended = make_monoid(factors, OrderKind::Blocks, blocks);
    ext.embed.resize(static_cast<size_t>(m.n));
    for (int s = 0; s < m.n; ++s) {
        std::vector<int> c = m.coords(s);
        c.resize(factors.size(), 0);
        ext.embed[static_cast<size_t>(s)] = ext.extended.index(c);
    }
    return ext;
}

/// Insert new subgroups into a filter at fresh indices of an extended monoid:
/// embed the old values, place the new ones, complete downward, and close.
template <class B>
Filter<B> insert_subgroups(const Filter<B>& f, const MonoidExtension& ext,
                           const std::vector<std::pair<std::vector<int>, typename B::Sub>>& added,
                           int class_hint = 0) {
    const B& b = f.backend;
    const Monoid& M = ext.extended;
    Prefilter<B> p{M, b, {}};
    for (int s = 0; s < f.m.n; ++s) p.at[ext.embed[static_cast<size_t>(s)]] = f.values[s];
    for (auto& [coords, H] : added) {
        if (!b.normal(H)) throw Error("PrefilterInvalid", "inserted subgroup is not normal");
        int s = M.index(coords);
        auto it = p.at.find(s);
        p.at[s] = it == p.at.end() ? H : b.join(it->second, H);
    }
    // downward completion: unassigned points below the domain receive the join
    // of everything assigned above them
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> dom;
        for (auto& [x, v] : p.at) dom.push_back(x);
        for (int x : dom)
            for (int y = 0; y < M.n; ++y)
                if (M.leq(y, x) && !p.at.count(y)) {
                    typename B::Sub acc = p.at.at(x);
                    for (auto& [z, vz] : p.at)
                        if (M.leq(y, z)) acc = b.join(acc, vz);
                    p.at[y] = acc;
                    grew = true;
                }
    }
    auto rep = validate_prefilter(p);
    if (!rep.valid) throw Error("PrefilterInvalid", rep.witnesses.front());
    return close(p, class_hint);
}

template <class B>
Filter<B> insert_subgroup(const Filter<B>& f, const MonoidExtension& ext,
                          const std::vector<int>& coords, const typename B::Sub& H,
                          int class_hint = 0) {
    return insert_subgroups<B>(f, ext, {{coords, H}}, class_hint);
}

} // namespace filtra

#endif
