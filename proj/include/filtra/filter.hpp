#ifndef FILTRA_FILTER_HPP
#define FILTRA_FILTER_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "filtra/monoid.hpp"
#include "filtra/pcgroup.hpp"
#include "filtra/table.hpp"

namespace filtra {

/// Subgroup backends.  A backend exposes the lattice of subgroups of one
/// ambient group: join, meet, commutator, containment, orders, and a
/// deterministic string key per subgroup.

struct PcBackend {
    using Sub = Subgroup;
    std::shared_ptr<const PcGroup> G;

    explicit PcBackend(PcGroup g) : G(std::make_shared<const PcGroup>(std::move(g))) {}
    explicit PcBackend(std::shared_ptr<const PcGroup> g) : G(std::move(g)) {}

    Sub join(const Sub& a, const Sub& b) const { return G->join(a, b); }
    Sub meet(const Sub& a, const Sub& b) const { return G->intersection(a, b); }
    Sub comm(const Sub& a, const Sub& b) const { return G->commutator_subgroup(a, b); }
    bool leq(const Sub& a, const Sub& b) const { return G->subgroup_leq(a, b); }
    bool eq(const Sub& a, const Sub& b) const { return G->equals(a, b); }
    bool normal(const Sub& a) const { return G->is_normal(a); }
    unsigned long long order(const Sub& a) const { return G->order(a); }
    Sub top() const { return G->full_group(); }
    Sub bottom() const { return G->trivial_subgroup(); }

    std::string key(const Sub& a) const {
        std::ostringstream os;
        for (const Elt& g : a.gens) {
            os << '<';
            for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
            os << '>';
        }
        return a.gens.empty() ? "<>" : os.str();
    }
};

struct TableBackend {
    using Sub = int;
    std::shared_ptr<const SubgroupTable> t;

    explicit TableBackend(SubgroupTable tab)
        : t(std::make_shared<const SubgroupTable>(std::move(tab))) {}
    explicit TableBackend(std::shared_ptr<const SubgroupTable> tab) : t(std::move(tab)) {}

    Sub join(Sub a, Sub b) const { return t->join(a, b); }
    Sub meet(Sub a, Sub b) const { return t->meet(a, b); }
    Sub comm(Sub a, Sub b) const { return t->comm(a, b); }
    bool leq(Sub a, Sub b) const { return t->leq(a, b); }
    bool eq(Sub a, Sub b) const { return a == b; }
    bool normal(Sub) const { return true; } // the table lists normal subgroups only
    unsigned long long order(Sub a) const { return t->orders[a]; }
    Sub top() const { return t->top(); }
    Sub bottom() const { return t->bottom(); }
    std::string key(Sub a) const { return t->names[a]; }
};

/// A filter: a total map from a finite indexing monoid into the subgroups of
/// one group, subject to the commutator and order-reversal axioms.
template <class B>
struct Filter {
    Monoid m;
    B backend;
    std::vector<typename B::Sub> values; // indexed by monoid element

    const typename B::Sub& at(int s) const { return values[static_cast<size_t>(s)]; }
};

struct FilterReport {
    bool valid = true;
    std::vector<std::string> witnesses;
};

template <class B>
FilterReport validate_filter(const Filter<B>& f) {
    FilterReport rep;
    auto fail = [&](const std::string& w) {
        rep.valid = false;
        rep.witnesses.push_back(w);
    };
    const Monoid& m = f.m;
    if (static_cast<int>(f.values.size()) != m.n) {
        fail("value table size mismatch");
        return rep;
    }
    for (int s = 0; s < m.n; ++s)
        if (!f.backend.normal(f.values[s]))
            fail("value at " + m.str(s) + " is not normal");
    for (int s = 0; s < m.n; ++s)
        for (int t = s; t < m.n; ++t) {
            auto c = f.backend.comm(f.values[s], f.values[t]);
            if (!f.backend.leq(c, f.values[m.add(s, t)]))
                fail("commutator axiom fails at " + m.str(s) + " + " + m.str(t));
        }
    for (int s = 0; s < m.n; ++s)
        for (int t = 0; t < m.n; ++t)
            if (m.lt(s, t) && !f.backend.leq(f.values[t], f.values[s]))
                fail("order reversal fails between " + m.str(s) + " and " + m.str(t));
    return rep;
}

/// Boundary: at each index, the join of the values at all strictly later
/// reachable indices.  On saturated indices s + t may equal s, so a sink
/// contributes its own value.
template <class B>
Filter<B> boundary(const Filter<B>& f) {
    Filter<B> out{f.m, f.backend, {}};
    out.values.reserve(f.values.size());
    for (int s = 0; s < f.m.n; ++s) {
        typename B::Sub acc = f.backend.bottom();
        for (int t = 1; t < f.m.n; ++t) { // element 0 of the monoid has index 0
            const auto& v = f.values[f.m.add(s, t)];
            if (f.backend.order(v) > 1 && !f.backend.leq(v, acc)) acc = f.backend.join(acc, v);
        }
        out.values.push_back(acc);
    }
    return out;
}

template <class B>
struct LatticeClosure {
    std::vector<typename B::Sub> subs;          // order descending, key ascending
    std::vector<std::pair<int, int>> edges;     // (upper, lower) covering pairs
    int find(const B& b, const typename B::Sub& s) const {
        for (size_t i = 0; i < subs.size(); ++i)
            if (b.eq(subs[i], s)) return static_cast<int>(i);
        return -1;
    }
};

template <class B>
LatticeClosure<B> lattice_closure(const Filter<B>& f, size_t value_cap = 16,
                                  size_t node_cap = 4096) {
    const B& b = f.backend;
    std::vector<typename B::Sub> subs;
    auto add = [&](const typename B::Sub& s) {
        for (const auto& x : subs)
            if (b.eq(x, s)) return false;
        subs.push_back(s);
        return true;
    };
    for (const auto& v : f.values) add(v);
    if (subs.size() > value_cap)
        throw Error("CapExceeded", "filter image has " + std::to_string(subs.size()) +
                                       " distinct values (cap " + std::to_string(value_cap) + ")");
    bool grew = true;
    while (grew) {
        grew = false;
        const size_t cur = subs.size();
        for (size_t i = 0; i < cur; ++i)
            for (size_t j = i + 1; j < cur; ++j) {
                if (add(b.meet(subs[i], subs[j]))) grew = true;
                if (add(b.join(subs[i], subs[j]))) grew = true;
                if (subs.size() > node_cap)
                    throw Error("CapExceeded", "lattice closure exceeded " +
                                                   std::to_string(node_cap) + " nodes");
            }
    }
    std::stable_sort(subs.begin(), subs.end(), [&](const auto& x, const auto& y) {
        if (b.order(x) != b.order(y)) return b.order(x) > b.order(y);
        return b.key(x) < b.key(y);
    });
    LatticeClosure<B> lat;
    lat.subs = std::move(subs);
    const int n = static_cast<int>(lat.subs.size());
    auto lt = [&](int x, int y) { // x strictly below y
        return !b.eq(lat.subs[x], lat.subs[y]) && b.leq(lat.subs[x], lat.subs[y]);
    };
    for (int up = 0; up < n; ++up)
        for (int lo = 0; lo < n; ++lo) {
            if (!lt(lo, up)) continue;
            bool covering = true;
            for (int mid = 0; mid < n; ++mid)
                if (lt(lo, mid) && lt(mid, up)) covering = false;
            if (covering) lat.edges.push_back({up, lo});
        }
    std::sort(lat.edges.begin(), lat.edges.end());
    return lat;
}

struct DistributivityReport {
    bool distributive = true;
    std::string witness;
};

template <class B>
DistributivityReport is_distributive(const LatticeClosure<B>& lat, const B& b) {
    DistributivityReport rep;
    const auto& S = lat.subs;
    for (size_t x = 0; x < S.size(); ++x)
        for (size_t y = 0; y < S.size(); ++y)
            for (size_t z = 0; z < S.size(); ++z) {
                auto lhs = b.meet(S[x], b.join(S[y], S[z]));
                auto rhs = b.join(b.meet(S[x], S[y]), b.meet(S[x], S[z]));
                if (!b.eq(lhs, rhs)) {
                    rep.distributive = false;
                    rep.witness = b.key(S[x]) + " ^ (" + b.key(S[y]) + " v " + b.key(S[z]) + ")";
                    return rep;
                }
            }
    return rep;
}

struct ProgressReport {
    bool progressive = true;
    std::vector<int> witnesses; // saturated indices carrying a nontrivial value
};

template <class B>
ProgressReport is_progressive(const Filter<B>& f) {
    ProgressReport rep;
    for (int s = 0; s < f.m.n; ++s)
        if (f.backend.order(f.values[s]) > 1 && !f.m.is_semi_cancellative(s)) {
            rep.progressive = false;
            rep.witnesses.push_back(s);
        }
    return rep;
}

/// The minimum of the image, verified to equal the meet of all values.
template <class B>
typename B::Sub minimal_member(const Filter<B>& f) {
    const B& b = f.backend;
    typename B::Sub acc = f.values[0];
    for (const auto& v : f.values) acc = b.meet(acc, v);
    for (const auto& v : f.values)
        if (b.eq(v, acc)) return acc;
    throw Error("BadInput", "image meet is not attained by any value");
}

/// Push a filter down to G/H where H is the minimal member.
struct QuotientFilter {
    PcQuotient data;
    Filter<PcBackend> filter;
};

inline QuotientFilter quotient_filter(const Filter<PcBackend>& f, const Subgroup& H) {
    const PcGroup& G = *f.backend.G;
    if (!f.backend.eq(H, minimal_member(f)))
        throw Error("NotMinimal", "subgroup is not the minimal member of the filter");
    if (!G.is_normal(H)) throw Error("NotMinimal", "subgroup is not normal");
    PcQuotient Q = quotient(G, H);
    PcBackend qb{Q.q};
    Filter<PcBackend> qf{f.m, qb, {}};
    for (const Subgroup& v : f.values) {
        std::vector<Elt> gens;
        for (const Elt& g : v.gens) gens.push_back(project_to_quotient(G, Q, H, g));
        qf.values.push_back(qb.G->subgroup(gens, false));
    }
    return QuotientFilter{std::move(Q), std::move(qf)};
}

struct RefinementReport {
    bool refines = true;
    std::vector<int> witness; // for each index of the finer filter, the matched coarse index
    std::vector<std::string> failures;
};

/// rho refines phi when every phi-value reappears in rho's image and every
/// rho-value is sandwiched between some phi_t and its boundary.
template <class B>
RefinementReport refines(const Filter<B>& rho, const Filter<B>& phi) {
    const B& b = rho.backend;
    RefinementReport rep;
    Filter<B> dphi = boundary(phi);
    for (int t = 0; t < phi.m.n; ++t) {
        bool found = false;
        for (const auto& v : rho.values)
            if (b.eq(v, phi.values[t])) found = true;
        if (!found) {
            rep.refines = false;
            rep.failures.push_back("value at coarse index " + phi.m.str(t) +
                                   " is missing from the finer image");
        }
    }
    rep.witness.assign(static_cast<size_t>(rho.m.n), -1);
    for (int s = 0; s < rho.m.n; ++s) {
        for (int t = 0; t < phi.m.n; ++t)
            if (b.leq(dphi.values[t], rho.values[s]) && b.leq(rho.values[s], phi.values[t])) {
                rep.witness[static_cast<size_t>(s)] = t;
                break;
            }
        if (rep.witness[static_cast<size_t>(s)] < 0) {
            rep.refines = false;
            rep.failures.push_back("no sandwich index for fine index " + rho.m.str(s));
        }
    }
    return rep;
}

/// Hasse diagram in DOT, one node per subgroup labeled "name (order)".
template <class B>
std::string hasse_dot(const LatticeClosure<B>& lat, const B& b,
                      const std::function<std::string(const typename B::Sub&)>& name) {
    std::ostringstream os;
    os << "digraph lattice {\n  rankdir=TB;\n  node [shape=box];\n";
    for (size_t i = 0; i < lat.subs.size(); ++i)
        os << "  n" << i << " [label=\"" << name(lat.subs[i]) << " (" << b.order(lat.subs[i])
           << ")\"];\n";
    for (auto [up, lo] : lat.edges) os << "  n" << up << " -> n" << lo << ";\n";
    os << "}\n";
    return os.str();
}

template <class B>
std::string hasse_dot(const LatticeClosure<B>& lat, const B& b) {
    return hasse_dot<B>(lat, b, [&](const typename B::Sub& s) { return b.key(s); });
}

} // namespace filtra

#endif
