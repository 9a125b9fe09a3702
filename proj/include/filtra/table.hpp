#ifndef FILTRA_TABLE_HPP
#define FILTRA_TABLE_HPP

#include <map>
#include <string>
#include <vector>

#include "filtra/error.hpp"

namespace filtra {

/// Table-driven subgroup backend: named nodes with orders, a containment
/// relation, and join/meet/commutator/section tables.  Lets the filter and
/// graded-ring machinery run on groups that are not polycyclic.

struct SubgroupTable {
    std::vector<std::string> names;
    std::vector<unsigned long long> orders;
    std::vector<std::vector<unsigned char>> below; // below[a][b]: a contained in b
    std::map<std::pair<int, int>, int> joins, meets, comms;
    std::map<std::pair<int, int>, std::vector<long long>> sections; // (H,K) with K <= H

    int size() const { return static_cast<int>(names.size()); }

    int index(const std::string& name) const {
        for (int i = 0; i < size(); ++i)
            if (names[i] == name) return i;
        throw Error("MissingEntry", "unknown node '" + name + "'");
    }

    bool leq(int a, int b) const { return below[a][b] != 0; }

    int lookup(const std::map<std::pair<int, int>, int>& t, int a, int b, const char* what) const {
        auto it = t.find({std::min(a, b), std::max(a, b)});
        if (it == t.end())
            throw Error("MissingEntry", std::string(what) + " entry for (" + names[a] + "," + names[b] + ")");
        return it->second;
    }

    int join(int a, int b) const {
        if (leq(a, b)) return b;
        if (leq(b, a)) return a;
        return lookup(joins, a, b, "join");
    }
    int meet(int a, int b) const {
        if (leq(a, b)) return a;
        if (leq(b, a)) return b;
        return lookup(meets, a, b, "meet");
    }
    int comm(int a, int b) const { return lookup(comms, a, b, "commutator"); }

    std::vector<long long> section_invariants(int h, int k) const {
        auto it = sections.find({h, k});
        if (it == sections.end())
            throw Error("MissingEntry", "section entry for " + names[h] + "/" + names[k]);
        return it->second;
    }

    int top() const {
        for (int a = 0; a < size(); ++a) {
            bool is_top = true;
            for (int b = 0; b < size(); ++b)
                if (!leq(b, a)) is_top = false;
            if (is_top) return a;
        }
        throw Error("MissingEntry", "table has no top node");
    }

    int bottom() const {
        for (int a = 0; a < size(); ++a) {
            bool is_bot = true;
            for (int b = 0; b < size(); ++b)
                if (!leq(a, b)) is_bot = false;
            if (is_bot) return a;
        }
        throw Error("MissingEntry", "table has no bottom node");
    }
};

struct TableReport {
    bool valid = true;
    std::vector<std::string> witnesses;
};

inline TableReport validate_table(const SubgroupTable& t) {
    TableReport rep;
    auto fail = [&](const std::string& w) {
        rep.valid = false;
        rep.witnesses.push_back(w);
    };
    const int n = t.size();
    for (int a = 0; a < n; ++a) {
        if (!t.leq(a, a)) fail("not reflexive at " + t.names[a]);
        for (int b = 0; b < n; ++b) {
            if (a != b && t.leq(a, b) && t.leq(b, a))
                fail("not antisymmetric at " + t.names[a] + "," + t.names[b]);
            if (t.leq(a, b) && t.orders[a] > t.orders[b])
                fail("order not monotone along below at " + t.names[a] + "," + t.names[b]);
            for (int c = 0; c < n; ++c)
                if (t.leq(a, b) && t.leq(b, c) && !t.leq(a, c))
                    fail("not transitive at " + t.names[a] + "," + t.names[b] + "," + t.names[c]);
        }
    }
    try {
        t.top();
    } catch (const Error&) {
        fail("no top node");
    }
    auto check_bound = [&](bool is_join, int a, int b, int v) {
        if (is_join) {
            if (!t.leq(a, v) || !t.leq(b, v)) fail("join not an upper bound at " + t.names[a] + "," + t.names[b]);
            for (int c = 0; c < n; ++c)
                if (t.leq(a, c) && t.leq(b, c) && !t.leq(v, c))
                    fail("join not least at " + t.names[a] + "," + t.names[b]);
        } else {
            if (!t.leq(v, a) || !t.leq(v, b)) fail("meet not a lower bound at " + t.names[a] + "," + t.names[b]);
            for (int c = 0; c < n; ++c)
                if (t.leq(c, a) && t.leq(c, b) && !t.leq(c, v))
                    fail("meet not greatest at " + t.names[a] + "," + t.names[b]);
        }
    };
    for (auto& [ab, v] : t.joins) check_bound(true, ab.first, ab.second, v);
    for (auto& [ab, v] : t.meets) check_bound(false, ab.first, ab.second, v);
    for (auto& [ab, v] : t.comms) {
        auto sym = t.comms.find({ab.first, ab.second});
        auto rev = t.comms.find({ab.second, ab.first});
        if (rev != t.comms.end() && rev->second != sym->second)
            fail("commutator not symmetric at " + t.names[ab.first] + "," + t.names[ab.second]);
        // [A,B] below both arguments (normal-subgroup convention)
        if (!t.leq(v, ab.first) || !t.leq(v, ab.second))
            fail("commutator not below arguments at " + t.names[ab.first] + "," + t.names[ab.second]);
    }
    // commutator monotone where comparable entries exist
    for (auto& [ab, v] : t.comms)
        for (auto& [cd, w] : t.comms)
            if (t.leq(ab.first, cd.first) && t.leq(ab.second, cd.second) && !t.leq(v, w))
                fail("commutator not monotone between (" + t.names[ab.first] + "," + t.names[ab.second] +
                     ") and (" + t.names[cd.first] + "," + t.names[cd.second] + ")");
    for (auto& [hk, inv] : t.sections) {
        if (!t.leq(hk.second, hk.first)) fail("section pair not nested: " + t.names[hk.first] + "/" + t.names[hk.second]);
        unsigned long long prod = 1;
        for (long long d : inv) prod *= static_cast<unsigned long long>(d);
        if (t.orders[hk.second] * prod != t.orders[hk.first])
            fail("section invariants do not multiply to the index at " + t.names[hk.first] + "/" +
                 t.names[hk.second]);
    }
    return rep;
}

/// The GL(2,7) example table: nodes GL and SL (and optionally 1).
inline SubgroupTable gl27_table(bool with_trivial = false) {
    SubgroupTable t;
    t.names = {"GL", "SL"};
    t.orders = {2016, 336}; // |GL(2,7)| = (49-1)(49-7), |SL| = |GL|/6
    if (with_trivial) {
        t.names.push_back("1");
        t.orders.push_back(1);
    }
    int n = t.size();
    t.below.assign(n, std::vector<unsigned char>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t.below[a][b] = (a >= b) ? 1 : 0; // chain GL > SL (> 1)
    auto put = [&](std::map<std::pair<int, int>, int>& m, int a, int b, int v) {
        m[{std::min(a, b), std::max(a, b)}] = v;
    };
    int GL = 0, SL = 1;
    put(t.comms, GL, GL, SL);
    put(t.comms, GL, SL, SL);
    put(t.comms, SL, SL, SL);
    t.sections[{GL, SL}] = {6};
    t.sections[{GL, GL}] = {};
    t.sections[{SL, SL}] = {};
    if (with_trivial) {
        int ONE = 2;
        put(t.comms, GL, ONE, ONE);
        put(t.comms, SL, ONE, ONE);
        put(t.comms, ONE, ONE, ONE);
        t.sections[{ONE, ONE}] = {};
    }
    return t;
}

} // namespace filtra

#endif
