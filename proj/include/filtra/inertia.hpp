#ifndef FILTRA_INERTIA_HPP
#define FILTRA_INERTIA_HPP

#include <deque>
#include <map>
#include <set>
#include <vector>

#include "filtra/filter.hpp"

namespace filtra {

/// Stratification of the image by generated boundaries: level 0 is the
/// minimal member, and a value joins the next level when its boundary is
/// generated by members of the current one.  Values never reaching the
/// terminal level are the inert subgroups.
template <class B>
struct InertiaReport {
    std::vector<std::vector<typename B::Sub>> levels;
    std::vector<typename B::Sub> terminal;
    std::vector<typename B::Sub> inert;
    std::map<std::string, std::vector<std::string>> witness; // member -> generating set
};

template <class B>
InertiaReport<B> b_sequence(const Filter<B>& f) {
    const B& b = f.backend;
    InertiaReport<B> rep;
    Filter<B> d = boundary(f);
    std::map<std::string, typename B::Sub> image;
    for (const auto& v : f.values) image.emplace(b.key(v), v);

    std::map<std::string, typename B::Sub> cur;
    typename B::Sub bot = minimal_member(f);
    cur.emplace(b.key(bot), bot);
    rep.levels.push_back({bot});
    rep.witness[b.key(bot)] = {};
    while (true) {
        std::map<std::string, typename B::Sub> nxt = cur;
        std::map<std::string, std::vector<std::string>> how;
        for (int s = 0; s < f.m.n; ++s) {
            const auto& v = f.values[static_cast<size_t>(s)];
            if (nxt.count(b.key(v))) continue;
            typename B::Sub acc = b.bottom();
            std::vector<std::string> gens;
            for (const auto& [k, m] : cur)
                if (b.leq(m, d.values[static_cast<size_t>(s)])) {
                    acc = b.join(acc, m);
                    gens.push_back(k);
                }
            if (b.eq(acc, d.values[static_cast<size_t>(s)])) {
                nxt.emplace(b.key(v), v);
                how[b.key(v)] = gens;
            }
        }
        if (nxt.size() == cur.size()) break;
        std::vector<typename B::Sub> level;
        for (const auto& [k, v] : nxt) level.push_back(v);
        rep.levels.push_back(level);
        for (auto& [k, g] : how) rep.witness[k] = g;
        cur = std::move(nxt);
    }
    for (const auto& [k, v] : cur) rep.terminal.push_back(v);
    for (const auto& [k, v] : image)
        if (!cur.count(k)) rep.inert.push_back(v);
    std::sort(rep.inert.begin(), rep.inert.end(), [&](const auto& x, const auto& y) {
        if (b.order(x) != b.order(y)) return b.order(x) < b.order(y);
        return b.key(x) < b.key(y);
    });
    return rep;
}

/// Cross-check of the two equivalent no-inertia characterizations: every
/// boundary is generated by values at indices where value and boundary differ,
/// if and only if the stratification exhausts the image.
template <class B>
struct PropInertReport {
    bool boundaries_generated = true; // from contributing indices only
    bool no_inert = true;             // stratification exhausts the image
    bool agree = false;
    std::vector<std::string> witnesses;
};

template <class B>
PropInertReport<B> check_prop_inert(const Filter<B>& f) {
    const B& b = f.backend;
    PropInertReport<B> rep;
    Filter<B> d = boundary(f);
    std::vector<int> contributing; // indices t with phi_t != dphi_t
    for (int t = 0; t < f.m.n; ++t)
        if (!b.eq(f.values[static_cast<size_t>(t)], d.values[static_cast<size_t>(t)]))
            contributing.push_back(t);
    for (int s = 0; s < f.m.n; ++s) {
        typename B::Sub acc = b.bottom();
        for (int t : contributing)
            if (b.leq(f.values[static_cast<size_t>(t)], d.values[static_cast<size_t>(s)]))
                acc = b.join(acc, f.values[static_cast<size_t>(t)]);
        if (!b.eq(acc, d.values[static_cast<size_t>(s)])) {
            rep.boundaries_generated = false;
            rep.witnesses.push_back(f.m.str(s));
        }
    }
    rep.no_inert = b_sequence(f).inert.empty();
    rep.agree = rep.boundaries_generated == rep.no_inert;
    return rep;
}

namespace detail_inertia {

/// On a truncated free monoid, a boundary index is a faithful stand-in for
/// the infinite tail only when the value has stabilized one step earlier.
inline std::vector<int> unstable_sinks(const Filter<PcBackend>& f) {
    std::vector<int> out;
    const Monoid& m = f.m;
    for (int s = 0; s < m.n; ++s) {
        std::vector<int> c = m.coords(s);
        for (int fct = 0; fct < m.dim(); ++fct) {
            if (c[fct] != m.factors[fct].r + m.factors[fct].s - 1) continue;
            std::vector<int> c2 = c;
            --c2[fct];
            int s2 = m.index(c2);
            if (!f.backend.eq(f.values[static_cast<size_t>(s)],
                              f.values[static_cast<size_t>(s2)])) {
                out.push_back(s);
                break;
            }
        }
    }
    return out;
}

inline bool generates(const Monoid& m, const std::set<int>& X) {
    std::set<int> gen = X;
    gen.insert(0);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(gen.begin(), gen.end());
        for (int a : cur)
            for (int x : X)
                if (gen.insert(m.add(a, x)).second) grew = true;
    }
    return static_cast<int>(gen.size()) == m.n;
}

} // namespace detail_inertia

namespace detail_inertia {

inline void require_nilpotent(const PcBackend& b, int* cls) {
    if (!b.G->is_nilpotent(cls)) throw Error("NotNilpotent", "refresh requires a nilpotent group");
}

inline void require_progressive(const Filter<PcBackend>& f) {
    auto prog = is_progressive(f);
    if (prog.progressive) return;
    if (!f.m.free_truncated) {
        std::string w;
        for (int s : prog.witnesses) w += (w.empty() ? "" : ", ") + f.m.str(s);
        throw Error("NotProgressive", "nontrivial values at sinks: " + w);
    }
    std::vector<int> bad = unstable_sinks(f);
    if (!bad.empty())
        throw Error("NotProgressive",
                    "value not stabilized at truncation boundary " + f.m.str(bad.front()));
}

} // namespace detail_inertia

/// Redefine the filter on the indices carrying an inert subgroup:
/// restricted-partition commutator products, then the order-reversing
/// completion joining over everything above.  No minimality check here;
/// the construction is sound for any inert subgroup.
inline Filter<PcBackend> refresh_core(const Filter<PcBackend>& f, const Subgroup& H, int cls) {
    const PcBackend& b = f.backend;
    const Monoid& m = f.m;
    std::set<int> I;
    for (int s = 0; s < m.n; ++s)
        if (b.eq(f.values[static_cast<size_t>(s)], H)) I.insert(s);
    std::set<int> allowed;
    for (int s = 0; s < m.n; ++s)
        if (!I.count(s)) allowed.insert(s);
    // J: the minimal elements of I, widened until the complement generates
    std::vector<int> iord(I.begin(), I.end());
    std::sort(iord.begin(), iord.end(), [&](int a, int c) {
        if (m.rank(a) != m.rank(c)) return m.rank(a) < m.rank(c);
        return m.coords(a) < m.coords(c);
    });
    for (int s : iord) {
        bool minimal = true;
        for (int t : I)
            if (t != s && m.leq(t, s)) minimal = false;
        if (minimal) allowed.insert(s);
    }
    for (int s : iord) {
        if (detail_inertia::generates(m, allowed)) break;
        allowed.insert(s);
    }

    // nu: joined left-normed commutators over part sequences from the allowed set
    std::vector<Subgroup> nu(static_cast<size_t>(m.n), b.bottom());
    nu[0] = f.values[0];
    struct State {
        int s;
        Subgroup v;
        int len;
    };
    std::vector<std::pair<int, Subgroup>> parts;
    for (int r : allowed)
        if (r != 0 && b.order(f.values[static_cast<size_t>(r)]) > 1)
            parts.push_back({r, f.values[static_cast<size_t>(r)]});
    std::set<std::pair<int, std::string>> seen;
    std::deque<State> work;
    for (auto& [r, v] : parts)
        if (seen.insert({r, b.key(v)}).second) work.push_back({r, v, 1});
    while (!work.empty()) {
        State st = work.front();
        work.pop_front();
        nu[static_cast<size_t>(st.s)] = b.join(nu[static_cast<size_t>(st.s)], st.v);
        if (b.order(st.v) == 1 || st.len >= cls) continue;
        for (auto& [r, v] : parts) {
            int s2 = m.add(st.s, r);
            Subgroup v2 = b.comm(st.v, v);
            if (seen.insert({s2, b.key(v2)}).second) work.push_back({s2, v2, st.len + 1});
        }
    }

    std::vector<int> support;
    for (int t = 0; t < m.n; ++t)
        if (b.order(nu[static_cast<size_t>(t)]) > 1) support.push_back(t);
    Filter<PcBackend> out{m, b, {}};
    out.values.reserve(static_cast<size_t>(m.n));
    for (int s = 0; s < m.n; ++s) {
        Subgroup acc = s == 0 ? nu[0] : b.bottom();
        for (int t : support)
            if (m.leq(s, t) && !b.leq(nu[static_cast<size_t>(t)], acc))
                acc = b.join(acc, nu[static_cast<size_t>(t)]);
        out.values.push_back(acc);
    }
    return out;
}

/// Refresh a single minimal inert subgroup.
inline Filter<PcBackend> refresh_once(const Filter<PcBackend>& f, const Subgroup& H) {
    const PcBackend& b = f.backend;
    int cls = 0;
    detail_inertia::require_nilpotent(b, &cls);
    detail_inertia::require_progressive(f);
    InertiaReport<PcBackend> rep = b_sequence(f);
    bool found = false;
    for (const auto& K : rep.inert) {
        if (b.eq(K, H)) found = true;
        if (!b.eq(K, H) && b.leq(K, H))
            throw Error("NotMinimalInert", "a smaller inert subgroup exists below the given one");
    }
    if (!found) throw Error("NotMinimalInert", "the given subgroup is not inert");
    return refresh_core(f, H, cls);
}

/// Transport a filter along the clipping map of a truncated free lift.
inline Filter<PcBackend> lift_filter(const Filter<PcBackend>& f, const std::vector<int>& bounds,
                                     int cap = 4096) {
    Monoid lifted = lift_free(f.m, bounds, cap);
    Filter<PcBackend> out{lifted, f.backend, {}};
    out.values.reserve(static_cast<size_t>(lifted.n));
    for (int s = 0; s < lifted.n; ++s)
        out.values.push_back(f.values[static_cast<size_t>(lifted.lift_index_map[s])]);
    return out;
}

/// Remove all inert subgroups: lift to a truncated free monoid when the
/// filter is not progressive, then refresh minimal inert subgroups until
/// none remain.
inline Filter<PcBackend> refresh_all(const Filter<PcBackend>& f) {
    const PcBackend& b = f.backend;
    int cls = 0;
    detail_inertia::require_nilpotent(b, &cls);

    Filter<PcBackend> cur = f;
    if (!is_progressive(f).progressive && !f.m.free_truncated) {
        std::vector<int> bounds(static_cast<size_t>(f.m.dim()), 0);
        for (int s = 0; s < f.m.n; ++s) {
            if (b.order(f.values[static_cast<size_t>(s)]) == 1) continue;
            std::vector<int> c = f.m.coords(s);
            for (int fct = 0; fct < f.m.dim(); ++fct)
                bounds[static_cast<size_t>(fct)] =
                    std::max(bounds[static_cast<size_t>(fct)], c[static_cast<size_t>(fct)]);
        }
        for (int fct = 0; fct < f.m.dim(); ++fct) {
            int floor = f.m.factors[static_cast<size_t>(fct)].r +
                        f.m.factors[static_cast<size_t>(fct)].s - 1;
            bounds[static_cast<size_t>(fct)] =
                std::max(bounds[static_cast<size_t>(fct)] + cls + 1, floor + 1);
        }
        cur = lift_filter(f, bounds);
    }
    detail_inertia::require_progressive(cur);

    auto same = [&](const Filter<PcBackend>& x, const Filter<PcBackend>& y) {
        for (int s = 0; s < x.m.n; ++s)
            if (!b.eq(x.values[static_cast<size_t>(s)], y.values[static_cast<size_t>(s)]))
                return false;
        return true;
    };
    std::set<std::string> original;
    for (const auto& v : f.values) original.insert(b.key(v));
    size_t rounds = 0, cap = original.size() * original.size() + 1;
    while (true) {
        InertiaReport<PcBackend> rep = b_sequence(cur);
        if (rep.inert.empty()) break;
        if (++rounds > cap)
            throw Error("IterationCapExceeded",
                        "inertia removal did not terminate in " + std::to_string(cap) + " rounds");
        // prefer the smallest inert subgroup; if refreshing it is a fixpoint,
        // fall back to the next one up
        bool progressed = false;
        for (const auto& H : rep.inert) {
            Filter<PcBackend> cand = refresh_core(cur, H, cls);
            if (!same(cand, cur)) {
                cur = std::move(cand);
                progressed = true;
                break;
            }
        }
        if (!progressed)
            throw Error("IterationCapExceeded", "no refresh step makes progress");
    }
    return cur;
}

/// The boundary at 0 must be solvable: its derived series has to reach the
/// minimal member of the filter.
template <class B>
bool solvability_check(const Filter<B>& f) {
    const B& b = f.backend;
    typename B::Sub d = boundary(f).values[0];
    while (true) {
        typename B::Sub nxt = b.comm(d, d);
        if (b.eq(nxt, d)) break;
        d = nxt;
    }
    return b.eq(d, minimal_member(f));
}

} // namespace filtra

#endif
