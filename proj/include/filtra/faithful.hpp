#ifndef FILTRA_FAITHFUL_HPP
#define FILTRA_FAITHFUL_HPP

#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "filtra/inertia.hpp"
#include "filtra/lie.hpp"

namespace filtra {

namespace detail_faithful {

inline std::string elt_key(const Elt& x) {
    std::string k;
    for (long long v : x) k += std::to_string(v) + ",";
    return k;
}

} // namespace detail_faithful

/// Verdict on a generating set relative to a filter.
struct GensetVerdict {
    std::vector<Elt> X;
    bool weakly_filtered = false;
    bool filtered = false;
    bool faithful = false;
    std::vector<std::string> witnesses;
    /// first failure of the product condition: the two element sets
    std::vector<Elt> product_side, union_side;
    /// elements with a non-unique layer, with the indices they occupy
    std::vector<std::pair<Elt, std::vector<int>>> ambiguous;
};

/// Weak filtration: every value is generated by the elements of X it contains.
inline GensetVerdict is_weakly_filtered(const std::vector<Elt>& X, const Filter<PcBackend>& f) {
    const PcGroup& G = *f.backend.G;
    GensetVerdict v;
    v.X = X;
    v.weakly_filtered = true;
    for (int s = 0; s < f.m.n; ++s) {
        std::vector<Elt> in;
        for (const Elt& x : X)
            if (G.membership(x, f.values[static_cast<size_t>(s)])) in.push_back(x);
        if (!f.backend.eq(G.subgroup(in, false), f.values[static_cast<size_t>(s)])) {
            v.weakly_filtered = false;
            v.witnesses.push_back("value at " + f.m.str(s) + " is not generated by its elements");
        }
    }
    return v;
}

namespace detail_faithful {

inline GensetVerdict filtered_conditions(const std::vector<Elt>& X, const Filter<PcBackend>& f,
                                         size_t cap) {
    const PcBackend& b = f.backend;
    const PcGroup& G = *b.G;
    GensetVerdict v = is_weakly_filtered(X, f);
    std::map<std::string, Subgroup> distinct;
    for (const auto& val : f.values) distinct.emplace(b.key(val), val);
    if (distinct.size() > cap)
        throw Error("CapExceeded", "more than " + std::to_string(cap) + " distinct values");
    std::vector<Subgroup> vals;
    std::vector<std::set<std::string>> sets; // X-membership per value, by element key
    std::map<std::string, Elt> by_key;
    for (const Elt& x : X) by_key[elt_key(x)] = x;
    for (const auto& [k, val] : distinct) {
        vals.push_back(val);
        std::set<std::string> in;
        for (const Elt& x : X)
            if (G.membership(x, val)) in.insert(elt_key(x));
        sets.push_back(std::move(in));
    }
    v.filtered = v.weakly_filtered;
    unsigned long long best_prod = 0; // order of the smallest failing product
    const size_t k = vals.size();
    for (size_t mask = 1; mask < (size_t{1} << k); ++mask) {
        Subgroup inter, prod;
        std::set<std::string> common, uni;
        bool first = true;
        for (size_t i = 0; i < k; ++i) {
            if (!(mask & (size_t{1} << i))) continue;
            if (first) {
                inter = vals[i];
                prod = vals[i];
                common = sets[i];
            } else {
                inter = b.meet(inter, vals[i]);
                prod = b.join(prod, vals[i]);
                std::set<std::string> next;
                for (const auto& e : common)
                    if (sets[i].count(e)) next.insert(e);
                common = std::move(next);
            }
            for (const auto& e : sets[i]) uni.insert(e);
            first = false;
        }
        std::vector<Elt> gens;
        for (const auto& e : common) gens.push_back(by_key.at(e));
        if (!b.eq(G.subgroup(gens, false), inter)) {
            v.filtered = false;
            v.witnesses.push_back("intersection condition fails on a " +
                                  std::to_string(__builtin_popcountll(mask)) + "-value subset");
        }
        std::set<std::string> lhs;
        for (const Elt& x : X)
            if (G.membership(x, prod)) lhs.insert(elt_key(x));
        if (lhs != uni) {
            v.filtered = false;
            v.witnesses.push_back("product condition fails on a " +
                                  std::to_string(__builtin_popcountll(mask)) + "-value subset");
            unsigned long long po = b.order(prod);
            if (best_prod == 0 || po < best_prod) { // keep the tightest failure
                best_prod = po;
                v.product_side.clear();
                v.union_side.clear();
                for (const auto& e : lhs) v.product_side.push_back(by_key.at(e));
                for (const auto& e : uni) v.union_side.push_back(by_key.at(e));
            }
        }
    }
    return v;
}

} // namespace detail_faithful

/// Full filtration: the meet and product conditions over every subset of
/// distinct values.  A positive verdict also records that X is filtered by
/// the boundary filter and that the value lattice is distributive.
inline GensetVerdict is_filtered(const std::vector<Elt>& X, const Filter<PcBackend>& f,
                                 size_t cap = 16) {
    GensetVerdict v = detail_faithful::filtered_conditions(X, f, cap);
    if (v.filtered) {
        GensetVerdict db = detail_faithful::filtered_conditions(X, boundary(f), cap);
        if (!db.filtered) {
            v.filtered = false;
            v.witnesses.push_back("boundary filtration fails, contradicting the filtered verdict");
        }
        if (!is_distributive(lattice_closure(f), f.backend).distributive) {
            v.filtered = false;
            v.witnesses.push_back("value lattice is not distributive despite a filtered set");
        }
    }
    return v;
}

/// Each element must occupy exactly one layer phi_s - dphi_s.
inline GensetVerdict is_faithful_genset(const std::vector<Elt>& X, const Filter<PcBackend>& f) {
    const PcGroup& G = *f.backend.G;
    GensetVerdict v;
    v.X = X;
    v.faithful = true;
    Filter<PcBackend> d = boundary(f);
    for (const Elt& x : X) {
        std::vector<int> at;
        for (int s = 0; s < f.m.n; ++s)
            if (G.membership(x, f.values[static_cast<size_t>(s)]) &&
                !G.membership(x, d.values[static_cast<size_t>(s)]))
                at.push_back(s);
        if (at.size() != 1) {
            v.faithful = false;
            std::string w = "element occupies " + std::to_string(at.size()) + " layers:";
            for (int s : at) w += " " + f.m.str(s);
            v.witnesses.push_back(w);
            v.ambiguous.push_back({x, at});
        }
    }
    return v;
}

struct FaithfulReport {
    bool faithful = true;
    std::vector<std::string> witnesses;
};

/// Faithful filter: over every realizable antichain of indices (two or more,
/// pairwise incomparable in the monoid, grouped by their value/boundary
/// pairs), the values and the boundaries have the same intersection.
template <class B>
FaithfulReport is_faithful_filter(const Filter<B>& f, size_t cap = 16) {
    const B& b = f.backend;
    FaithfulReport rep;
    Filter<B> d = boundary(f);
    struct Cls {
        typename B::Sub v, dv;
        std::vector<int> indices;
    };
    std::map<std::pair<std::string, std::string>, size_t> slot;
    std::vector<Cls> cls;
    for (int s = 0; s < f.m.n; ++s) {
        auto key = std::make_pair(b.key(f.values[static_cast<size_t>(s)]),
                                  b.key(d.values[static_cast<size_t>(s)]));
        auto it = slot.find(key);
        if (it == slot.end()) {
            slot.emplace(key, cls.size());
            cls.push_back({f.values[static_cast<size_t>(s)], d.values[static_cast<size_t>(s)], {s}});
        } else {
            cls[it->second].indices.push_back(s);
        }
    }
    if (cls.size() > cap)
        throw Error("CapExceeded", "more than " + std::to_string(cap) + " value classes");
    // can one index per chosen class be picked pairwise incomparable?
    auto realizable = [&](const std::vector<size_t>& chosen) {
        std::vector<int> picked;
        auto rec = [&](auto&& self, size_t i) -> bool {
            if (i == chosen.size()) return true;
            for (int s : cls[chosen[i]].indices) {
                bool ok = true;
                for (int t : picked) ok = ok && f.m.incomparable(s, t);
                if (!ok) continue;
                picked.push_back(s);
                if (self(self, i + 1)) return true;
                picked.pop_back();
            }
            return false;
        };
        return rec(rec, 0);
    };
    const size_t k = cls.size();
    for (size_t mask = 1; mask < (size_t{1} << k); ++mask) {
        if (__builtin_popcountll(mask) < 2) continue;
        std::vector<size_t> chosen;
        for (size_t i = 0; i < k; ++i)
            if (mask & (size_t{1} << i)) chosen.push_back(i);
        if (!realizable(chosen)) continue;
        typename B::Sub iv = cls[chosen[0]].v, id = cls[chosen[0]].dv;
        for (size_t i = 1; i < chosen.size(); ++i) {
            iv = b.meet(iv, cls[chosen[i]].v);
            id = b.meet(id, cls[chosen[i]].dv);
        }
        if (!b.eq(iv, id)) {
            rep.faithful = false;
            std::string w = "antichain intersection differs at classes";
            for (size_t i : chosen) w += " " + f.m.str(cls[i].indices.front());
            rep.witnesses.push_back(w);
        }
    }
    return rep;
}

struct FullyFaithfulReport {
    bool fully_faithful = false;
    bool faithful = false;
    bool no_inert = false;
    bool boundary_fixed_at_zero = false;
    std::vector<std::string> witnesses;
};

template <class B>
FullyFaithfulReport is_fully_faithful(const Filter<B>& f, size_t cap = 16) {
    FullyFaithfulReport rep;
    FaithfulReport fr = is_faithful_filter(f, cap);
    rep.faithful = fr.faithful;
    rep.witnesses = fr.witnesses;
    rep.no_inert = b_sequence(f).inert.empty();
    if (!rep.no_inert) rep.witnesses.push_back("inert subgroups present");
    Filter<B> d = boundary(f);
    rep.boundary_fixed_at_zero = f.backend.eq(f.values[0], d.values[0]);
    if (!rep.boundary_fixed_at_zero) rep.witnesses.push_back("value at 0 differs from its boundary");
    rep.fully_faithful = rep.faithful && rep.no_inert && rep.boundary_fixed_at_zero;
    return rep;
}

/// The group representative of a graded basis vector.
inline Elt basis_entry_lift(const GradedLieRing& L, const PcGroup& G, const GradedBasisEntry& e) {
    if (!e.lift.empty()) return e.lift;
    const LieComponent& c = L.components[e.component];
    Elt x = G.id();
    for (size_t g = 0; g < e.coords.size(); ++g)
        if (e.coords[g] != 0) x = G.mul(x, G.pow(c.lifts[g], e.coords[g]));
    return x;
}

inline std::vector<Elt> preimage_genset(const GradedLieRing& L, const PcGroup& G,
                                        const GradedBasis& basis) {
    std::vector<Elt> X;
    for (const auto& e : basis) X.push_back(basis_entry_lift(L, G, e));
    return X;
}

struct FullReport {
    bool full = false;
    bool degenerate = false;
    bool spot_checks_run = false;
    std::vector<std::string> witnesses;
    GensetVerdict canonical;
};

/// Fullness: the canonical graded-basis preimage is filtered; for fully
/// faithful filters a handful of random alternate bases are spot-checked.
inline FullReport is_full(const Filter<PcBackend>& f, int spot_checks = 5,
                          unsigned rng_seed = 20240817) {
    const PcGroup& G = *f.backend.G;
    FullReport rep;
    GradedLieRing L = associated_lie(f);
    GradedBasis basis = graded_basis(L);
    std::vector<Elt> X = preimage_genset(L, G, basis);
    if (X.empty()) {
        rep.degenerate = true;
        rep.full = f.backend.order(boundary(f).values[0]) == 1;
        if (!rep.full) rep.witnesses.push_back("zero ring but nontrivial boundary at 0");
        return rep;
    }
    rep.canonical = is_filtered(X, f);
    rep.full = rep.canonical.filtered;
    if (!rep.full) {
        rep.witnesses = rep.canonical.witnesses;
        return rep;
    }
    if (!is_fully_faithful(f).fully_faithful) return rep;
    std::vector<GradedBasis> all;
    try {
        all = enumerate_graded_bases(L);
    } catch (const Error&) {
        rep.witnesses.push_back("alternate-basis spot checks skipped");
        return rep;
    }
    std::mt19937 rng(rng_seed);
    rep.spot_checks_run = true;
    for (int i = 0; i < spot_checks && !all.empty(); ++i) {
        const GradedBasis& alt = all[rng() % all.size()];
        GensetVerdict v = is_filtered(preimage_genset(L, G, alt), f);
        if (!v.filtered) {
            rep.full = false;
            rep.witnesses.push_back("an alternate graded-basis preimage is not filtered");
        }
    }
    return rep;
}

struct BijectionCertificate {
    GradedBasis basis;
    std::vector<Elt> lifts;
    std::string forward_map; // coefficient vector -> ordered product of lifts
    bool surjective = false;
    bool injective = false;
    bool lifts_are_pcgs = false;
    bool no_inert = true; // when false, surjectivity is not guaranteed
    unsigned long long ring_order = 0;
    unsigned long long group_order = 0;
};

/// The map sending a sum of basis vectors to the ordered product of their
/// lifts, checked against the boundary value at 0 by full enumeration.
inline BijectionCertificate pi_map(const Filter<PcBackend>& f, const GradedLieRing& L,
                                   const GradedBasis& basis, unsigned long long cap = 200000) {
    const PcGroup& G = *f.backend.G;
    BijectionCertificate cert;
    cert.basis = basis;
    cert.forward_map = "sum of k_y * y maps to the product of x_y^k_y in basis order";
    Subgroup dphi0 = boundary(f).values[0];
    cert.group_order = f.backend.order(dphi0);
    cert.ring_order = L.total_order();
    cert.no_inert = b_sequence(f).inert.empty();
    if (cert.ring_order > cap || cert.group_order > cap)
        throw Error("CapExceeded", "enumeration beyond " + std::to_string(cap) + " elements");

    std::vector<long long> mod; // additive order of each basis vector
    for (const auto& e : basis) {
        cert.lifts.push_back(basis_entry_lift(L, G, e));
        const auto& inv = L.components[e.component].invariants;
        long long o = 1;
        for (size_t g = 0; g < e.coords.size(); ++g) {
            if (e.coords[g] % inv[g] == 0) continue;
            long long d = inv[g] / std::gcd(inv[g], e.coords[g]);
            o = o / std::gcd(o, d) * d;
        }
        mod.push_back(o);
    }

    std::set<std::string> image;
    bool all_inside = true;
    std::vector<long long> kvec(basis.size(), 0);
    while (true) {
        Elt g = G.id();
        for (size_t i = 0; i < basis.size(); ++i)
            if (kvec[i] != 0) g = G.mul(g, G.pow(cert.lifts[i], kvec[i]));
        all_inside = all_inside && G.membership(g, dphi0);
        image.insert(detail_faithful::elt_key(g));
        size_t i = 0;
        while (i < kvec.size() && ++kvec[i] == mod[i]) kvec[i++] = 0;
        if (i == kvec.size()) break;
    }
    cert.surjective = all_inside && image.size() == cert.group_order;
    cert.injective = image.size() == cert.ring_order;
    cert.lifts_are_pcgs =
        G.is_pcgs(cert.lifts) && f.backend.eq(G.subgroup(cert.lifts, false), dphi0);
    return cert;
}

struct CorrespondenceReport {
    size_t bases_checked = 0;
    size_t distinct_pcgs = 0;
    bool all_lifts_filtered_pcgs = true;
    bool round_trips = true;
    std::vector<std::string> witnesses;
};

/// Graded bases vs filtered pcgs of the boundary value at 0: every basis
/// lifts to a distinct filtered pcgs, and indexing the pcgs elements back
/// through their unique layers recovers a graded basis.
inline CorrespondenceReport basis_pcgs_correspondence(const Filter<PcBackend>& f,
                                                      size_t sample_size = 100000) {
    const PcGroup& G = *f.backend.G;
    if (!is_fully_faithful(f).fully_faithful)
        throw Error("PreconditionFailed", "filter is not fully faithful");
    GradedLieRing L = associated_lie(f);
    std::vector<GradedBasis> bases;
    try {
        bases = enumerate_graded_bases(L, sample_size);
    } catch (const Error& e) {
        if (e.code() == "NotElementaryAbelian")
            throw Error("PreconditionFailed", "components are not elementary abelian");
        throw;
    }
    Filter<PcBackend> d = boundary(f);
    std::map<int, size_t> comp_at;
    for (size_t ci = 0; ci < L.components.size(); ++ci) comp_at[L.components[ci].s] = ci;

    CorrespondenceReport rep;
    std::set<std::string> seen;
    for (const GradedBasis& basis : bases) {
        ++rep.bases_checked;
        std::vector<Elt> X = preimage_genset(L, G, basis);
        std::string key;
        for (const Elt& x : X) key += detail_faithful::elt_key(x) + ";";
        seen.insert(key);
        bool pcgs = G.is_pcgs(X) && f.backend.eq(G.subgroup(X, false), d.values[0]);
        if (!(pcgs && is_filtered(X, f).filtered)) {
            rep.all_lifts_filtered_pcgs = false;
            rep.witnesses.push_back("a basis lift is not a filtered pcgs");
        }
        // reverse direction: index each element by its unique layer and read
        // off the component coordinates; the result must be a graded basis
        std::map<size_t, std::vector<std::vector<long long>>> vecs;
        bool ok = true;
        for (const Elt& x : X) {
            int at = -1;
            for (int s = 0; s < f.m.n && ok; ++s)
                if (G.membership(x, f.values[static_cast<size_t>(s)]) &&
                    !G.membership(x, d.values[static_cast<size_t>(s)])) {
                    if (at >= 0) ok = false;
                    at = s;
                }
            if (!ok || at < 0 || !comp_at.count(at)) {
                ok = false;
                break;
            }
            size_t ci = comp_at.at(at);
            const LieComponent& c = L.components[ci];
            // brute-force the coordinates over the (small) component
            std::vector<long long> coord(c.invariants.size(), 0);
            bool found = false;
            while (!found) {
                Elt y = G.id();
                for (size_t g = 0; g < coord.size(); ++g)
                    if (coord[g] != 0) y = G.mul(y, G.pow(c.lifts[g], coord[g]));
                if (G.membership(G.mul(G.inv(y), x), d.values[static_cast<size_t>(at)])) {
                    found = true;
                    break;
                }
                size_t g = 0;
                while (g < coord.size() && ++coord[g] == c.invariants[g]) coord[g++] = 0;
                if (g == coord.size()) break;
            }
            if (!found) {
                ok = false;
                break;
            }
            vecs[ci].push_back(coord);
        }
        if (ok)
            for (const auto& [ci, vs] : vecs) {
                const auto& inv = L.components[ci].invariants;
                if (vs.size() != inv.size()) {
                    ok = false;
                    continue;
                }
                // independence over F_p
                long long p = inv[0];
                std::vector<std::vector<long long>> m = vs;
                size_t r = 0;
                for (size_t col = 0; col < inv.size() && r < m.size(); ++col) {
                    size_t piv = r;
                    while (piv < m.size() && m[piv][col] % p == 0) ++piv;
                    if (piv == m.size()) continue;
                    std::swap(m[r], m[piv]);
                    long long ipiv = detail::mod_inverse(((m[r][col] % p) + p) % p, p);
                    for (size_t i = 0; i < m.size(); ++i) {
                        if (i == r) continue;
                        long long fac = ((m[i][col] % p) + p) % p * ipiv % p;
                        for (size_t j = 0; j < inv.size(); ++j)
                            m[i][j] = ((m[i][j] - fac * m[r][j]) % p + p) % p;
                    }
                    ++r;
                }
                ok = ok && r == m.size();
            }
        if (!ok) {
            rep.round_trips = false;
            rep.witnesses.push_back("a pcgs does not index back to a graded basis");
        }
    }
    rep.distinct_pcgs = seen.size();
    return rep;
}

} // namespace filtra

#endif
