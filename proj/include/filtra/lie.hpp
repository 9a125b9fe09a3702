#ifndef FILTRA_LIE_HPP
#define FILTRA_LIE_HPP

#include <map>
#include <memory>
#include <random>
#include <type_traits>
#include <vector>

#include "filtra/filter.hpp"

namespace filtra {

/// Smith normal form of a square integer matrix, tracking the left transform
/// and its inverse: U * N * (column ops) = diag(d).  New coordinates are
/// y = U x; the j-th generator of the cokernel pulls back to column j of Uinv.
struct SmithResult {
    std::vector<long long> diag;
    std::vector<std::vector<long long>> U, Uinv;
};

inline SmithResult smith_normal_form(std::vector<std::vector<long long>> N) {
    const size_t k = N.size();
    SmithResult r;
    r.U.assign(k, std::vector<long long>(k, 0));
    r.Uinv.assign(k, std::vector<long long>(k, 0));
    for (size_t i = 0; i < k; ++i) r.U[i][i] = r.Uinv[i][i] = 1;
    auto swap_rows = [&](size_t a, size_t b) {
        std::swap(N[a], N[b]);
        std::swap(r.U[a], r.U[b]);
        for (size_t i = 0; i < k; ++i) std::swap(r.Uinv[i][a], r.Uinv[i][b]);
    };
    auto add_row = [&](size_t dst, size_t src, long long c) { // row dst += c * row src
        for (size_t j = 0; j < k; ++j) N[dst][j] += c * N[src][j];
        for (size_t j = 0; j < k; ++j) r.U[dst][j] += c * r.U[src][j];
        for (size_t i = 0; i < k; ++i) r.Uinv[i][src] -= c * r.Uinv[i][dst];
    };
    auto negate_row = [&](size_t t) {
        for (size_t j = 0; j < k; ++j) N[t][j] = -N[t][j];
        for (size_t j = 0; j < k; ++j) r.U[t][j] = -r.U[t][j];
        for (size_t i = 0; i < k; ++i) r.Uinv[i][t] = -r.Uinv[i][t];
    };
    auto swap_cols = [&](size_t a, size_t b) {
        for (size_t i = 0; i < k; ++i) std::swap(N[i][a], N[i][b]);
    };
    auto add_col = [&](size_t dst, size_t src, long long c) {
        for (size_t i = 0; i < k; ++i) N[i][dst] += c * N[i][src];
    };
    for (size_t t = 0; t < k; ++t) {
        while (true) {
            size_t pr = t, pc = t;
            long long best = 0;
            for (size_t i = t; i < k; ++i)
                for (size_t j = t; j < k; ++j)
                    if (N[i][j] != 0 &&
                        (best == 0 || std::abs(N[i][j]) < std::abs(best))) {
                        best = N[i][j];
                        pr = i;
                        pc = j;
                    }
            if (best == 0) break;
            if (pr != t) swap_rows(t, pr);
            if (pc != t) swap_cols(t, pc);
            bool clean = true;
            for (size_t i = t + 1; i < k; ++i)
                if (N[i][t] != 0) {
                    add_row(i, t, -(N[i][t] / N[t][t]));
                    if (N[i][t] != 0) clean = false;
                }
            for (size_t j = t + 1; j < k; ++j)
                if (N[t][j] != 0) {
                    add_col(j, t, -(N[t][j] / N[t][t]));
                    if (N[t][j] != 0) clean = false;
                }
            if (!clean) continue;
            // divisibility: pull any non-multiple into the pivot's column
            bool again = false;
            for (size_t i = t + 1; i < k && !again; ++i)
                for (size_t j = t + 1; j < k && !again; ++j)
                    if (N[i][j] % N[t][t] != 0) {
                        add_row(t, i, 1);
                        again = true;
                    }
            if (!again) break;
        }
        if (N[t][t] < 0) negate_row(t);
    }
    r.diag.resize(k);
    for (size_t t = 0; t < k; ++t) r.diag[t] = N[t][t];
    return r;
}

/// One homogeneous component L_s = φ_s/∂φ_s of the associated graded ring.
struct LieComponent {
    int s = 0;
    std::vector<long long> invariants; // cyclic orders > 1, each dividing the next
    std::vector<Elt> lifts;            // group representatives of the generators
};

struct GradedBasisEntry {
    int s = 0;
    size_t component = 0;
    std::vector<long long> coords; // within the component
    Elt lift;                      // group representative (empty when additive only)
};
using GradedBasis = std::vector<GradedBasisEntry>;

/// The graded Lie ring of a filter: homogeneous components indexed by the
/// monoid, with the bracket induced by group commutators on coset lifts.
struct GradedLieRing {
    Monoid m;
    bool additive_only = false;
    /// φ₀ ≠ ∂φ₀: the coefficient action of that quotient is not modeled.
    bool coefficient_action_omitted = false;
    std::vector<LieComponent> components; // ascending by (degree, coordinates)
    std::vector<std::pair<size_t, size_t>> positions; // flat basis: (component, generator)
    std::vector<long long> moduli;                    // cyclic order per position
    /// nonzero brackets of basis pairs, as flat coordinate vectors
    std::map<std::pair<size_t, size_t>, std::vector<long long>> constants;

    unsigned long long total_order() const {
        unsigned long long o = 1;
        for (const auto& c : components)
            for (long long d : c.invariants) o *= static_cast<unsigned long long>(d);
        return o;
    }
    std::map<int, std::vector<long long>> hilbert_data() const {
        std::map<int, std::vector<long long>> h;
        for (const auto& c : components) h[c.s] = c.invariants;
        return h;
    }
    size_t rank() const { return positions.size(); }
};

using LieElt = std::vector<long long>; // flat coordinates, one per position

inline LieElt lie_zero(const GradedLieRing& L) { return LieElt(L.rank(), 0); }

inline LieElt lie_unit(const GradedLieRing& L, size_t pos) {
    LieElt e = lie_zero(L);
    e[pos] = 1;
    return e;
}

inline void lie_reduce(const GradedLieRing& L, LieElt& v) {
    for (size_t i = 0; i < v.size(); ++i) {
        v[i] %= L.moduli[i];
        if (v[i] < 0) v[i] += L.moduli[i];
    }
}

/// Biadditive extension of the structure constants.
inline LieElt bracket(const GradedLieRing& L, const LieElt& u, const LieElt& v) {
    LieElt out = lie_zero(L);
    for (const auto& [ab, c] : L.constants) {
        long long f = u[ab.first] * v[ab.second];
        if (f == 0) continue;
        for (size_t i = 0; i < out.size(); ++i) out[i] += f * c[i];
    }
    lie_reduce(L, out);
    return out;
}

namespace detail_lie {

/// Section machinery for one component over the pc backend: the quotient by
/// the boundary, the induced generators of the image, and the coordinate
/// transform onto the invariant-factor basis.
struct Section {
    PcQuotient q;
    Subgroup bnd;
    std::vector<Elt> u;      // induced generators of φ_s/∂φ_s inside the quotient
    std::vector<int> udepth;
    SmithResult snf;
    std::vector<size_t> keep; // generator slots with invariant > 1

    /// exponents of a quotient element along the induced generators
    std::vector<long long> sift(Elt x) const {
        std::vector<long long> e(u.size(), 0);
        const Collector& c = q.q.c;
        while (true) {
            int d = c.depth(x);
            if (d == c.n) return e;
            size_t i = 0;
            while (i < u.size() && udepth[i] != d) ++i;
            if (i == u.size()) throw Error("Internal", "element escapes its section");
            e[i] = x[d];
            x = c.mul(c.inv(c.pow(u[i], x[d])), x);
        }
    }

    /// invariant-factor coordinates of a group element of φ_s
    std::vector<long long> coords(const PcGroup& G, const Elt& g) const {
        std::vector<long long> x = sift(project_to_quotient(G, q, bnd, g));
        std::vector<long long> y(keep.size(), 0);
        for (size_t a = 0; a < keep.size(); ++a) {
            long long acc = 0;
            for (size_t i = 0; i < x.size(); ++i) acc += snf.U[keep[a]][i] * x[i];
            long long d = snf.diag[keep[a]];
            acc %= d;
            if (acc < 0) acc += d;
            y[a] = acc;
        }
        return y;
    }
};

inline Elt quotient_preimage(const PcGroup& G, const PcQuotient& q, const Elt& qx) {
    Elt g(static_cast<size_t>(G.n()), 0);
    for (size_t i = 0; i < qx.size(); ++i) g[static_cast<size_t>(q.depth_of_qgen[i])] = qx[i];
    return g;
}

} // namespace detail_lie

/// Build the graded ring of a pc-backed filter.  A nonzero perturbation seed
/// multiplies every coset lift by a random boundary element before the
/// structure constants are read off; the constants must not change.
inline GradedLieRing associated_lie(const Filter<PcBackend>& f, unsigned perturb_seed = 0) {
    const PcGroup& G = *f.backend.G;
    Filter<PcBackend> d = boundary(f);
    GradedLieRing L;
    L.m = f.m;
    L.coefficient_action_omitted = !f.backend.eq(f.values[0], d.values[0]);

    std::vector<int> order(static_cast<size_t>(f.m.n));
    for (int s = 0; s < f.m.n; ++s) order[static_cast<size_t>(s)] = s;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (f.m.rank(a) != f.m.rank(b)) return f.m.rank(a) < f.m.rank(b);
        return f.m.coords(a) < f.m.coords(b);
    });

    std::mt19937 rng(perturb_seed);
    std::vector<detail_lie::Section> secs;
    std::map<int, size_t> comp_at; // monoid index -> component slot
    for (int s : order) {
        if (s == 0) continue;
        const Subgroup& top = f.values[static_cast<size_t>(s)];
        const Subgroup& bot = d.values[static_cast<size_t>(s)];
        if (f.backend.eq(top, bot)) continue;
        detail_lie::Section sec{quotient(G, bot), bot, {}, {}, {}, {}};
        std::vector<Elt> im;
        for (const Elt& g : top.gens) im.push_back(project_to_quotient(G, sec.q, bot, g));
        Subgroup A = sec.q.q.subgroup(im, false);
        sec.u = A.gens;
        for (const Elt& g : sec.u) sec.udepth.push_back(sec.q.q.c.depth(g));
        const size_t k = sec.u.size();
        // abelian presentation: u_i^{p_i} rewritten along the deeper generators
        std::vector<std::vector<long long>> R(k, std::vector<long long>(k, 0));
        for (size_t i = 0; i < k; ++i) {
            long long p = sec.q.q.c.m[sec.udepth[i]];
            std::vector<long long> t = sec.sift(sec.q.q.c.pow(sec.u[i], p));
            R[i][i] += p;
            for (size_t j = 0; j < k; ++j) R[i][j] -= t[j];
        }
        std::vector<std::vector<long long>> Rt(k, std::vector<long long>(k, 0));
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) Rt[j][i] = R[i][j];
        sec.snf = smith_normal_form(Rt);

        LieComponent comp;
        comp.s = s;
        unsigned long long exp = A.size; // annihilates every section element
        for (size_t j = 0; j < k; ++j) {
            if (sec.snf.diag[j] <= 1) continue;
            sec.keep.push_back(j);
            comp.invariants.push_back(sec.snf.diag[j]);
            Elt qx = sec.q.q.id();
            for (size_t i = 0; i < k; ++i) {
                long long e = sec.snf.Uinv[i][j] % static_cast<long long>(exp);
                if (e < 0) e += static_cast<long long>(exp);
                qx = sec.q.q.mul(qx, sec.q.q.pow(sec.u[i], e));
            }
            Elt lift = detail_lie::quotient_preimage(G, sec.q, qx);
            if (perturb_seed != 0) {
                for (const Elt& bg : bot.gens) {
                    long long mm = G.c.m[G.c.depth(bg)];
                    lift = G.mul(lift, G.pow(bg, static_cast<long long>(rng() % mm)));
                }
            }
            comp.lifts.push_back(lift);
        }
        comp_at[s] = L.components.size();
        L.components.push_back(std::move(comp));
        secs.push_back(std::move(sec));
    }

    for (size_t ci = 0; ci < L.components.size(); ++ci)
        for (size_t g = 0; g < L.components[ci].invariants.size(); ++g) {
            L.positions.push_back({ci, g});
            L.moduli.push_back(L.components[ci].invariants[g]);
        }
    auto flat = [&](size_t ci, size_t g) {
        size_t p = 0;
        while (L.positions[p] != std::make_pair(ci, g)) ++p;
        return p;
    };
    for (size_t a = 0; a < L.positions.size(); ++a)
        for (size_t b = 0; b < L.positions.size(); ++b) {
            if (a == b) continue;
            auto [ca, ga] = L.positions[a];
            auto [cb, gb] = L.positions[b];
            int w = f.m.add(L.components[ca].s, L.components[cb].s);
            auto it = comp_at.find(w);
            if (it == comp_at.end()) continue;
            size_t cw = it->second;
            Elt c = G.commutator(L.components[ca].lifts[ga], L.components[cb].lifts[gb]);
            std::vector<long long> y = secs[cw].coords(G, c);
            bool nonzero = false;
            for (long long v : y) nonzero = nonzero || v != 0;
            if (!nonzero) continue;
            std::vector<long long> out(L.rank(), 0);
            for (size_t g2 = 0; g2 < y.size(); ++g2) out[flat(cw, g2)] = y[g2];
            L.constants[{a, b}] = std::move(out);
        }
    return L;
}

/// Additive-only variant for the oracle backend: components come straight
/// from the recorded section invariants; no bracket data.
inline GradedLieRing associated_lie(const Filter<TableBackend>& f) {
    Filter<TableBackend> d = boundary(f);
    GradedLieRing L;
    L.m = f.m;
    L.additive_only = true;
    L.coefficient_action_omitted = !f.backend.eq(f.values[0], d.values[0]);
    std::vector<int> order(static_cast<size_t>(f.m.n));
    for (int s = 0; s < f.m.n; ++s) order[static_cast<size_t>(s)] = s;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (f.m.rank(a) != f.m.rank(b)) return f.m.rank(a) < f.m.rank(b);
        return f.m.coords(a) < f.m.coords(b);
    });
    for (int s : order) {
        if (s == 0) continue;
        int top = f.values[static_cast<size_t>(s)], bot = d.values[static_cast<size_t>(s)];
        if (top == bot) continue;
        LieComponent comp;
        comp.s = s;
        comp.invariants = f.backend.t->section_invariants(top, bot);
        if (comp.invariants.empty()) continue;
        L.components.push_back(std::move(comp));
    }
    for (size_t ci = 0; ci < L.components.size(); ++ci)
        for (size_t g = 0; g < L.components[ci].invariants.size(); ++g) {
            L.positions.push_back({ci, g});
            L.moduli.push_back(L.components[ci].invariants[g]);
        }
    return L;
}

struct LieAxiomReport {
    bool ok = true;
    std::vector<std::string> witnesses;
};

/// Alternating, antisymmetry, and (for rank ≤ 64) Jacobi on all basis triples.
inline LieAxiomReport check_lie_axioms(const GradedLieRing& L) {
    LieAxiomReport rep;
    auto is_zero = [&](const LieElt& v) {
        for (long long x : v)
            if (x != 0) return false;
        return true;
    };
    const size_t n = L.rank();
    for (size_t a = 0; a < n; ++a) {
        LieElt ea = lie_unit(L, a);
        if (!is_zero(bracket(L, ea, ea))) {
            rep.ok = false;
            rep.witnesses.push_back("not alternating at basis " + std::to_string(a));
        }
    }
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b) {
            LieElt ab = bracket(L, lie_unit(L, a), lie_unit(L, b));
            LieElt ba = bracket(L, lie_unit(L, b), lie_unit(L, a));
            LieElt sum = ab;
            for (size_t i = 0; i < n; ++i) sum[i] += ba[i];
            lie_reduce(L, sum);
            if (!is_zero(sum)) {
                rep.ok = false;
                rep.witnesses.push_back("not antisymmetric at pair " + std::to_string(a) + "," +
                                        std::to_string(b));
            }
        }
    if (n <= 64)
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                for (size_t c = 0; c < n; ++c) {
                    LieElt ea = lie_unit(L, a), eb = lie_unit(L, b), ec = lie_unit(L, c);
                    LieElt j1 = bracket(L, bracket(L, ea, eb), ec);
                    LieElt j2 = bracket(L, bracket(L, eb, ec), ea);
                    LieElt j3 = bracket(L, bracket(L, ec, ea), eb);
                    LieElt sum(n, 0);
                    for (size_t i = 0; i < n; ++i) sum[i] = j1[i] + j2[i] + j3[i];
                    lie_reduce(L, sum);
                    if (!is_zero(sum)) {
                        rep.ok = false;
                        rep.witnesses.push_back("Jacobi fails at triple " + std::to_string(a) + "," +
                                                std::to_string(b) + "," + std::to_string(c));
                    }
                }
    return rep;
}

/// The canonical graded basis: the invariant-factor generators of every
/// component, components in ascending (degree, coordinates) order.
inline GradedBasis graded_basis(const GradedLieRing& L) {
    GradedBasis out;
    for (size_t ci = 0; ci < L.components.size(); ++ci) {
        const LieComponent& c = L.components[ci];
        for (size_t g = 0; g < c.invariants.size(); ++g) {
            GradedBasisEntry e;
            e.s = c.s;
            e.component = ci;
            e.coords.assign(c.invariants.size(), 0);
            e.coords[g] = 1;
            if (!c.lifts.empty()) e.lift = c.lifts[g];
            out.push_back(std::move(e));
        }
    }
    return out;
}

/// Enumerate every basis respecting the grading: independently for each
/// component, all ordered bases of the vector space over its prime field.
inline std::vector<GradedBasis> enumerate_graded_bases(const GradedLieRing& L,
                                                       size_t cap = 100000) {
    for (const auto& c : L.components)
        for (long long d : c.invariants)
            if (d != c.invariants[0] || detail::prime_factors(d).size() != 1 ||
                detail::prime_factors(d)[0] != d)
                throw Error("NotElementaryAbelian",
                            "component at " + L.m.str(c.s) + " is not elementary abelian");
    // all ordered bases of F_p^k, as lists of coordinate vectors
    auto component_bases = [&](long long p, size_t k) {
        std::vector<std::vector<std::vector<long long>>> out;
        std::vector<std::vector<long long>> cur;
        auto indep = [&](const std::vector<long long>& v) {
            std::vector<std::vector<long long>> m = cur;
            m.push_back(v);
            // Gaussian elimination over F_p
            size_t r = 0;
            for (size_t col = 0; col < k && r < m.size(); ++col) {
                size_t piv = r;
                while (piv < m.size() && m[piv][col] % p == 0) ++piv;
                if (piv == m.size()) continue;
                std::swap(m[r], m[piv]);
                long long inv = detail::mod_inverse(((m[r][col] % p) + p) % p, p);
                for (size_t i = 0; i < m.size(); ++i) {
                    if (i == r) continue;
                    long long f = ((m[i][col] % p) + p) % p * inv % p;
                    for (size_t j = 0; j < k; ++j)
                        m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
                }
                ++r;
            }
            return r == m.size();
        };
        auto rec = [&](auto&& self) -> void {
            if (cur.size() == k) {
                out.push_back(cur);
                return;
            }
            std::vector<long long> w(k, 0);
            while (true) {
                bool nz = false;
                for (long long x : w) nz = nz || x != 0;
                if (nz && indep(w)) {
                    cur.push_back(w);
                    self(self);
                    cur.pop_back();
                }
                // increment w in base p
                size_t i = 0;
                while (i < k && ++w[i] == p) w[i++] = 0;
                if (i == k) break;
            }
        };
        rec(rec);
        return out;
    };
    std::vector<std::vector<std::vector<std::vector<long long>>>> per; // comp -> bases -> vecs
    unsigned long long total = 1;
    for (const auto& c : L.components) {
        if (c.invariants.empty()) continue;
        per.push_back(component_bases(c.invariants[0], c.invariants.size()));
        total *= per.back().size();
        if (total > cap) throw Error("CapExceeded", "more than " + std::to_string(cap) + " bases");
    }
    std::vector<GradedBasis> out;
    std::vector<size_t> pick(per.size(), 0);
    while (true) {
        GradedBasis b;
        size_t pi = 0;
        for (size_t ci = 0; ci < L.components.size(); ++ci) {
            if (L.components[ci].invariants.empty()) continue;
            for (const auto& vec : per[pi][pick[pi]]) {
                GradedBasisEntry e;
                e.s = L.components[ci].s;
                e.component = ci;
                e.coords = vec;
                b.push_back(std::move(e));
            }
            ++pi;
        }
        out.push_back(std::move(b));
        size_t i = 0;
        while (i < per.size() && ++pick[i] == per[i].size()) pick[i++] = 0;
        if (i == per.size() || per.empty()) break;
    }
    return out;
}

} // namespace filtra

#endif
