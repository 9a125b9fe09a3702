#ifndef FILTRA_PCGROUP_HPP
#define FILTRA_PCGROUP_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "filtra/error.hpp"

namespace filtra {

/// Finite polycyclic groups by power-commutator presentation.  Elements are
/// normal-form exponent vectors; multiplication is collection from the left.

using Elt = std::vector<long long>;

struct Collector {
    int n = 0;
    std::vector<long long> m;             // relative orders
    std::vector<Elt> pw;                  // g_i^{m_i} (support > i)
    std::vector<std::vector<Elt>> cj;     // cj[i][j], i<j: g_i^{-1} g_j g_i (support > i)
    mutable long long steps = 0;

    Elt id() const { return Elt(n, 0); }

    bool is_id(const Elt& a) const {
        for (long long e : a)
            if (e) return false;
        return true;
    }

    int depth(const Elt& a) const {
        for (int i = 0; i < n; ++i)
            if (a[i]) return i;
        return n;
    }

    void check_budget() const {
        if (++steps > 200000000LL) throw Error("CollectionDiverged", "collection step budget exhausted");
    }

    Elt mul(Elt a, const Elt& b) const {
        for (int i = 0; i < n; ++i)
            for (long long k = 0; k < b[i]; ++k) a = mul_gen(std::move(a), i);
        return a;
    }

    Elt mul_gen(Elt a, int i) const {
        check_budget();
        int j = -1;
        for (int t = n - 1; t > i; --t)
            if (a[t]) { j = t; break; }
        if (j < 0) {
            a[i] += 1;
            if (a[i] == m[i]) {
                a[i] = 0;
                a = mul(std::move(a), pw[i]);
            }
            return a;
        }
        Elt head = a;
        Elt tail(n, 0);
        for (int t = i + 1; t < n; ++t) {
            tail[t] = head[t];
            head[t] = 0;
        }
        Elt res = mul_gen(std::move(head), i);
        for (int t = i + 1; t < n; ++t)
            for (long long k = 0; k < tail[t]; ++k) res = mul(std::move(res), cj[i][t]);
        return res;
    }

    Elt gen(int i) const {
        Elt e = id();
        e = mul_gen(std::move(e), i);
        return e;
    }

    Elt pow(const Elt& a, long long k) const {
        if (k < 0) return pow(inv(a), -k);
        Elt r = id(), base = a;
        while (k) {
            if (k & 1) r = mul(std::move(r), base);
            base = mul(base, base);
            k >>= 1;
        }
        return r;
    }

    Elt inv(const Elt& a) const {
        Elt v = id(), w = a;
        for (int d = 0; d < n; ++d)
            if (w[d]) {
                Elt t = pow_gen_word(d, m[d] - w[d]);
                v = mul(std::move(v), t);
                w = mul(std::move(w), t);
            }
        return v;
    }

    Elt pow_gen_word(int d, long long k) const {
        Elt e = id();
        for (long long i = 0; i < k; ++i) e = mul_gen(std::move(e), d);
        return e;
    }

    Elt conj(const Elt& x, const Elt& g) const { return mul(mul(inv(g), x), g); }

    Elt comm(const Elt& a, const Elt& b) const { return mul(mul(mul(inv(a), inv(b)), a), b); }

    unsigned long long group_order() const {
        unsigned long long o = 1;
        for (long long mi : m) {
            if (o > (1ULL << 62) / static_cast<unsigned long long>(mi))
                throw Error("SizeCapExceeded", "group order exceeds 2^62");
            o *= static_cast<unsigned long long>(mi);
        }
        return o;
    }
};

struct ConsistencyReport {
    bool consistent = true;
    std::vector<std::string> witnesses;
};

inline void validate_syntax(const Collector& c) {
    if (c.n < 0) throw Error("BadInput", "negative generator count");
    for (int i = 0; i < c.n; ++i) {
        if (c.m[i] < 2) throw Error("BadInput", "relative order below 2 at generator " + std::to_string(i + 1));
        for (int t = 0; t <= i; ++t)
            if (c.pw[i][t])
                throw Error("BadInput", "power relation of g" + std::to_string(i + 1) +
                                            " mentions a generator of index <= its own");
        for (int j = i + 1; j < c.n; ++j) {
            // conjugate g_j^{g_i} = g_j * [g_j, g_i] with the commutator a word
            // in generators of index > j
            if (c.cj[i][j][j] != 1)
                throw Error("BadInput", "conjugate relation out of triangular form at [g" +
                                            std::to_string(j + 1) + ",g" + std::to_string(i + 1) + "]");
            for (int t = 0; t < j; ++t)
                if (c.cj[i][j][t] != 0)
                    throw Error("BadInput", "commutator [g" + std::to_string(j + 1) + ",g" +
                                                std::to_string(i + 1) + "] mentions a lower generator");
        }
    }
}

inline ConsistencyReport check_consistency(const Collector& c) {
    ConsistencyReport rep;
    auto fail = [&](const std::string& w) {
        rep.consistent = false;
        rep.witnesses.push_back(w);
    };
    auto same = [&](const Elt& a, const Elt& b) { return a == b; };
    for (int i = 0; i < c.n; ++i) {
        Elt gi = c.gen(i);
        // g_i * g_i^{m_i} both association orders
        Elt l = c.mul(gi, c.pw[i]);
        Elt r = c.mul(c.pow_gen_word(i, c.m[i]), gi);
        if (!same(l, r)) fail("power overlap at g" + std::to_string(i + 1));
        for (int j = i + 1; j < c.n; ++j) {
            Elt gj = c.gen(j);
            Elt a = c.mul(c.pow_gen_word(j, c.m[j]), gi);
            Elt b = c.mul(c.pow_gen_word(j, c.m[j] - 1), c.mul(gj, gi));
            if (!same(a, b)) fail("overlap g" + std::to_string(j + 1) + "^m g" + std::to_string(i + 1));
            Elt e = c.mul(gj, c.pow_gen_word(i, c.m[i]));
            Elt f = c.mul(c.mul(gj, gi), c.pow_gen_word(i, c.m[i] - 1));
            if (!same(e, f)) fail("overlap g" + std::to_string(j + 1) + " g" + std::to_string(i + 1) + "^m");
            for (int k = j + 1; k < c.n; ++k) {
                Elt gk = c.gen(k);
                Elt u = c.mul(gk, c.mul(gj, gi));
                Elt v = c.mul(c.mul(gk, gj), gi);
                if (!same(u, v))
                    fail("associativity overlap g" + std::to_string(k + 1) + " g" + std::to_string(j + 1) +
                         " g" + std::to_string(i + 1));
            }
        }
    }
    return rep;
}

namespace detail {

inline std::vector<long long> prime_factors(long long v) {
    std::vector<long long> out;
    for (long long p = 2; p * p <= v; ++p)
        while (v % p == 0) {
            out.push_back(p);
            v /= p;
        }
    if (v > 1) out.push_back(v);
    return out;
}

inline long long mod_inverse(long long a, long long p) {
    long long r = 1, b = a % p, e = p - 2; // p prime
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

} // namespace detail

class PcGroup;

struct Subgroup {
    std::vector<Elt> gens; // canonical induced generating sequence (strictly increasing depth)
    unsigned long long size = 1;

    bool operator==(const Subgroup& o) const { return gens == o.gens; }
    bool operator<(const Subgroup& o) const { return gens < o.gens; }
};

/// A finite polycyclic group.  The user-declared presentation is refined so
/// that every relative order is prime, which makes every induced-generating-
/// sequence pivot normalizable to leading exponent 1.
class PcGroup {
public:
    Collector c;                     // refined collector (prime relative orders)
    int n_orig = 0;
    std::vector<long long> m_orig;
    std::vector<Elt> orig_gen;       // original generator -> refined element

    static PcGroup from_refined(Collector col) {
        validate_syntax(col);
        PcGroup g;
        g.c = std::move(col);
        g.n_orig = g.c.n;
        g.m_orig = g.c.m;
        g.orig_gen.resize(g.c.n);
        for (int i = 0; i < g.c.n; ++i) g.orig_gen[i] = g.c.gen(i);
        g.c.group_order();
        return g;
    }

    /// Build from a possibly-composite-order presentation; refines to primes.
    static PcGroup from_presentation(const Collector& orig) {
        validate_syntax(orig);
        bool all_prime = true;
        for (long long mi : orig.m)
            if (detail::prime_factors(mi).size() != 1) all_prime = false;
        if (all_prime) {
            PcGroup g = from_refined(orig);
            return g;
        }
        // refined generator list: for each original generator i with
        // m_i = p_1 p_2 ... p_k, generators g_i, g_i^{p_1}, g_i^{p_1 p_2}, ...
        struct RGen { int orig; long long power; long long order; };
        std::vector<RGen> rg;
        std::vector<int> first_of(orig.n);
        for (int i = 0; i < orig.n; ++i) {
            first_of[i] = static_cast<int>(rg.size());
            long long q = 1;
            for (long long p : detail::prime_factors(orig.m[i])) {
                rg.push_back({i, q, p});
                q *= p;
            }
        }
        int N = static_cast<int>(rg.size());
        // expansion of an original normal form into refined digits
        auto expand = [&](const Elt& e) {
            Elt out(N, 0);
            for (int i = 0; i < orig.n; ++i) {
                long long v = e[i];
                int base = first_of[i];
                int cnt = (i + 1 < orig.n ? first_of[i + 1] : N) - base;
                for (int t = 0; t < cnt; ++t) {
                    out[base + t] = v % rg[base + t].order;
                    v /= rg[base + t].order;
                }
            }
            return out;
        };
        auto lift = [&](int ridx) { // refined generator as original element
            return orig.pow(orig.gen(rg[ridx].orig), rg[ridx].power);
        };
        Collector rc;
        rc.n = N;
        rc.m.resize(N);
        rc.pw.assign(N, Elt(N, 0));
        rc.cj.assign(N, std::vector<Elt>(N, Elt(N, 0)));
        for (int a = 0; a < N; ++a) {
            rc.m[a] = rg[a].order;
            rc.pw[a] = expand(orig.pow(lift(a), rg[a].order));
            for (int b = a + 1; b < N; ++b) rc.cj[a][b] = expand(orig.conj(lift(b), lift(a)));
        }
        PcGroup g = from_refined(rc);
        g.n_orig = orig.n;
        g.m_orig = orig.m;
        g.orig_gen.resize(orig.n);
        for (int i = 0; i < orig.n; ++i) g.orig_gen[i] = g.c.gen(first_of[i]);
        return g;
    }

    int n() const { return c.n; }
    Elt id() const { return c.id(); }
    Elt mul(const Elt& a, const Elt& b) const { return c.mul(a, b); }
    Elt inv(const Elt& a) const { return c.inv(a); }
    Elt pow(const Elt& a, long long k) const { return c.pow(a, k); }
    Elt commutator(const Elt& a, const Elt& b) const { return c.comm(a, b); }
    Elt conj_elt(const Elt& a, const Elt& g) const { return c.conj(a, g); }
    unsigned long long order() const { return c.group_order(); }

    /// Evaluate a word in the ORIGINAL generators (pairs of 1-based index and
    /// integer exponent).
    Elt word(const std::vector<std::pair<int, long long>>& w) const {
        Elt r = id();
        for (auto& [gi, e] : w) {
            if (gi < 1 || gi > n_orig) throw Error("UnknownGenerator", "g" + std::to_string(gi));
            r = mul(r, pow(orig_gen[gi - 1], e));
        }
        return r;
    }

    std::string elt_str(const Elt& e) const {
        std::ostringstream os;
        os << "(";
        for (int i = 0; i < c.n; ++i) os << (i ? "," : "") << e[i];
        os << ")";
        return os.str();
    }

    // ---- subgroup machinery ----

    Subgroup trivial_subgroup() const { return Subgroup{}; }

    Subgroup full_group() const {
        std::vector<Elt> gs;
        for (int i = 0; i < c.n; ++i) gs.push_back(c.gen(i));
        return subgroup(gs, false);
    }

    Subgroup subgroup(const std::vector<Elt>& generators, bool normal_closure) const {
        std::vector<Elt> pivots(c.n);
        std::vector<char> have(c.n, 0);
        std::vector<Elt> queue = generators;
        auto sift = [&](Elt x) {
            while (true) {
                int d = c.depth(x);
                if (d == c.n || !have[d]) return x;
                long long a = x[d];
                x = c.mul(c.pow(pivots[d], c.m[d] - a), x);
            }
        };
        size_t qi = 0;
        auto push_closure = [&](int d) {
            // new pivot at depth d: close under products and powers
            queue.push_back(c.pow(pivots[d], c.m[d]));
            for (int e = 0; e < c.n; ++e)
                if (have[e] && e != d) {
                    queue.push_back(c.mul(pivots[d], pivots[e]));
                    queue.push_back(c.mul(pivots[e], pivots[d]));
                }
            if (normal_closure)
                for (int gi = 0; gi < c.n; ++gi) {
                    queue.push_back(c.conj(pivots[d], c.gen(gi)));
                    queue.push_back(c.conj(pivots[d], c.inv(c.gen(gi))));
                }
        };
        while (qi < queue.size()) {
            Elt x = sift(queue[qi++]);
            int d = c.depth(x);
            if (d == c.n) continue;
            long long k = detail::mod_inverse(x[d], c.m[d]); // prime order: normalize lead to 1
            pivots[d] = c.pow(x, k);
            have[d] = 1;
            // the normalized pivot may generate less than x: keep the remainder
            queue.push_back(c.mul(c.pow(pivots[d], c.m[d] - x[d]), x));
            push_closure(d);
        }
        // canonical reduction: clear entries at other pivot depths
        Subgroup H;
        std::vector<int> depths;
        for (int d = 0; d < c.n; ++d)
            if (have[d]) depths.push_back(d);
        for (int d : depths) {
            Elt x = pivots[d];
            for (int e : depths)
                if (e > d && x[e]) x = c.mul(x, c.pow(pivots[e], c.m[e] - x[e]));
            pivots[d] = x;
        }
        // second pass in case clearing reintroduced entries at earlier-cleared depths
        bool changed = true;
        while (changed) {
            changed = false;
            for (int d : depths) {
                Elt x = pivots[d];
                for (int e : depths)
                    if (e > d && x[e]) {
                        x = c.mul(x, c.pow(pivots[e], c.m[e] - x[e]));
                        changed = true;
                    }
                pivots[d] = x;
            }
        }
        H.size = 1;
        for (int d : depths) {
            H.gens.push_back(pivots[d]);
            H.size *= static_cast<unsigned long long>(c.m[d]);
        }
        return H;
    }

    bool membership(const Elt& g, const Subgroup& H) const {
        Elt x = g;
        size_t i = 0;
        while (true) {
            int d = c.depth(x);
            if (d == c.n) return true;
            while (i < H.gens.size() && c.depth(H.gens[i]) < d) ++i;
            if (i == H.gens.size() || c.depth(H.gens[i]) != d) return false;
            x = c.mul(c.pow(H.gens[i], c.m[d] - x[d]), x);
        }
    }

    bool equals(const Subgroup& H, const Subgroup& K) const { return H.gens == K.gens; }

    bool subgroup_leq(const Subgroup& H, const Subgroup& K) const {
        for (const Elt& g : H.gens)
            if (!membership(g, K)) return false;
        return true;
    }

    unsigned long long order(const Subgroup& H) const { return H.size; }

    Subgroup join(const Subgroup& H, const Subgroup& K) const {
        std::vector<Elt> gs = H.gens;
        gs.insert(gs.end(), K.gens.begin(), K.gens.end());
        return subgroup(gs, false);
    }

    Subgroup commutator_subgroup(const Subgroup& H, const Subgroup& K) const {
        std::vector<Elt> gs;
        for (const Elt& h : H.gens)
            for (const Elt& k : K.gens) gs.push_back(c.comm(h, k));
        return subgroup(gs, true);
    }

    bool is_normal(const Subgroup& H) const {
        for (const Elt& h : H.gens)
            for (int gi = 0; gi < c.n; ++gi)
                if (!membership(c.conj(h, c.gen(gi)), H)) return false;
        return true;
    }

    std::vector<Elt> enumerate_elements(const Subgroup& H, unsigned long long cap = 200000) const {
        if (H.size > cap) throw Error("CapExceeded", "subgroup order exceeds enumeration cap");
        std::vector<Elt> out{id()};
        for (auto it = H.gens.rbegin(); it != H.gens.rend(); ++it) {
            int d = c.depth(*it);
            std::vector<Elt> next;
            Elt p = id();
            for (long long e = 0; e < c.m[d]; ++e) {
                for (const Elt& x : out) next.push_back(c.mul(p, x));
                p = c.mul(p, *it);
            }
            out = std::move(next);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    Subgroup intersection(const Subgroup& H, const Subgroup& K,
                          bool allow_brute = true, unsigned long long cap = 200000) const;

    std::vector<Subgroup> lower_central_series() const {
        std::vector<Subgroup> out{full_group()};
        while (true) {
            Subgroup nxt = commutator_subgroup(out.back(), out.front());
            if (equals(nxt, out.back())) break;
            out.push_back(nxt);
            if (nxt.gens.empty()) break;
        }
        return out;
    }

    std::vector<Subgroup> derived_series() const {
        std::vector<Subgroup> out{full_group()};
        while (true) {
            Subgroup nxt = commutator_subgroup(out.back(), out.back());
            if (equals(nxt, out.back())) break;
            out.push_back(nxt);
            if (nxt.gens.empty()) break;
        }
        return out;
    }

    bool is_nilpotent(int* cls = nullptr) const {
        auto s = lower_central_series();
        if (!s.back().gens.empty()) return false;
        if (cls) *cls = s.size() == 1 ? 0 : static_cast<int>(s.size()) - 1;
        return true;
    }

    bool is_solvable() const {
        auto s = derived_series();
        return s.back().gens.empty();
    }

    bool is_pcgs(std::vector<Elt> seq) const {
        // full length: one element per prime layer of the generated subgroup
        std::map<std::vector<Elt>, bool> memo;
        auto rec = [&](auto&& self, std::vector<Elt> s) -> bool {
            std::sort(s.begin(), s.end());
            auto it = memo.find(s);
            if (it != memo.end()) return it->second;
            bool ok = false;
            if (s.empty()) {
                ok = true;
            } else {
                Subgroup all = subgroup(s, false);
                if (all.gens.size() == s.size()) {
                    for (size_t i = 0; i < s.size() && !ok; ++i) {
                        std::vector<Elt> rest;
                        for (size_t j = 0; j < s.size(); ++j)
                            if (j != i) rest.push_back(s[j]);
                        Subgroup sub = subgroup(rest, false);
                        if (sub.size * 2 > all.size || all.size % sub.size != 0) continue;
                        unsigned long long idx = all.size / sub.size;
                        if (detail::prime_factors(static_cast<long long>(idx)).size() != 1) continue;
                        // subnormal step: rest must be normalized by s[i]
                        bool norm = true;
                        for (const Elt& g : sub.gens)
                            if (!membership(c.conj(g, s[i]), sub)) { norm = false; break; }
                        if (norm && self(self, rest)) ok = true;
                    }
                }
            }
            memo[s] = ok;
            return ok;
        };
        return rec(rec, std::move(seq));
    }

    /// Canonical coset representative of Hx (zero exponents at pivot depths).
    Elt coset_rep(const Elt& x, const Subgroup& H) const {
        Elt r = x;
        for (const Elt& p : H.gens) {
            int d = c.depth(p);
            if (r[d]) r = c.mul(c.pow(p, c.m[d] - r[d]), r);
        }
        return r;
    }

};

/// Quotient by a normal subgroup: presentation on the non-pivot depths,
/// with the projection map realized by coset representatives.
struct PcQuotient {
    PcGroup q;
    std::vector<int> depth_of_qgen; // q generator -> depth in the parent
};

inline PcQuotient quotient(const PcGroup& G, const Subgroup& K) {
    const Collector& c = G.c;
    std::vector<char> pivot(c.n, 0);
    for (const Elt& p : K.gens) pivot[c.depth(p)] = 1;
    std::vector<int> qd;
    for (int d = 0; d < c.n; ++d)
        if (!pivot[d]) qd.push_back(d);
    int N = static_cast<int>(qd.size());
    auto project = [&](const Elt& x) {
        Elt r = G.coset_rep(x, K);
        Elt out(N, 0);
        for (int i = 0; i < N; ++i) out[i] = r[qd[i]];
        return out;
    };
    Collector rc;
    rc.n = N;
    rc.m.resize(N);
    rc.pw.assign(N, Elt(N, 0));
    rc.cj.assign(N, std::vector<Elt>(N, Elt(N, 0)));
    for (int a = 0; a < N; ++a) {
        rc.m[a] = c.m[qd[a]];
        rc.pw[a] = project(c.pow(c.gen(qd[a]), c.m[qd[a]]));
        for (int b = a + 1; b < N; ++b) rc.cj[a][b] = project(c.conj(c.gen(qd[b]), c.gen(qd[a])));
    }
    return PcQuotient{PcGroup::from_refined(std::move(rc)), qd};
}

inline Elt project_to_quotient(const PcGroup& G, const PcQuotient& Q, const Subgroup& K, const Elt& x) {
    Elt r = G.coset_rep(x, K);
    Elt out(Q.q.n(), 0);
    for (int i = 0; i < Q.q.n(); ++i) out[i] = r[Q.depth_of_qgen[i]];
    return out;
}

/// Direct product A x B with no cross relations.
inline PcGroup direct_product(const PcGroup& A, const PcGroup& B) {
    int na = A.n(), nb = B.n();
    Collector rc;
    rc.n = na + nb;
    rc.m.resize(rc.n);
    rc.pw.assign(rc.n, Elt(rc.n, 0));
    rc.cj.assign(rc.n, std::vector<Elt>(rc.n, Elt(rc.n, 0)));
    auto embedA = [&](const Elt& e) {
        Elt out(rc.n, 0);
        for (int i = 0; i < na; ++i) out[i] = e[i];
        return out;
    };
    auto embedB = [&](const Elt& e) {
        Elt out(rc.n, 0);
        for (int i = 0; i < nb; ++i) out[na + i] = e[i];
        return out;
    };
    for (int i = 0; i < na; ++i) {
        rc.m[i] = A.c.m[i];
        rc.pw[i] = embedA(A.c.pw[i]);
        for (int j = i + 1; j < na; ++j) rc.cj[i][j] = embedA(A.c.cj[i][j]);
        for (int j = 0; j < nb; ++j) {
            rc.cj[i][na + j] = embedB(B.c.gen(j)); // commute: conjugate is itself
        }
    }
    for (int i = 0; i < nb; ++i) {
        rc.m[na + i] = B.c.m[i];
        rc.pw[na + i] = embedB(B.c.pw[i]);
        for (int j = i + 1; j < nb; ++j) rc.cj[na + i][na + j] = embedB(B.c.cj[i][j]);
    }
    return PcGroup::from_refined(std::move(rc));
}

inline Subgroup PcGroup::intersection(const Subgroup& H, const Subgroup& K,
                                      bool allow_brute, unsigned long long cap) const {
    if (subgroup_leq(H, K)) return H;
    if (subgroup_leq(K, H)) return K;
    if (is_normal(K) && is_normal(H)) {
        // layered method: kernel of H -> G/K via the graph subgroup of Q x G
        PcQuotient Q = quotient(*this, K);
        PcGroup P = direct_product(Q.q, *this);
        int nq = Q.q.n();
        std::vector<Elt> graph_gens;
        for (const Elt& h : H.gens) {
            Elt qpart = project_to_quotient(*this, Q, K, h);
            Elt e(P.n(), 0);
            for (int i = 0; i < nq; ++i) e[i] = qpart[i];
            // multiply the embedded parts: supports are disjoint so placement is exact
            for (int i = 0; i < n(); ++i) e[nq + i] = h[i];
            graph_gens.push_back(e);
        }
        Subgroup D = P.subgroup(graph_gens, false);
        std::vector<Elt> kernel_gens;
        for (const Elt& p : D.gens)
            if (P.c.depth(p) >= nq) {
                Elt g(n(), 0);
                for (int i = 0; i < n(); ++i) g[i] = p[nq + i];
                kernel_gens.push_back(g);
            }
        return subgroup(kernel_gens, false);
    }
    if (!allow_brute) throw Error("NotNormal", "layered intersection needs normal subgroups");
    if (H.size > cap || K.size > cap) throw Error("NotNormal", "non-normal subgroups too large for brute force");
    const Subgroup& small = H.size <= K.size ? H : K;
    const Subgroup& big = H.size <= K.size ? K : H;
    std::vector<Elt> gs;
    for (const Elt& x : enumerate_elements(small, cap))
        if (membership(x, big)) gs.push_back(x);
    return subgroup(gs, false);
}

/// Brute-force intersection used by the oracle-equivalence tests.
inline Subgroup brute_intersection(const PcGroup& G, const Subgroup& H, const Subgroup& K,
                                   unsigned long long cap = 200000) {
    const Subgroup& small = H.size <= K.size ? H : K;
    const Subgroup& big = H.size <= K.size ? K : H;
    std::vector<Elt> gs;
    for (const Elt& x : G.enumerate_elements(small, cap))
        if (G.membership(x, big)) gs.push_back(x);
    return G.subgroup(gs, false);
}

} // namespace filtra

#endif
