#ifndef FILTRA_MONOID_HPP
#define FILTRA_MONOID_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "filtra/error.hpp"

namespace filtra {

/// Commutative index monoids: finite products of cyclic monoids C_{r,s}
/// (0,1,...,r-1 then a cycle of length s starting at r), carrying a
/// translation-compatible partial order with 0 as minimum.

enum class OrderKind { Direct, Lex, Blocks, DiscreteBelow, Explicit };

struct Factor {
    int r = 1;
    int s = 1;
    int size() const { return r + s; }
};

class Monoid {
public:
    std::vector<Factor> factors;
    OrderKind kind = OrderKind::Direct;
    std::vector<std::vector<int>> blocks; // factor indices per block (Blocks kind)
    bool has_infinity = false;
    bool free_truncated = false;     // built by lift_free: all periods 1, saturation inexact
    bool truncation_artifacts = false; // order compatibility holds only up to saturation
    std::vector<std::string> notes;
    std::vector<int> lift_index_map; // lifted element -> base element (lift_free output)

    int n = 0; // number of elements (including infinity if adjoined)

    int dim() const { return static_cast<int>(factors.size()); }
    int infinity() const { return n - 1; } // valid only when has_infinity

    bool is_infinity(int x) const { return has_infinity && x == n - 1; }

    std::vector<int> coords(int x) const {
        if (is_infinity(x))
            throw Error("BadInput", "coords of infinity");
        std::vector<int> c(factors.size());
        for (int f = dim() - 1; f >= 0; --f) {
            c[f] = x % factors[f].size();
            x /= factors[f].size();
        }
        return c;
    }

    int index(const std::vector<int>& c) const {
        int x = 0;
        for (int f = 0; f < dim(); ++f) {
            if (c[f] < 0 || c[f] >= factors[f].size())
                throw Error("BadInput", "coordinate out of range");
            x = x * factors[f].size() + c[f];
        }
        return x;
    }

    /// Reduce a nonnegative integer into C_{r,s}.
    static int reduce(const Factor& f, long long v) {
        if (v < f.r) return static_cast<int>(v);
        return f.r + static_cast<int>((v - f.r) % f.s);
    }

    int add(int a, int b) const {
        if (is_infinity(a) || is_infinity(b)) return infinity();
        std::vector<int> ca = coords(a), cb = coords(b);
        for (int f = 0; f < dim(); ++f)
            ca[f] = reduce(factors[f], static_cast<long long>(ca[f]) + cb[f]);
        return index(ca);
    }

    bool leq(int a, int b) const { return leq_[static_cast<size_t>(a) * n + b] != 0; }
    bool lt(int a, int b) const { return a != b && leq(a, b); }
    bool incomparable(int a, int b) const { return !leq(a, b) && !leq(b, a); }

    /// Position in the deterministic element order: by coordinate sum, then
    /// lexicographically reading coordinates from the last factor to the first
    /// (so e1 < e2 < ...); infinity sorts last.
    int rank(int x) const { return rank_[x]; }
    int by_rank(int i) const { return by_rank_[i]; }

    int grade(int x) const {
        if (is_infinity(x)) return 1 << 30;
        auto c = coords(x);
        return std::accumulate(c.begin(), c.end(), 0);
    }

    std::string str(int x) const {
        if (is_infinity(x)) return "inf";
        auto c = coords(x);
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < c.size(); ++i)
            os << (i ? "," : "") << c[i];
        os << ")";
        return os.str();
    }

    std::vector<int> sinks() const {
        std::vector<int> out;
        for (int s = 0; s < n; ++s)
            if (is_sink(s)) out.push_back(s);
        return out;
    }

    bool is_sink(int s) const {
        for (int t = 1; t < n; ++t)
            if (add(s, t) == s && t != 0) return true;
        return false;
    }

    bool is_semi_cancellative(int s) const { return !is_sink(s); }

    /// Minimal elements of a subset under the monoid order.
    std::vector<int> minimal_elements(const std::vector<int>& subset) const {
        std::vector<int> out;
        for (int a : subset) {
            bool minimal = true;
            for (int b : subset)
                if (b != a && leq(b, a)) { minimal = false; break; }
            if (minimal) out.push_back(a);
        }
        return out;
    }

    /// Elements listed in deterministic (graded) order.
    std::vector<int> elements_by_rank() const { return by_rank_; }

    // --- construction internals (used by make_monoid / lift_free) ---

    void set_leq(std::vector<uint8_t> m) { leq_ = std::move(m); }
    const std::vector<uint8_t>& leq_matrix() const { return leq_; }

    void finalize() {
        by_rank_.resize(n);
        std::iota(by_rank_.begin(), by_rank_.end(), 0);
        std::stable_sort(by_rank_.begin(), by_rank_.end(), [&](int a, int b) {
            if (is_infinity(a) != is_infinity(b)) return is_infinity(b);
            int ga = grade(a), gb = grade(b);
            if (ga != gb) return ga < gb;
            auto ca = coords(a), cb = coords(b);
            for (int f = dim() - 1; f >= 0; --f)
                if (ca[f] != cb[f]) return ca[f] < cb[f];
            return false;
        });
        rank_.assign(n, 0);
        for (int i = 0; i < n; ++i) rank_[by_rank_[i]] = i;
    }

private:
    std::vector<uint8_t> leq_;
    std::vector<int> rank_;
    std::vector<int> by_rank_;
};

namespace detail {

inline bool natural_block_leq(const std::vector<std::vector<int>>& blocks,
                              const std::vector<long long>& a, const std::vector<long long>& b) {
    // Per block: lexicographic over the block's factors with the natural total
    // order on each coordinate; across blocks: all must hold.
    for (const auto& blk : blocks) {
        bool ok = false, decided = false;
        for (int f : blk) {
            if (a[f] != b[f]) {
                ok = a[f] < b[f];
                decided = true;
                break;
            }
        }
        if (!decided) ok = true;
        if (!ok) return false;
    }
    return true;
}

inline std::vector<std::vector<int>> blocks_for(OrderKind kind, int d,
                                                const std::vector<std::vector<int>>& given) {
    std::vector<std::vector<int>> blocks;
    if (kind == OrderKind::Direct) {
        for (int f = 0; f < d; ++f) blocks.push_back({f});
    } else if (kind == OrderKind::Lex) {
        std::vector<int> all(d);
        std::iota(all.begin(), all.end(), 0);
        blocks.push_back(all);
    } else {
        blocks = given;
        std::vector<char> seen(d, 0);
        for (auto& blk : blocks)
            for (int f : blk) {
                if (f < 0 || f >= d || seen[f]) throw Error("BadInput", "invalid block structure");
                seen[f] = 1;
            }
        for (int f = 0; f < d; ++f)
            if (!seen[f]) throw Error("BadInput", "block structure misses a factor");
    }
    return blocks;
}

} // namespace detail

/// Unvalidated constructor: arithmetic-only use (order matrix defaults to the
/// block comparison on representatives, but no axioms are checked).
inline Monoid raw_monoid(std::vector<Factor> factors, OrderKind kind = OrderKind::Direct,
                         std::vector<std::vector<int>> blocks = {}) {
    Monoid m;
    m.factors = std::move(factors);
    m.kind = kind;
    long long total = 1;
    for (auto& f : m.factors) {
        if (f.r < 1 || f.s < 1) throw Error("BadInput", "factor needs r>=1, s>=1");
        total *= f.size();
        if (total > (1LL << 40)) throw Error("SizeCapExceeded", "monoid too large");
    }
    m.n = static_cast<int>(total);
    int d = m.dim();
    if (kind == OrderKind::Explicit)
        throw Error("BadInput", "raw_monoid does not take explicit orders");
    std::vector<std::vector<int>> blk =
        kind == OrderKind::DiscreteBelow ? std::vector<std::vector<int>>{}
                                         : detail::blocks_for(kind, d, blocks);
    m.blocks = blk;
    std::vector<uint8_t> leq(static_cast<size_t>(m.n) * m.n, 0);
    for (int a = 0; a < m.n; ++a) {
        auto ca = m.coords(a);
        std::vector<long long> la(ca.begin(), ca.end());
        for (int b = 0; b < m.n; ++b) {
            auto cb = m.coords(b);
            std::vector<long long> lb(cb.begin(), cb.end());
            bool le;
            if (kind == OrderKind::DiscreteBelow)
                le = (a == b) || (a == 0);
            else
                le = detail::natural_block_leq(blk, la, lb);
            leq[static_cast<size_t>(a) * m.n + b] = le ? 1 : 0;
        }
    }
    m.set_leq(std::move(leq));
    m.finalize();
    return m;
}

struct OrderWitness {
    int s = -1, t = -1, u = -1;
    std::string describe(const Monoid& m) const {
        std::ostringstream os;
        os << "s=" << m.str(s) << " t=" << m.str(t);
        if (u >= 0) os << " u=" << m.str(u);
        return os.str();
    }
};

/// Validating constructor. Checks partial-order axioms, minimality of 0, and
/// translation compatibility (s<=t implies s+u<=t+u, which gives the two-sided
/// law by transitivity). Compatibility failures that disappear when sums are
/// recomputed without truncation clipping (and only period-1 factors clipped)
/// are recorded as truncation artifacts instead of errors.
inline Monoid make_monoid(std::vector<Factor> factors, OrderKind kind,
                          std::vector<std::vector<int>> blocks = {},
                          const std::vector<std::pair<std::vector<int>, std::vector<int>>>& explicit_pairs = {},
                          int cap = 4096) {
    long long total = 1;
    for (auto& f : factors) {
        if (f.r < 1 || f.s < 1) throw Error("BadInput", "factor needs r>=1, s>=1");
        total *= f.size();
        if (total > cap)
            throw Error("SizeCapExceeded", "monoid has more than cap=" + std::to_string(cap) + " elements");
    }

    Monoid m;
    if (kind == OrderKind::Explicit) {
        m = raw_monoid(factors, OrderKind::Direct);
        m.kind = OrderKind::Explicit;
        m.blocks.clear();
        int n = m.n;
        std::vector<uint8_t> leq(static_cast<size_t>(n) * n, 0);
        for (int a = 0; a < n; ++a) leq[static_cast<size_t>(a) * n + a] = 1;
        for (auto& pr : explicit_pairs) {
            int a = m.index(pr.first), b = m.index(pr.second);
            leq[static_cast<size_t>(a) * n + b] = 1;
        }
        // reflexive-transitive closure (Floyd-Warshall on the relation)
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a)
                if (leq[static_cast<size_t>(a) * n + k])
                    for (int b = 0; b < n; ++b)
                        if (leq[static_cast<size_t>(k) * n + b]) leq[static_cast<size_t>(a) * n + b] = 1;
        m.set_leq(std::move(leq));
        m.finalize();
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (m.leq(a, b) && m.leq(b, a))
                    throw Error("OrderIncompatible",
                                "antisymmetry fails: " + OrderWitness{a, b, -1}.describe(m));
    } else {
        m = raw_monoid(std::move(factors), kind, std::move(blocks));
    }

    for (int t = 0; t < m.n; ++t)
        if (!m.leq(0, t))
            throw Error("ZeroNotMinimal", "0 is not below " + m.str(t));

    const int n = m.n;
    bool artifacts = false;
    if (n <= 1500) {
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) {
                if (!m.leq(s, t)) continue;
                for (int u = 0; u < n; ++u) {
                    if (m.leq(m.add(s, u), m.add(t, u))) continue;
                    // attempt the truncation-artifact excusal
                    bool excusable = (m.kind == OrderKind::Direct || m.kind == OrderKind::Lex ||
                                      m.kind == OrderKind::Blocks);
                    auto cs = m.coords(s), ct = m.coords(t), cu = m.coords(u);
                    std::vector<long long> a(m.dim()), b(m.dim());
                    for (int f = 0; f < m.dim() && excusable; ++f) {
                        a[f] = static_cast<long long>(cs[f]) + cu[f];
                        b[f] = static_cast<long long>(ct[f]) + cu[f];
                        bool clipped = a[f] >= m.factors[f].size() || b[f] >= m.factors[f].size();
                        if (clipped && m.factors[f].s != 1) excusable = false;
                    }
                    if (excusable && !detail::natural_block_leq(m.blocks, a, b)) excusable = false;
                    if (!excusable)
                        throw Error("OrderIncompatible",
                                    "translation fails: " + OrderWitness{s, t, u}.describe(m));
                    artifacts = true;
                }
            }
    } else {
        bool all_period_one = true;
        for (auto& f : m.factors)
            if (f.s != 1) all_period_one = false;
        if (!(all_period_one &&
              (m.kind == OrderKind::Direct || m.kind == OrderKind::Lex || m.kind == OrderKind::Blocks)))
            throw Error("SizeCapExceeded", "order validation infeasible at this size for this order kind");
        if (m.kind != OrderKind::Direct) {
            bool multi_block = false;
            for (auto& blk : m.blocks)
                if (blk.size() > 1) multi_block = true;
            artifacts = multi_block;
        }
    }
    if (artifacts) {
        m.truncation_artifacts = true;
        m.notes.push_back("order compatible only up to truncation saturation");
    }
    return m;
}

/// Adjoin a maximum absorbing element: s + inf = inf, s <= inf.
inline Monoid adjoin_infinity(const Monoid& m) {
    if (m.has_infinity) throw Error("BadInput", "infinity already adjoined");
    Monoid out = m;
    out.has_infinity = true;
    out.n = m.n + 1;
    const int n = out.n;
    std::vector<uint8_t> leq(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < m.n; ++a)
        for (int b = 0; b < m.n; ++b)
            leq[static_cast<size_t>(a) * n + b] = m.leq(a, b) ? 1 : 0;
    for (int a = 0; a < n; ++a) leq[static_cast<size_t>(a) * n + (n - 1)] = 1;
    out.set_leq(std::move(leq));
    out.finalize();
    out.notes.push_back("infinity adjoined");
    return out;
}

/// Lift to a truncated free monoid over the same factor count.  Elements are
/// coordinate vectors with 0 <= x_f <= bound_f; the order compares images in
/// the base monoid first and breaks ties componentwise.  The image map mu
/// reduces each coordinate into C_{r,s}.
inline Monoid lift_free(const Monoid& m, const std::vector<int>& bounds, int cap = 4096) {
    if (m.has_infinity) throw Error("BadInput", "cannot lift a monoid with infinity");
    if (static_cast<int>(bounds.size()) != m.dim()) throw Error("BadInput", "bounds arity mismatch");
    std::vector<Factor> fs;
    long long total = 1;
    for (int f = 0; f < m.dim(); ++f) {
        if (bounds[f] < m.factors[f].r + m.factors[f].s - 1)
            throw Error("BadInput", "lift bound too small for factor " + std::to_string(f + 1));
        fs.push_back(Factor{bounds[f], 1});
        total *= bounds[f] + 1;
        if (total > cap) throw Error("SizeCapExceeded", "lifted monoid exceeds cap");
    }
    Monoid out = raw_monoid(fs, OrderKind::Direct);
    out.kind = OrderKind::Explicit;
    out.blocks.clear();
    out.free_truncated = true;
    out.truncation_artifacts = true;
    out.notes.push_back("free truncated lift; saturation inexact");
    out.lift_index_map.resize(out.n);
    const int n = out.n;
    std::vector<int> mu(n);
    for (int x = 0; x < n; ++x) {
        auto c = out.coords(x);
        std::vector<int> img(m.dim());
        for (int f = 0; f < m.dim(); ++f) img[f] = Monoid::reduce(m.factors[f], c[f]);
        mu[x] = m.index(img);
        out.lift_index_map[x] = mu[x];
    }
    std::vector<uint8_t> leq(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        auto ca = out.coords(a);
        for (int b = 0; b < n; ++b) {
            bool le;
            if (mu[a] != mu[b]) {
                le = m.leq(mu[a], mu[b]);
            } else {
                auto cb = out.coords(b);
                le = true;
                for (int f = 0; f < out.dim(); ++f)
                    if (ca[f] > cb[f]) { le = false; break; }
            }
            leq[static_cast<size_t>(a) * n + b] = le ? 1 : 0;
        }
    }
    out.set_leq(std::move(leq));
    out.finalize();
    return out;
}

/// All sequences over X summing to s with at most max_len parts, in
/// deterministic order: shorter first, then lexicographic by element rank.
inline std::vector<std::vector<int>> enumerate_partitions(const Monoid& m, int s,
                                                          std::vector<int> X, int max_len) {
    std::sort(X.begin(), X.end(), [&](int a, int b) { return m.rank(a) < m.rank(b); });
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int sum, int len) -> void {
        if (len > 0 && sum == s) out.push_back(cur);
        if (len == max_len) return;
        for (int x : X) {
            cur.push_back(x);
            self(self, len == 0 ? x : m.add(sum, x), len + 1);
            cur.pop_back();
        }
    };
    dfs(dfs, 0, 0);
    std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        return a.size() < b.size();
    });
    return out;
}

} // namespace filtra

#endif
