#ifndef FILTRA_BUILTINS_HPP
#define FILTRA_BUILTINS_HPP

#include <map>
#include <string>
#include <vector>

#include "filtra/pcgroup.hpp"

namespace filtra {

/// Built-in groups used by the bundled examples, with their named subgroups.

struct BuiltinGroup {
    PcGroup g;
    std::map<std::string, Subgroup> named;
};

namespace detail {

struct FpMatrix {
    int d = 0;
    long long p = 0;
    std::vector<long long> a; // row-major

    static FpMatrix identity(int d, long long p) {
        FpMatrix m{d, p, std::vector<long long>(static_cast<size_t>(d) * d, 0)};
        for (int i = 0; i < d; ++i) m.at(i, i) = 1;
        return m;
    }
    long long& at(int i, int j) { return a[static_cast<size_t>(i) * d + j]; }
    long long at(int i, int j) const { return a[static_cast<size_t>(i) * d + j]; }

    FpMatrix mul(const FpMatrix& o) const {
        FpMatrix r{d, p, std::vector<long long>(static_cast<size_t>(d) * d, 0)};
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                long long v = at(i, k);
                if (!v) continue;
                for (int j = 0; j < d; ++j) r.at(i, j) = (r.at(i, j) + v * o.at(k, j)) % p;
            }
        return r;
    }
    FpMatrix pow(long long e) const {
        FpMatrix r = identity(d, p), b = *this;
        while (e) {
            if (e & 1) r = r.mul(b);
            b = b.mul(b);
            e >>= 1;
        }
        return r;
    }
    /// Inverse of a unitriangular matrix via the nilpotent part.
    FpMatrix inverse() const {
        FpMatrix nneg = *this;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                long long v = (i == j ? 0 : at(i, j));
                nneg.at(i, j) = (p - v % p) % p;
            }
        for (int i = 0; i < d; ++i) nneg.at(i, i) = 0;
        FpMatrix r = identity(d, p), term = identity(d, p);
        for (int k = 1; k < d; ++k) {
            term = term.mul(nneg);
            for (size_t t = 0; t < r.a.size(); ++t) r.a[t] = (r.a[t] + term.a[t]) % p;
        }
        return r;
    }
    bool operator==(const FpMatrix& o) const { return a == o.a; }
};

inline FpMatrix elementary(int d, long long p, int i, int j) {
    FpMatrix m = FpMatrix::identity(d, p);
    m.at(i, j) = 1;
    return m;
}

/// Express a unitriangular matrix in the weight-ordered elementary basis.
inline Elt unitriangular_normal_form(const std::vector<std::pair<int, int>>& positions,
                                     FpMatrix m) {
    Elt e(positions.size(), 0);
    for (size_t t = 0; t < positions.size(); ++t) {
        auto [i, j] = positions[t];
        long long v = m.at(i, j);
        e[t] = v;
        if (v) m = elementary(m.d, m.p, i, j).pow(m.p - v).mul(m);
    }
    if (!(m == FpMatrix::identity(m.d, m.p)))
        throw Error("BadInput", "matrix does not factor over the elementary basis");
    return e;
}

inline PcGroup group_from_matrices(const std::vector<std::pair<int, int>>& positions, int d,
                                   long long p) {
    int n = static_cast<int>(positions.size());
    Collector c;
    c.n = n;
    c.m.assign(n, p);
    c.pw.assign(n, Elt(n, 0));
    c.cj.assign(n, std::vector<Elt>(n, Elt(n, 0)));
    std::vector<FpMatrix> gens;
    for (auto [i, j] : positions) gens.push_back(elementary(d, p, i, j));
    for (int a = 0; a < n; ++a) {
        c.pw[a] = unitriangular_normal_form(positions, gens[a].pow(p));
        for (int b = a + 1; b < n; ++b)
            c.cj[a][b] =
                unitriangular_normal_form(positions, gens[a].inverse().mul(gens[b]).mul(gens[a]));
    }
    return PcGroup::from_refined(std::move(c));
}

inline std::vector<std::pair<int, int>> ut_positions(int d) {
    std::vector<std::pair<int, int>> pos;
    for (int dist = 1; dist < d; ++dist)
        for (int i = 0; i + dist < d; ++i) pos.push_back({i, i + dist});
    return pos;
}

} // namespace detail

/// Unitriangular group UT(d,p), generators the elementary matrices ordered by
/// superdiagonal distance.  Named subgroups: gamma2..gammac of the lower
/// central series; for d = 5 also the pattern subgroups H, K, L.
inline BuiltinGroup ut_group(int d, long long p) {
    if (d < 2 || d > 5) throw Error("BadInput", "ut requires 2 <= d <= 5");
    auto pos = detail::ut_positions(d);
    BuiltinGroup out{detail::group_from_matrices(pos, d, p), {}};
    auto pattern = [&](const std::vector<std::pair<int, int>>& cells) {
        std::vector<Elt> gs;
        for (auto cell : cells) {
            for (size_t t = 0; t < pos.size(); ++t)
                if (pos[t] == cell) {
                    Elt e(pos.size(), 0);
                    e[t] = 1;
                    gs.push_back(e);
                }
        }
        return out.g.subgroup(gs, false);
    };
    auto lcs = out.g.lower_central_series();
    for (size_t i = 1; i < lcs.size(); ++i)
        out.named["gamma" + std::to_string(i + 1)] = lcs[i];
    out.named["G"] = out.g.full_group();
    out.named["1"] = out.g.trivial_subgroup();
    if (d == 5) {
        out.named["H"] = pattern({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 3}, {1, 4}, {2, 4}, {3, 4}});
        out.named["K"] = pattern({{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}});
        out.named["L"] = pattern({{0, 3}, {0, 4}, {1, 3}, {1, 4}});
    }
    if (d == 3) out.named["Z"] = out.named["gamma2"];
    return out;
}

inline BuiltinGroup heisenberg(long long p) { return ut_group(3, p); }

/// Order-p^5 group of the central-tail example: 5x5 matrices with blocks
/// [[1,a,0,c1],[0,I2,(b,c)^T...]]; realized as I + a(E13+E24) + bE35 + cE45 +
/// xE15 + yE25.  Generators A,B,C,X,Y; [A,B] = X, [A,C] = Y, gamma2 = <X,Y>.
inline BuiltinGroup hk_group(long long p) {
    using detail::FpMatrix;
    const int d = 5;
    std::vector<FpMatrix> gens;
    FpMatrix A = FpMatrix::identity(d, p);
    A.at(0, 2) = 1;
    A.at(1, 3) = 1;
    FpMatrix B = detail::elementary(d, p, 2, 4);
    FpMatrix C = detail::elementary(d, p, 3, 4);
    FpMatrix X = detail::elementary(d, p, 0, 4);
    FpMatrix Y = detail::elementary(d, p, 1, 4);
    gens = {A, B, C, X, Y};
    // normal form: exponents read off from designated cells in order
    std::vector<std::pair<int, int>> cells{{0, 2}, {2, 4}, {3, 4}, {0, 4}, {1, 4}};
    auto normal_form = [&](FpMatrix m) {
        Elt e(5, 0);
        for (int t = 0; t < 5; ++t) {
            long long v = m.at(cells[t].first, cells[t].second);
            e[t] = v;
            if (v) m = gens[t].pow(p - v).mul(m);
        }
        if (!(m == FpMatrix::identity(d, p)))
            throw Error("BadInput", "hk normal form failed");
        return e;
    };
    Collector c;
    c.n = 5;
    c.m.assign(5, p);
    c.pw.assign(5, Elt(5, 0));
    c.cj.assign(5, std::vector<Elt>(5, Elt(5, 0)));
    for (int a = 0; a < 5; ++a) {
        c.pw[a] = normal_form(gens[a].pow(p));
        for (int b = a + 1; b < 5; ++b)
            c.cj[a][b] = normal_form(gens[a].inverse().mul(gens[b]).mul(gens[a]));
    }
    BuiltinGroup out{PcGroup::from_refined(std::move(c)), {}};
    Elt eX(5, 0), eY(5, 0);
    eX[3] = 1;
    eY[4] = 1;
    out.named["G"] = out.g.full_group();
    out.named["1"] = out.g.trivial_subgroup();
    out.named["gamma2"] = out.g.subgroup({eX, eY}, false);
    for (long long k = 0; k < p; ++k) {
        Elt h(5, 0);
        h[3] = 1;
        h[4] = k;
        out.named["H" + std::to_string(k)] = out.g.subgroup({h}, false);
    }
    return out;
}

/// Cyclic group of order n (refined to a prime chain internally).
inline BuiltinGroup cyclic_group(long long n) {
    Collector c;
    c.n = 1;
    c.m = {n};
    c.pw = {Elt(1, 0)};
    c.cj = {{Elt(1, 0)}};
    BuiltinGroup out{PcGroup::from_presentation(c), {}};
    out.named["G"] = out.g.full_group();
    out.named["1"] = out.g.trivial_subgroup();
    return out;
}

/// The 13-generator genus-3 group: exponent p, class 2, with
/// [g10,g6]=g11, [g10,g7]=g12, and [g2,g1]=[g4,g3]=[g6,g5]=[g8,g7]=[g10,g9]=g13.
inline BuiltinGroup genus3_group(long long p) {
    const int n = 13;
    Collector c;
    c.n = n;
    c.m.assign(n, p);
    c.pw.assign(n, Elt(n, 0));
    c.cj.assign(n, std::vector<Elt>(n, Elt(n, 0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c.cj[i][j][j] = 1; // default: commute
    auto set_comm = [&](int j, int i, int rhs) {
        // [g_j, g_i] = g_rhs (1-based indices)
        Elt e(n, 0);
        e[j - 1] = 1;
        e[rhs - 1] = 1;
        c.cj[i - 1][j - 1] = e;
    };
    set_comm(10, 6, 11);
    set_comm(10, 7, 12);
    set_comm(2, 1, 13);
    set_comm(4, 3, 13);
    set_comm(6, 5, 13);
    set_comm(8, 7, 13);
    set_comm(10, 9, 13);
    BuiltinGroup out{PcGroup::from_refined(std::move(c)), {}};
    auto span = [&](std::vector<int> gens1b) {
        std::vector<Elt> gs;
        for (int g : gens1b) {
            Elt e(n, 0);
            e[g - 1] = 1;
            gs.push_back(e);
        }
        return out.g.subgroup(gs, false);
    };
    out.named["G"] = out.g.full_group();
    out.named["1"] = out.g.trivial_subgroup();
    out.named["gamma2"] = span({11, 12, 13});
    out.named["J1"] = span({1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13});
    out.named["J2"] = span({1, 2, 3, 4, 5, 8, 9, 11, 12, 13});
    out.named["J3"] = span({5, 8, 9, 11, 12, 13});
    out.named["J4"] = span({9, 11, 12, 13});
    out.named["H"] = span({13});
    out.named["E"] = span({5, 6, 7, 8, 9, 10, 11, 12, 13});
    out.named["S"] = span({1, 2, 3, 4, 11, 12, 13});
    return out;
}

inline BuiltinGroup builtin_group(const std::string& kind, long long p, int d = 0) {
    if (kind == "heisenberg") return heisenberg(p);
    if (kind == "ut") return ut_group(d, p);
    if (kind == "hk") return hk_group(p);
    if (kind == "genus3") return genus3_group(p);
    if (kind == "cyclic") return cyclic_group(p);
    throw Error("BadInput", "unknown builtin group '" + kind + "'");
}

} // namespace filtra

#endif
