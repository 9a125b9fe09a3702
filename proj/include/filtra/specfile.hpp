#ifndef FILTRA_SPECFILE_HPP
#define FILTRA_SPECFILE_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "filtra/builtins.hpp"
#include "filtra/filter.hpp"
#include "filtra/prefilter.hpp"

namespace filtra {

/// Line-oriented input format for filters.  Bracketed section headers
/// ([monoid], [group], [subgroups], [filter], [prefilter], [genset],
/// [insert]) introduce key-value lines; generator words are written
/// `g1^2*g3^-1`, subgroup values are comma-separated word lists, and filter
/// entries are `at (coords) = name`.  Diagnostics carry the source line.

namespace detail_spec {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

[[noreturn]] inline void syntax(int line, const std::string& msg) {
    throw Error("SyntaxError", "line " + std::to_string(line) + ": " + msg);
}

inline long long number(const std::string& s, int line) {
    try {
        size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) syntax(line, "malformed number '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        syntax(line, "malformed number '" + s + "'");
    }
}

struct Line {
    int no;
    std::string text;
};

/// `key = value`; returns false when no '=' is present.
inline bool key_value(const std::string& s, std::string& key, std::string& value) {
    size_t eq = s.find('=');
    if (eq == std::string::npos) return false;
    key = trim(s.substr(0, eq));
    value = trim(s.substr(eq + 1));
    return true;
}

/// A word `g1^2*g3^-1` (or `1`) as (generator, exponent) pairs, 1-based.
inline std::vector<std::pair<int, long long>> parse_word(const std::string& w, int ngens,
                                                         int line) {
    std::string s;
    for (char c : w)
        if (c != ' ' && c != '\t') s.push_back(c);
    if (s.empty()) syntax(line, "empty generator word");
    if (s == "1") return {};
    std::vector<std::pair<int, long long>> out;
    for (const std::string& term : split(s, '*')) {
        size_t caret = term.find('^');
        std::string base = caret == std::string::npos ? term : term.substr(0, caret);
        long long exp = caret == std::string::npos ? 1 : number(term.substr(caret + 1), line);
        if (base.size() < 2 || base[0] != 'g') syntax(line, "malformed term '" + term + "'");
        long long idx = number(base.substr(1), line);
        if (idx < 1 || idx > ngens)
            throw Error("UnresolvedName",
                        "line " + std::to_string(line) + ": unknown generator '" + base + "'");
        out.push_back({static_cast<int>(idx), exp});
    }
    return out;
}

/// `(1,0,2)` as coordinates.
inline std::vector<int> parse_coords(const std::string& s, int line) {
    std::string t = trim(s);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
        syntax(line, "expected coordinates '(...)', got '" + s + "'");
    std::vector<int> out;
    for (const std::string& p : split(t.substr(1, t.size() - 2), ','))
        out.push_back(static_cast<int>(number(p, line)));
    return out;
}

inline int resolve_index(const Monoid& m, const std::vector<int>& c, int line) {
    std::string shown = "(";
    for (size_t i = 0; i < c.size(); ++i) shown += (i ? "," : "") + std::to_string(c[i]);
    shown += ")";
    if (static_cast<int>(c.size()) != m.dim())
        throw Error("IndexOutOfMonoid", "line " + std::to_string(line) + ": index " + shown +
                                            " has " + std::to_string(c.size()) +
                                            " coordinates, monoid has " + std::to_string(m.dim()));
    for (int k = 0; k < m.dim(); ++k)
        if (c[static_cast<size_t>(k)] < 0 ||
            c[static_cast<size_t>(k)] >= m.factors[static_cast<size_t>(k)].size())
            throw Error("IndexOutOfMonoid",
                        "line " + std::to_string(line) + ": index " + shown + " outside the monoid");
    return m.index(c);
}

} // namespace detail_spec

/// One backend's share of a parsed document.
template <class B>
struct ResolvedSpec {
    Monoid m;
    std::optional<B> backend;
    std::vector<std::pair<std::string, typename B::Sub>> named;

    bool has_filter = false;
    typename B::Sub filter_default{};
    std::vector<std::pair<int, typename B::Sub>> filter_at;

    bool has_prefilter = false;
    std::vector<std::pair<int, typename B::Sub>> prefilter_at;

    bool has_insert = false;
    std::vector<Factor> insert_factors;
    std::vector<std::pair<std::vector<int>, typename B::Sub>> insert_at;

    Filter<B> filter() const {
        if (!has_filter) throw Error("BadInput", "document has no [filter] block");
        Filter<B> f{m, *backend, {}};
        f.values.assign(static_cast<size_t>(m.n), filter_default);
        for (const auto& [s, v] : filter_at) f.values[static_cast<size_t>(s)] = v;
        return f;
    }

    Prefilter<B> prefilter() const {
        if (!has_prefilter) throw Error("BadInput", "document has no [prefilter] block");
        Prefilter<B> p{m, *backend, {}};
        for (const auto& [s, v] : prefilter_at) {
            auto it = p.at.find(s);
            p.at[s] = it == p.at.end() ? v : backend->join(it->second, v);
        }
        return p;
    }

    std::string name_of(const typename B::Sub& v) const {
        for (const auto& [n, s] : named)
            if (backend->eq(s, v)) return n;
        return "?" + std::to_string(backend->order(v));
    }
};

struct FilterSpecDocument {
    bool table_kind = false;
    ResolvedSpec<PcBackend> pc;
    ResolvedSpec<TableBackend> tab;
    std::vector<Elt> genset; // pc backends only
};

namespace detail_spec {

struct RawSections {
    std::map<std::string, std::vector<Line>> by_name;
    std::map<std::string, int> header_line;
};

inline RawSections collect_sections(const std::string& text) {
    static const char* known[] = {"monoid", "group",  "subgroups", "filter",
                                  "prefilter", "genset", "insert"};
    RawSections raw;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') syntax(no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) syntax(no, "unknown section '" + section + "'");
            if (raw.by_name.count(section)) syntax(no, "duplicate section '" + section + "'");
            raw.by_name[section];
            raw.header_line[section] = no;
            continue;
        }
        if (section.empty()) syntax(no, "content before the first section header");
        raw.by_name[section].push_back({no, line});
    }
    return raw;
}

inline Monoid parse_monoid(const std::vector<Line>& lines, int header) {
    std::vector<Factor> factors;
    OrderKind kind = OrderKind::Direct;
    std::vector<std::vector<int>> blocks;
    bool have_factors = false;
    for (const Line& ln : lines) {
        std::string key, value;
        if (!key_value(ln.text, key, value)) syntax(ln.no, "expected 'key = value'");
        if (key == "factors") {
            for (const std::string& w : words(value)) {
                auto rs = split(w, ',');
                if (rs.size() != 2) syntax(ln.no, "factor '" + w + "' is not 'r,s'");
                factors.push_back({static_cast<int>(number(rs[0], ln.no)),
                                   static_cast<int>(number(rs[1], ln.no))});
            }
            have_factors = true;
        } else if (key == "order") {
            if (value == "direct")
                kind = OrderKind::Direct;
            else if (value == "lex")
                kind = OrderKind::Lex;
            else if (value == "blocks")
                kind = OrderKind::Blocks;
            else
                syntax(ln.no, "unknown order kind '" + value + "'");
        } else if (key == "blocks") {
            for (const std::string& blk : split(value, '|')) {
                std::vector<int> b;
                for (const std::string& w : words(blk)) b.push_back(static_cast<int>(number(w, ln.no)));
                blocks.push_back(b);
            }
        } else {
            syntax(ln.no, "unknown monoid key '" + key + "'");
        }
    }
    if (!have_factors) syntax(header, "[monoid] is missing 'factors'");
    return make_monoid(factors, kind, blocks);
}

inline PcGroup parse_pc_group(const std::vector<Line>& lines, int header) {
    std::vector<long long> orders;
    struct Rel {
        bool is_conj;
        int a, b; // conj: g_b^-1 g_a g_b with b < a; pow: g_a^{m_a}
        std::vector<std::pair<int, long long>> word;
        int line;
    };
    std::vector<Rel> rels;
    for (const Line& ln : lines) {
        std::string key, value;
        if (!key_value(ln.text, key, value)) syntax(ln.no, "expected 'key = value'");
        auto kw = words(key);
        if (kw.size() == 1 && kw[0] == "kind") continue;
        if (kw.size() == 1 && kw[0] == "orders") {
            for (const std::string& w : words(value)) orders.push_back(number(w, ln.no));
        } else if (kw.size() == 2 && kw[0] == "pow") {
            auto g = parse_word(kw[1], 1 << 20, ln.no);
            if (g.size() != 1 || g[0].second != 1) syntax(ln.no, "'pow' expects one generator");
            rels.push_back({false, g[0].first, 0, {}, ln.no});
            // the word is resolved once the generator count is known
            rels.back().word = parse_word(value, 1 << 20, ln.no);
        } else if (kw.size() == 3 && kw[0] == "conj") {
            auto ga = parse_word(kw[1], 1 << 20, ln.no);
            auto gb = parse_word(kw[2], 1 << 20, ln.no);
            if (ga.size() != 1 || gb.size() != 1 || ga[0].second != 1 || gb[0].second != 1)
                syntax(ln.no, "'conj' expects two generators");
            if (gb[0].first >= ga[0].first)
                syntax(ln.no, "'conj ga gb' needs gb earlier than ga");
            rels.push_back({true, ga[0].first, gb[0].first, parse_word(value, 1 << 20, ln.no),
                            ln.no});
        } else {
            syntax(ln.no, "unknown group key '" + key + "'");
        }
    }
    if (orders.empty()) syntax(header, "[group] is missing 'orders'");
    const int n = static_cast<int>(orders.size());
    Collector c;
    c.n = n;
    c.m = orders;
    c.pw.assign(static_cast<size_t>(n), Elt(static_cast<size_t>(n), 0));
    c.cj.assign(static_cast<size_t>(n), std::vector<Elt>(static_cast<size_t>(n),
                                                         Elt(static_cast<size_t>(n), 0)));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) c.cj[static_cast<size_t>(i)][static_cast<size_t>(j)][static_cast<size_t>(j)] = 1;
    auto normal_word = [&](const std::vector<std::pair<int, long long>>& w, int line) {
        Elt e(static_cast<size_t>(n), 0);
        for (auto [g, x] : w) {
            if (g < 1 || g > n)
                throw Error("UnresolvedName",
                            "line " + std::to_string(line) + ": unknown generator 'g" +
                                std::to_string(g) + "'");
            long long m = orders[static_cast<size_t>(g - 1)];
            e[static_cast<size_t>(g - 1)] = ((e[static_cast<size_t>(g - 1)] + x) % m + m) % m;
        }
        return e;
    };
    for (const Rel& r : rels) {
        if (r.a < 1 || r.a > n || (r.is_conj && (r.b < 1 || r.b > n)))
            throw Error("UnresolvedName",
                        "line " + std::to_string(r.line) + ": unknown generator in relation");
        if (r.is_conj)
            c.cj[static_cast<size_t>(r.b - 1)][static_cast<size_t>(r.a - 1)] =
                normal_word(r.word, r.line);
        else
            c.pw[static_cast<size_t>(r.a - 1)] = normal_word(r.word, r.line);
    }
    return PcGroup::from_presentation(c);
}

inline SubgroupTable parse_table(const std::vector<Line>& lines, int header) {
    SubgroupTable t;
    std::vector<std::pair<int, int>> declared_below;
    auto node = [&](const std::string& name, int line) {
        for (int i = 0; i < t.size(); ++i)
            if (t.names[static_cast<size_t>(i)] == name) return i;
        throw Error("UnresolvedName",
                    "line " + std::to_string(line) + ": unknown table node '" + name + "'");
    };
    auto invariants = [&](const std::string& v, int line) {
        std::vector<long long> inv;
        if (trim(v) == "-") return inv;
        for (const std::string& p : split(v, ',')) inv.push_back(number(p, line));
        return inv;
    };
    for (const Line& ln : lines) {
        std::string key, value;
        bool has_value = key_value(ln.text, key, value);
        auto kw = words(has_value ? key : ln.text);
        if (kw.empty()) syntax(ln.no, "empty line content");
        if (kw[0] == "kind") continue;
        if (kw[0] == "names") {
            if (!has_value) syntax(ln.no, "'names' needs '= ...'");
            t.names = words(value);
            t.orders.assign(t.names.size(), 0);
        } else if (kw[0] == "order" && kw.size() == 2) {
            t.orders[static_cast<size_t>(node(kw[1], ln.no))] =
                static_cast<unsigned long long>(number(value, ln.no));
        } else if (kw[0] == "below" && kw.size() == 3 && !has_value) {
            declared_below.push_back({node(kw[1], ln.no), node(kw[2], ln.no)});
        } else if ((kw[0] == "join" || kw[0] == "meet" || kw[0] == "comm") && kw.size() == 3) {
            int a = node(kw[1], ln.no), b = node(kw[2], ln.no), v = node(value, ln.no);
            auto& m = kw[0] == "join" ? t.joins : kw[0] == "meet" ? t.meets : t.comms;
            m[{std::min(a, b), std::max(a, b)}] = v;
        } else if (kw[0] == "section" && kw.size() == 3) {
            t.sections[{node(kw[1], ln.no), node(kw[2], ln.no)}] = invariants(value, ln.no);
        } else {
            syntax(ln.no, "unknown table entry '" + kw[0] + "'");
        }
    }
    if (t.names.empty()) syntax(header, "[group] table is missing 'names'");
    const int n = t.size();
    t.below.assign(static_cast<size_t>(n), std::vector<unsigned char>(static_cast<size_t>(n), 0));
    for (int a = 0; a < n; ++a) t.below[static_cast<size_t>(a)][static_cast<size_t>(a)] = 1;
    for (auto [a, b] : declared_below) t.below[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
    for (int k = 0; k < n; ++k) // transitive closure of the declared containments
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (t.leq(a, k) && t.leq(k, b)) t.below[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
    return t;
}

} // namespace detail_spec

inline FilterSpecDocument parse_spec(const std::string& text) {
    using namespace detail_spec;
    RawSections raw = collect_sections(text);
    if (!raw.by_name.count("monoid"))
        throw Error("SyntaxError", "missing [monoid] section");

    FilterSpecDocument doc;
    Monoid m = parse_monoid(raw.by_name["monoid"], raw.header_line["monoid"]);

    if (!raw.by_name.count("group"))
        throw Error("SyntaxError", "missing [group] section");

    std::string kind = "pc";
    for (const Line& ln : raw.by_name["group"]) {
        std::string key, value;
        if (key_value(ln.text, key, value) && trim(key) == "kind") {
            if (value != "pc" && value != "table") syntax(ln.no, "unknown group kind '" + value + "'");
            kind = value;
        }
    }
    doc.table_kind = kind == "table";

    if (doc.table_kind) {
        doc.tab.m = m;
        doc.tab.backend.emplace(parse_table(raw.by_name["group"], raw.header_line["group"]));
        const auto& t = *doc.tab.backend->t;
        for (int i = 0; i < t.size(); ++i)
            doc.tab.named.push_back({t.names[static_cast<size_t>(i)], i});
        if (raw.by_name.count("subgroups"))
            syntax(raw.header_line["subgroups"], "[subgroups] applies to pc groups only");
        if (raw.by_name.count("genset"))
            syntax(raw.header_line["genset"], "[genset] applies to pc groups only");
    } else {
        doc.pc.m = m;
        doc.pc.backend.emplace(parse_pc_group(raw.by_name["group"], raw.header_line["group"]));
        const PcGroup& g = *doc.pc.backend->G;
        doc.pc.named.push_back({"G", g.full_group()});
        doc.pc.named.push_back({"1", g.trivial_subgroup()});
        if (raw.by_name.count("subgroups")) {
            for (const Line& ln : raw.by_name["subgroups"]) {
                std::string key, value;
                if (!key_value(ln.text, key, value)) syntax(ln.no, "expected 'Name = words'");
                std::vector<Elt> gens;
                for (const std::string& w : split(value, ','))
                    gens.push_back(g.word(parse_word(w, g.n_orig, ln.no)));
                Subgroup s = g.subgroup(gens, false);
                bool replaced = false;
                for (auto& [n, v] : doc.pc.named)
                    if (n == key) {
                        v = s;
                        replaced = true;
                    }
                if (!replaced) doc.pc.named.push_back({key, s});
            }
        }
        if (raw.by_name.count("genset"))
            for (const Line& ln : raw.by_name["genset"])
                doc.genset.push_back(g.word(parse_word(ln.text, g.n_orig, ln.no)));
    }

    auto resolve_pc = [&](const std::string& name, int line) -> const Subgroup& {
        for (const auto& [n, v] : doc.pc.named)
            if (n == name) return v;
        throw Error("UnresolvedName",
                    "line " + std::to_string(line) + ": unknown subgroup '" + name + "'");
    };
    auto resolve_tab = [&](const std::string& name, int line) -> int {
        for (const auto& [n, v] : doc.tab.named)
            if (n == name) return v;
        throw Error("UnresolvedName",
                    "line " + std::to_string(line) + ": unknown table node '" + name + "'");
    };

    auto value_block = [&](const char* section, bool need_default, auto&& on_default,
                           auto&& on_at) {
        if (!raw.by_name.count(section)) return false;
        bool saw_default = false;
        for (const Line& ln : raw.by_name[section]) {
            std::string key, value;
            if (!key_value(ln.text, key, value)) syntax(ln.no, "expected 'key = value'");
            auto kw = words(key);
            if (kw.size() == 1 && kw[0] == "default") {
                on_default(value, ln.no);
                saw_default = true;
            } else if (kw.size() == 2 && kw[0] == "at") {
                on_at(parse_coords(kw[1], ln.no), value, ln.no);
            } else {
                syntax(ln.no, "unknown entry '" + key + "'");
            }
        }
        if (need_default && !saw_default)
            syntax(raw.header_line[section], std::string("[") + section + "] is missing 'default'");
        return true;
    };

    if (doc.table_kind) {
        doc.tab.has_filter = value_block(
            "filter", true,
            [&](const std::string& v, int no) { doc.tab.filter_default = resolve_tab(v, no); },
            [&](const std::vector<int>& c, const std::string& v, int no) {
                doc.tab.filter_at.push_back({resolve_index(m, c, no), resolve_tab(v, no)});
            });
        doc.tab.has_prefilter = value_block(
            "prefilter", false, [&](const std::string&, int no) { syntax(no, "prefilters have no default"); },
            [&](const std::vector<int>& c, const std::string& v, int no) {
                doc.tab.prefilter_at.push_back({resolve_index(m, c, no), resolve_tab(v, no)});
            });
    } else {
        doc.pc.has_filter = value_block(
            "filter", true,
            [&](const std::string& v, int no) { doc.pc.filter_default = resolve_pc(v, no); },
            [&](const std::vector<int>& c, const std::string& v, int no) {
                doc.pc.filter_at.push_back({resolve_index(m, c, no), resolve_pc(v, no)});
            });
        doc.pc.has_prefilter = value_block(
            "prefilter", false, [&](const std::string&, int no) { syntax(no, "prefilters have no default"); },
            [&](const std::vector<int>& c, const std::string& v, int no) {
                doc.pc.prefilter_at.push_back({resolve_index(m, c, no), resolve_pc(v, no)});
            });
    }

    if (raw.by_name.count("insert")) {
        std::vector<Factor> extra;
        struct AtEntry {
            std::vector<int> coords;
            std::string name;
            int line;
        };
        std::vector<AtEntry> at;
        for (const Line& ln : raw.by_name["insert"]) {
            std::string key, value;
            if (!key_value(ln.text, key, value)) syntax(ln.no, "expected 'key = value'");
            auto kw = words(key);
            if (kw.size() == 1 && kw[0] == "extend") {
                for (const std::string& w : words(value)) {
                    auto rs = split(w, ',');
                    if (rs.size() != 2) syntax(ln.no, "factor '" + w + "' is not 'r,s'");
                    extra.push_back({static_cast<int>(number(rs[0], ln.no)),
                                     static_cast<int>(number(rs[1], ln.no))});
                }
            } else if (kw.size() == 2 && kw[0] == "at") {
                at.push_back({parse_coords(kw[1], ln.no), value, ln.no});
            } else {
                syntax(ln.no, "unknown insert entry '" + key + "'");
            }
        }
        if (extra.empty())
            syntax(raw.header_line["insert"], "[insert] is missing 'extend'");
        MonoidExtension ext = extend_monoid(m, extra);
        for (const AtEntry& e : at)
            detail_spec::resolve_index(ext.extended, e.coords, e.line);
        if (doc.table_kind) {
            doc.tab.has_insert = true;
            doc.tab.insert_factors = extra;
            for (const AtEntry& e : at)
                doc.tab.insert_at.push_back({e.coords, resolve_tab(e.name, e.line)});
        } else {
            doc.pc.has_insert = true;
            doc.pc.insert_factors = extra;
            for (const AtEntry& e : at)
                doc.pc.insert_at.push_back({e.coords, resolve_pc(e.name, e.line)});
        }
    }

    return doc;
}

inline FilterSpecDocument load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("BadInput", "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_spec(os.str());
}

} // namespace filtra

#endif
