#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>

#include <CLI11.hpp>

#include "filtra/faithful.hpp"
#include "filtra/inertia.hpp"
#include "filtra/lie.hpp"
#include "filtra/specfile.hpp"

using namespace filtra;

namespace {

struct Options {
    std::string file;
    std::string report;
    std::string dot;
    long long cap = 0;
    unsigned seed = 20240817;
    int class_hint = 0;
};

std::string index_label(const Monoid& m, int s) {
    auto c = m.coords(s);
    std::string out;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (!out.empty()) out += "+";
        if (c[k] > 1) out += std::to_string(c[k]);
        out += "e" + std::to_string(k + 1);
    }
    return out.empty() ? "0" : out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

template <class B>
void print_grid(std::ostringstream& os, const ResolvedSpec<B>& rs, const Filter<B>& f) {
    for (int s = 0; s < f.m.n; ++s) {
        const auto& v = f.values[static_cast<size_t>(s)];
        os << "at " << f.m.str(s) << ": " << rs.name_of(v) << " (" << f.backend.order(v) << ")\n";
    }
}

template <class B>
void print_image(std::ostringstream& os, const ResolvedSpec<B>& rs, const Filter<B>& f) {
    std::map<std::string, std::pair<unsigned long long, int>> image; // name -> (order, count)
    for (const auto& v : f.values) {
        auto& e = image[rs.name_of(v)];
        e.first = f.backend.order(v);
        ++e.second;
    }
    for (const auto& [name, oc] : image)
        os << "image: " << name << " (" << oc.first << ") x" << oc.second << "\n";
}

/// The filter a command operates on: the [filter] block if present, else the
/// closure of the [prefilter] block, with [insert] refinements applied.
template <class B>
Filter<B> working_filter(const ResolvedSpec<B>& rs, const Options& opt) {
    Filter<B> f = rs.has_filter ? rs.filter() : close(rs.prefilter(), opt.class_hint);
    if (rs.has_insert) {
        MonoidExtension ext = extend_monoid(rs.m, rs.insert_factors);
        f = insert_subgroups<B>(f, ext, rs.insert_at, opt.class_hint);
    }
    return f;
}

template <class B>
int run_typed(const std::string& cmd, const ResolvedSpec<B>& rs, const FilterSpecDocument& doc,
              const Options& opt) {
    constexpr bool is_pc = std::is_same_v<B, PcBackend>;
    std::ostringstream os;
    int code = 0;
    os << "command: " << cmd << "\n";

    if (cmd == "validate") {
        FilterReport rep = rs.has_filter         ? validate_filter(rs.filter())
                           : rs.has_prefilter    ? validate_prefilter(rs.prefilter())
                                                 : throw Error("BadInput", "nothing to validate");
        os << (rs.has_filter ? "filter" : "prefilter") << ": "
           << (rep.valid ? "valid" : "invalid") << "\n";
        for (const std::string& w : rep.witnesses) os << "witness: " << w << "\n";
        code = rep.valid ? 0 : 1;
    } else if (cmd == "boundary") {
        Filter<B> d = boundary(working_filter(rs, opt));
        print_grid(os, rs, d);
    } else if (cmd == "close") {
        if (!rs.has_prefilter && !rs.has_insert)
            throw Error("BadInput", "close needs a [prefilter] or [insert] block");
        Filter<B> f = working_filter(rs, opt);
        os << "valid: " << yes_no(validate_filter(f).valid) << "\n";
        print_grid(os, rs, f);
    } else if (cmd == "lie") {
        GradedLieRing L = associated_lie(working_filter(rs, opt));
        for (const auto& c : L.components) {
            os << index_label(L.m, c.s) << ": [";
            for (size_t i = 0; i < c.invariants.size(); ++i)
                os << (i ? ", " : "") << c.invariants[i];
            os << "]\n";
        }
        os << "order: " << L.total_order() << "\n";
    } else if (cmd == "inert") {
        Filter<B> f = working_filter(rs, opt);
        auto rep = b_sequence(f);
        for (const auto& v : rep.inert)
            os << "inert: " << rs.name_of(v) << " (" << f.backend.order(v) << ")\n";
        for (const auto& v : rep.terminal)
            os << "terminal: " << rs.name_of(v) << " (" << f.backend.order(v) << ")\n";
        os << "inert count: " << rep.inert.size() << "\n";
        code = rep.inert.empty() ? 0 : 1;
    } else if (cmd == "refresh") {
        if constexpr (is_pc) {
            Filter<B> theta = refresh_all(working_filter(rs, opt));
            os << "factors:";
            for (const Factor& fa : theta.m.factors) os << " " << fa.r << "," << fa.s;
            os << "\n";
            print_image(os, rs, theta);
            os << "inert count: " << b_sequence(theta).inert.size() << "\n";
        } else {
            throw Error("BadInput", "refresh requires a pc group");
        }
    } else if (cmd == "faithful") {
        Filter<B> f = working_filter(rs, opt);
        FaithfulReport rep = is_faithful_filter(f);
        FullyFaithfulReport ff = is_fully_faithful(f);
        os << "faithful filter: " << yes_no(rep.faithful) << "\n";
        os << "fully faithful: " << yes_no(ff.fully_faithful) << "\n";
        code = rep.faithful ? 0 : 1;
        if constexpr (is_pc) {
            if (!doc.genset.empty()) {
                GensetVerdict fv = is_filtered(doc.genset, f);
                GensetVerdict gv = is_faithful_genset(doc.genset, f);
                os << "genset weakly filtered: " << yes_no(fv.weakly_filtered) << "\n";
                os << "genset filtered: " << yes_no(fv.filtered) << "\n";
                os << "genset faithful: " << yes_no(gv.faithful) << "\n";
                code = gv.faithful ? 0 : 1;
            }
        }
    } else if (cmd == "bijection") {
        if constexpr (is_pc) {
            Filter<B> f = working_filter(rs, opt);
            GradedLieRing L = associated_lie(f);
            BijectionCertificate cert =
                pi_map(f, L, graded_basis(L),
                       opt.cap ? static_cast<unsigned long long>(opt.cap) : 200000);
            os << "ring order: " << cert.ring_order << "\n";
            os << "group order: " << cert.group_order << "\n";
            os << "surjective: " << yes_no(cert.surjective) << "\n";
            os << "injective: " << yes_no(cert.injective) << "\n";
            bool bij = cert.surjective && cert.injective;
            os << "bijective: " << yes_no(bij) << "\n";
            os << "lifts form a pcgs: " << yes_no(cert.lifts_are_pcgs) << "\n";
            code = bij ? 0 : 1;
        } else {
            throw Error("BadInput", "bijection requires a pc group");
        }
    } else if (cmd == "hasse") {
        Filter<B> f = working_filter(rs, opt);
        auto lat = lattice_closure(f, opt.cap ? static_cast<size_t>(opt.cap) : 16);
        os << "nodes: " << lat.subs.size() << "\n";
        os << "edges: " << lat.edges.size() << "\n";
        std::string dot = hasse_dot<B>(lat, f.backend,
                                       [&](const typename B::Sub& s) { return rs.name_of(s); });
        if (!opt.dot.empty()) {
            std::ofstream out(opt.dot);
            out << dot;
        } else {
            os << dot;
        }
    } else {
        throw Error("BadInput", "unknown command '" + cmd + "'");
    }

    std::cout << os.str();
    if (!opt.report.empty()) {
        std::ofstream out(opt.report);
        out << os.str();
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"filter computations over finite groups"};
    app.require_subcommand(1);

    Options opt;
    std::string cmd;
    for (const char* name : {"validate", "boundary", "close", "lie", "inert", "refresh",
                             "faithful", "bijection", "hasse"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("file", opt.file, "input file")->required();
        sub->add_option("--report", opt.report, "write the report to this path");
        sub->add_option("--dot", opt.dot, "write the DOT graph to this path");
        sub->add_option("--cap", opt.cap, "enumeration / lattice size cap");
        sub->add_option("--seed", opt.seed, "seed for sampled basis checks");
        sub->add_option("--class-hint", opt.class_hint, "nilpotency class hint for closures");
        sub->callback([&cmd, name] { cmd = name; });
    }

    try {
        app.parse(argc, argv);
        FilterSpecDocument doc = load_spec(opt.file);
        return doc.table_kind ? run_typed(cmd, doc.tab, doc, opt)
                              : run_typed(cmd, doc.pc, doc, opt);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error " << e.code() << ": " << e.detail() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
