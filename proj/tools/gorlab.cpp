// Command-line front end: parse a presentation file, run one computation,
// print a readable summary or a machine-readable report.
//
// Exit codes: 0 computed, 1 the input is at fault, 2 an internal cross-check
// failed (two routes to the same number disagreed, which is a bug, not an
// input problem).

#include "gorlab/parser.hpp"
#include "gorlab/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace gorlab;

namespace {

struct Options {
    std::string path;
    int window = 12;
    int cap = 6;
    bool json = false;
    bool bases = false;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// readable one-liner: certified entries as degree:dim, uncertified as
// degree:?, then the window the numbers are valid in
std::string dims_line(const GradedDims& v) {
    std::string s;
    for (const auto& [n, d] : v.dims)
        if (d != 0 && !v.uncertified.count(n))
            s += std::to_string(n) + ":" + std::to_string(d) + " ";
    for (int u : v.uncertified) s += std::to_string(u) + ":? ";
    if (s.empty()) s = "0 ";
    s += "(window [" + std::to_string(v.lo) + ", " + std::to_string(v.hi) + "])";
    return s;
}

std::string verdict_str(const std::optional<bool>& v) {
    if (!v) return "undecided";
    return *v ? "true" : "false";
}

struct Outcome {
    report::Json result;
    std::vector<std::string> warnings;
    std::vector<std::string> lines;  // human-readable body
};

Outcome run_command(const std::string& cmd, const Options& opt,
                    const std::optional<ParsedInput>& in) {
    Outcome out;
    const Cdga* A = in ? &in->algebra : nullptr;

    if (cmd == "cohomology") {
        CohomologyResult H = cohomology(*A, 0, opt.window);
        out.result = report::cohomology_json(H, opt.bases);
        out.lines.push_back("H: " + dims_line(H.dims));
        if (opt.bases)
            for (const auto& [n, elems] : H.reps) {
                if (elems.empty() || H.dims.uncertified.count(n)) continue;
                std::string line = "  degree " + std::to_string(n) + ":";
                for (const Element& e : elems) line += " [" + e.str() + "]";
                out.lines.push_back(line);
            }
    } else if (cmd == "check") {
        std::string canonical = in->extension ? print_presentation(*in->extension)
                                              : print_presentation(*A);
        out.result["valid"] = true;
        out.result["generators"] = A->size();
        out.result["relations"] = static_cast<int>(A->relations().size());
        out.result["extension"] = in->extension.has_value();
        out.result["presentation"] = canonical;
        out.lines.push_back("valid: " + std::to_string(A->size()) + " generators, " +
                            std::to_string(A->relations().size()) + " relations" +
                            (in->extension ? ", extension" : ""));
        out.lines.push_back(canonical);
    } else if (cmd == "pd-check") {
        PDReport pd = pd_check(cohomology_ring(*A));
        out.result = report::pd_json(pd);
        out.lines.push_back(std::string("duality: ") + (pd.verdict ? "true" : "false"));
        out.lines.push_back("formal dimension: " + std::to_string(pd.formal_dim));
        if (!pd.fundamental_class.empty())
            out.lines.push_back("fundamental class: [" + pd.fundamental_class + "]");
    } else if (cmd == "minimal-model") {
        MinimalModel mm = minimal_model(*A);
        out.result = report::model_json(mm);
        out.result["presentation"] = print_presentation(mm.model);
        if (opt.bases) {
            std::vector<std::string> images;
            for (const Element& e : mm.images) images.push_back(e.str());
            out.result["images"] = images;
        }
        out.lines.push_back(std::to_string(mm.model.size()) + " generators");
        out.lines.push_back(print_presentation(mm.model));
    } else if (cmd == "acyclic-closure") {
        AcyclicClosure cl = acyclic_closure(*A, opt.cap);
        out.result = report::closure_json(cl);
        out.lines.push_back(std::to_string(cl.ext.fiber_count()) +
                            " closure generators, contractible through degree " +
                            std::to_string(cl.verified_through));
        for (int i = cl.ext.n_base; i < cl.ext.total.size(); ++i) {
            const Cdga& T = cl.ext.total;
            out.lines.push_back("  " + T.generator(i).name + " : " +
                                std::to_string(T.generator(i).degree) + ", d = " +
                                T.from_terms(T.d_of_gen(i)).str());
        }
    } else if (cmd == "tor") {
        for (int i = 0; i < A->size(); ++i)
            if (A->generator(i).degree < 2)
                throw InputError("tor of the ground field over an algebra with a "
                                 "degree-1 generator is not degreewise finite");
        Resolution F = resolve_module(modules::ground_module(*A), opt.window - 2);
        verify_resolution(F);
        GradedDims dims = F.generator_dims();
        out.result["dims"] = report::dims_json(dims);
        out.lines.push_back("tor: " + dims_line(dims));
    } else if (cmd == "tcal") {
        TorRoutes tr = t_routes(*A, opt.window);
        out.result = report::tor_routes_json(tr);
        out.lines.push_back("t: " + dims_line(tr.agreed));
        std::string routes;
        if (tr.closure) routes += "closure ";
        if (tr.resolution) routes += "resolution ";
        out.lines.push_back("routes: " + routes);
    } else if (cmd == "gcal") {
        ExtRoutes gr = g_routes(*A, opt.window);
        out.result = report::ext_routes_json(gr);
        out.lines.push_back("g: " + dims_line(gr.agreed));
        if (gr.reflected) {
            out.warnings.push_back("g dims are the reflected t dims (finite-type "
                                   "duality); no independent route exists here");
            out.lines.push_back("routes: reflected");
        }
    } else if (cmd == "gorenstein") {
        GorensteinReport rep = gorenstein_report(*A, opt.window);
        out.result = report::gorenstein_json(rep);
        out.warnings = rep.warnings;
        out.lines.push_back("gorenstein: " + verdict_str(rep.gorenstein));
        if (rep.degree) out.lines.push_back("degree: " + std::to_string(*rep.degree));
        out.lines.push_back("t: " + dims_line(rep.t));
        out.lines.push_back("g: " + dims_line(rep.g));
    } else if (cmd == "theorem2") {
        EquivalenceReport rep = equivalence_report(*A, opt.window);
        out.result = report::equivalence_json(rep);
        out.warnings = rep.warnings;
        out.lines.push_back(std::string("gorenstein: ") +
                            (rep.gorenstein ? "true" : "false"));
        out.lines.push_back("t of the algebra:  " + dims_line(rep.t_algebra));
        out.lines.push_back("t of its homology: " + dims_line(rep.t_homology));
        out.lines.push_back(std::string("duality of homology: ") +
                            (rep.pd.verdict ? "true" : "false"));
        out.lines.push_back("the three characterizations agree");
    } else if (cmd == "theorem4") {
        if (!in->extension)
            throw InputError("theorem4 needs an extension file with base and "
                             "fiber block tags");
        ProductReport rep = product_report(*in->extension, opt.window);
        out.result = report::product_json(rep);
        out.warnings = rep.warnings;
        out.lines.push_back(std::string("convolution identity: ") +
                            (rep.convolution ? "verified" : "not checked"));
        out.lines.push_back("t base:  " + dims_line(rep.t_base));
        out.lines.push_back("t fiber: " + dims_line(rep.t_fiber));
        out.lines.push_back("t total: " + dims_line(rep.t_total));
        out.lines.push_back("gorenstein: base " + verdict_str(rep.base_gorenstein) +
                            ", fiber " + verdict_str(rep.fiber_gorenstein) +
                            ", total " + verdict_str(rep.total_gorenstein));
    } else if (cmd == "example-fiber") {
        FiberHomologyReport rep = example_fiber_homology(opt.cap, opt.window);
        out.result = report::fiber_json(rep);
        out.warnings = rep.warnings;
        out.lines.push_back("fiber homology at word cap " + std::to_string(rep.word_cap) +
                            ": " + dims_line(rep.dims));
        for (const auto& [n, classes] : rep.classes) {
            std::string line = "  degree " + std::to_string(n) + ":";
            for (const std::string& c : classes) line += " [" + c + "]";
            out.lines.push_back(line);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact homotopy invariants of graded algebra presentations"};
    app.require_subcommand(1);

    Options opt;
    struct Entry {
        const char* name;
        const char* help;
        bool takes_file;
    };
    const std::vector<Entry> commands = {
        {"cohomology", "dimensions (and bases) of H of the algebra", true},
        {"check", "validate a presentation and print its canonical form", true},
        {"pd-check", "test H for Poincare duality", true},
        {"minimal-model", "minimal Sullivan model of the algebra", true},
        {"acyclic-closure", "acyclic closure of a free algebra", true},
        {"tor", "torsion dimensions of the ground field", true},
        {"tcal", "t invariant (torsion of the dual), both routes", true},
        {"gcal", "g invariant (ext into the algebra)", true},
        {"gorenstein", "one-dimensionality verdict with t and g", true},
        {"theorem2", "equivalence: t of the algebra, t of H, duality of H", true},
        {"theorem4", "product rule for t over an extension", true},
        {"example-fiber", "homology of the built-in fiber model per word cap", false},
    };
    for (const Entry& e : commands) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        if (e.takes_file)
            sub->add_option("input", opt.path, "presentation file")->required();
        sub->add_option("--max-degree", opt.window, "certified degree window")
            ->envname("GORLAB_MAX_DEGREE")
            ->capture_default_str();
        sub->add_option("--word-cap", opt.cap, "closure word-length cap")
            ->capture_default_str();
        sub->add_flag("--json", opt.json, "machine-readable report");
        sub->add_flag("--show-bases", opt.bases, "include basis representatives");
    }
    CLI11_PARSE(app, argc, argv);
    std::string cmd = app.get_subcommands().front()->get_name();

    report::Meta meta{cmd, opt.path.empty() ? "builtin" : opt.path,
                      report::fnv1a64(""), opt.window, opt.cap};
    try {
        std::optional<ParsedInput> in;
        if (!opt.path.empty()) {
            std::string text = slurp(opt.path);
            meta.input_hash = report::fnv1a64(text);
            in = parse_algebra(text, opt.window, opt.cap);
        }
        Outcome out = run_command(cmd, opt, in);
        if (in && in->extension && cmd != "theorem4" && cmd != "check")
            out.warnings.push_back("input is an extension; computed on the total");
        if (opt.json) {
            std::cout << report::envelope(meta, out.result, out.warnings).dump(2) << "\n";
        } else {
            for (const std::string& line : out.lines) std::cout << line << "\n";
            for (const std::string& w : out.warnings) std::cout << "warning: " << w << "\n";
        }
        return 0;
    } catch (const AssertionError& e) {
        if (opt.json)
            std::cout << report::error_json(meta, "assertion", e.what()).dump(2) << "\n";
        else
            std::cerr << "assertion failure: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        if (opt.json)
            std::cout << report::error_json(meta, "input", e.what()).dump(2) << "\n";
        else
            std::cerr << "input error: " << e.what() << "\n";
        return 1;
    }
}
