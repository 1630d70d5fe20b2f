#pragma once

/*
 * Presentation files.  Three declaration forms, one per line:
 *
 *     gen <name> : <degree> [stage <k>] [block base|fiber]
 *     d <name> = <expr>
 *     rel <expr>
 *
 * Expressions are sums of terms, a term an optional rational coefficient
 * p/q joined by '*' to powers name^k of declared generators.  '#' starts a
 * comment.  Generators may be declared in any position relative to the
 * lines using them; a file whose generators carry block tags parses to an
 * extension, anything else to a single algebra.  Odd generators reject an
 * exponent above one at parse time: the writer meant something else, since
 * the square is identically zero.
 *
 * The printer emits the canonical form: declarations first, nonzero
 * differentials next, relations last, coefficients reduced.  Parsing what
 * it prints reproduces the presentation exactly.
 */

#include "gorlab/sullivan.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gorlab {

struct ParsedInput {
    Cdga algebra;  // for extension files, the total
    std::optional<LambdaExtension> extension;
};

namespace parse_detail {

[[noreturn]] inline void fail(int line, const std::string& msg) {
    throw ParseError("line " + std::to_string(line) + ": " + msg);
}

inline void skip_space(const std::string& s, size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline bool read_int(const std::string& s, size_t& i, long long& out) {
    skip_space(s, i);
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) return false;
    out = std::stoll(s.substr(i, j - i));
    i = j;
    return true;
}

inline bool read_name(const std::string& s, size_t& i, std::string& out) {
    skip_space(s, i);
    if (i >= s.size() || !std::isalpha(static_cast<unsigned char>(s[i]))) return false;
    size_t j = i;
    while (j < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
    out = s.substr(i, j - i);
    i = j;
    return true;
}

// expr := ['-'] term (('+'|'-') term)*, term := factor ('*' factor)*,
// factor := rational | name['^' k]; consumes the whole string
inline Element parse_expr(const Cdga& A, const std::string& s, int line) {
    size_t i = 0;
    Element total = A.zero();
    skip_space(s, i);
    if (i == s.size()) fail(line, "empty expression");
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    for (;;) {
        Rational coeff = neg ? Rational(-1) : Rational(1);
        Element mono = A.one();
        for (;;) {
            long long num = 0;
            std::string nm;
            if (read_int(s, i, num)) {
                long long den = 1;
                skip_space(s, i);
                if (i < s.size() && s[i] == '/') {
                    ++i;
                    if (!read_int(s, i, den) || den == 0) fail(line, "malformed rational");
                }
                coeff = coeff * Rational(num, den);
            } else if (read_name(s, i, nm)) {
                int g = A.find(nm);
                if (g < 0) fail(line, "unknown generator '" + nm + "'");
                long long e = 1;
                skip_space(s, i);
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    if (!read_int(s, i, e) || e < 1) fail(line, "malformed exponent");
                }
                if (A.generator(g).degree % 2 == 1 && e > 1)
                    fail(line, "odd generator '" + nm + "' cannot carry exponent " +
                                   std::to_string(e));
                mono = mono * A.gen(g).pow(static_cast<int>(e));
            } else {
                fail(line, "expected a coefficient or a generator");
            }
            skip_space(s, i);
            if (i < s.size() && s[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        total = total + A.scalar(coeff) * mono;
        skip_space(s, i);
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = (s[i++] == '-');
            continue;
        }
        break;
    }
    if (i != s.size()) fail(line, "trailing input after expression");
    return total;
}

struct GenDecl {
    int line;
    std::string name;
    int degree;
    int stage = -1;
    Generator::Block block = Generator::Block::none;
};

// Element::str for a raw term map; from_terms would reduce against the
// relation ideal, and a stored relation reduces to zero in its own algebra
inline std::string terms_str(const Cdga& A, const TermMap& t) {
    if (t.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : t) {
        Rational a = c;
        if (s.empty()) {
            if (a < 0) {
                s += "-";
                a = -a;
            }
        } else {
            s += (a < 0) ? " - " : " + ";
            if (a < 0) a = -a;
        }
        std::string mono = A.monomial_str(m);
        if (a != 1 || mono == "1") {
            s += rational_to_string(a);
            if (mono != "1") s += "*";
        }
        if (mono != "1") s += mono;
    }
    return s;
}

}  // namespace parse_detail

inline ParsedInput parse_algebra(const std::string& text, int window = 12, int cap = 6) {
    using parse_detail::fail;
    using parse_detail::read_int;
    using parse_detail::read_name;
    using parse_detail::skip_space;

    std::vector<parse_detail::GenDecl> gens;
    std::vector<std::pair<int, std::pair<std::string, std::string>>> diffs;
    std::vector<std::pair<int, std::string>> rels;

    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (size_t h = line.find('#'); h != std::string::npos) line.resize(h);

        size_t i = 0;
        std::string head;
        if (!read_name(line, i, head)) {
            skip_space(line, i);
            if (i == line.size()) continue;  // blank
            fail(line_no, "expected a declaration");
        }
        if (head == "gen") {
            parse_detail::GenDecl g;
            g.line = line_no;
            if (!read_name(line, i, g.name)) fail(line_no, "expected a generator name");
            skip_space(line, i);
            if (i >= line.size() || line[i] != ':') fail(line_no, "expected ':'");
            ++i;
            long long deg = 0;
            if (!read_int(line, i, deg)) fail(line_no, "expected a degree");
            g.degree = static_cast<int>(deg);
            std::string word;
            if (read_name(line, i, word) && word == "stage") {
                long long k = 0;
                if (!read_int(line, i, k)) fail(line_no, "expected a stage number");
                g.stage = static_cast<int>(k);
                word.clear();
                read_name(line, i, word);
            }
            if (word == "block") {
                std::string which;
                if (!read_name(line, i, which)) fail(line_no, "expected 'base' or 'fiber'");
                if (which == "base")
                    g.block = Generator::Block::base;
                else if (which == "fiber")
                    g.block = Generator::Block::fiber;
                else
                    fail(line_no, "expected 'base' or 'fiber', got '" + which + "'");
                word.clear();
                read_name(line, i, word);
            }
            if (!word.empty()) fail(line_no, "unexpected '" + word + "'");
            skip_space(line, i);
            if (i != line.size()) fail(line_no, "trailing input after declaration");
            gens.push_back(std::move(g));
        } else if (head == "d") {
            std::string name;
            if (!read_name(line, i, name)) fail(line_no, "expected a generator name");
            skip_space(line, i);
            if (i >= line.size() || line[i] != '=') fail(line_no, "expected '='");
            ++i;
            diffs.push_back({line_no, {name, line.substr(i)}});
        } else if (head == "rel") {
            rels.push_back({line_no, line.substr(i)});
        } else {
            fail(line_no, "unknown declaration '" + head + "'");
        }
    }

    bool tagged = false;
    for (const auto& g : gens)
        if (g.block != Generator::Block::none) tagged = true;
    if (tagged) {
        bool seen_fiber = false;
        for (const auto& g : gens) {
            if (g.block == Generator::Block::none)
                fail(g.line, "generator '" + g.name + "' needs a block tag here");
            if (g.block == Generator::Block::fiber) seen_fiber = true;
            if (g.block == Generator::Block::base && seen_fiber)
                fail(g.line, "base generators must precede fiber generators");
        }
    }

    CdgaBuilder builder(window, cap);
    for (const auto& g : gens) {
        try {
            builder.add_generator(g.name, g.degree, g.stage, g.block);
        } catch (const InputError& e) {
            fail(g.line, e.what());
        }
    }
    Cdga partial = builder.partial();
    std::vector<bool> d_set(gens.size(), false);
    for (const auto& [ln, nv] : diffs) {
        int g = partial.find(nv.first);
        if (g < 0) fail(ln, "unknown generator '" + nv.first + "'");
        if (d_set[g]) fail(ln, "differential of '" + nv.first + "' assigned twice");
        d_set[g] = true;
        Element v = parse_detail::parse_expr(partial, nv.second, ln);
        try {
            builder.set_differential(nv.first, v);
        } catch (const InputError& e) {
            fail(ln, e.what());
        }
    }
    for (const auto& [ln, expr] : rels) {
        Element v = parse_detail::parse_expr(partial, expr, ln);
        try {
            builder.add_relation(v);
        } catch (const InputError& e) {
            fail(ln, e.what());
        }
    }
    ParsedInput out{builder.finish(), std::nullopt};

    if (tagged) {
        CdgaBuilder bb(window, cap);
        for (const auto& g : gens)
            if (g.block == Generator::Block::base) bb.add_generator(g.name, g.degree, g.stage);
        Cdga bp = bb.partial();
        for (const auto& [ln, nv] : diffs) {
            if (bp.find(nv.first) < 0) continue;
            try {
                bb.set_differential(nv.first, parse_detail::parse_expr(bp, nv.second, ln));
            } catch (const ParseError&) {
                fail(ln, "the differential of base generator '" + nv.first +
                             "' leaves the base block");
            }
        }
        out.extension = make_extension(bb.finish(), out.algebra);
    }
    return out;
}

// canonical form; parsing it reproduces the presentation byte for byte
inline std::string print_presentation(const Cdga& A) {
    std::string out;
    for (int i = 0; i < A.size(); ++i) {
        const Generator& g = A.generator(i);
        out += "gen " + g.name + " : " + std::to_string(g.degree);
        if (g.stage >= 0) out += " stage " + std::to_string(g.stage);
        if (g.block == Generator::Block::base) out += " block base";
        if (g.block == Generator::Block::fiber) out += " block fiber";
        out += "\n";
    }
    for (int i = 0; i < A.size(); ++i)
        if (!A.d_of_gen(i).empty())
            out += "d " + A.generator(i).name + " = " +
                   parse_detail::terms_str(A, A.d_of_gen(i)) + "\n";
    for (const auto& rel : A.relations())
        if (!rel.empty()) out += "rel " + parse_detail::terms_str(A, rel) + "\n";
    return out;
}

// block tags come from the base length, so extensions assembled in code
// print the same way as parsed ones
inline std::string print_presentation(const LambdaExtension& E) {
    std::string out;
    for (int i = 0; i < E.total.size(); ++i) {
        const Generator& g = E.total.generator(i);
        out += "gen " + g.name + " : " + std::to_string(g.degree);
        if (g.stage >= 0) out += " stage " + std::to_string(g.stage);
        out += (i < E.n_base) ? " block base" : " block fiber";
        out += "\n";
    }
    for (int i = 0; i < E.total.size(); ++i)
        if (!E.total.d_of_gen(i).empty())
            out += "d " + E.total.generator(i).name + " = " +
                   parse_detail::terms_str(E.total, E.total.d_of_gen(i)) + "\n";
    for (const auto& rel : E.total.relations())
        if (!rel.empty()) out += "rel " + parse_detail::terms_str(E.total, rel) + "\n";
    return out;
}

}  // namespace gorlab
