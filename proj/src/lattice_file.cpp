#include "latq/lattice_file.hpp"

#include <cctype>
#include <sstream>

namespace latq {

namespace {

// Recursive-descent parser for scalar expressions over rationals, sqrt(d),
// and bound parameters. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | '(' expr ')' | rational | sqrt '(' int ')' | name
struct ExprParser {
    std::string_view s;
    size_t i = 0;
    int line;
    int col_base;
    const std::map<std::string, Quad>& params;

    ParseError err(const std::string& msg) const {
        return ParseError(msg, line, col_base + static_cast<int>(i));
    }
    void skip() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) i++;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }

    Quad parse_expr() {
        Quad acc = parse_term();
        while (true) {
            char c = peek();
            if (c == '+') {
                i++;
                acc += parse_term();
            } else if (c == '-') {
                i++;
                acc -= parse_term();
            } else {
                return acc;
            }
        }
    }
    Quad parse_term() {
        Quad acc = parse_factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                i++;
                acc *= parse_factor();
            } else if (c == '/') {
                i++;
                Quad f = parse_factor();
                if (f.is_zero()) throw err("division by zero in scalar expression");
                acc /= f;
            } else {
                return acc;
            }
        }
    }
    Quad parse_factor() {
        char c = peek();
        if (c == '-') {
            i++;
            return -parse_factor();
        }
        if (c == '(') {
            i++;
            Quad v = parse_expr();
            if (peek() != ')') throw err("expected ')'");
            i++;
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) j++;
            Int num(std::string(s.substr(i, j - i)));
            i = j;
            if (peek() == '/') {
                // Pure rational literal p/q (binds tighter than operators).
                size_t save = i;
                i++;
                skip();
                size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) k++;
                if (k == i) {
                    i = save;  // not a literal; let '/' be handled as division
                    return Quad(Rat(num));
                }
                Int den(std::string(s.substr(i, k - i)));
                i = k;
                if (den == 0) throw err("rational literal with zero denominator");
                return Quad(ratq(num, den));
            }
            return Quad(Rat(num));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) j++;
            std::string name(s.substr(i, j - i));
            i = j;
            if (name == "sqrt") {
                if (peek() != '(') throw err("expected '(' after sqrt");
                i++;
                skip();
                size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) k++;
                if (k == i) throw err("sqrt argument must be a positive integer");
                int d = std::stoi(std::string(s.substr(i, k - i)));
                i = k;
                if (peek() != ')') throw err("expected ')' after sqrt argument");
                i++;
                return Quad::sqrt_of(d);
            }
            auto it = params.find(name);
            if (it == params.end()) throw err("unbound parameter '" + name + "'");
            return it->second;
        }
        throw err("unexpected character in scalar expression");
    }
};

Quad parse_scalar(std::string_view text, int line, int col_base,
                  const std::map<std::string, Quad>& params) {
    ExprParser p{text, 0, line, col_base, params};
    Quad v = p.parse_expr();
    if (!p.eof()) throw p.err("trailing characters in scalar expression");
    return v;
}

// Splits a row into whitespace-separated scalar expressions; parentheses keep
// an expression together, so entries themselves contain no spaces outside ().
std::vector<std::pair<std::string, int>> split_entries(const std::string& row) {
    std::vector<std::pair<std::string, int>> out;
    size_t i = 0;
    while (i < row.size()) {
        while (i < row.size() && std::isspace(static_cast<unsigned char>(row[i]))) i++;
        if (i >= row.size()) break;
        size_t j = i;
        int depth = 0;
        while (j < row.size() && (depth > 0 || !std::isspace(static_cast<unsigned char>(row[j])))) {
            if (row[j] == '(') depth++;
            if (row[j] == ')') depth--;
            j++;
        }
        out.emplace_back(row.substr(i, j - i), static_cast<int>(i) + 1);
        i = j;
    }
    return out;
}

}  // namespace

ParsedLattice parse_lattice_file(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::map<std::string, Quad> params;
    LatticeMeta meta;
    std::vector<std::vector<Quad>> rows;
    std::vector<std::vector<Quad>> glue_gens;
    enum { kHeader, kRows, kGlue } state = kHeader;

    while (std::getline(in, raw)) {
        lineno++;
        std::string lStr = raw;
        auto hash = lStr.find('#');
        if (hash != std::string::npos) lStr = lStr.substr(0, hash);
        size_t b = lStr.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = lStr.find_last_not_of(" \t\r");
        std::string stripped = lStr.substr(b, e - b + 1);

        if (state == kHeader) {
            std::istringstream ls(stripped);
            std::string kw;
            ls >> kw;
            if (kw == "lattice") {
                ls >> meta.family;
            } else if (kw == "field") {
                std::string f;
                ls >> f;
                if (f.rfind("sqrt(", 0) != 0 || f.back() != ')')
                    throw ParseError("field must be sqrt(d)", lineno, 1);
                // The declared field is validated implicitly when entries mix.
            } else if (kw == "param") {
                std::string name, eq, val;
                ls >> name >> eq;
                std::getline(ls, val);
                if (eq != "=") throw ParseError("expected 'param <name> = <value>'", lineno, 1);
                params[name] = parse_scalar(val, lineno, 1, params);
            } else if (kw == "rows:") {
                state = kRows;
            } else {
                throw ParseError("unknown header directive '" + kw + "'", lineno, 1);
            }
            continue;
        }
        if (stripped == "glue:") {
            state = kGlue;
            continue;
        }
        if (state == kRows) {
            std::vector<Quad> row;
            for (const auto& [entry, col] : split_entries(stripped))
                row.push_back(parse_scalar(entry, lineno, col, params));
            rows.push_back(std::move(row));
            continue;
        }
        // Glue block.
        std::istringstream ls(stripped);
        std::string kw;
        ls >> kw;
        if (kw == "gen") {
            std::string rest;
            std::getline(ls, rest);
            std::vector<Quad> g;
            for (const auto& [entry, col] : split_entries(rest))
                g.push_back(parse_scalar(entry, lineno, col, params));
            glue_gens.push_back(std::move(g));
        } else if (kw == "component") {
            // Annotation only; ranges are implied by the row layout.
        } else {
            throw ParseError("unknown glue directive '" + kw + "'", lineno, 1);
        }
    }

    if (rows.empty()) throw ParseError("no 'rows:' block", lineno, 1);
    const size_t n = rows.size();
    for (size_t i = 0; i < n; i++)
        if (rows[i].size() != n)
            throw ParseError("generator matrix must be square: row " + std::to_string(i + 1) +
                                 " has " + std::to_string(rows[i].size()) + " of " +
                                 std::to_string(n) + " entries",
                             lineno, 1);
    for (auto& [k, v] : params) meta.params[k] = v;
    Lattice lat = Lattice::from_exact(QMat::from_rows(rows), meta);
    if (glue_gens.empty()) return lat;
    GlueSpec spec;
    spec.product = std::move(lat);
    for (auto& g : glue_gens) {
        if (g.size() != n) throw ParseError("glue vector arity mismatch", lineno, 1);
        spec.generators.push_back(std::move(g));
    }
    return spec;
}

namespace {
void print_matrix_body(std::ostringstream& out, const Lattice& l) {
    const QMat& b = l.exact_basis();
    int d = b.field();
    if (d != 1) out << "field sqrt(" << d << ")\n";
    out << "rows:\n";
    for (int i = 0; i < b.rows(); i++) {
        for (int j = 0; j < b.cols(); j++) {
            if (j) out << ' ';
            std::string s = b.at(i, j).str();
            bool spaced = s.find(' ') != std::string::npos;
            out << (spaced ? "(" + s + ")" : s);
        }
        out << '\n';
    }
}
}  // namespace

std::string print_lattice_file(const Lattice& lattice) {
    std::ostringstream out;
    if (!lattice.meta().family.empty()) out << "lattice " << lattice.meta().family << "\n";
    print_matrix_body(out, lattice);
    return out.str();
}

std::string print_lattice_file(const GlueSpec& spec) {
    std::ostringstream out;
    if (!spec.product.meta().family.empty())
        out << "lattice " << spec.product.meta().family << "\n";
    print_matrix_body(out, spec.product);
    out << "glue:\n";
    for (const auto& g : spec.generators) {
        out << "gen";
        for (const auto& x : g) {
            std::string s = x.str();
            bool spaced = s.find(' ') != std::string::npos;
            out << ' ' << (spaced ? "(" + s + ")" : s);
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace latq
