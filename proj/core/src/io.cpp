#include "treestab/io.hpp"

#include <fstream>
#include <sstream>

#include "treestab/errors.hpp"

namespace treestab {

namespace {

// Next non-comment, non-blank line; false at EOF.
bool next_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') continue;
        return true;
    }
    return false;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

}  // namespace

Graph parse_graph(std::istream& in, const std::string& origin) {
    std::string line;
    if (!next_line(in, line)) throw ParseError(origin + ": missing header");
    std::istringstream header(line);
    int n = 0;
    long long m = 0;
    if (!(header >> n >> m) || n < 0 || m < 0) throw ParseError(origin + ": bad header");
    EdgeSet edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line(in, line)) throw ParseError(origin + ": expected " + std::to_string(m) + " edges");
        std::istringstream row(line);
        int u = 0, v = 0;
        if (!(row >> u >> v)) throw ParseError(origin + ": bad edge line '" + line + "'");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(origin + ": edge endpoint out of range in '" + line + "'");
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (next_line(in, line))
        throw ParseError(origin + ": trailing content '" + line + "' after " +
                         std::to_string(m) + " declared edges");
    try {
        return Graph::make(n, std::move(edges));
    } catch (const ValidationError& e) {
        // Structural problems (loops, duplicates) keep their taxonomy; only
        // annotate with the origin.
        throw ValidationError(origin + ": " + e.what());
    }
}

Graph load_graph(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_graph(in, path);
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << g.ambient_n << " " << g.edge_count() << "\n";
    for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
}

RootedTree parse_tree(std::istream& in, const std::string& origin) {
    std::string line;
    if (!next_line(in, line)) throw ParseError(origin + ": missing header");
    std::istringstream header(line);
    int n = 0, root = 0;
    if (!(header >> n >> root) || n <= 0 || root < 0 || root >= n)
        throw ParseError(origin + ": bad header");
    EdgeSet edges;
    for (int i = 0; i + 1 < n; ++i) {
        if (!next_line(in, line)) throw ParseError(origin + ": expected " + std::to_string(n - 1) + " edges");
        std::istringstream row(line);
        int u = 0, v = 0;
        if (!(row >> u >> v)) throw ParseError(origin + ": bad edge line '" + line + "'");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError(origin + ": edge endpoint out of range in '" + line + "'");
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (next_line(in, line))
        throw ParseError(origin + ": trailing content '" + line + "' after " +
                         std::to_string(n - 1) + " declared edges");
    try {
        return tree_from_edges(n, root, edges);
    } catch (const ValidationError& e) {
        throw ValidationError(origin + ": " + e.what());
    }
}

RootedTree load_tree(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_tree(in, path);
}

void save_tree(const RootedTree& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << t.order() << " " << t.root << "\n";
    for (int v : t.verts)
        if (v != t.root) out << v << " " << t.parent[v] << "\n";
}

Q parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty rational");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            Int num(text.substr(0, slash));
            Int den(text.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + text + "'");
            return Q(num, den);
        }
        auto dot = text.find('.');
        if (dot != std::string::npos) {
            std::string whole = text.substr(0, dot);
            std::string frac = text.substr(dot + 1);
            if (frac.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("bad decimal '" + text + "'");
            bool neg = !whole.empty() && whole[0] == '-';
            Int w = whole.empty() || whole == "-" ? Int(0) : Int(whole);
            Int den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
            Int num = (neg ? -w : w) * den + (frac.empty() ? Int(0) : Int(frac));
            return Q(neg ? -num : num, den);
        }
        return Q(Int(text), Int(1));
    } catch (const std::exception&) {
        throw ParseError("bad rational '" + text + "'");
    }
}

}  // namespace treestab
