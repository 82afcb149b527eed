#include "relstruct/core.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "bits.hpp"

namespace rs {

namespace {

const char* const kKindNames[] = {"graph", "tournament", "digraph", "bichain", "ordered-binary",
                                  "generic"};

std::string pair_str(int x, int y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

}  // namespace

std::string kind_name(Kind k) { return kKindNames[static_cast<int>(k)]; }

Kind parse_kind(const std::string& s) {
    for (int i = 0; i < 6; ++i)
        if (s == kKindNames[i]) return static_cast<Kind>(i);
    throw StructureError("unknown kind tag '" + s + "'");
}

Structure::Structure(int n_, int k_, bool ordered_, Kind kind_)
    : n(n_), k(k_), ordered(ordered_), kind(kind_) {
    if (n < 0 || n > kMaxVertices) throw StructureError("vertex count out of range: " + std::to_string(n));
    if (k < 1 || k > 16) throw StructureError("relation count out of range: " + std::to_string(k));
    row.assign(k, std::vector<Mask>(n, 0));
    col.assign(k, std::vector<Mask>(n, 0));
}

void Structure::set(int i, int x, int y, bool v) {
    if (v) {
        row[i][x] |= Mask(1) << y;
        col[i][y] |= Mask(1) << x;
    } else {
        row[i][x] &= ~(Mask(1) << y);
        col[i][y] &= ~(Mask(1) << x);
    }
}

std::uint64_t Structure::pair_type(int x, int y) const {
    std::uint64_t t = 0;
    for (int i = 0; i < k; ++i) t |= std::uint64_t(d(i, x, y)) << (2 * i);
    return t;
}

std::uint64_t Structure::loop_type(int x) const {
    std::uint64_t t = 0;
    for (int i = 0; i < k; ++i) t |= std::uint64_t(get(i, x, x)) << i;
    return t;
}

bool Structure::operator==(const Structure& o) const {
    return n == o.n && k == o.k && ordered == o.ordered && kind == o.kind && row == o.row;
}

void validate(const Structure& s) {
    const std::string tag = kind_name(s.kind) + ": ";
    auto need = [&](bool ok, const std::string& what) {
        if (!ok) throw StructureError(tag + what);
    };
    switch (s.kind) {
        case Kind::graph:
            need(s.k == 1, "needs exactly one relation");
            need(!s.ordered, "must be unordered");
            for (int x = 0; x < s.n; ++x) {
                need(!s.get(0, x, x), "loop at " + std::to_string(x));
                for (int y = x + 1; y < s.n; ++y)
                    need(s.get(0, x, y) == s.get(0, y, x), "asymmetric pair " + pair_str(x, y));
            }
            break;
        case Kind::tournament:
            need(s.k == 1, "needs exactly one relation");
            for (int x = 0; x < s.n; ++x) {
                need(!s.get(0, x, x), "loop at " + std::to_string(x));
                for (int y = x + 1; y < s.n; ++y) {
                    need(!(s.get(0, x, y) && s.get(0, y, x)), "antisymmetry violated at " + pair_str(x, y));
                    need(s.get(0, x, y) || s.get(0, y, x), "non-total pair " + pair_str(x, y));
                }
            }
            break;
        case Kind::digraph:
            need(s.k == 1, "needs exactly one relation");
            for (int x = 0; x < s.n; ++x) need(!s.get(0, x, x), "loop at " + std::to_string(x));
            break;
        case Kind::bichain:
            need(s.ordered, "must be ordered");
            need(s.k == 1, "needs exactly one relation");
            for (int x = 0; x < s.n; ++x) {
                need(s.get(0, x, x), "not reflexive at " + std::to_string(x));
                for (int y = x + 1; y < s.n; ++y) {
                    need(s.get(0, x, y) != s.get(0, y, x), "not a total order at " + pair_str(x, y));
                }
            }
            for (int x = 0; x < s.n; ++x)
                for (int y = 0; y < s.n; ++y)
                    if (s.get(0, x, y))
                        need((s.row[0][y] & ~s.row[0][x]) == 0,
                             "not transitive through " + pair_str(x, y));
            break;
        case Kind::ordered_binary:
            need(s.ordered, "must be ordered");
            break;
        case Kind::generic:
            break;
    }
}

Structure build(int n, int k, bool ordered, const std::vector<Table>& rels, Kind kind) {
    if (static_cast<int>(rels.size()) != k)
        throw StructureError("dimension mismatch: expected " + std::to_string(k) + " tables, got " +
                             std::to_string(rels.size()));
    Structure s(n, k, ordered, kind);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(rels[i].size()) != n)
            throw StructureError("dimension mismatch: relation " + std::to_string(i) + " has " +
                                 std::to_string(rels[i].size()) + " rows");
        for (int x = 0; x < n; ++x) {
            if (static_cast<int>(rels[i][x].size()) != n)
                throw StructureError("dimension mismatch: relation " + std::to_string(i) + " row " +
                                     std::to_string(x));
            for (int y = 0; y < n; ++y)
                if (rels[i][x][y]) s.set(i, x, y, true);
        }
    }
    validate(s);
    return s;
}

Structure restrict(const Structure& r, Mask a) {
    if (r.n < 64 && (a >> r.n)) throw StructureError("restrict: vertex out of range");
    const int m = popcount(a);
    Structure s(m, r.k, r.ordered, r.kind);
    for (int i = 0; i < r.k; ++i) {
        int nx = 0;
        for (Mask t = a; t; t &= t - 1) {
            int x = __builtin_ctzll(t);
            s.row[i][nx] = bits::compress(r.row[i][x], a);
            s.col[i][nx] = bits::compress(r.col[i][x], a);
            ++nx;
        }
    }
    return s;
}

Structure restrict(const Structure& r, const std::vector<int>& verts) {
    Mask a = 0;
    for (int v : verts) {
        if (v < 0 || v >= r.n) throw StructureError("restrict: vertex out of range: " + std::to_string(v));
        a |= Mask(1) << v;
    }
    return restrict(r, a);
}

Structure relabel(const Structure& r, const std::vector<int>& perm) {
    Structure s(r.n, r.k, r.ordered, r.kind);
    for (int i = 0; i < r.k; ++i)
        for (int x = 0; x < r.n; ++x)
            for (Mask t = r.row[i][x]; t; t &= t - 1) s.set(i, perm[x], perm[__builtin_ctzll(t)], true);
    return s;
}

std::vector<int> mask_to_vector(Mask m) {
    std::vector<int> v;
    for (; m; m &= m - 1) v.push_back(__builtin_ctzll(m));
    return v;
}

Mask vector_to_mask(const std::vector<int>& v) {
    Mask m = 0;
    for (int x : v) m |= Mask(1) << x;
    return m;
}

bool is_embedding(const Structure& s, const Structure& r, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != s.n || s.k != r.k) return false;
    Mask used = 0;
    for (int x = 0; x < s.n; ++x) {
        if (map[x] < 0 || map[x] >= r.n || ((used >> map[x]) & 1)) return false;
        used |= Mask(1) << map[x];
        if (s.ordered && x > 0 && map[x] <= map[x - 1]) return false;
    }
    for (int i = 0; i < s.k; ++i)
        for (int x = 0; x < s.n; ++x)
            for (int y = 0; y < s.n; ++y)
                if (s.get(i, x, y) != r.get(i, map[x], map[y])) return false;
    return true;
}

namespace {

struct EmbedSearch {
    const Structure& s;
    const Structure& r;
    std::vector<int> map;
    Mask used = 0;

    bool fits(int x, int v) const {
        for (int i = 0; i < s.k; ++i) {
            if (s.get(i, x, x) != r.get(i, v, v)) return false;
            for (int y = 0; y < x; ++y) {
                if (s.get(i, x, y) != r.get(i, v, map[y])) return false;
                if (s.get(i, y, x) != r.get(i, map[y], v)) return false;
            }
        }
        return true;
    }

    bool go(int x) {
        if (x == s.n) return true;
        int lo = (s.ordered && x > 0) ? map[x - 1] + 1 : 0;
        int hi = s.ordered ? r.n - (s.n - x) : r.n - 1;
        for (int v = lo; v <= hi; ++v) {
            if ((used >> v) & 1) continue;
            if (!fits(x, v)) continue;
            map[x] = v;
            used |= Mask(1) << v;
            if (go(x + 1)) return true;
            used &= ~(Mask(1) << v);
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<int>> embeds(const Structure& s, const Structure& r) {
    if (s.k != r.k) throw StructureError("embeds: arity mismatch");
    if (s.ordered != r.ordered) throw StructureError("embeds: ordered flag mismatch");
    if (s.n > r.n) return std::nullopt;
    EmbedSearch e{s, r, std::vector<int>(s.n, -1)};
    if (e.go(0)) return e.map;
    return std::nullopt;
}

bool avoids_all(const Structure& r, const std::vector<Structure>& bounds) {
    // group the bounds by size and test every induced subset of that size
    std::vector<std::unordered_set<std::string>> by_size(r.n + 1);
    for (const auto& b : bounds) {
        if (b.k != r.k || b.ordered != r.ordered) throw StructureError("avoids_all: incompatible bound");
        if (b.n <= r.n) by_size[b.n].insert(canonical_code(b));
    }
    for (int s = 0; s <= r.n; ++s) {
        if (by_size[s].empty()) continue;
        bool hit = false;
        for_each_subset(r.n, s, [&](Mask m) {
            if (!hit && by_size[s].count(canonical_code(restrict(r, m)))) hit = true;
        });
        if (hit) return false;
    }
    return true;
}

std::string to_text(const Structure& s) {
    std::ostringstream out;
    out << "n=" << s.n << " k=" << s.k << " ordered=" << (s.ordered ? 1 : 0) << " kind=" << kind_name(s.kind)
        << "\n";
    for (int i = 0; i < s.k; ++i)
        for (int x = 0; x < s.n; ++x) {
            for (int y = 0; y < s.n; ++y) out << (s.get(i, x, y) ? '1' : '0');
            out << "\n";
        }
    return out.str();
}

Structure from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw StructureError("malformed structure: missing header");
    int n = -1, k = -1, ord = -1;
    std::string kind;
    {
        std::istringstream h(line);
        std::string tok;
        while (h >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw StructureError("malformed structure header token '" + tok + "'");
            std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
            try {
                if (key == "n") n = std::stoi(val);
                else if (key == "k") k = std::stoi(val);
                else if (key == "ordered") ord = std::stoi(val);
                else if (key == "kind") kind = val;
                else throw StructureError("malformed structure header: unknown key '" + key + "'");
            } catch (const std::logic_error&) {
                throw StructureError("malformed structure header value '" + tok + "'");
            }
        }
    }
    if (n < 0 || k < 1 || (ord != 0 && ord != 1) || kind.empty())
        throw StructureError("malformed structure header '" + line + "'");
    std::vector<Table> rels(k, Table(n, std::vector<bool>(n)));
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < n; ++x) {
            if (!std::getline(in, line)) throw StructureError("malformed structure: truncated relation block");
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (static_cast<int>(line.size()) != n)
                throw StructureError("malformed structure: row " + std::to_string(x) + " of relation " +
                                     std::to_string(i) + " has length " + std::to_string(line.size()));
            for (int y = 0; y < n; ++y) {
                if (line[y] != '0' && line[y] != '1')
                    throw StructureError("malformed structure: bad character in relation " + std::to_string(i));
                rels[i][x][y] = line[y] == '1';
            }
        }
    while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            throw StructureError("malformed structure: trailing content");
    return build(n, k, ord == 1, rels, parse_kind(kind));
}

}  // namespace rs
