#include "relstruct/families.hpp"

#include <algorithm>
#include <cctype>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#ifdef __BMI2__
#include <immintrin.h>
#endif

#include "relstruct/moddec.hpp"

namespace rs {

namespace {

using F = FamilyKind;

bool is_template(F k) { return k >= F::t_fib && k <= F::t_half1; }
bool is_h(F k) { return k >= F::h1 && k <= F::h10; }

int extra_vertices(F k) {
    switch (k) {
        case F::g3:
        case F::g5:
        case F::t_half:
        case F::t_half1: return 1;
        case F::g6: return 2;
        default: return 0;
    }
}

// prefixes of larger truncations are smaller truncations
bool prefix_stable(const FamilySpec& f) { return f.kind != F::lex_sum3; }

Mask low_bits(int n) { return n >= 64 ? ~Mask(0) : (Mask(1) << n) - 1; }

std::uint64_t pext(std::uint64_t v, std::uint64_t m) {
#ifdef __BMI2__
    return _pext_u64(v, m);
#else
    std::uint64_t out = 0;
    for (int b = 0; m; m &= m - 1, ++b)
        if (v & m & (~m + 1)) out |= std::uint64_t(1) << b;
    return out;
#endif
}

// the induced table in vertex order; for ordered structures this is already the code
std::string table_key(const Structure& s, Mask m) {
    std::string out;
    out.reserve(8 * s.k * popcount(m));
    for (int i = 0; i < s.k; ++i)
        for (Mask t = m; t; t &= t - 1) {
            std::uint64_t w = pext(s.row[i][__builtin_ctzll(t)], m);
            out.append(reinterpret_cast<const char*>(&w), 8);
        }
    return out;
}

using CanonCache = std::unordered_map<std::string, std::string>;

// unordered restrictions repeat the same induced table many times over, so canonize each table once
std::string subset_code(const Structure& s, Mask m, CanonCache* cache = nullptr) {
    std::string key = table_key(s, m);
    if (s.ordered) return key;
    if (!cache) return canonical_code(restrict(s, m));
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    std::string code = canonical_code(restrict(s, m));
    cache->emplace(std::move(key), code);
    return code;
}

void add_edge(Structure& s, int x, int y) {
    s.set(0, x, y, true);
    s.set(0, y, x, true);
}

bool cross_rule(F k, int i, int j) {
    switch (k) {
        case F::g0:
        case F::h3:
        case F::h7:
        case F::h10: return i != j;
        case F::g1:
        case F::g5:
        case F::g6:
        case F::h2:
        case F::h5:
        case F::h6:
        case F::h9: return i <= j;
        case F::g2: return j == i || j == i + 1;
        default: return i == j;  // g3, g4, h1, h4, h8
    }
}

bool clique_a(F k) {
    return k == F::g4 || k == F::g5 || k == F::g6 || k == F::h4 || k == F::h5 || k == F::h7 || k == F::h8 ||
           k == F::h9 || k == F::h10;
}
bool clique_b(F k) { return k == F::h6 || k == F::h8 || k == F::h9 || k == F::h10; }

Structure bipartite_graph(F k, int m) {
    const int off = extra_vertices(k);
    Structure s(off + 2 * m, 1, false, Kind::graph);
    auto v = [&](int i, int side) { return off + 2 * i + side; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (cross_rule(k, i, j)) add_edge(s, v(i, 0), v(j, 1));
            if (i < j && clique_a(k)) add_edge(s, v(i, 0), v(j, 0));
            if (i < j && clique_b(k)) add_edge(s, v(i, 1), v(j, 1));
        }
    if (k == F::g3 || k == F::g5)
        for (int j = 0; j < m; ++j) add_edge(s, 0, v(j, 1));
    if (k == F::g6) {
        // a = 0 joins the clique side, b = 1 the independent side
        for (int i = 0; i < m; ++i) add_edge(s, 0, v(i, 0));
        add_edge(s, 0, 1);
    }
    return s;
}

Structure ordered_template(F k, int m) {
    const int off = extra_vertices(k);
    Structure s(off + 2 * m, 1, true, Kind::ordered_binary);
    for (int x = 0; x < s.n; ++x) s.set(0, x, x, true);
    auto v = [&](int i, int side) { return off + 2 * i + side; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            bool arc = k == F::t_fib ? i == j : k == F::t_pow ? true : k == F::t_gap ? i <= j : false;
            if (arc) s.set(0, v(i, 0), v(j, 1), true);
        }
    for (int j = 0; j < m; ++j) {
        if (k == F::t_half) s.set(0, 0, v(j, 1), true);
        if (k == F::t_half1) {
            s.set(0, 0, v(j, 0), true);
            s.set(0, v(j, 1), 0, true);
        }
    }
    return s;
}

// block of each vertex; shell s adds one vertex to every block that may still grow and opens block s
std::vector<int> staircase_blocks(const FamilySpec& f, int m) {
    std::vector<int> block;
    for (int s = 0; s < m; ++s)
        for (int j = 0; j <= s && (f.copies == 0 || j < f.copies); ++j)
            if (f.block_size == 0 || s - j < f.block_size) block.push_back(j);
    return block;
}

// three contiguous blocks of sizes given: increasing chain, decreasing chain, clique; lower blocks point up
Structure lex3_blocks(int a, int b, int c) {
    const int n = a + b + c;
    Structure s(n, 1, true, Kind::ordered_binary);
    auto block = [&](int x) { return x < a ? 0 : x < a + b ? 1 : 2; };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            int bx = block(x), by = block(y);
            bool rel = bx == by ? (bx == 0 ? x <= y : bx == 1 ? x >= y : true) : bx < by;
            s.set(0, x, y, rel);
        }
    return s;
}

BigInt pow2(int e) { return BigInt(1) << e; }

const std::vector<BigInt>& partitions_cache(int n) {
    static std::vector<BigInt> p;
    if (int(p.size()) <= n) p = partition_numbers_euler(std::max(n, 64));
    return p;
}

BigInt phi1(int n) {
    if (n <= 1) return 1;
    if (n == 2) return 2;
    BigInt prev = phi1(n - 1) + pow2(n - 3);
    if (n % 2 == 0) prev += pow2((n - 4) / 2);
    return prev;
}

BigInt phi0(int n) {
    if (n == 2) return 2;
    return n % 2 == 0 ? BigInt((n * n + 6 * n + 8) / 8) : BigInt((n * n + 4 * n + 3) / 8);
}

BigInt phi4(int n) {
    if (n <= 2) return n == 2 ? 2 : 1;
    return n % 2 ? BigInt((n * n + 4 * n - 5) / 4) : BigInt((n * n + 4 * n - 4) / 4);
}

std::string lower(std::string s) {
    for (auto& ch : s) ch = char(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

int parse_size(const std::string& t, const std::string& whole) {
    if (t == "inf" || t == "0") return 0;
    try {
        size_t pos = 0;
        int v = std::stoi(t, &pos);
        if (pos != t.size() || v < 0) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw FamilyError("unknown family: " + whole);
    }
}

}  // namespace

const std::vector<FamilyInfo>& family_registry() {
    static const std::vector<FamilyInfo> reg{
        {"g0", F::g0, "A, B independent; (i,0)-(j,1) iff i != j; phi = (n^2+6n+8)/8 even n != 2, (n^2+4n+3)/8 odd n", false},
        {"g1", F::g1, "A, B independent; (i,0)-(j,1) iff i <= j; phi(n) = phi(n-1) + 2^(n-3) [+ 2^((n-4)/2) for even n]", false},
        {"g2", F::g2, "A, B independent; (i,0)-(j,1) iff j in {i, i+1}: the one-way infinite path; phi = p(n)", false},
        {"g3", F::g3, "perfect matching (i,0)-(i,1) plus c joined to all of B; phi = (n^2+4n-8)/4 even, (n^2+4n-9)/4 odd, n >= 3", false},
        {"g4", F::g4, "A clique, B independent, matching (i,0)-(i,1); phi = (n^2+4n-5)/4 odd, (n^2+4n-4)/4 even, n >= 3", false},
        {"g5", F::g5, "A clique, B independent, (i,0)-(j,1) iff i <= j, c joined to B; phi = 2^n - 6 for n >= 5", false},
        {"g6", F::g6, "clique A + a, independent B + b, (i,0)-(j,1) iff i <= j, edge a-b; phi = 2^(n-1) + 2^(n-2) - n + 1", false},
        {"h1", F::h1, "E1: matching (n,0)-(n,1); phi = floor(n/2) + 1", false},
        {"h2", F::h2, "E2: (n,0)-(m,1) for n <= m; same profile as g1", false},
        {"h3", F::h3, "E3: (n,0)-(m,1) for n != m; same profile as g0", false},
        {"h4", F::h4, "E1 + clique on A; same profile as g4", false},
        {"h5", F::h5, "E2 + clique on A; phi = 2^(n-1) for n >= 1", false},
        {"h6", F::h6, "E2 + clique on B; profile of h5", false},
        {"h7", F::h7, "E3 + clique on A; complement of h4", false},
        {"h8", F::h8, "E1 + cliques on A and B; complement of h3", false},
        {"h9", F::h9, "E2 + cliques on A and B; profile of h2", false},
        {"h10", F::h10, "E3 + cliques on A and B; complement of h1", false},
        {"t_fib", F::t_fib, "ordered template k=1: arcs (n,0)->(n,1); Fibonacci profile", true},
        {"t_pow", F::t_pow, "ordered template k=7: arcs (n,0)->(m,1) for all n, m; phi = 2^r - 1", true},
        {"t_gap", F::t_gap, "ordered template k=4: arcs (n,0)->(m,1) for n <= m; phi = 2^r - r for r >= 3", true},
        {"t_half", F::t_half, "ordered template k=13: first element a with a->(n,1); phi = 2^(r-1)", true},
        {"t_half1", F::t_half1, "ordered template k=16: a->(n,0) and (n,1)->a; phi = 2^(r-1) + 1 for r >= 2", true},
        {"clique_sum", F::clique_sum, "disjoint infinite cliques, infinitely many; phi = p(n); clique_sum:BxC bounds both", false},
        {"path", F::infinite_path, "the path P_m on m vertices; phi = p(n)", false},
        {"lex3", F::lex_sum3, "ordered sum of an increasing chain, a decreasing chain and a clique; polynomial profile", true},
        {"sturmian", F::sturmian, "Fibonacci word coded by consecutivity arcs and letter loops; indecomposables match factors", false},
    };
    return reg;
}

FamilySpec parse_family(const std::string& raw) {
    const std::string name = lower(raw);
    if (name == "infinite_path" || name == "infinitepath") return {F::infinite_path};
    if (name == "lexsum3" || name == "lex_sum3") return {F::lex_sum3};
    if (name.rfind("clique_sum", 0) == 0 || name.rfind("cliquesum", 0) == 0) {
        FamilySpec f{F::clique_sum};
        auto colon = name.find(':');
        if (colon == std::string::npos) {
            if (name != "clique_sum" && name != "cliquesum") throw FamilyError("unknown family: " + raw);
            return f;
        }
        std::string rest = name.substr(colon + 1);
        auto x = rest.find('x');
        f.block_size = parse_size(rest.substr(0, x), raw);
        if (x != std::string::npos) f.copies = parse_size(rest.substr(x + 1), raw);
        return f;
    }
    if (name.rfind("ot:", 0) == 0) {
        int p = 0, l = 0, k = 0;
        char tail = 0;
        if (std::sscanf(name.c_str(), "ot:%d:%d:%d%c", &p, &l, &k, &tail) != 3)
            throw FamilyError("unknown family: " + raw);
        if (l != 1) throw FamilyError("template order type l=" + std::to_string(l) + " is not implemented (only l=1)");
        if (p != 1) throw FamilyError("template class p=" + std::to_string(p) + " is not implemented (only p=1)");
        switch (k) {
            case 1: return {F::t_fib};
            case 7: return {F::t_pow};
            case 4: return {F::t_gap};
            case 13: return {F::t_half};
            case 16: return {F::t_half1};
            default: throw FamilyError("template k=" + std::to_string(k) + " is not in the curated set {1,4,7,13,16}");
        }
    }
    for (const auto& info : family_registry())
        if (info.name == name) return {info.kind};
    throw FamilyError("unknown family: " + raw);
}

std::string family_name(const FamilySpec& f) {
    for (const auto& info : family_registry())
        if (info.kind == f.kind) {
            if (f.kind != F::clique_sum || (f.block_size == 0 && f.copies == 0)) return info.name;
            auto part = [](int v) { return v == 0 ? std::string("inf") : std::to_string(v); };
            return info.name + ":" + part(f.block_size) + "x" + part(f.copies);
        }
    throw FamilyError("unknown family");
}

bool family_ordered(const FamilySpec& f) { return is_template(f.kind) || f.kind == F::lex_sum3; }

int vertex_count(const FamilySpec& f, int m) {
    if (m < 0) throw FamilyError("materialize: m must be non-negative");
    switch (f.kind) {
        case F::clique_sum: return int(staircase_blocks(f, m).size());
        case F::infinite_path: return m;
        case F::lex_sum3:
        case F::sturmian: return 3 * m;
        default: return extra_vertices(f.kind) + 2 * m;
    }
}

Structure materialize(const FamilySpec& f, int m) {
    if (m < 0) throw FamilyError("materialize: m must be non-negative");
    if (vertex_count(f, m) > kMaxVertices) throw FamilyError("materialize: more than 64 vertices");
    if (f.kind <= F::g6 || is_h(f.kind)) return bipartite_graph(f.kind, m);
    if (is_template(f.kind)) return ordered_template(f.kind, m);
    switch (f.kind) {
        case F::clique_sum: {
            auto block = staircase_blocks(f, m);
            Structure s(int(block.size()), 1, false, Kind::graph);
            for (int x = 0; x < s.n; ++x)
                for (int y = x + 1; y < s.n; ++y)
                    if (block[x] == block[y]) add_edge(s, x, y);
            return s;
        }
        case F::infinite_path: {
            Structure s(m, 1, false, Kind::graph);
            for (int x = 0; x + 1 < m; ++x) add_edge(s, x, x + 1);
            return s;
        }
        case F::lex_sum3: return lex3_blocks(m, m, m);
        case F::sturmian: return word_structure(fibonacci_word(3 * m));
        default: throw FamilyError("unknown family");
    }
}

namespace {

using CodeSets = std::vector<std::unordered_set<std::string>>;

// calls f(mask) for every subset of size n of all_bits that meets fresh
template <class Fn>
void for_each_new_subset(int old_n, const std::vector<int>& fresh, int n, Fn&& f) {
    const int nf = int(fresh.size());
    for (int j = 1; j <= std::min(n, nf); ++j)
        for_each_subset(nf, j, [&](Mask pick) {
            Mask add = 0;
            for (Mask t = pick; t; t &= t - 1) add |= Mask(1) << fresh[__builtin_ctzll(t)];
            for_each_subset(old_n, n - j, [&](Mask old) { f(old | add); });
        });
}

// all subsets of sizes 0..nmax of s that meet the vertices at or above old_n
std::uint64_t sweep(const Structure& s, int old_n, int nmax, CodeSets& sets, int threads,
                    std::vector<CanonCache>& caches) {
    std::vector<int> fresh;
    for (int v = old_n; v < s.n; ++v) fresh.push_back(v);
    if (old_n == 0 && nmax >= 0) sets[0].insert(subset_code(s, 0));
    std::uint64_t computed = old_n == 0 ? 1 : 0;
    threads = std::max(1, threads);
    if (int(caches.size()) < threads) caches.resize(threads);
    for (int n = 1; n <= nmax; ++n) {
        std::vector<std::unordered_set<std::string>> local(threads);
        std::vector<std::uint64_t> counts(threads, 0);
        auto work = [&](int t) {
            std::uint64_t idx = 0;
            for_each_new_subset(old_n, fresh, n, [&](Mask m) {
                if (idx++ % threads != std::uint64_t(t)) return;
                local[t].insert(subset_code(s, m, &caches[t]));
                ++counts[t];
            });
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
            for (auto& th : pool) th.join();
        }
        for (int t = 0; t < threads; ++t) {
            sets[n].insert(local[t].begin(), local[t].end());
            computed += counts[t];
        }
    }
    return computed;
}

// the three blocks of lex3 are monomorphic, so one subset per composition covers every type
std::uint64_t sweep_lex3(int m, int nmax, CodeSets& sets) {
    std::uint64_t computed = 0;
    for (int n = 0; n <= nmax; ++n) {
        sets[n].clear();
        for (int a = 0; a <= std::min(n, m); ++a)
            for (int b = 0; a + b <= n && b <= m; ++b) {
                int c = n - a - b;
                if (c > m) continue;
                sets[n].insert(subset_code(lex3_blocks(a, b, c), low_bits(n)));
                ++computed;
            }
    }
    return computed;
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    return r;
}

}  // namespace

std::uint64_t sweep_cost(const FamilySpec& f, int nmax) {
    const int m0 = std::max(nmax, 1);
    std::uint64_t total = 0;
    if (f.kind == F::lex_sum3) {
        for (int m = m0; m <= m0 + 1; ++m)
            for (int n = 0; n <= nmax; ++n)
                for (int a = 0; a <= std::min(n, m); ++a)
                    for (int b = 0; a + b <= n && b <= m; ++b) total += n - a - b <= m;
        return total;
    }
    const int v = vertex_count(f, m0 + 1);
    for (int n = 0; n <= nmax; ++n) total += binom(v, n);
    return total;
}

ProfileReport profile(const FamilySpec& f, int nmax, ProfileOptions opt) {
    if (nmax < 0) throw FamilyError("profile: nmax must be non-negative");
    const int m0 = std::max(nmax, 1);
    const int cap = opt.m_cap > 0 ? opt.m_cap : nmax + 16;
    ProfileReport rep;
    rep.family = family_name(f);
    CodeSets sets(nmax + 1);
    std::vector<CanonCache> caches;
    std::vector<std::vector<std::size_t>> history;
    Structure prev;
    for (int m = m0;; ++m) {
        if (m > cap)
            throw FamilyError("profile: saturation not reached for " + rep.family + " up to m=" + std::to_string(cap));
        if (f.kind == F::lex_sum3) {
            rep.codes_computed += sweep_lex3(m, nmax, sets);
        } else {
            Structure s = materialize(f, m);
            int old_n = 0;
            if (m > m0 && prefix_stable(f)) {
                old_n = prev.n;
                if (!(restrict(s, low_bits(old_n)) == prev))
                    throw FamilyError("profile: truncations of " + rep.family + " are not nested");
            } else {
                for (auto& set : sets) set.clear();
            }
            rep.codes_computed += sweep(s, old_n, nmax, sets, opt.threads, caches);
            prev = std::move(s);
        }
        std::vector<std::size_t> counts;
        for (auto& set : sets) counts.push_back(set.size());
        history.push_back(counts);
        if (history.size() >= 2 && history[history.size() - 2] == counts) {
            rep.m_final = m;
            break;
        }
    }
    for (int n = 0; n <= nmax; ++n) {
        rep.n.push_back(n);
        rep.phi.push_back(BigInt(history.back()[n]));
        int first = m0;
        for (std::size_t h = 0; h < history.size(); ++h)
            if (history[h][n] == history.back()[n]) {
                first = m0 + int(h);
                break;
            }
        rep.m_used.push_back(first);
    }
    return rep;
}

std::optional<BigInt> closed_form(const FamilySpec& f, int n) {
    if (n < 0) return std::nullopt;
    switch (f.kind) {
        case F::g0:
        case F::h3:
        case F::h8: return phi0(n);
        case F::g1:
        case F::h2:
        case F::h9: return phi1(n);
        case F::g2:
        case F::infinite_path: return partitions_cache(n)[n];
        case F::g3:
            if (n <= 2) return BigInt(n == 2 ? 2 : 1);
            return n % 2 ? BigInt((n * n + 4 * n - 9) / 4) : BigInt((n * n + 4 * n - 8) / 4);
        case F::g4:
        case F::h4:
        case F::h7: return phi4(n);
        case F::g5: {
            static const int small[] = {1, 1, 2, 4, 11};
            if (n < 5) return BigInt(small[n]);
            return pow2(n) - 6;
        }
        case F::g6:
            if (n <= 1) return BigInt(1);
            return pow2(n - 1) + pow2(n - 2) - n + 1;
        case F::h1:
        case F::h10: return BigInt(n / 2 + 1);
        case F::h5:
        case F::h6:
            return n == 0 ? BigInt(1) : pow2(n - 1);
        case F::t_fib: return fib_generalized(n, 2);
        case F::t_pow: return n == 0 ? BigInt(1) : pow2(n) - 1;
        case F::t_gap: return n < 3 ? BigInt(n == 2 ? 2 : 1) : pow2(n) - n;
        case F::t_half: return n == 0 ? BigInt(1) : pow2(n - 1);
        case F::t_half1: return n < 2 ? BigInt(1) : pow2(n - 1) + 1;
        case F::clique_sum:
            if (f.block_size == 0 && f.copies == 0) return partitions_cache(n)[n];
            if (f.block_size == 0 || f.copies == 0)
                return partition_at_most(n, std::max(f.block_size, f.copies))[n];
            return std::nullopt;
        default: return std::nullopt;
    }
}

std::optional<RationalGF> generating_function(const FamilySpec& f) {
    switch (f.kind) {
        case F::g0:
        case F::h3:
        case F::h8: return RationalGF{{1, 0, -1, 1, 2, -2, -1, 1}, IntPolynomial{1, -1} * IntPolynomial{1, 0, -1} * IntPolynomial{1, 0, -1}};
        case F::g1:
        case F::h2:
        case F::h9: return RationalGF{{1, -1, -2, 1}, IntPolynomial{1, -2} * IntPolynomial{1, 0, -2}};
        case F::g3: return RationalGF{{1, -1, 0, 1, 1, 0, -1}, IntPolynomial{1, -1} * IntPolynomial{1, -1} * IntPolynomial{1, 0, -1}};
        case F::g4:
        case F::h4:
        case F::h7:
            return RationalGF{{1, -1, 0, 2, 0, -1},
                              IntPolynomial{1, -1} * IntPolynomial{1, -1} * IntPolynomial{1, -1} * IntPolynomial{1, 1}};
        case F::g5: return RationalGF{{1, -2, 1, 0, 3, 1, 2}, IntPolynomial{1, -1} * IntPolynomial{1, -2}};
        case F::g6: return RationalGF{{1, -3, 3, -1, 1}, IntPolynomial{1, -2} * IntPolynomial{1, -1} * IntPolynomial{1, -1}};
        case F::h1:
        case F::h10: return RationalGF{{1}, IntPolynomial{1, -1} * IntPolynomial{1, 0, -1}};
        // the printed form (1+x-2x^2)/(1-2x) starts 1,3,4; this one matches 2^(n-1)
        case F::h5:
        case F::h6: return RationalGF{{1, -1}, {1, -2}};
        case F::t_fib: return RationalGF{{1}, {1, -1, -1}};
        default: return std::nullopt;
    }
}

std::optional<std::vector<BigInt>> reference_series(const FamilySpec& f, int N) {
    if (auto gf = generating_function(f)) return expand_rational(*gf, N).c;
    if (f.kind == F::g2 || f.kind == F::infinite_path || (f.kind == F::clique_sum && f.block_size == 0 && f.copies == 0))
        return partition_numbers(N);
    return std::nullopt;
}

std::vector<FormulaCheck> closed_form_check(const FamilySpec& f, const std::vector<BigInt>& phi) {
    if (!closed_form(f, 0)) throw FamilyError("no registered formula for " + family_name(f));
    std::vector<FormulaCheck> out;
    for (int n = 0; n < int(phi.size()); ++n) {
        BigInt e = *closed_form(f, n);
        out.push_back({n, e, phi[n], e == phi[n]});
    }
    return out;
}

std::vector<FormulaCheck> closed_form_check(const FamilySpec& f, int nmax) {
    if (!closed_form(f, 0)) throw FamilyError("no registered formula for " + family_name(f));
    return closed_form_check(f, profile(f, nmax).phi);
}

std::string fibonacci_word(int length) {
    if (length < 0) throw FamilyError("fibonacci_word: negative length");
    std::string w = "0";
    while (int(w.size()) < length) {
        std::string next;
        next.reserve(2 * w.size());
        for (char ch : w) next += ch == '0' ? "01" : "0";
        w = std::move(next);
    }
    return w.substr(0, length);
}

int factor_count(const std::string& word, int n) {
    if (n < 0) throw FamilyError("factor_count: negative length");
    if (int(word.size()) < 3 * n)
        throw FamilyError("factor_count: word of length " + std::to_string(word.size()) +
                          " under-samples factors of length " + std::to_string(n) + " (need 3n)");
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i + n <= word.size(); ++i) seen.insert(word.substr(i, n));
    return int(seen.size());
}

Structure word_structure(const std::string& word) {
    const int n = int(word.size());
    if (n > kMaxVertices) throw FamilyError("word_structure: more than 64 letters");
    Structure s(n, 2, false, Kind::generic);
    for (int i = 0; i < n; ++i) {
        if (word[i] != '0' && word[i] != '1') throw FamilyError("word_structure: letters must be 0 or 1");
        if (i + 1 < n) s.set(0, i, i + 1, true);
        if (word[i] == '1') s.set(1, i, i, true);
    }
    return s;
}

int indecomposable_type_count(const Structure& r, int n) {
    std::unordered_set<std::string> seen;
    for_each_subset(r.n, n, [&](Mask m) {
        if (is_indecomposable(r, m)) seen.insert(canonical_code(restrict(r, m)));
    });
    return int(seen.size());
}

GrowthReport growth_classify(const FamilySpec& f, int nmax, GrowthOptions opt) {
    if (!family_ordered(f)) throw StructureError("growth: " + family_name(f) + " is not an ordered family");
    std::function<Structure(int)> prefix;
    if (f.kind == F::lex_sum3) {
        // three near-equal blocks, the only truncations of lex3 with m elements
        prefix = [](int m) { return lex3_blocks((m + 2) / 3, (m + 1) / 3, m / 3); };
    } else {
        prefix = [f](int m) {
            int t = 0;
            while (vertex_count(f, t) < m) ++t;
            return restrict(materialize(f, t), low_bits(m));
        };
    }
    GrowthReport rep = growth_classify(prefix, nmax, opt);
    rep.profile = profile(f, nmax).phi;
    const auto& p = rep.profile;
    if (p.size() >= 2 && p[p.size() - 2] != 0)
        rep.ratio = static_cast<double>(p.back()) / static_cast<double>(p[p.size() - 2]);
    return rep;
}

}  // namespace rs
