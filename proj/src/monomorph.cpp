#include "relstruct/monomorph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <thread>

namespace rs {

namespace {

// Gosper sweep that stops as soon as f returns false; returns whether it ran to the end
template <class F>
bool all_subsets(int n, int s, F&& f) {
    if (s < 0 || s > n) return true;
    if (s == 0) return f(Mask(0));
    const Mask limit = Mask(1) << n;
    for (Mask m = (Mask(1) << s) - 1; m < limit;) {
        if (!f(m)) return false;
        Mask c = m & (~m + 1), r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
    return true;
}

inline Mask bit(int v) { return Mask(1) << v; }

void check_vertex(const Structure& r, int v, const char* what) {
    if (v < 0 || v >= r.n) throw StructureError(std::string(what) + ": vertex out of range");
}

// classes from a pairwise relation via union-find
std::vector<std::vector<int>> classes_of(int n, const std::function<bool(int, int)>& eq, bool& transitive) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            if (eq(x, y)) {
                rel[x][y] = rel[y][x] = 1;
                parent[find(x)] = find(y);
            }
    std::map<int, std::vector<int>> groups;
    for (int v = 0; v < n; ++v) groups[find(v)].push_back(v);
    std::vector<std::vector<int>> out;
    transitive = true;
    for (auto& [root, g] : groups) {
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = i + 1; j < g.size(); ++j)
                if (!rel[g[i]][g[j]]) transitive = false;
        out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool equivalent_in(const SubsetTypes& t, int n, int x, int y, int lo, int hi) {
    const Mask bx = bit(x), by = bit(y);
    for (int j = lo; j <= hi; ++j) {
        bool ok = all_subsets(n, j, [&](Mask f) {
            if (f & (bx | by)) return true;
            return t.id(f | bx) == t.id(f | by);
        });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

SubsetTypes::SubsetTypes(const Structure& r, int max_size, int threads) : n_(r.n), max_size_(std::min(max_size, r.n)) {
    if (r.n > 63) throw StructureError("subset types: too many vertices");
    std::vector<Mask> subsets;
    for (int s = 0; s <= max_size_; ++s) for_each_subset(n_, s, [&](Mask m) { subsets.push_back(m); });
    std::vector<std::string> codes(subsets.size());
    threads = std::max(1, threads);
    auto work = [&](size_t from) {
        for (size_t i = from; i < subsets.size(); i += threads) codes[i] = canonical_code(restrict(r, subsets[i]));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, size_t(t));
        for (auto& th : pool) th.join();
    }
    std::unordered_map<std::string, int> intern;
    const bool dense = n_ <= 22;
    if (dense) dense_.assign(size_t(1) << n_, -1);
    for (size_t i = 0; i < subsets.size(); ++i) {
        auto [it, fresh] = intern.emplace(codes[i], int(intern.size()));
        if (dense) dense_[subsets[i]] = it->second;
        else sparse_[subsets[i]] = it->second;
    }
    types_ = int(intern.size());
}

int SubsetTypes::id(Mask s) const {
    if (!dense_.empty()) {
        int v = dense_[s];
        if (v < 0) throw StructureError("subset types: subset larger than the table");
        return v;
    }
    auto it = sparse_.find(s);
    if (it == sparse_.end()) throw StructureError("subset types: subset larger than the table");
    return it->second;
}

bool k_equivalent(const Structure& r, int x, int y, int k) {
    check_vertex(r, x, "k-equivalence");
    check_vertex(r, y, "k-equivalence");
    if (x == y) throw StructureError("k-equivalence: x and y must differ");
    if (k < 0 || k > r.n - 2) throw StructureError("k-equivalence: k out of range");
    const Mask bx = bit(x), by = bit(y);
    return all_subsets(r.n, k, [&](Mask f) {
        if (f & (bx | by)) return true;
        return canonical_code(restrict(r, f | bx)) == canonical_code(restrict(r, f | by));
    });
}

bool le_k_equivalent(const Structure& r, int x, int y, int k) {
    for (int j = 0; j <= k; ++j)
        if (!k_equivalent(r, x, y, j)) return false;
    return true;
}

bool fully_equivalent(const Structure& r, int x, int y) { return le_k_equivalent(r, x, y, r.n - 2); }

int kind_threshold(Kind kind, int n) {
    int t = n - 2;
    switch (kind) {
        case Kind::graph: t = 1; break;
        case Kind::bichain:
        case Kind::ordered_binary: t = 2; break;
        case Kind::tournament:
        case Kind::digraph: t = 3; break;
        case Kind::generic: break;
    }
    return std::max(0, std::min(t, n - 2));
}

namespace {

EquivalenceResult classes_from_table(const Structure& r, const SubsetTypes& t, int k) {
    EquivalenceResult out;
    out.level_k = k;
    out.level = k >= r.n - 2 ? "full" : std::to_string(k);
    out.threshold_used = k;
    out.classes = classes_of(r.n, [&](int x, int y) { return equivalent_in(t, r.n, x, y, 0, k); }, out.transitive);
    out.dim_mon = int(out.classes.size());
    return out;
}

}  // namespace

EquivalenceResult le_k_classes(const Structure& r, int k, int threads) {
    if (r.n < 1) throw StructureError("equivalence: empty structure");
    k = std::max(0, std::min(k, r.n - 2));
    SubsetTypes t(r, k + 1, threads);
    return classes_from_table(r, t, k);
}

EquivalenceResult equivalence_classes(const Structure& r, EquivMode mode, int threads) {
    if (r.n < 1) throw StructureError("equivalence: empty structure");
    const int t = kind_threshold(r.kind, r.n), full = std::max(0, r.n - 2);
    SubsetTypes table(r, (mode == EquivMode::verify ? full : t) + 1, threads);
    EquivalenceResult out = classes_from_table(r, table, t);
    if (mode == EquivMode::verify) {
        out.verified = true;
        EquivalenceResult f = classes_from_table(r, table, full);
        out.full_classes = f.classes;
        out.mismatch = f.classes != out.classes;
    }
    return out;
}

std::vector<std::string> class_annotations(const Structure& r, const std::vector<std::vector<int>>& classes) {
    static const char* names[4] = {"antichain", "chain-opposed", "chain-coinciding", "clique"};
    std::vector<std::string> out;
    for (const auto& c : classes) {
        if (c.size() == 1) {
            out.push_back("point");
            continue;
        }
        if (!r.ordered) {
            out.push_back("block");
            continue;
        }
        std::string label;
        for (int i = 0; i < r.k; ++i) {
            unsigned d = r.d(i, c[0], c[1]);
            bool uniform = true;
            for (size_t a = 0; a < c.size(); ++a)
                for (size_t b = a + 1; b < c.size(); ++b)
                    if (r.d(i, c[a], c[b]) != d) uniform = false;
            if (i) label += "/";
            label += uniform ? names[d] : "mixed";
        }
        out.push_back(label);
    }
    return out;
}

bool is_monomorphic_block(const Structure& r, Mask a) {
    if (a & ~r.all()) throw StructureError("block: set outside the vertex set");
    if (r.n > 22) throw StructureError("block: too many vertices for a subset sweep");
    SubsetTypes t(r, r.n);
    // the type of S is determined by (S \ A, |S n A|)
    std::unordered_map<Mask, std::vector<int>> seen;
    for (Mask s = 0; s <= r.all(); ++s) {
        auto& slot = seen[s & ~a];
        size_t c = popcount(s & a);
        if (slot.size() <= c) slot.resize(c + 1, -1);
        int id = t.id(s);
        if (slot[c] < 0) slot[c] = id;
        else if (slot[c] != id) return false;
        if (s == r.all()) break;
    }
    return true;
}

namespace {

// f maps the members of src (ascending) to dst[i]; checks both the induced isomorphism and,
// when extend is set, that f together with the identity outside A is a local isomorphism
bool maps_well(const Structure& r, const std::vector<int>& src, const std::vector<int>& dst, Mask outside) {
    const size_t m = src.size();
    for (size_t i = 0; i < m; ++i) {
        if (r.loop_type(src[i]) != r.loop_type(dst[i])) return false;
        for (size_t j = i + 1; j < m; ++j)
            if (r.pair_type(src[i], src[j]) != r.pair_type(dst[i], dst[j])) return false;
        if (r.ordered)
            for (size_t j = i + 1; j < m; ++j)
                if ((src[i] < src[j]) != (dst[i] < dst[j])) return false;
    }
    for (Mask o = outside; o; o &= o - 1) {
        int v = __builtin_ctzll(o);
        for (size_t i = 0; i < m; ++i) {
            if (r.pair_type(src[i], v) != r.pair_type(dst[i], v)) return false;
            if (r.ordered && (src[i] < v) != (dst[i] < v)) return false;
        }
    }
    return true;
}

// visit every pair of equal-size subsets of A with every candidate bijection between them;
// visit(src, dst_image, last) returns false to stop
template <class Visit>
void for_each_partial_bijection(const Structure&, Mask a, Visit&& visit) {
    std::vector<int> av = mask_to_vector(a);
    const int m = int(av.size());
    for (int s = 1; s <= m; ++s) {
        std::vector<Mask> subs;
        for_each_subset(m, s, [&](Mask x) { subs.push_back(x); });
        for (Mask p : subs) {
            std::vector<int> src;
            for (Mask t = p; t; t &= t - 1) src.push_back(av[__builtin_ctzll(t)]);
            for (Mask q : subs) {
                std::vector<int> dst;
                for (Mask t = q; t; t &= t - 1) dst.push_back(av[__builtin_ctzll(t)]);
                if (!visit(src, dst)) return;
            }
        }
    }
}

}  // namespace

bool is_strong_block(const Structure& r, Mask a) {
    if (a & ~r.all()) throw StructureError("block: set outside the vertex set");
    if (!r.ordered && popcount(a) > 7) throw StructureError("strong block: set too large for a bijection sweep");
    const Mask outside = r.all() & ~a;
    bool ok = true;
    for_each_partial_bijection(r, a, [&](const std::vector<int>& src, std::vector<int> dst) {
        bool found = false;
        if (r.ordered) {
            found = maps_well(r, src, dst, outside);
        } else {
            do {
                if (maps_well(r, src, dst, outside)) found = true;
            } while (!found && std::next_permutation(dst.begin(), dst.end()));
        }
        ok = found;
        return ok;
    });
    return ok;
}

bool is_fraisse_interval(const Structure& r, Mask a) {
    if (a & ~r.all()) throw StructureError("block: set outside the vertex set");
    const Mask outside = r.all() & ~a;
    if (!r.ordered && popcount(a) > 7) {
        // an extension by the identity is a local isomorphism iff each point map is
        std::vector<int> av = mask_to_vector(a);
        for (int p : av)
            for (int q : av)
                if (p != q && r.loop_type(p) == r.loop_type(q) && !maps_well(r, {p}, {q}, outside)) return false;
        return true;
    }
    bool ok = true;
    for_each_partial_bijection(r, a, [&](const std::vector<int>& src, std::vector<int> dst) {
        do {
            // a local isomorphism of R|A must extend; other bijections are irrelevant
            if (maps_well(r, src, dst, 0) && !maps_well(r, src, dst, outside)) {
                ok = false;
                return false;
            }
        } while (!r.ordered && std::next_permutation(dst.begin(), dst.end()));
        return true;
    });
    return ok;
}

BlockReport block_report(const Structure& r, Mask a) {
    BlockReport b;
    b.monomorphic_block = is_monomorphic_block(r, a);
    b.strong_block = is_strong_block(r, a);
    b.fraisse_interval = is_fraisse_interval(r, a);
    b.fraisse_monomorphic = b.fraisse_interval && is_monomorphic(restrict(r, a));
    if (r.ordered) {
        bool contiguous = true;
        if (a) {
            int lo = __builtin_ctzll(a), hi = 63 - __builtin_clzll(a);
            contiguous = popcount(a) == hi - lo + 1;
        }
        b.interval_monomorphic = contiguous && b.monomorphic_block;
    }
    return b;
}

bool is_p_monomorphic(const Structure& r, int p) {
    if (p < 0 || p > r.n) throw StructureError("monomorphy: p out of range");
    std::string first;
    bool have = false;
    return all_subsets(r.n, p, [&](Mask s) {
        std::string c = canonical_code(restrict(r, s));
        if (!have) {
            first = std::move(c);
            have = true;
            return true;
        }
        return c == first;
    });
}

bool is_le_p_monomorphic(const Structure& r, int p) {
    for (int j = 1; j <= std::min(p, r.n); ++j)
        if (!is_p_monomorphic(r, j)) return false;
    return true;
}

bool is_monomorphic(const Structure& r) { return is_le_p_monomorphic(r, r.n); }

bool is_chainable_ordered(const Structure& r) {
    if (!r.ordered) throw StructureError("chainable: structure must be ordered");
    for (int x = 1; x < r.n; ++x)
        if (r.loop_type(x) != r.loop_type(0)) return false;
    for (int x = 0; x < r.n; ++x)
        for (int y = x + 1; y < r.n; ++y)
            if (r.pair_type(x, y) != r.pair_type(0, 1)) return false;
    return true;
}

std::optional<std::vector<int>> find_chaining_order(const Structure& r) {
    if (r.n > 8) throw StructureError("chaining order: at most 8 vertices");
    for (int x = 1; x < r.n; ++x)
        if (r.loop_type(x) != r.loop_type(0)) return std::nullopt;
    std::vector<int> order(r.n);
    std::iota(order.begin(), order.end(), 0);
    if (r.n <= 1) return order;
    auto ext = [&](int u, int v) {
        std::uint64_t t = r.pair_type(u, v);
        return r.ordered ? (t << 1) | (u < v) : t;
    };
    do {
        const std::uint64_t alpha = ext(order[0], order[1]);
        bool ok = true;
        for (int i = 0; i < r.n && ok; ++i)
            for (int j = i + 1; j < r.n && ok; ++j)
                if (ext(order[i], order[j]) != alpha) ok = false;
        if (ok) return order;
    } while (std::next_permutation(order.begin(), order.end()));
    return std::nullopt;
}

namespace {

struct MonoCounter {
    int n, k, p;
    Structure s;
    std::vector<int> ref;  // type id of {0..j-1}, per size j
    std::unordered_map<std::string, int> ids;
    std::uint64_t count = 0;

    int id_of(Mask m) { return ids.emplace(labeled_code(restrict(s, m)), int(ids.size())).first->second; }

    // every subset of {0..v} containing v with at most p elements matches the reference type
    bool consistent(int v) {
        const int top = std::min(p, v + 1);
        for (int j = 1; j <= top; ++j) {
            if (j - 1 == v) ref[j] = id_of((bit(v + 1)) - 1);
            bool ok = all_subsets(v, j - 1, [&](Mask f) { return id_of(f | bit(v)) == ref[j]; });
            if (!ok) return false;
        }
        return true;
    }

    void place(int v) {
        if (v == n) {
            ++count;
            return;
        }
        // loop bits then, for each earlier u and relation, the pair (u,v),(v,u)
        const int bits = k + 2 * k * v;
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << bits); ++b) {
            int pos = 0;
            for (int i = 0; i < k; ++i) s.set(i, v, v, b >> pos++ & 1);
            for (int u = 0; u < v; ++u)
                for (int i = 0; i < k; ++i) {
                    s.set(i, u, v, b >> pos++ & 1);
                    s.set(i, v, u, b >> pos++ & 1);
                }
            if (consistent(v)) place(v + 1);
        }
        for (int i = 0; i < k; ++i)
            for (int u = 0; u <= v; ++u) s.set(i, u, v, false), s.set(i, v, u, false);
    }
};

}  // namespace

std::uint64_t count_le_p_monomorphic_ordered(int n, int k, int p) {
    if (n < 1 || n > 8 || k < 1 || k > 3) throw StructureError("monomorphic count: n in 1..8 and k in 1..3");
    MonoCounter c{n, k, p, Structure(n, k, true, Kind::ordered_binary), std::vector<int>(n + 1, -1), {}, 0};
    c.place(0);
    return c.count;
}

FrasnayReport frasnay_exhaustive(int n) {
    if (n < 1 || n > 4) throw StructureError("Frasnay check: n in 1..4");
    FrasnayReport rep;
    const std::uint64_t total = std::uint64_t(1) << (n * n);
    for (std::uint64_t b = 0; b < total; ++b) {
        Structure s(n, 1, false, Kind::generic);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (b >> (x * n + y) & 1) s.set(0, x, y, true);
        ++rep.relations;
        if (!is_le_p_monomorphic(s, 3)) continue;
        ++rep.le3_monomorphic;
        if (find_chaining_order(s)) ++rep.chainable;
        else rep.failures.push_back(s);
    }
    return rep;
}

namespace {

void check_pair(const Structure& r, int x, int y, const char* what) {
    check_vertex(r, x, what);
    check_vertex(r, y, what);
    if (x == y) throw StructureError(std::string(what) + ": x and y must differ");
    if (r.ordered) throw StructureError(std::string(what) + ": structure must be unordered");
}

std::vector<int> others(const Structure& r, int x, int y) {
    std::vector<int> v;
    for (int z = 0; z < r.n; ++z)
        if (z != x && z != y) v.push_back(z);
    return v;
}

}  // namespace

std::optional<std::string> tournament_witness(const Structure& t, int x, int y) {
    if (t.kind != Kind::tournament) throw StructureError("tournament witness: wrong kind");
    check_pair(t, x, y, "tournament witness");
    auto arc = [&](int u, int v) { return t.get(0, u, v); };
    auto cyc = [&](int a, int b, int c) { return (arc(a, b) && arc(b, c) && arc(c, a)) || (arc(a, c) && arc(c, b) && arc(b, a)); };
    const auto rest = others(t, x, y);
    const int m = int(rest.size());
    // four-element configurations
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            int u = rest[i], v = rest[j];
            int with_both = cyc(x, y, u) + cyc(x, y, v);
            int with_one = cyc(x, u, v) + cyc(y, u, v);
            if (with_both + with_one == 2 && with_both == 1) return "3-cycle of B";
            if (with_both == 0 && with_one == 1) return "diamond border";
        }
    // five-element configurations over a 3-cycle away from x and y
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            for (int l = j + 1; l < m; ++l) {
                int a = rest[i], b = rest[j], c = rest[l];
                if (!cyc(a, b, c)) continue;
                auto passes = [&](int s, int e) { return arc(s, a) && arc(s, b) && arc(s, c) && arc(a, e) && arc(b, e) && arc(c, e); };
                if ((arc(x, y) && passes(x, y)) || (arc(y, x) && passes(y, x))) return "autodual double diamond";
                if (cyc(x, y, a) && cyc(x, y, b) && cyc(x, y, c)) return "D configuration";
            }
    return std::nullopt;
}

std::optional<std::string> digraph_witness(const Structure& g, int x, int y) {
    if (g.kind != Kind::digraph) throw StructureError("digraph witness: wrong kind");
    check_pair(g, x, y, "digraph witness");
    // 2 = (1,0), 1 = (0,1), 3 = symmetric, 0 = empty
    auto d = [&](int u, int v) { return g.d(0, u, v); };
    auto asym = [](unsigned e) { return e == 1 || e == 2; };
    auto category = [&](unsigned e) { return asym(e) ? 1 : e; };
    const auto rest = others(g, x, y);

    for (int z : rest)
        if (category(d(x, z)) != category(d(y, z))) return "pair categories";

    for (auto [a, b] : {std::pair{x, y}, std::pair{y, x}})
        for (int z : rest) {
            if (d(a, z) != 2 || d(z, b) != 2) continue;  // a path a -> z -> b
            for (int t : rest) {
                if (t == z) continue;
                const unsigned zt = d(z, t);
                if (d(b, t) == 2 && d(t, a) == 2 && asym(zt)) return "square Q1";
                if (d(b, t) == 3 && d(t, a) == 3 && zt != 3) return "square Q2";
                if (d(b, t) == 0 && d(t, a) == 0 && zt != 0) return "square Q3";
                if (d(a, t) == 2 && d(t, b) == 2 && !asym(zt)) return "square Q4";
                if (d(a, t) == 2 && d(b, t) == 2 && zt != 2) return "square Q5";
                if (d(t, a) == 2 && d(t, b) == 2 && zt != 1) return "square Q5";
            }
        }

    const int m = int(rest.size());
    for (unsigned alpha : {2u, 1u}) {
        const unsigned beta = 3 - alpha;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                for (int l = j + 1; l < m; ++l) {
                    int a = rest[i], b = rest[j], c = rest[l];
                    bool cycle = (d(a, b) == 2 && d(b, c) == 2 && d(c, a) == 2) || (d(a, b) == 1 && d(b, c) == 1 && d(c, a) == 1);
                    if (!cycle) continue;
                    if (d(x, a) == alpha && d(x, b) == alpha && d(x, c) == alpha && d(y, a) == beta && d(y, b) == beta &&
                        d(y, c) == beta)
                        return "opposed diamonds";
                }
        for (int a : rest)
            for (int b : rest)
                for (int c : rest) {
                    if (a == b || b == c || a == c) continue;
                    if (d(x, a) != alpha || d(a, y) != alpha || d(y, b) != alpha || d(b, x) != alpha || d(x, c) != alpha ||
                        d(c, y) != alpha)
                        continue;
                    if (asym(d(a, c)) && !asym(d(a, b)) && !asym(d(b, c))) return "prism";
                }
    }
    return std::nullopt;
}

GrowthReport growth_classify(const std::function<Structure(int)>& prefix, int nmax, GrowthOptions opt) {
    if (nmax < 1) throw StructureError("growth: nmax must be positive");
    const int cap = opt.cap > 0 ? opt.cap : 2 * nmax;
    GrowthReport rep;
    for (int m = 1; m <= nmax; ++m) {
        Structure s = prefix(m);
        if (!s.ordered) throw StructureError("growth: the classifier needs ordered structures");
        rep.sizes.push_back(m);
        rep.dim_mon.push_back(equivalence_classes(s).dim_mon);
    }
    const auto& dm = rep.dim_mon;
    const int w = std::max(2, opt.window), len = int(dm.size());
    // rising: non-decreasing across the window with at least one new class
    bool stable = len >= w, rising = len >= w;
    for (int i = len - w + 1; i < len && i > 0; ++i) {
        if (dm[i] != dm[i - 1]) stable = false;
        if (dm[i] < dm[i - 1]) rising = false;
    }
    if (len >= w && dm[len - 1] == dm[len - w]) rising = false;
    if (stable) rep.verdict = "polynomial-candidate";
    else if (rising || dm.back() >= cap) rep.verdict = "exponential-lower-bound";
    else rep.verdict = "undetermined";
    return rep;
}

}  // namespace rs
