#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "relstruct/monomorph.hpp"
#include "relstruct/permlib.hpp"

using namespace rs;

namespace {

Structure graph(int n, std::initializer_list<std::pair<int, int>> edges) {
    Structure g(n, 1, false, Kind::graph);
    for (auto [a, b] : edges) g.set(0, a, b, true), g.set(0, b, a, true);
    return g;
}

Structure tournament(int n, std::initializer_list<std::pair<int, int>> arcs) {
    Structure t(n, 1, false, Kind::tournament);
    for (auto [a, b] : arcs) t.set(0, a, b, true);
    return t;
}

Structure slice(const Structure& r, int i) {
    Structure s(r.n, 1, r.ordered, Kind::ordered_binary);
    for (int x = 0; x < r.n; ++x)
        for (int y = 0; y < r.n; ++y) s.set(0, x, y, r.get(i, x, y));
    return s;
}

// one representative per isomorphism type
template <class Gen>
std::vector<Structure> types_of(std::uint64_t count, Gen&& gen) {
    std::map<std::string, Structure> seen;
    for (std::uint64_t b = 0; b < count; ++b) {
        Structure s = gen(b);
        seen.emplace(canonical_code(s), s);
    }
    std::vector<Structure> out;
    for (auto& [c, s] : seen) out.push_back(s);
    return out;
}

// pairwise equivalence straight from the definition, F ranging over all subsets
bool equivalent_by_subsets(const Structure& r, int x, int y) {
    Mask rest = r.all() & ~(Mask(1) << x) & ~(Mask(1) << y);
    for (Mask f = rest;; f = (f - 1) & rest) {
        if (!oracle::isomorphic(restrict(r, f | (Mask(1) << x)), restrict(r, f | (Mask(1) << y)))) return false;
        if (!f) break;
    }
    return true;
}

bool same_class(const std::vector<std::vector<int>>& classes, int x, int y) {
    for (auto& c : classes) {
        bool hx = std::count(c.begin(), c.end(), x), hy = std::count(c.begin(), c.end(), y);
        if (hx || hy) return hx && hy;
    }
    return false;
}

// the meet of two partitions of {0..n-1}
std::vector<std::vector<int>> meet(int n, const std::vector<std::vector<int>>& p, const std::vector<std::vector<int>>& q) {
    std::map<std::pair<int, int>, std::vector<int>> cells;
    std::vector<int> cp(n), cq(n);
    for (size_t i = 0; i < p.size(); ++i)
        for (int v : p[i]) cp[v] = int(i);
    for (size_t i = 0; i < q.size(); ++i)
        for (int v : q[i]) cq[v] = int(i);
    for (int v = 0; v < n; ++v) cells[{cp[v], cq[v]}].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [k, c] : cells) out.push_back(c);
    std::sort(out.begin(), out.end());
    return out;
}

// the four-element ordered counterexample: x<y<z<t, rho = {(x,y),(x,z),(x,t),(z,y)}
Structure counterexample() {
    Structure r(4, 1, true, Kind::ordered_binary);
    for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {0, 3}, {2, 1}}) r.set(0, a, b, true);
    return r;
}

}  // namespace

TEST_CASE("k-equivalence") {
    // 0 and 1 are twins
    Structure g = graph(5, {{0, 2}, {1, 2}, {2, 3}, {3, 4}});
    for (int k = 0; k <= 3; ++k) CHECK(k_equivalent(g, 0, 1, k));
    Structure p4 = graph(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_FALSE(k_equivalent(p4, 0, 3, 1));
    CHECK(k_equivalent(p4, 0, 3, 0));
    Structure c3 = tournament(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(k_equivalent(c3, 0, 1, 1));
    CHECK(k_equivalent(c3, 1, 2, 1));
    CHECK_THROWS_AS(k_equivalent(p4, 0, 3, 3), StructureError);
    CHECK_THROWS_AS(k_equivalent(p4, 1, 1, 0), StructureError);
    CHECK_THROWS_AS(k_equivalent(p4, 0, 3, -1), StructureError);
}

TEST_CASE("equivalence classes") {
    // K3 beside an independent triple
    Structure g = graph(6, {{0, 1}, {1, 2}, {0, 2}});
    auto e = equivalence_classes(g);
    CHECK(e.dim_mon == 2);
    CHECK(e.classes == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
    CHECK(e.threshold_used == 1);
    CHECK(e.level == "1");
    auto p4 = equivalence_classes(graph(4, {{0, 1}, {1, 2}, {2, 3}}), EquivMode::verify);
    CHECK(p4.dim_mon == 4);
    CHECK(p4.verified);
    CHECK_FALSE(p4.mismatch);
    auto c3 = equivalence_classes(tournament(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(c3.dim_mon == 1);
    CHECK(c3.level == "full");
    CHECK(kind_threshold(Kind::tournament, 10) == 3);
    CHECK(kind_threshold(Kind::digraph, 10) == 3);
    CHECK(kind_threshold(Kind::bichain, 10) == 2);
    CHECK(kind_threshold(Kind::ordered_binary, 10) == 2);
    CHECK(kind_threshold(Kind::generic, 10) == 8);
    CHECK(kind_threshold(Kind::tournament, 4) == 2);
    CHECK(equivalence_classes(Structure(1, 1, false, Kind::graph)).dim_mon == 1);
    CHECK_THROWS_AS(equivalence_classes(Structure(0, 1, false, Kind::graph)), StructureError);
}

TEST_CASE("class annotations") {
    // chain-coinciding block then an antichain block, all of block one before block two
    Structure r(5, 1, true, Kind::ordered_binary);
    for (int x = 0; x < 3; ++x)
        for (int y = x; y < 3; ++y) r.set(0, x, y, true);
    auto e = equivalence_classes(r);
    auto notes = class_annotations(r, e.classes);
    REQUIRE(e.classes.size() == notes.size());
    CHECK(e.classes == std::vector<std::vector<int>>{{0, 1, 2}, {3, 4}});
    CHECK(notes == std::vector<std::string>{"chain-coinciding", "antichain"});
    Structure q(3, 2, true, Kind::ordered_binary);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            q.set(0, x, y, true);
            if (y < x) q.set(1, x, y, true);
        }
    CHECK(class_annotations(q, {{0, 1, 2}}) == std::vector<std::string>{"clique/chain-opposed"});
}

TEST_CASE("the definition sweep matches the subset-table route") {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 300; ++t) {
        int n = 2 + rng() % 5;
        bool ordered = t % 2;
        auto r = oracle::random_structure(rng, n, 1 + t % 3 / 2, ordered, ordered ? Kind::ordered_binary : Kind::generic, 0.4);
        auto e = equivalence_classes(r, EquivMode::verify);
        CHECK(e.transitive);
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                bool expect = equivalent_by_subsets(r, x, y);
                CHECK(same_class(e.full_classes, x, y) == expect);
                CHECK(fully_equivalent(r, x, y) == expect);
            }
    }
}

TEST_CASE("threshold theorems, exhaustive on small sizes") {
    for (int n = 1; n <= 6; ++n) {
        auto graphs = types_of(std::uint64_t(1) << (n * (n - 1) / 2), [&](std::uint64_t b) { return oracle::graph_from_bits(n, b); });
        for (auto& g : graphs) CHECK_FALSE(equivalence_classes(g, EquivMode::verify).mismatch);
        auto tours = types_of(std::uint64_t(1) << (n * (n - 1) / 2), [&](std::uint64_t b) { return oracle::tournament_from_bits(n, b); });
        for (auto& t : tours) CHECK_FALSE(equivalence_classes(t, EquivMode::verify).mismatch);
    }
    for (int n = 1; n <= 4; ++n) {
        const int bits = n * (n - 1);
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << bits); ++b) {
            Structure r(n, 1, true, Kind::ordered_binary);
            int pos = 0;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (x != y) r.set(0, x, y, b >> pos++ & 1);
            CHECK_FALSE(equivalence_classes(r, EquivMode::verify).mismatch);
        }
    }
    // bichains
    for (int n = 1; n <= 6; ++n)
        for_each_perm(n, [&](const Perm& p) { CHECK_FALSE(equivalence_classes(perm_to_bichain(p), EquivMode::verify).mismatch); });
}

TEST_CASE("lower levels can be coarser") {
    // a diamond-border pair needs two witnesses: visible at level 2 only
    Structure t = tournament(4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}, {3, 1}, {3, 2}});
    auto low = le_k_classes(t, 0);
    auto full = le_k_classes(t, 2);
    CHECK(low.dim_mon == 1);
    CHECK(full.dim_mon == 2);
}

TEST_CASE("equivalence classes are the coarsest monomorphic decomposition") {
    for (int n = 2; n <= 6; ++n) {
        auto graphs = types_of(std::uint64_t(1) << (n * (n - 1) / 2), [&](std::uint64_t b) { return oracle::graph_from_bits(n, b); });
        for (auto& g : graphs) {
            auto e = equivalence_classes(g, EquivMode::verify);
            std::vector<Mask> cls;
            for (auto& c : e.full_classes) cls.push_back(vector_to_mask(c));
            for (Mask c : cls) CHECK(is_monomorphic_block(g, c));
            for (size_t i = 0; i < cls.size(); ++i)
                for (size_t j = i + 1; j < cls.size(); ++j) CHECK_FALSE(is_monomorphic_block(g, cls[i] | cls[j]));
        }
    }
}

TEST_CASE("k and <=k coincide from 2k+1 elements") {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 400; ++t) {
        int k = 1 + t % 3, n = 2 * k + 1 + rng() % 2;
        bool ordered = rng() % 2;
        auto r = oracle::random_structure(rng, n, 1, ordered, ordered ? Kind::ordered_binary : Kind::generic, 0.5);
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) CHECK(k_equivalent(r, x, y, k) == le_k_equivalent(r, x, y, k));
    }
}

TEST_CASE("ordered structures split relation by relation") {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 200; ++t) {
        int n = 2 + rng() % 6;
        auto r = oracle::random_structure(rng, n, 2, true, Kind::ordered_binary, t % 2 ? 0.5 : 0.2);
        auto e = equivalence_classes(r, EquivMode::verify);
        auto e0 = equivalence_classes(slice(r, 0), EquivMode::verify), e1 = equivalence_classes(slice(r, 1), EquivMode::verify);
        CHECK(e.full_classes == meet(n, e0.full_classes, e1.full_classes));
        Mask a = rng() & r.all();
        CHECK(is_monomorphic_block(r, a) == (is_monomorphic_block(slice(r, 0), a) && is_monomorphic_block(slice(r, 1), a)));
    }
}

TEST_CASE("block report") {
    // a chain: every subset is a monomorphic block, Fraisse only on index intervals
    Structure chain(5, 1, true, Kind::ordered_binary);
    for (int x = 0; x < 5; ++x)
        for (int y = x; y < 5; ++y) chain.set(0, x, y, true);
    for (Mask a = 1; a <= chain.all(); ++a) {
        auto b = block_report(chain, a);
        int lo = __builtin_ctzll(a), hi = 63 - __builtin_clzll(a);
        bool contiguous = popcount(a) == hi - lo + 1;
        CHECK(b.monomorphic_block);
        CHECK(b.fraisse_interval == contiguous);
        CHECK(b.interval_monomorphic == contiguous);
    }
    auto cx = block_report(counterexample(), 0b1110);
    CHECK(cx.fraisse_interval);
    REQUIRE(cx.interval_monomorphic.has_value());
    CHECK_FALSE(*cx.interval_monomorphic);
    CHECK_FALSE(block_report(graph(3, {}), 0b111).interval_monomorphic.has_value());
    CHECK_THROWS_AS(is_strong_block(graph(9, {}), 0x1ff), StructureError);
}

TEST_CASE("block notions nest") {
    std::mt19937_64 rng(67);
    for (int t = 0; t < 10000; ++t) {
        int n = 1 + rng() % 7;
        bool ordered = t % 2;
        auto r = oracle::random_structure(rng, n, 1, ordered, ordered ? Kind::ordered_binary : Kind::generic, t % 3 ? 0.5 : 0.15);
        Mask a = rng() & r.all();
        if (t % 5 == 0) a &= a - 1;
        auto b = block_report(r, a);
        if (b.fraisse_monomorphic) CHECK(b.strong_block);
        if (b.strong_block) CHECK(b.monomorphic_block);
        if (ordered && b.interval_monomorphic.value()) CHECK(b.monomorphic_block);
    }
}

TEST_CASE("Fraisse interval: bijection sweep agrees with point maps") {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 2000; ++t) {
        int n = 1 + rng() % 7;
        auto r = oracle::random_structure(rng, n, 1, false, Kind::generic, 0.3);
        // make some vertices look alike from outside
        if (n >= 3)
            for (int y = 0; y < n; ++y) {
                r.set(0, 1, y, r.get(0, 0, y));
                r.set(0, y, 1, r.get(0, y, 0));
            }
        Mask a = rng() & r.all();
        Mask outside = r.all() & ~a;
        bool expect = true;
        for (int p : mask_to_vector(a))
            for (int q : mask_to_vector(a)) {
                if (p == q || r.loop_type(p) != r.loop_type(q)) continue;
                for (int v : mask_to_vector(outside))
                    if (r.pair_type(p, v) != r.pair_type(q, v)) expect = false;
            }
        CHECK(is_fraisse_interval(r, a) == expect);
    }
}

TEST_CASE("monomorphy and chainability") {
    Structure eq(4, 1, true, Kind::ordered_binary);
    for (int x = 0; x < 4; ++x) eq.set(0, x, x, true);
    CHECK(is_chainable_ordered(eq));
    CHECK(find_chaining_order(eq).has_value());
    Structure c3(3, 1, false, Kind::generic);
    c3.set(0, 0, 1, true), c3.set(0, 1, 2, true), c3.set(0, 2, 0, true);
    CHECK(is_le_p_monomorphic(c3, 3));
    CHECK_FALSE(find_chaining_order(c3).has_value());
    CHECK_THROWS_AS(is_chainable_ordered(c3), StructureError);
    // ordered: chainable iff 2-monomorphic from three elements on
    std::mt19937_64 rng(73);
    for (int t = 0; t < 3000; ++t) {
        int n = 3 + rng() % 4;
        auto r = oracle::random_structure(rng, n, 1 + t % 2, true, Kind::ordered_binary, 0.5);
        if (t % 3 == 0) {
            // force many chainable samples
            unsigned loop = rng() % 2, pt = rng() % 4;
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) r.set(0, x, y, x == y ? loop : x < y ? pt >> 1 : pt & 1);
        }
        CHECK(is_chainable_ordered(r) == is_p_monomorphic(r, 2));
        CHECK(is_chainable_ordered(r) == find_chaining_order(r).has_value());
    }
}

TEST_CASE("(<=2)-monomorphic ordered structures on four elements") {
    std::uint64_t brute = 0;
    for (std::uint64_t b = 0; b < (1u << 16); ++b) {
        Structure r(4, 1, true, Kind::ordered_binary);
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) r.set(0, x, y, b >> (4 * x + y) & 1);
        if (is_le_p_monomorphic(r, 2)) ++brute;
    }
    CHECK(brute == 8);
    CHECK(count_le_p_monomorphic_ordered(4, 1, 2) == 8);
    CHECK(count_le_p_monomorphic_ordered(4, 2, 2) == 64);
    CHECK(count_le_p_monomorphic_ordered(3, 1, 3) == 8);
    // loops agree, the three pairs are free
    CHECK(count_le_p_monomorphic_ordered(3, 1, 1) == 2 * 64);
}

TEST_CASE("Frasnay on four elements") {
    auto rep = frasnay_exhaustive(4);
    CHECK(rep.relations == 65536);
    CHECK(rep.le3_monomorphic > 0);
    CHECK(rep.failures.empty());
    CHECK(rep.chainable == rep.le3_monomorphic);
    std::mt19937_64 rng(79);
    int hits = 0;
    for (int t = 0; t < 20000; ++t) {
        auto r = oracle::random_structure(rng, 5, 1, false, Kind::generic, 0.5);
        if (t % 2) {
            // chain-like samples so that the hypothesis holds often
            auto p = oracle::random_perm(rng, 5);
            unsigned loop = rng() % 2, pt = rng() % 4;
            for (int x = 0; x < 5; ++x)
                for (int y = 0; y < 5; ++y) r.set(0, x, y, x == y ? loop : p[x] < p[y] ? pt >> 1 : pt & 1);
            if (rng() % 2) r.set(0, 0, 1, !r.get(0, 0, 1));
        }
        if (!is_le_p_monomorphic(r, 3)) continue;
        ++hits;
        CHECK(find_chaining_order(r).has_value());
    }
    CHECK(hits > 100);
}

TEST_CASE("tournament witnesses") {
    // diamond: 3 beats the cycle 0 -> 1 -> 2 -> 0
    Structure dia = tournament(4, {{0, 1}, {1, 2}, {2, 0}, {3, 0}, {3, 1}, {3, 2}});
    CHECK(tournament_witness(dia, 3, 0) == std::optional<std::string>("diamond border"));
    CHECK_FALSE(tournament_witness(dia, 0, 1).has_value());
    // acyclic interval {0,1,2} under a vertex that beats it
    Structure ac = tournament(4, {{0, 1}, {0, 2}, {1, 2}, {3, 0}, {3, 1}, {3, 2}});
    CHECK_FALSE(tournament_witness(ac, 0, 2).has_value());
    CHECK_THROWS_AS(tournament_witness(graph(3, {}), 0, 1), StructureError);
    CHECK_THROWS_AS(tournament_witness(dia, 1, 1), StructureError);
    std::map<std::string, int> tags;
    for (int n = 2; n <= 6; ++n)
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << (n * (n - 1) / 2)); ++b) {
            auto t = oracle::tournament_from_bits(n, b);
            auto e = equivalence_classes(t, EquivMode::verify);
            CHECK(e.transitive);
            for (int x = 0; x < n; ++x)
                for (int y = x + 1; y < n; ++y) {
                    auto w = tournament_witness(t, x, y);
                    CHECK(w.has_value() != same_class(e.full_classes, x, y));
                    if (w) ++tags[*w];
                }
        }
    for (auto tag : {"3-cycle of B", "diamond border", "autodual double diamond", "D configuration"}) CHECK(tags[tag] > 0);
}

TEST_CASE("digraph witnesses") {
    auto check_all = [](const Structure& g, std::map<std::string, int>& tags) {
        auto e = equivalence_classes(g, EquivMode::verify);
        CHECK(e.transitive);
        for (int x = 0; x < g.n; ++x)
            for (int y = x + 1; y < g.n; ++y) {
                auto w = digraph_witness(g, x, y);
                bool eq = same_class(e.full_classes, x, y);
                CHECK(w.has_value() != eq);
                if (w) ++tags[*w];
            }
    };
    auto from_bits = [](int n, std::uint64_t b) {
        Structure g(n, 1, false, Kind::digraph);
        int pos = 0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y) g.set(0, x, y, b >> pos++ & 1);
        return g;
    };
    std::map<std::string, int> tags;
    for (int n = 2; n <= 4; ++n)
        for (std::uint64_t b = 0; b < (std::uint64_t(1) << (n * (n - 1))); ++b) check_all(from_bits(n, b), tags);
    std::mt19937_64 rng(83);
    for (int t = 0; t < 3000; ++t) {
        int n = 5 + rng() % 2;
        Structure g(n, 1, false, Kind::digraph);
        // mostly asymmetric samples reach the five-vertex configurations
        for (int x = 0; x < n; ++x)
            for (int y = x + 1; y < n; ++y) {
                int c = t % 2 ? rng() % 4 : (rng() % 8 < 7 ? 1 + rng() % 2 : rng() % 4);
                g.set(0, x, y, c & 1);
                g.set(0, y, x, c >> 1 & 1);
            }
        check_all(g, tags);
    }
    for (auto tag : {"pair categories", "square Q1", "square Q2", "square Q3", "square Q4", "square Q5"}) CHECK(tags[tag] > 0);
    // the five-vertex cases on fixed witnesses
    // opposed diamonds: base cycle 2 -> 3 -> 4 -> 2, x = 0 above it, y = 1 below it
    Structure od(5, 1, false, Kind::digraph);
    for (auto [a, b] : {std::pair{2, 3}, {3, 4}, {4, 2}, {0, 2}, {0, 3}, {0, 4}, {2, 1}, {3, 1}, {4, 1}}) od.set(0, a, b, true);
    CHECK(digraph_witness(od, 0, 1) == std::optional<std::string>("opposed diamonds"));
    // prism: x=0, y=1, a=2, b=3, c=4 with x->a->y->b->x, x->c->y, a->c, {a,b},{b,c} empty
    Structure pr(5, 1, false, Kind::digraph);
    for (auto [a, b] : {std::pair{0, 2}, {2, 1}, {1, 3}, {3, 0}, {0, 4}, {4, 1}, {2, 4}}) pr.set(0, a, b, true);
    CHECK(digraph_witness(pr, 0, 1) == std::optional<std::string>("prism"));
    CHECK_FALSE(fully_equivalent(pr, 0, 1));
    CHECK(le_k_equivalent(pr, 0, 1, 2));
    CHECK_THROWS_AS(digraph_witness(tournament(3, {{0, 1}, {1, 2}, {2, 0}}), 0, 1), StructureError);
}

TEST_CASE("growth classifier") {
    // three chain blocks of growing size placed one after another
    auto lex3 = [](int m) {
        Structure s(m, 1, true, Kind::ordered_binary);
        auto block = [&](int v) { return 3 * v / std::max(m, 1); };
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                int bx = block(x), by = block(y);
                bool rel = bx == by ? (bx == 0 ? x <= y : bx == 1 ? x >= y : true) : bx < by;
                s.set(0, x, y, rel);
            }
        return s;
    };
    auto rep = growth_classify(lex3, 9);
    CHECK(rep.verdict == "polynomial-candidate");
    CHECK(rep.dim_mon.back() <= 3);
    CHECK(rep.dim_mon.size() == 9);
    CHECK_THROWS_AS(growth_classify([](int m) { return Structure(m, 1, false, Kind::graph); }, 4), StructureError);
}
