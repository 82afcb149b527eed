#include <random>
#include <set>

#include "doctest.h"
#include "relstruct/permlib.hpp"
#include "relstruct/series.hpp"

using namespace rs;

namespace {

// every subset of positions whose positions and values are both contiguous
bool simple_by_subsets(const Perm& p) {
    const int n = static_cast<int>(p.size());
    for (Mask m = 1; m < (Mask(1) << n); ++m) {
        int c = popcount(m);
        if (c < 2 || c == n) continue;
        int lo = n, hi = -1, vlo = n + 1, vhi = 0;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1) {
                lo = std::min(lo, i), hi = std::max(hi, i);
                vlo = std::min(vlo, p[i]), vhi = std::max(vhi, p[i]);
            }
        if (hi - lo + 1 == c && vhi - vlo + 1 == c) return false;
    }
    return true;
}

// containment by trying every index subset
bool contains_by_subsets(const Perm& pi, const Perm& sigma) {
    const int n = static_cast<int>(pi.size()), k = static_cast<int>(sigma.size());
    bool found = false;
    if (k == 0) return true;
    if (k > n) return false;
    for_each_subset(n, k, [&](Mask m) {
        if (found) return;
        std::vector<int> vals;
        for (int i = 0; i < n; ++i)
            if (m >> i & 1) vals.push_back(pi[i]);
        found = standardize(vals) == sigma;
    });
    return found;
}

Perm delete_point(const Perm& p, int i) {
    std::vector<int> v(p);
    v.erase(v.begin() + i);
    return standardize(v);
}

bool well_formed(const DecompositionTree& t) {
    if (t.is_leaf()) return t.quotient == Perm{1};
    if (t.quotient.size() != t.blocks.size()) return false;
    if (t.quotient.size() == 2) {
        // leftmost block must not split again in the same direction
        const auto& first = t.blocks[0];
        if (!first.is_leaf() && first.quotient == t.quotient) return false;
    } else if (t.quotient.size() < 4 || !is_simple(t.quotient)) {
        return false;
    }
    for (const auto& b : t.blocks)
        if (!well_formed(b)) return false;
    return true;
}

}  // namespace

TEST_CASE("permutation text") {
    CHECK(parse_perm("2413") == Perm{2, 4, 1, 3});
    CHECK(parse_perm("10,1,2,3,4,5,6,7,8,9").size() == 10);
    CHECK(parse_perm("").empty());
    CHECK_THROWS_AS(parse_perm("2213"), PermError);
    CHECK_THROWS_AS(parse_perm("2a13"), PermError);
    CHECK(format_perm({1, 2, 3}) == "123");
    CHECK(format_perm(parse_perm("10,1,2,3,4,5,6,7,8,9")) == "10,1,2,3,4,5,6,7,8,9");
}

TEST_CASE("pattern containment") {
    CHECK(pattern_contains(parse_perm("391867452"), parse_perm("51342")));
    CHECK_FALSE(pattern_contains(parse_perm("3142"), parse_perm("2413")));
    CHECK(pattern_contains(parse_perm("3142"), {}));
    std::mt19937_64 rng(7);
    for (int t = 0; t < 400; ++t) {
        int n = 1 + rng() % 8, k = 1 + rng() % 4;
        Perm pi(n), sigma(k);
        std::iota(pi.begin(), pi.end(), 1);
        std::iota(sigma.begin(), sigma.end(), 1);
        std::shuffle(pi.begin(), pi.end(), rng);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        CHECK(pattern_contains(pi, sigma) == contains_by_subsets(pi, sigma));
    }
}

TEST_CASE("intervals and simplicity") {
    auto ivs = perm_intervals(parse_perm("2647513"));
    CHECK(std::find(ivs.begin(), ivs.end(), IndexInterval{1, 4}) != ivs.end());
    CHECK(perm_intervals(parse_perm("2413")).size() == 4 + 1);
    CHECK(perm_intervals(parse_perm("123456")).size() == 15 + 6);
    CHECK(is_simple(parse_perm("2413")));
    CHECK_FALSE(is_simple(parse_perm("123")));
    const std::vector<std::uint64_t> expected{1, 2, 0, 2, 6, 46, 338, 2926};
    for (int n = 1; n <= 8; ++n) CHECK(count_simple(n) == expected[n - 1]);
    CHECK_THROWS_AS(count_simple(10), PermError);
    for (int n = 1; n <= 7; ++n) for_each_perm(n, [&](const Perm& p) { CHECK(is_simple(p) == simple_by_subsets(p)); });
}

TEST_CASE("inflation") {
    CHECK(inflate(parse_perm("2413"), {{1}, {1, 3, 2}, {3, 2, 1}, {1, 2}}) == parse_perm("479832156"));
    Perm s = parse_perm("3142");
    CHECK(inflate(s, {{1}, {1}, {1}, {1}}) == s);
    CHECK(inflate({1}, {s}) == s);
    CHECK_THROWS_AS(inflate(s, {{1}}), PermError);
    CHECK_THROWS_AS(inflate({1, 2}, {{1}, {}}), PermError);
}

TEST_CASE("substitution decomposition") {
    auto t = substitution_decompose(parse_perm("479832156"));
    CHECK(t.quotient == Perm{2, 4, 1, 3});
    REQUIRE(t.blocks.size() == 4);
    CHECK(inflate(t.blocks[1]) == Perm{1, 3, 2});
    CHECK(inflate(t.blocks[2]) == Perm{3, 2, 1});
    CHECK(inflate(t.blocks[3]) == Perm{1, 2});
    auto s = substitution_decompose(parse_perm("2413"));
    CHECK(s.blocks.size() == 4);
    for (auto& b : s.blocks) CHECK(b.is_leaf());
    auto d = substitution_decompose(parse_perm("321"));
    CHECK(format_tree(d) == "21[1,21[1,1]]");
    for (int n = 1; n <= 7; ++n)
        for_each_perm(n, [&](const Perm& p) {
            auto tree = substitution_decompose(p);
            CHECK(inflate(tree) == p);
            CHECK(well_formed(tree));
        });
}

TEST_CASE("separable permutations") {
    CHECK_FALSE(is_separable_perm(parse_perm("2413")));
    CHECK_FALSE(is_separable_perm(parse_perm("479832156")));
    for (int n = 0; n <= 3; ++n) for_each_perm(n, [&](const Perm& p) { CHECK(is_separable_perm(p)); });
    for (int n = 1; n <= 7; ++n)
        for_each_perm(n, [&](const Perm& p) { CHECK(is_separable_perm(p) == is_separable_recursive(p)); });
    // f = 1 + x f + x f^2 lists the counts from length 1 on
    auto schroeder = solve_quadratic_series({0, 1}, {-1, 1}, {1}, 1, 8);
    for (int n = 1; n <= 9; ++n) CHECK(BigInt(count_separable_perms(n)) == schroeder.c[n - 1]);
}

TEST_CASE("exceptional permutations") {
    CHECK(exceptional_perm(2, Exceptional::i) == parse_perm("2413"));
    CHECK(exceptional_perm(2, Exceptional::ii) == parse_perm("3142"));
    CHECK(exceptional_perm(2, Exceptional::iii) == parse_perm("3142"));
    CHECK(exceptional_perm(2, Exceptional::iv) == parse_perm("2413"));
    CHECK(exceptional_perm(3, Exceptional::iv) == parse_perm("362514"));
    CHECK_THROWS_AS(exceptional_perm(1, Exceptional::i), PermError);
    for (int m = 2; m <= 4; ++m)
        for (auto v : {Exceptional::i, Exceptional::ii, Exceptional::iii, Exceptional::iv}) {
            Perm p = exceptional_perm(m, v);
            CHECK(is_permutation(p));
            CHECK(simple_by_subsets(p));
            for (int i = 0; i < 2 * m; ++i) CHECK_FALSE(simple_by_subsets(delete_point(p, i)));
        }
    // (ii) is the inverse of (iv)
    for (int m = 2; m <= 6; ++m) {
        Perm iv = exceptional_perm(m, Exceptional::iv), ii = exceptional_perm(m, Exceptional::ii), inv(2 * m);
        for (int i = 0; i < 2 * m; ++i) inv[iv[i] - 1] = i + 1;
        CHECK(inv == ii);
    }
}

TEST_CASE("simple permutations shrink by one or two points") {
    for (int n = 5; n <= 8; ++n)
        for_each_perm(n, [&](const Perm& p) {
            if (!is_simple(p)) return;
            bool ok = false;
            for (int i = 0; i < n && !ok; ++i) ok = is_simple(delete_point(p, i));
            for (int i = 0; i < n && !ok; ++i)
                for (int j = i + 1; j < n && !ok; ++j) ok = is_simple(delete_point(delete_point(p, j), i));
            CHECK(ok);
        });
}

TEST_CASE("bichain correspondence") {
    Perm pi = parse_perm("2647513");
    Structure b = perm_to_bichain(pi);
    validate(b);
    // second order listed from the bottom: positions 6 1 7 3 5 2 4
    std::vector<int> order(7);
    for (int x = 0; x < 7; ++x) order[popcount(b.col[0][x]) - 1] = x + 1;
    CHECK(order == std::vector<int>{6, 1, 7, 3, 5, 2, 4});
    CHECK(bichain_to_perm(b) == pi);
    Structure id = perm_to_bichain({1, 2, 3, 4});
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) CHECK(id.get(0, x, y) == (x <= y));
    CHECK_THROWS_AS(bichain_to_perm(Structure(3, 1, true, Kind::ordered_binary)), PermError);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        int n = 2 + rng() % 7, k = 1 + rng() % 4;
        Perm p(n), s(k);
        std::iota(p.begin(), p.end(), 1);
        std::iota(s.begin(), s.end(), 1);
        std::shuffle(p.begin(), p.end(), rng);
        std::shuffle(s.begin(), s.end(), rng);
        CHECK(bichain_to_perm(perm_to_bichain(p)) == p);
        CHECK(embeds(perm_to_bichain(s), perm_to_bichain(p)).has_value() == pattern_contains(p, s));
    }
}
