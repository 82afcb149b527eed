#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relstruct/core.hpp"

namespace rs {

// one-line notation, values 1..n
using Perm = std::vector<int>;

struct PermError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DecompositionTree {
    Perm quotient;  // simple of length >= 4, or 12 / 21, or the leaf 1
    std::vector<DecompositionTree> blocks;
    bool is_leaf() const { return blocks.empty(); }
};

bool is_permutation(const Perm& p);
Perm parse_perm(const std::string& s);  // digits, or comma separated beyond 9
std::string format_perm(const Perm& p);
Perm standardize(const std::vector<int>& values);

bool pattern_contains(const Perm& pi, const Perm& sigma);

struct IndexInterval {
    int lo, hi;  // 0-based inclusive
    bool operator==(const IndexInterval&) const = default;
};
std::vector<IndexInterval> perm_intervals(const Perm& pi);

bool is_simple(const Perm& pi);
std::uint64_t count_simple(int n, int cap = 9);

Perm inflate(const Perm& sigma, const std::vector<Perm>& alphas);
Perm inflate(const DecompositionTree& t);
DecompositionTree substitution_decompose(const Perm& pi);
std::string format_tree(const DecompositionTree& t);

bool is_separable_perm(const Perm& pi);
// separable via the recursive sum / skew-sum splitting
bool is_separable_recursive(const Perm& pi);
std::uint64_t count_separable_perms(int n);

enum class Exceptional { i, ii, iii, iv };
Perm exceptional_perm(int m, Exceptional variant);

Structure perm_to_bichain(const Perm& sigma);
Perm bichain_to_perm(const Structure& b);

// calls f(p) for every permutation of length n in lexicographic order
template <class F>
void for_each_perm(int n, F&& f);

}  // namespace rs

#include <algorithm>
#include <numeric>

template <class F>
void rs::for_each_perm(int n, F&& f) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 1);
    do {
        f(static_cast<const Perm&>(p));
    } while (std::next_permutation(p.begin(), p.end()));
}
