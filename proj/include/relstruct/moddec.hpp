#pragma once

#include <set>
#include <string>
#include <vector>

#include "relstruct/core.hpp"

namespace rs {

enum class QuotientKind { trivial_singleton, indecomposable, chainable };
std::string quotient_kind_name(QuotientKind k);  // "trivial-singleton", "indecomposable>=3", "chainable"

struct IntervalPartition {
    std::vector<Mask> blocks;  // sorted by least vertex
    Structure quotient;        // vertex b stands for blocks[b]
    QuotientKind kind = QuotientKind::trivial_singleton;
    bool mixed_diagonal = false;  // some block carries non-uniform loops
};

// Gallai intervals; when ordered, an interval must also be contiguous
bool is_gallai_interval(const Structure& r, Mask a);
// same, inside the substructure induced on u (a must be a subset of u)
bool is_gallai_interval(const Structure& r, Mask a, Mask u);

// smallest interval of r|u containing s
Mask minimal_interval(const Structure& r, Mask s, Mask u);
Mask minimal_interval(const Structure& r, Mask s);
// smallest strong interval containing s
Mask minimal_strong_interval(const Structure& r, Mask s);

bool is_indecomposable(const Structure& r);
bool is_indecomposable(const Structure& r, Mask u);  // r|u, without materializing it

// all strong intervals (nonempty, the full set and singletons included), sorted
std::vector<Mask> strong_intervals(const Structure& r);
IntervalPartition gallai_partition(const Structure& r);

// every relation, off the diagonal, depends only on the comparison in some linear order
bool is_offdiagonal_chainable(const Structure& q);

Structure compose(const Structure& r, int v, const Structure& s);
Structure lex_sum(const Structure& quotient, const std::vector<Structure>& blocks);

std::set<std::string> indecomposable_substructures(const Structure& r, int min_size = 1);

}  // namespace rs
