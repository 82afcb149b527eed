#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "relstruct/core.hpp"
#include "relstruct/series.hpp"

namespace rs {

enum class DiagMode { reflexive, irreflexive, mixed };
std::string diag_mode_name(DiagMode m);
DiagMode parse_diag_mode(const std::string& s);

struct TwoElementOp {
    Structure s;    // n = 2, ordered
    int index = 0;  // position in the catalog
};

// off-diagonal label of one relation: 1..4 for d(0,1) = (1,0), (0,1), (1,1), (0,0)
unsigned d_of_label(int label);
int label_of_d(unsigned d);

// index = sum_i (label_i - 1) 4^i, plus 4^k * diagonal pattern in mixed mode
std::vector<TwoElementOp> two_element_catalog(int k, DiagMode mode);

Structure sum2(const Structure& left, const TwoElementOp& op, const Structure& right);
Structure point(int k, bool loop);  // ordered one-element structure

// Gallai recursion: every quotient in the decomposition has size 2 or is chainable
bool is_separable_structure(const Structure& r);
// R has a split into an ordered prefix and suffix with one pair type across, recursively
bool is_two_decomposable(const Structure& r);

// A: 3 elements with d(0,1) != d(0,2) != d(1,2); B: 4 elements, alternating pattern
std::vector<Structure> forbidden_set_type1(DiagMode mode, bool include_a = true, bool include_b = true);
// Forb(A u B) membership; the diagonal is ignored since separability does not depend on it
bool avoids_forbidden_type1(const Structure& r);

enum class SeparableMethod { gallai, split, forbidden, tree };
std::string method_name(SeparableMethod m);
SeparableMethod parse_method(const std::string& s);

struct EnumerationBudget {
    int max_bits = 22;  // free table bits per structure, 2^max_bits structures at most
};

// isomorphism types of separable ordered type-k structures on n elements
BigInt count_separable(int k, DiagMode mode, int n, SeparableMethod method = SeparableMethod::split,
                       EnumerationBudget budget = {}, int threads = 1);

// ordered type-k structure from table bits: relation-major, then x, then y != x; mixed mode
// appends one diagonal bit per (relation, vertex)
Structure ordered_from_bits(int n, int k, DiagMode mode, std::uint64_t bits);
int free_bits(int n, int k, DiagMode mode);

// binary trees labeled 1..4 where a left child never repeats its parent's label
struct TreeNode;
using LabeledTree = std::shared_ptr<const TreeNode>;  // null is the empty tree
struct TreeNode {
    int label;
    LabeledTree left, right;
};

LabeledTree make_node(int label, LabeledTree left, LabeledTree right);
int node_count(const LabeledTree& t);
bool tree_valid(const LabeledTree& t, int labels = 4);
std::string format_tree(const LabeledTree& t);
LabeledTree parse_tree(const std::string& s);

LabeledTree tree_encode(const Structure& r);
Structure tree_decode(const LabeledTree& t, int k = 1);

// all valid trees with m nodes
std::vector<LabeledTree> enumerate_trees(int m, int labels = 4);
// counts of valid trees with 0..m nodes when there are `labels` labels
std::vector<BigInt> tree_counts(int m, int labels = 4);

}  // namespace rs
