#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relstruct/core.hpp"
#include "relstruct/series.hpp"

namespace rs {

// Interned isomorphism types of every subset of R with at most max_size elements.
// Dense storage up to 22 vertices, hashed above.
class SubsetTypes {
public:
    SubsetTypes(const Structure& r, int max_size, int threads = 1);
    int id(Mask s) const;
    int max_size() const { return max_size_; }
    int type_count() const { return types_; }

private:
    int n_ = 0, max_size_ = 0, types_ = 0;
    std::vector<int> dense_;
    std::unordered_map<Mask, int> sparse_;
};

// x and y are F-equivalent for every k-subset F of V \ {x,y}
bool k_equivalent(const Structure& r, int x, int y, int k);
bool le_k_equivalent(const Structure& r, int x, int y, int k);
// full equivalence on a finite structure: <= (n-2)
bool fully_equivalent(const Structure& r, int x, int y);

// the level at which <=t-equivalence is known to coincide with equivalence for this kind
int kind_threshold(Kind kind, int n);

enum class EquivMode { threshold, verify };

struct EquivalenceResult {
    std::string level;  // "full" or the decimal t
    int level_k = 0;
    std::vector<std::vector<int>> classes;  // sorted, each sorted
    int dim_mon = 0;
    int threshold_used = 0;
    bool transitive = true;
    // verify mode only
    bool verified = false;
    bool mismatch = false;
    std::vector<std::vector<int>> full_classes;
};

EquivalenceResult le_k_classes(const Structure& r, int k, int threads = 1);
EquivalenceResult equivalence_classes(const Structure& r, EquivMode mode = EquivMode::threshold, int threads = 1);

// ordered structures: chain-coinciding, chain-opposed, clique or antichain per relation,
// joined with '/' when k > 1; "point" for singletons, "mixed" if the class is not chainable
std::vector<std::string> class_annotations(const Structure& r, const std::vector<std::vector<int>>& classes);

struct BlockReport {
    bool monomorphic_block = false;
    bool strong_block = false;
    bool fraisse_interval = false;
    bool fraisse_monomorphic = false;
    std::optional<bool> interval_monomorphic;  // ordered structures only
};

// subsets with the same trace outside A and the same count inside A are isomorphic (n <= 22)
bool is_monomorphic_block(const Structure& r, Mask a);
// every pair of equal-size subsets of A is linked by an isomorphism that extends by the
// identity outside A (|A| <= 7 when unordered)
bool is_strong_block(const Structure& r, Mask a);
// every local isomorphism of R|A extends by the identity outside A
bool is_fraisse_interval(const Structure& r, Mask a);
BlockReport block_report(const Structure& r, Mask a);

bool is_p_monomorphic(const Structure& r, int p);
bool is_le_p_monomorphic(const Structure& r, int p);
bool is_monomorphic(const Structure& r);
// ordered: every loop equal and every pair x<y of the same type
bool is_chainable_ordered(const Structure& r);
// a linear order, as the vertex list from least to greatest, whose local isomorphisms
// all preserve R (n <= 8)
std::optional<std::vector<int>> find_chaining_order(const Structure& r);

// number of (<=p)-monomorphic ordered type-k structures on n elements, by pruned backtracking
std::uint64_t count_le_p_monomorphic_ordered(int n, int k, int p);

struct FrasnayReport {
    std::uint64_t relations = 0;
    std::uint64_t le3_monomorphic = 0;
    std::uint64_t chainable = 0;
    std::vector<Structure> failures;
};
// every binary relation on n elements (n <= 4)
FrasnayReport frasnay_exhaustive(int n);

// configurations certifying that x and y are not equivalent; empty when they are
std::optional<std::string> tournament_witness(const Structure& t, int x, int y);
std::optional<std::string> digraph_witness(const Structure& g, int x, int y);

struct GrowthOptions {
    int window = 3;
    int cap = 0;  // 0 means 2 * nmax
};

struct GrowthReport {
    std::string verdict;  // polynomial-candidate, exponential-lower-bound or undetermined
    std::vector<int> sizes;
    std::vector<int> dim_mon;
    std::vector<BigInt> profile;  // filled by callers that know the family's profile
    double ratio = 0;             // last profile ratio when exponential
};

// prefix(m) is the ordered substructure on the first m elements
GrowthReport growth_classify(const std::function<Structure(int)>& prefix, int nmax, GrowthOptions opt = {});

}  // namespace rs
