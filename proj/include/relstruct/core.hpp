#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

using Mask = std::uint64_t;
constexpr int kMaxVertices = 64;

enum class Kind { graph, tournament, digraph, bichain, ordered_binary, generic };

std::string kind_name(Kind k);
Kind parse_kind(const std::string& s);

// k binary relations on {0..n-1}, each stored as packed rows and columns.
// When ordered is set the index order is the intrinsic order; it is never
// stored as one of the relations.
struct Structure {
    int n = 0;
    int k = 1;
    bool ordered = false;
    Kind kind = Kind::generic;
    std::vector<std::vector<Mask>> row;  // row[i][x] has bit y iff rho_i(x,y)
    std::vector<std::vector<Mask>> col;  // col[i][y] has bit x iff rho_i(x,y)

    Structure() = default;
    Structure(int n_, int k_, bool ordered_, Kind kind_);

    bool get(int i, int x, int y) const { return (row[i][x] >> y) & 1u; }
    void set(int i, int x, int y, bool v);

    // d_i(x,y) packed as 2 bits: rho_i(x,y) in bit 1, rho_i(y,x) in bit 0
    unsigned d(int i, int x, int y) const { return (get(i, x, y) << 1) | get(i, y, x); }
    // all relations at once, 2 bits per relation
    std::uint64_t pair_type(int x, int y) const;
    std::uint64_t loop_type(int x) const;

    Mask all() const { return n == 64 ? ~Mask(0) : ((Mask(1) << n) - 1); }
    bool operator==(const Structure& o) const;
};

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Table = std::vector<std::vector<bool>>;

// Validating constructor; throws StructureError naming the violated invariant.
Structure build(int n, int k, bool ordered, const std::vector<Table>& rels, Kind kind);
void validate(const Structure& s);

Structure restrict(const Structure& r, Mask a);
Structure restrict(const Structure& r, const std::vector<int>& verts);
// new index of old vertex v is perm[v]; only meaningful for unordered input
Structure relabel(const Structure& r, const std::vector<int>& perm);

std::string canonical_code(const Structure& r);
// serialization of the structure as labeled, used as the ordered code
std::string labeled_code(const Structure& r);

// S <= R: injective map from S to R, increasing when ordered
std::optional<std::vector<int>> embeds(const Structure& s, const Structure& r);
bool avoids_all(const Structure& r, const std::vector<Structure>& bounds);
bool is_embedding(const Structure& s, const Structure& r, const std::vector<int>& map);

std::string to_text(const Structure& s);
Structure from_text(const std::string& text);

// popcount-indexed helpers shared by the enumeration modules
inline int popcount(Mask m) { return __builtin_popcountll(m); }
std::vector<int> mask_to_vector(Mask m);
Mask vector_to_mask(const std::vector<int>& v);

// calls f(mask) for every size-s subset of the low-n bits (n < 64), colex order
template <class F>
void for_each_subset(int n, int s, F&& f) {
    if (s < 0 || s > n) return;
    if (s == 0) {
        f(Mask(0));
        return;
    }
    const Mask limit = Mask(1) << n;
    Mask m = (Mask(1) << s) - 1;
    while (m < limit) {
        f(m);
        Mask c = m & (~m + 1);
        Mask r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
}

}  // namespace rs
