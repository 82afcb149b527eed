#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relstruct/core.hpp"
#include "relstruct/monomorph.hpp"
#include "relstruct/series.hpp"

namespace rs {

enum class FamilyKind {
    g0, g1, g2, g3, g4, g5, g6,
    h1, h2, h3, h4, h5, h6, h7, h8, h9, h10,
    t_fib, t_pow, t_gap, t_half, t_half1,
    clique_sum, infinite_path, lex_sum3, sturmian
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::g0;
    int block_size = 0;  // clique_sum only, 0 is infinite
    int copies = 0;      // clique_sum only, 0 is infinite
};

struct FamilyInfo {
    std::string name;
    FamilyKind kind;
    std::string anchor;  // the defining rule, and the formula when one is registered
    bool ordered;
};

struct FamilyError : StructureError {
    using StructureError::StructureError;
};

const std::vector<FamilyInfo>& family_registry();
// "g0".."g6", "h1".."h10", "t_fib", "ot:1:1:7", "clique_sum", "clique_sum:3", "clique_sum:3x4",
// "path", "lex3", "sturmian"
FamilySpec parse_family(const std::string& name);
std::string family_name(const FamilySpec& f);
bool family_ordered(const FamilySpec& f);

// Vertex numbering: extra vertices first, then (i,s) at offset + 2i + s.
// Templates follow the order (0,0) < (0,1) < (1,0) < ... after the optional a.
int vertex_count(const FamilySpec& f, int m);
Structure materialize(const FamilySpec& f, int m);

struct ProfileOptions {
    int threads = 1;
    int m_cap = 0;  // 0 means nmax + 16
};

struct ProfileReport {
    std::string family;
    std::vector<int> n;
    std::vector<BigInt> phi;
    std::vector<int> m_used;  // smallest m already giving the saturated count
    int m_final = 0;          // the confirming truncation
    std::uint64_t codes_computed = 0;
};

// saturated subset sweep; throws FamilyError when the cap is reached first
ProfileReport profile(const FamilySpec& f, int nmax, ProfileOptions opt = {});
// number of code computations profile() performs when saturation holds at the first check
std::uint64_t sweep_cost(const FamilySpec& f, int nmax);

std::optional<BigInt> closed_form(const FamilySpec& f, int n);
std::optional<RationalGF> generating_function(const FamilySpec& f);
// formula values 0..N from the registered generating function or partition count
std::optional<std::vector<BigInt>> reference_series(const FamilySpec& f, int N);

struct FormulaCheck {
    int n;
    BigInt expected, actual;
    bool pass;
};
std::vector<FormulaCheck> closed_form_check(const FamilySpec& f, const std::vector<BigInt>& phi);
std::vector<FormulaCheck> closed_form_check(const FamilySpec& f, int nmax);

std::string fibonacci_word(int length);
// distinct factors of length n; throws when the word is shorter than 3n
int factor_count(const std::string& word, int n);
// consecutivity arcs in relation 0, letter 1 as a loop in relation 1
Structure word_structure(const std::string& word);
// isomorphism types of indecomposable induced substructures of size n
int indecomposable_type_count(const Structure& r, int n);

// growth classification along ordered prefixes; the profile is attached
GrowthReport growth_classify(const FamilySpec& f, int nmax, GrowthOptions opt = {});

}  // namespace rs
