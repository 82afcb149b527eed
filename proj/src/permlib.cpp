#include "relstruct/permlib.hpp"

#include <sstream>

namespace rs {

bool is_permutation(const Perm& p) {
    std::vector<char> seen(p.size() + 1, 0);
    for (int v : p) {
        if (v < 1 || v > static_cast<int>(p.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

Perm parse_perm(const std::string& s) {
    Perm p;
    if (s.find(',') != std::string::npos) {
        std::stringstream in(s);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            try {
                p.push_back(std::stoi(tok));
            } catch (const std::logic_error&) {
                throw PermError("bad permutation entry '" + tok + "'");
            }
        }
    } else {
        for (char c : s) {
            if (c < '1' || c > '9') throw PermError(std::string("bad permutation digit '") + c + "'");
            p.push_back(c - '0');
        }
    }
    if (!is_permutation(p)) throw PermError("not a permutation: " + s);
    return p;
}

std::string format_perm(const Perm& p) {
    std::string out;
    const bool wide = p.size() > 9;
    for (size_t i = 0; i < p.size(); ++i) {
        if (wide && i) out += ",";
        out += std::to_string(p[i]);
    }
    return out;
}

Perm standardize(const std::vector<int>& values) {
    std::vector<int> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
    Perm p(values.size());
    for (size_t r = 0; r < idx.size(); ++r) p[idx[r]] = static_cast<int>(r) + 1;
    return p;
}

namespace {

bool contains_at(const Perm& pi, const Perm& sigma, size_t pos, int depth, std::vector<int>& pick) {
    if (depth == static_cast<int>(sigma.size())) return true;
    for (size_t i = pos; i + (sigma.size() - depth) <= pi.size(); ++i) {
        bool ok = true;
        for (int j = 0; j < depth && ok; ++j)
            ok = (sigma[j] < sigma[depth]) == (pi[pick[j]] < pi[i]);
        if (!ok) continue;
        pick[depth] = static_cast<int>(i);
        if (contains_at(pi, sigma, i + 1, depth + 1, pick)) return true;
    }
    return false;
}

}  // namespace

bool pattern_contains(const Perm& pi, const Perm& sigma) {
    if (sigma.size() > pi.size()) return false;
    std::vector<int> pick(sigma.size());
    return contains_at(pi, sigma, 0, 0, pick);
}

std::vector<IndexInterval> perm_intervals(const Perm& pi) {
    std::vector<IndexInterval> out;
    const int n = static_cast<int>(pi.size());
    for (int i = 0; i < n; ++i) {
        int lo = pi[i], hi = pi[i];
        for (int j = i; j < n; ++j) {
            lo = std::min(lo, pi[j]);
            hi = std::max(hi, pi[j]);
            if (hi - lo == j - i) out.push_back({i, j});
        }
    }
    return out;
}

bool is_simple(const Perm& pi) {
    const int n = static_cast<int>(pi.size());
    for (int i = 0; i < n; ++i) {
        int lo = pi[i], hi = pi[i];
        for (int j = i + 1; j < n; ++j) {
            lo = std::min(lo, pi[j]);
            hi = std::max(hi, pi[j]);
            if (hi - lo == j - i && j - i + 1 < n) return false;
        }
    }
    return true;
}

std::uint64_t count_simple(int n, int cap) {
    if (n > cap) throw PermError("count_simple: n=" + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
    if (n < 0) return 0;
    std::uint64_t c = 0;
    for_each_perm(n, [&](const Perm& p) { c += is_simple(p); });
    return c;
}

Perm inflate(const Perm& sigma, const std::vector<Perm>& alphas) {
    if (alphas.size() != sigma.size()) throw PermError("inflate: block count does not match the quotient length");
    std::vector<int> size_by_value(sigma.size() + 1, 0);
    for (size_t i = 0; i < sigma.size(); ++i) {
        if (alphas[i].empty()) throw PermError("inflate: empty block");
        size_by_value[sigma[i]] = static_cast<int>(alphas[i].size());
    }
    std::vector<int> offset(sigma.size() + 2, 0);
    for (size_t v = 1; v <= sigma.size(); ++v) offset[v + 1] = offset[v] + size_by_value[v];
    Perm out;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (int a : alphas[i]) out.push_back(offset[sigma[i]] + a);
    return out;
}

Perm inflate(const DecompositionTree& t) {
    if (t.is_leaf()) return t.quotient;
    std::vector<Perm> blocks;
    for (const auto& b : t.blocks) blocks.push_back(inflate(b));
    return inflate(t.quotient, blocks);
}

namespace {

// smallest s such that the first s entries form a sum (or skew) component
int first_split(const Perm& pi, bool skew) {
    const int n = static_cast<int>(pi.size());
    int hi = 0, lo = n + 1;
    for (int s = 1; s < n; ++s) {
        hi = std::max(hi, pi[s - 1]);
        lo = std::min(lo, pi[s - 1]);
        if (!skew && hi == s) return s;
        if (skew && lo == n - s + 1) return s;
    }
    return -1;
}

Perm slice(const Perm& pi, int a, int b) { return standardize(std::vector<int>(pi.begin() + a, pi.begin() + b)); }

}  // namespace

DecompositionTree substitution_decompose(const Perm& pi) {
    const int n = static_cast<int>(pi.size());
    if (n == 0) throw PermError("substitution_decompose: empty permutation");
    if (n == 1) return {{1}, {}};
    for (bool skew : {false, true}) {
        int s = first_split(pi, skew);
        if (s > 0) {
            DecompositionTree t;
            t.quotient = skew ? Perm{2, 1} : Perm{1, 2};
            t.blocks.push_back(substitution_decompose(slice(pi, 0, s)));
            t.blocks.push_back(substitution_decompose(slice(pi, s, n)));
            return t;
        }
    }
    // simple quotient: blocks are the maximal proper intervals
    auto ivs = perm_intervals(pi);
    std::vector<int> reach(n);
    for (int i = 0; i < n; ++i) reach[i] = i;
    for (auto iv : ivs)
        if (iv.hi - iv.lo + 1 < n) reach[iv.lo] = std::max(reach[iv.lo], iv.hi);
    DecompositionTree t;
    std::vector<int> reps;
    int i = 0;
    while (i < n) {
        int j = reach[i];
        t.blocks.push_back(substitution_decompose(slice(pi, i, j + 1)));
        reps.push_back(pi[i]);
        i = j + 1;
    }
    t.quotient = standardize(reps);
    return t;
}

std::string format_tree(const DecompositionTree& t) {
    if (t.is_leaf()) return "1";
    std::string out = format_perm(t.quotient) + "[";
    for (size_t i = 0; i < t.blocks.size(); ++i) out += (i ? "," : "") + format_tree(t.blocks[i]);
    return out + "]";
}

bool is_separable_perm(const Perm& pi) {
    return !pattern_contains(pi, {2, 4, 1, 3}) && !pattern_contains(pi, {3, 1, 4, 2});
}

bool is_separable_recursive(const Perm& pi) {
    const int n = static_cast<int>(pi.size());
    if (n <= 1) return true;
    for (bool skew : {false, true}) {
        int s = first_split(pi, skew);
        if (s > 0) return is_separable_recursive(slice(pi, 0, s)) && is_separable_recursive(slice(pi, s, n));
    }
    return false;
}

std::uint64_t count_separable_perms(int n) {
    std::uint64_t c = 0;
    for_each_perm(n, [&](const Perm& p) { c += is_separable_perm(p); });
    return c;
}

Perm exceptional_perm(int m, Exceptional v) {
    if (m < 2) throw PermError("exceptional_perm: m must be at least 2");
    Perm p;
    switch (v) {
        case Exceptional::i:  // 2 4 ... 2m 1 3 ... 2m-1
            for (int j = 1; j <= m; ++j) p.push_back(2 * j);
            for (int j = 1; j <= m; ++j) p.push_back(2 * j - 1);
            break;
        case Exceptional::ii:  // 2m-1 2m-3 ... 1 2m 2m-2 ... 2
            for (int j = m; j >= 1; --j) p.push_back(2 * j - 1);
            for (int j = m; j >= 1; --j) p.push_back(2 * j);
            break;
        case Exceptional::iii:  // m+1 1 m+2 2 ... 2m m
            for (int j = 1; j <= m; ++j) {
                p.push_back(m + j);
                p.push_back(j);
            }
            break;
        case Exceptional::iv:  // m 2m m-1 2m-1 ... 1 m+1
            for (int j = m; j >= 1; --j) {
                p.push_back(j);
                p.push_back(m + j);
            }
            break;
    }
    return p;
}

Structure perm_to_bichain(const Perm& sigma) {
    if (!is_permutation(sigma)) throw PermError("perm_to_bichain: not a permutation");
    const int n = static_cast<int>(sigma.size());
    Structure b(n, 1, true, Kind::bichain);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (sigma[x] <= sigma[y]) b.set(0, x, y, true);
    return b;
}

Perm bichain_to_perm(const Structure& b) {
    if (b.kind != Kind::bichain) throw PermError("bichain_to_perm: structure is not a bichain");
    validate(b);
    Perm p(b.n);
    for (int x = 0; x < b.n; ++x) p[x] = popcount(b.col[0][x]);
    return p;
}

}  // namespace rs
