#include "relstruct/separable.hpp"

#include <algorithm>
#include <cctype>
#include <thread>

#include "relstruct/moddec.hpp"

namespace rs {

std::string diag_mode_name(DiagMode m) {
    switch (m) {
        case DiagMode::reflexive: return "reflexive";
        case DiagMode::irreflexive: return "irreflexive";
        case DiagMode::mixed: return "mixed";
    }
    return "?";
}

DiagMode parse_diag_mode(const std::string& s) {
    if (s == "reflexive") return DiagMode::reflexive;
    if (s == "irreflexive") return DiagMode::irreflexive;
    if (s == "mixed") return DiagMode::mixed;
    throw StructureError("unknown diagonal mode '" + s + "' (expected reflexive, irreflexive or mixed)");
}

unsigned d_of_label(int label) {
    static constexpr unsigned table[4] = {0b10, 0b01, 0b11, 0b00};
    if (label < 1 || label > 4) throw StructureError("two-element label out of range");
    return table[label - 1];
}

int label_of_d(unsigned d) {
    static constexpr int table[4] = {4, 2, 1, 3};
    return table[d & 3];
}

Structure point(int k, bool loop) {
    Structure s(1, k, true, Kind::ordered_binary);
    for (int i = 0; i < k; ++i) s.set(i, 0, 0, loop);
    return s;
}

std::vector<TwoElementOp> two_element_catalog(int k, DiagMode mode) {
    if (k < 1) throw StructureError("two-element catalog: k must be at least 1");
    if (k > 6) throw StructureError("two-element catalog: k too large to list");
    const int off = 1 << (2 * k);
    const int diag = mode == DiagMode::mixed ? off : 1;
    std::vector<TwoElementOp> out;
    for (int dp = 0; dp < diag; ++dp)
        for (int o = 0; o < off; ++o) {
            Structure s(2, k, true, Kind::ordered_binary);
            for (int i = 0; i < k; ++i) {
                unsigned d = d_of_label(1 + ((o >> (2 * i)) & 3));
                s.set(i, 0, 1, d >> 1);
                s.set(i, 1, 0, d & 1);
                if (mode == DiagMode::reflexive) s.set(i, 0, 0, true), s.set(i, 1, 1, true);
                if (mode == DiagMode::mixed) s.set(i, 0, 0, dp >> (2 * i) & 1), s.set(i, 1, 1, dp >> (2 * i + 1) & 1);
            }
            out.push_back({std::move(s), dp * off + o});
        }
    return out;
}

Structure sum2(const Structure& left, const TwoElementOp& op, const Structure& right) {
    if (!left.ordered || !right.ordered || !op.s.ordered) throw StructureError("sum2: operands must be ordered");
    if (left.k != op.s.k || right.k != op.s.k) throw StructureError("sum2: arity mismatch");
    Structure out = lex_sum(op.s, {left, right});
    out.kind = Kind::ordered_binary;
    return out;
}

namespace {

void require_ordered(const Structure& r, const char* what) {
    if (!r.ordered) throw StructureError(std::string(what) + ": structure must be ordered");
}

// the pair type shared by every cross pair of the split at s, if any
bool uniform_split(const Structure& r, int s, std::uint64_t* type) {
    const std::uint64_t t0 = r.pair_type(0, s);
    for (int x = 0; x < s; ++x)
        for (int y = s; y < r.n; ++y)
            if (r.pair_type(x, y) != t0) return false;
    if (type) *type = t0;
    return true;
}

bool separable_gallai(const Structure& r) {
    if (r.n <= 2) return true;
    auto p = gallai_partition(r);
    if (p.kind == QuotientKind::indecomposable) return false;
    for (Mask b : p.blocks)
        if (popcount(b) > 2 && !separable_gallai(restrict(r, b))) return false;
    return true;
}

}  // namespace

bool is_separable_structure(const Structure& r) {
    require_ordered(r, "separability");
    return separable_gallai(r);
}

bool is_two_decomposable(const Structure& r) {
    require_ordered(r, "2-decomposability");
    if (r.n <= 2) return true;
    for (int s = 1; s < r.n; ++s)
        if (uniform_split(r, s, nullptr))
            return is_two_decomposable(restrict(r, (Mask(1) << s) - 1)) &&
                   is_two_decomposable(restrict(r, r.all() & ~((Mask(1) << s) - 1)));
    return false;
}

std::vector<Structure> forbidden_set_type1(DiagMode mode, bool include_a, bool include_b) {
    if (mode == DiagMode::mixed) throw StructureError("forbidden set: choose a reflexive or irreflexive diagonal");
    const bool loop = mode == DiagMode::reflexive;
    auto make = [&](int n, const std::vector<std::pair<std::pair<int, int>, unsigned>>& ds) {
        Structure s(n, 1, true, Kind::ordered_binary);
        for (int x = 0; x < n; ++x) s.set(0, x, x, loop);
        for (auto [xy, d] : ds) {
            s.set(0, xy.first, xy.second, d >> 1);
            s.set(0, xy.second, xy.first, d & 1);
        }
        return s;
    };
    std::vector<Structure> out;
    if (include_a)
        for (unsigned d01 = 0; d01 < 4; ++d01)
            for (unsigned d02 = 0; d02 < 4; ++d02)
                for (unsigned d12 = 0; d12 < 4; ++d12)
                    if (d01 != d02 && d12 != d02) out.push_back(make(3, {{{0, 1}, d01}, {{0, 2}, d02}, {{1, 2}, d12}}));
    if (include_b)
        for (unsigned a = 0; a < 4; ++a)
            for (unsigned b = 0; b < 4; ++b)
                if (a != b)
                    out.push_back(make(4, {{{0, 1}, a}, {{0, 3}, a}, {{2, 3}, a}, {{1, 2}, b}, {{1, 3}, b}, {{0, 2}, b}}));
    return out;
}

bool avoids_forbidden_type1(const Structure& r) {
    require_ordered(r, "Forb membership");
    if (r.k != 1) throw StructureError("Forb membership: the forbidden set is defined for one relation");
    static const std::vector<Structure> bounds = forbidden_set_type1(DiagMode::reflexive);
    Structure s = r;
    for (int x = 0; x < s.n; ++x) s.set(0, x, x, true);
    s.kind = Kind::ordered_binary;
    return avoids_all(s, bounds);
}

std::string method_name(SeparableMethod m) {
    switch (m) {
        case SeparableMethod::gallai: return "gallai";
        case SeparableMethod::split: return "split";
        case SeparableMethod::forbidden: return "forbidden";
        case SeparableMethod::tree: return "tree";
    }
    return "?";
}

SeparableMethod parse_method(const std::string& s) {
    if (s == "gallai") return SeparableMethod::gallai;
    if (s == "split") return SeparableMethod::split;
    if (s == "forbidden") return SeparableMethod::forbidden;
    if (s == "tree") return SeparableMethod::tree;
    throw StructureError("unknown separability method '" + s + "'");
}

int free_bits(int n, int k, DiagMode mode) { return k * n * (n - 1) + (mode == DiagMode::mixed ? k * n : 0); }

Structure ordered_from_bits(int n, int k, DiagMode mode, std::uint64_t bits) {
    Structure s(n, k, true, Kind::ordered_binary);
    int b = 0;
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y && (bits >> b++ & 1)) s.set(i, x, y, true);
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < n; ++x) {
            bool loop = mode == DiagMode::reflexive || (mode == DiagMode::mixed && (bits >> b++ & 1));
            if (loop) s.set(i, x, x, true);
        }
    return s;
}

BigInt count_separable(int k, DiagMode mode, int n, SeparableMethod method, EnumerationBudget budget, int threads) {
    if (k < 1) throw StructureError("separable count: k must be at least 1");
    if (n < 0) throw StructureError("separable count: n must be non-negative");
    if (n == 0) return 1;
    if (method == SeparableMethod::tree) {
        if (2 * k > 30) throw StructureError("separable count: k too large for tree labels");
        BigInt c = tree_counts(n - 1, 1 << (2 * k))[n - 1];
        if (mode == DiagMode::mixed) c <<= k * n;  // diagonals vary independently
        return c;
    }
    if (method == SeparableMethod::forbidden && k != 1)
        throw StructureError("separable count: the forbidden-set route is defined for k = 1");
    const int bits = free_bits(n, k, mode);
    if (bits > budget.max_bits)
        throw StructureError("budget exceeded: " + std::to_string(bits) + " free bits for n=" + std::to_string(n) +
                             " (limit " + std::to_string(budget.max_bits) + ")");
    auto test = [&](const Structure& s) {
        switch (method) {
            case SeparableMethod::gallai: return is_separable_structure(s);
            case SeparableMethod::split: return is_two_decomposable(s);
            case SeparableMethod::forbidden: return avoids_forbidden_type1(s);
            default: return false;
        }
    };
    // ordered structures are isomorphic only when equal, so every table is its own type
    const std::uint64_t total = std::uint64_t(1) << bits;
    threads = std::max(1, std::min<int>(threads, 64));
    std::vector<std::uint64_t> partial(threads, 0);
    auto work = [&](int t) {
        for (std::uint64_t v = t; v < total; v += threads) partial[t] += test(ordered_from_bits(n, k, mode, v));
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    BigInt c = 0;
    for (auto p : partial) c += p;
    return c;
}

LabeledTree make_node(int label, LabeledTree left, LabeledTree right) {
    return std::make_shared<const TreeNode>(TreeNode{label, std::move(left), std::move(right)});
}

int node_count(const LabeledTree& t) { return t ? 1 + node_count(t->left) + node_count(t->right) : 0; }

bool tree_valid(const LabeledTree& t, int labels) {
    if (!t) return true;
    if (t->label < 1 || t->label > labels) return false;
    if (t->left && t->left->label == t->label) return false;
    return tree_valid(t->left, labels) && tree_valid(t->right, labels);
}

std::string format_tree(const LabeledTree& t) {
    if (!t) return "_";
    return "(" + std::to_string(t->label) + " " + format_tree(t->left) + " " + format_tree(t->right) + ")";
}

namespace {

struct TreeParser {
    const std::string& s;
    size_t pos = 0;

    void skip() {
        while (pos < s.size() && s[pos] == ' ') ++pos;
    }
    [[noreturn]] void fail(const std::string& why) {
        throw StructureError("malformed tree at offset " + std::to_string(pos) + ": " + why);
    }
    LabeledTree parse() {
        skip();
        if (pos >= s.size()) fail("unexpected end");
        if (s[pos] == '_') {
            ++pos;
            return nullptr;
        }
        if (s[pos] != '(') fail("expected '(' or '_'");
        ++pos;
        skip();
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected a label");
        int label = std::stoi(s.substr(start, pos - start));
        auto left = parse();
        auto right = parse();
        skip();
        if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
        ++pos;
        return make_node(label, left, right);
    }
};

const TwoElementOp& op_for_label(int k, int label) {
    static std::vector<std::vector<TwoElementOp>> cache(7);
    if (cache[k].empty()) cache[k] = two_element_catalog(k, DiagMode::reflexive);
    if (label < 1 || label > static_cast<int>(cache[k].size())) throw StructureError("tree label out of range");
    return cache[k][label - 1];
}

int label_of_type(std::uint64_t type, int k) {
    int idx = 0;
    for (int i = 0; i < k; ++i) idx |= (label_of_d((type >> (2 * i)) & 3) - 1) << (2 * i);
    return idx + 1;
}

LabeledTree encode(const Structure& r) {
    if (r.n <= 1) return nullptr;
    for (int s = 1; s < r.n; ++s) {
        std::uint64_t t;
        if (uniform_split(r, s, &t)) {
            Mask pre = (Mask(1) << s) - 1;
            return make_node(label_of_type(t, r.k), encode(restrict(r, pre)), encode(restrict(r, r.all() & ~pre)));
        }
    }
    throw StructureError("tree encoding: structure is not separable");
}

Structure decode(const LabeledTree& t, int k) {
    if (!t) return point(k, true);
    return sum2(decode(t->left, k), op_for_label(k, t->label), decode(t->right, k));
}

}  // namespace

LabeledTree parse_tree(const std::string& s) {
    TreeParser p{s};
    auto t = p.parse();
    p.skip();
    if (p.pos != s.size()) p.fail("trailing characters");
    return t;
}

LabeledTree tree_encode(const Structure& r) {
    require_ordered(r, "tree encoding");
    if (r.k > 6) throw StructureError("tree encoding: k too large");
    for (int i = 0; i < r.k; ++i)
        for (int x = 0; x < r.n; ++x)
            if (!r.get(i, x, x)) throw StructureError("tree encoding: structure must be reflexive");
    return encode(r);
}

Structure tree_decode(const LabeledTree& t, int k) { return decode(t, k); }

std::vector<LabeledTree> enumerate_trees(int m, int labels) {
    if (m == 0) return {nullptr};
    std::vector<LabeledTree> out;
    for (int a = 0; a < m; ++a) {
        auto lefts = enumerate_trees(a, labels), rights = enumerate_trees(m - 1 - a, labels);
        for (int lab = 1; lab <= labels; ++lab)
            for (const auto& l : lefts) {
                if (l && l->label == lab) continue;
                for (const auto& r : rights) out.push_back(make_node(lab, l, r));
            }
    }
    return out;
}

std::vector<BigInt> tree_counts(int m, int labels) {
    // t[a] = all valid trees of size a; by symmetry t[a] / labels of them have any given root label
    std::vector<BigInt> t(m + 1, 0);
    t[0] = 1;
    for (int s = 1; s <= m; ++s) {
        BigInt acc = 0;
        for (int a = 0; a < s; ++a) {
            BigInt left = a == 0 ? BigInt(1) : t[a] - t[a] / labels;
            acc += left * t[s - 1 - a];
        }
        t[s] = labels * acc;
    }
    return t;
}

}  // namespace rs
