#include "relstruct/moddec.hpp"

#include <algorithm>
#include <functional>

namespace rs {

std::string quotient_kind_name(QuotientKind k) {
    switch (k) {
        case QuotientKind::trivial_singleton: return "trivial-singleton";
        case QuotientKind::indecomposable: return "indecomposable>=3";
        case QuotientKind::chainable: return "chainable";
    }
    return "?";
}

namespace {

inline Mask span(Mask a) {
    if (!a) return 0;
    int lo = __builtin_ctzll(a), hi = 63 - __builtin_clzll(a);
    Mask top = hi == 63 ? ~Mask(0) : ((Mask(1) << (hi + 1)) - 1);
    return top & ~((Mask(1) << lo) - 1);
}

// x sees every member of a the same way in every relation
inline bool uniform(const Structure& r, int x, Mask a) {
    for (int i = 0; i < r.k; ++i) {
        Mask f = r.row[i][x] & a, b = r.col[i][x] & a;
        if ((f && f != a) || (b && b != a)) return false;
    }
    return true;
}

}  // namespace

bool is_gallai_interval(const Structure& r, Mask a, Mask u) {
    if (a & ~u) throw StructureError("interval test: set is not inside the universe");
    if (popcount(a) <= 1) return true;
    if (r.ordered && (span(a) & u & ~a)) return false;
    for (Mask t = u & ~a; t; t &= t - 1)
        if (!uniform(r, __builtin_ctzll(t), a)) return false;
    return true;
}

bool is_gallai_interval(const Structure& r, Mask a) { return is_gallai_interval(r, a, r.all()); }

Mask minimal_interval(const Structure& r, Mask s, Mask u) {
    Mask a = s;
    if (popcount(a) <= 1) return a;
    for (bool grew = true; grew;) {
        grew = false;
        if (r.ordered) {
            Mask filled = span(a) & u;
            if (filled != a) a = filled, grew = true;
        }
        for (Mask t = u & ~a; t; t &= t - 1) {
            int x = __builtin_ctzll(t);
            if (!uniform(r, x, a)) {
                a |= Mask(1) << x;
                grew = true;
            }
        }
    }
    return a;
}

Mask minimal_interval(const Structure& r, Mask s) { return minimal_interval(r, s, r.all()); }

namespace {

// pair closures inside a fixed universe, computed on demand
class PairClosures {
public:
    PairClosures(const Structure& r, Mask u) : r_(r), u_(u), memo_(r.n * r.n, 0) {}

    Mask pair(int a, int b) {
        Mask& m = memo_[a * r_.n + b];
        if (!m) m = memo_[b * r_.n + a] = minimal_interval(r_, (Mask(1) << a) | (Mask(1) << b), u_);
        return m;
    }

    // absorb every pair closure that overlaps the current set
    Mask strong_closure(Mask s) {
        Mask a = popcount(s) <= 1 ? s : minimal_interval(r_, s, u_);
        for (bool grew = true; grew && a != u_;) {
            grew = false;
            for (Mask ta = a; ta && !grew; ta &= ta - 1)
                for (Mask tb = u_ & ~a; tb; tb &= tb - 1) {
                    Mask m = pair(__builtin_ctzll(ta), __builtin_ctzll(tb));
                    if ((m & a) != a) {
                        a |= m;
                        grew = true;
                        break;
                    }
                }
        }
        return a;
    }

    Mask universe() const { return u_; }

private:
    const Structure& r_;
    Mask u_;
    std::vector<Mask> memo_;
};

// maximal proper strong intervals of r|u, sorted by least vertex
std::vector<Mask> maximal_strong_blocks(const Structure& r, Mask u) {
    std::vector<Mask> blocks;
    if (popcount(u) <= 1) {
        if (u) blocks.push_back(u);
        return blocks;
    }
    PairClosures pc(r, u);
    Mask done = 0;
    for (Mask t = u; t; t &= t - 1) {
        int v = __builtin_ctzll(t);
        if (done >> v & 1) continue;
        Mask b = Mask(1) << v;
        for (Mask s = u & ~b; s; s &= s - 1) {
            Mask sm = pc.strong_closure(b | (s & -s));
            if (sm != u) b |= sm;
        }
        blocks.push_back(b);
        done |= b;
    }
    return blocks;
}

void collect_strong(const Structure& r, Mask u, std::vector<Mask>& out) {
    out.push_back(u);
    if (popcount(u) <= 1) return;
    for (Mask b : maximal_strong_blocks(r, u)) collect_strong(r, b, out);
}

inline std::uint64_t swap_fields(std::uint64_t t) {
    const std::uint64_t lo = 0x5555555555555555ULL;
    return ((t & lo) << 1) | ((t >> 1) & lo);
}

}  // namespace

Mask minimal_strong_interval(const Structure& r, Mask s) {
    PairClosures pc(r, r.all());
    return pc.strong_closure(s);
}

bool is_indecomposable(const Structure& r, Mask u) {
    if (popcount(u) <= 2) return true;
    // an interval of size >= 2 containing a pair; check all pairs
    for (Mask ta = u; ta; ta &= ta - 1) {
        Mask a = ta & -ta;
        for (Mask tb = ta & (ta - 1); tb; tb &= tb - 1)
            if (minimal_interval(r, a | (tb & -tb), u) != u) return false;
    }
    return true;
}

bool is_indecomposable(const Structure& r) { return is_indecomposable(r, r.all()); }

std::vector<Mask> strong_intervals(const Structure& r) {
    if (r.n == 0) throw StructureError("strong intervals: empty structure");
    std::vector<Mask> out;
    collect_strong(r, r.all(), out);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_offdiagonal_chainable(const Structure& q) {
    if (q.n <= 1) return true;
    if (2 * q.k + 2 > 64) throw StructureError("chainability: too many relations");
    auto ext = [&](int x, int y) {
        std::uint64_t t = q.pair_type(x, y);
        if (q.ordered) t |= std::uint64_t(x < y ? 2 : 1) << (2 * q.k);
        return t;
    };
    const std::uint64_t alpha = ext(0, 1), beta = swap_fields(alpha);
    std::vector<int> score(q.n, 0);
    for (int x = 0; x < q.n; ++x)
        for (int y = x + 1; y < q.n; ++y) {
            std::uint64_t t = ext(x, y);
            if (t == alpha) ++score[x];
            else if (t == beta) ++score[y];
            else return false;
        }
    if (alpha == beta) return true;
    // the alpha-tournament is transitive iff the scores are all distinct
    std::sort(score.begin(), score.end());
    for (int i = 0; i < q.n; ++i)
        if (score[i] != i) return false;
    return true;
}

IntervalPartition gallai_partition(const Structure& r) {
    if (r.n == 0) throw StructureError("Gallai partition: empty structure");
    IntervalPartition p;
    p.blocks = maximal_strong_blocks(r, r.all());
    const int m = static_cast<int>(p.blocks.size());
    p.quotient = Structure(m, r.k, r.ordered, r.kind);
    std::vector<int> rep(m);
    for (int b = 0; b < m; ++b) rep[b] = __builtin_ctzll(p.blocks[b]);
    for (int i = 0; i < r.k; ++i)
        for (int a = 0; a < m; ++a) {
            for (int b = 0; b < m; ++b)
                if (a != b && r.get(i, rep[a], rep[b])) p.quotient.set(i, a, b, true);
            Mask loops = 0;
            for (Mask t = p.blocks[a]; t; t &= t - 1) loops |= r.row[i][__builtin_ctzll(t)] & (t & -t);
            if (loops == p.blocks[a]) p.quotient.set(i, a, a, true);
            if (loops && loops != p.blocks[a]) p.mixed_diagonal = true;
        }
    if (m == 1) p.kind = QuotientKind::trivial_singleton;
    else if (m >= 3 && is_indecomposable(p.quotient)) p.kind = QuotientKind::indecomposable;
    else if (is_offdiagonal_chainable(p.quotient)) p.kind = QuotientKind::chainable;
    else throw std::logic_error("Gallai partition: quotient is neither indecomposable nor chainable");
    return p;
}

namespace {

Kind combined_kind(const Structure& a, const Structure& b) {
    if (a.kind == b.kind) return a.kind;
    return a.ordered ? Kind::ordered_binary : Kind::generic;
}

}  // namespace

Structure compose(const Structure& r, int v, const Structure& s) {
    if (v < 0 || v >= r.n) throw StructureError("compose: vertex out of range");
    if (r.k != s.k || r.ordered != s.ordered) throw StructureError("compose: incompatible signatures");
    if (s.n == 0) throw StructureError("compose: empty substituted structure");
    std::vector<Structure> blocks;
    for (int x = 0; x < r.n; ++x) {
        if (x == v) {
            blocks.push_back(s);
        } else {
            Structure one(1, r.k, r.ordered, s.kind);
            for (int i = 0; i < r.k; ++i) one.set(i, 0, 0, r.get(i, x, x));
            blocks.push_back(one);
        }
    }
    Structure out = lex_sum(r, blocks);
    out.kind = combined_kind(r, s);
    return out;
}

Structure lex_sum(const Structure& q, const std::vector<Structure>& blocks) {
    if (static_cast<int>(blocks.size()) != q.n) throw StructureError("lex_sum: block count does not match the quotient");
    std::vector<int> off(q.n + 1, 0);
    Kind kind = q.kind;
    for (int b = 0; b < q.n; ++b) {
        const auto& s = blocks[b];
        if (s.k != q.k || s.ordered != q.ordered) throw StructureError("lex_sum: incompatible signatures");
        if (s.n == 0) throw StructureError("lex_sum: empty block");
        off[b + 1] = off[b] + s.n;
        if (s.kind != kind) kind = q.ordered ? Kind::ordered_binary : Kind::generic;
    }
    if (off[q.n] > kMaxVertices) throw StructureError("lex_sum: result exceeds 64 vertices");
    Structure out(off[q.n], q.k, q.ordered, kind);
    for (int i = 0; i < q.k; ++i)
        for (int a = 0; a < q.n; ++a)
            for (int x = 0; x < blocks[a].n; ++x) {
                for (int y = 0; y < blocks[a].n; ++y)
                    if (blocks[a].get(i, x, y)) out.set(i, off[a] + x, off[a] + y, true);
                for (int b = 0; b < q.n; ++b)
                    if (b != a && q.get(i, a, b))
                        for (int y = 0; y < blocks[b].n; ++y) out.set(i, off[a] + x, off[b] + y, true);
            }
    return out;
}

std::set<std::string> indecomposable_substructures(const Structure& r, int min_size) {
    if (r.n > 24) throw StructureError("indecomposable substructures: too many vertices for a subset sweep");
    std::set<std::string> out;
    for (int s = std::max(min_size, 0); s <= r.n; ++s)
        for_each_subset(r.n, s, [&](Mask m) {
            if (is_indecomposable(r, m)) out.insert(canonical_code(restrict(r, m)));
        });
    return out;
}

}  // namespace rs
