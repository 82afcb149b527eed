// Canonical labeling by individualization-refinement.
//
// The code of an unordered structure is the serialization under the leaf
// labeling that minimizes (refinement trace, serialization).  Traces are
// isomorphism invariants, so pruning on them keeps the minimum; leaves with
// equal trace and code give automorphisms, used to skip symmetric branches.
#include <algorithm>
#include <numeric>

#include "relstruct/core.hpp"

namespace rs {

namespace {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void put_header(std::string& out, const Structure& r) {
    out.push_back(static_cast<char>(r.n));
    out.push_back(static_cast<char>(r.k));
    out.push_back(static_cast<char>(r.ordered ? 1 : 0));
}

// bits of all relations, row-major, under the given vertex order
void serialize(std::string& out, const Structure& r, const int* order) {
    unsigned char acc = 0;
    int nb = 0;
    for (int i = 0; i < r.k; ++i)
        for (int a = 0; a < r.n; ++a) {
            Mask row = r.row[i][order[a]];
            for (int b = 0; b < r.n; ++b) {
                acc = static_cast<unsigned char>((acc << 1) | ((row >> order[b]) & 1));
                if (++nb == 8) {
                    out.push_back(static_cast<char>(acc));
                    acc = 0;
                    nb = 0;
                }
            }
        }
    if (nb) out.push_back(static_cast<char>(acc << (8 - nb)));
}

class Canonizer {
public:
    explicit Canonizer(const Structure& r) : r_(r), n_(r.n) {
        type_.assign(n_ * n_, 0);
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y) type_[x * n_ + y] = x == y ? 0 : r.pair_type(x, y) + 1;
    }

    std::string run() {
        std::vector<int> color(n_);
        for (int x = 0; x < n_; ++x) color[x] = static_cast<int>(r_.loop_type(x));
        normalize(color);
        std::vector<std::uint64_t> trace;
        trace.push_back(refine(color));
        std::vector<int> prefix;
        search(color, trace, prefix);
        return best_code_;
    }

private:
    const Structure& r_;
    int n_;
    std::vector<std::uint64_t> type_;
    bool have_best_ = false;
    std::vector<std::uint64_t> best_trace_;
    std::string best_code_;
    std::vector<int> best_order_;
    std::vector<std::vector<int>> autos_;

    // recolor to ranks 0..c-1 preserving order of values
    static int normalize(std::vector<int>& c) {
        std::vector<int> vals(c);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (int& x : c) x = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), x) - vals.begin());
        return static_cast<int>(vals.size());
    }

    static int count_colors(const std::vector<int>& c) {
        return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
    }

    // iterate signature refinement to a fixed point; returns the trace value
    std::uint64_t refine(std::vector<int>& color) {
        std::uint64_t tr = mix(n_);
        int ncol = count_colors(color);
        std::vector<std::pair<std::pair<int, std::uint64_t>, int>> keys(n_);
        while (true) {
            for (int x = 0; x < n_; ++x) {
                std::uint64_t h = 0;
                const std::uint64_t* tx = &type_[x * n_];
                for (int y = 0; y < n_; ++y)
                    if (y != x) h += mix((std::uint64_t(color[y]) << 40) ^ tx[y]);
                keys[x] = {{color[x], h}, x};
            }
            std::sort(keys.begin(), keys.end());
            int c = 0;
            std::uint64_t round = 0;
            for (int i = 0; i < n_; ++i) {
                if (i > 0 && keys[i].first != keys[i - 1].first) ++c;
                color[keys[i].second] = c;
                round = mix(round ^ (std::uint64_t(c) << 32) ^ keys[i].first.second);
            }
            int nc = n_ ? c + 1 : 0;
            tr = mix(tr ^ round ^ std::uint64_t(nc));
            if (nc == ncol) break;
            ncol = nc;
        }
        return mix(tr ^ std::uint64_t(ncol) << 48);
    }

    // -1 less, 0 equal prefix, 1 greater
    int compare_trace(const std::vector<std::uint64_t>& t) const {
        size_t m = std::min(t.size(), best_trace_.size());
        for (size_t i = 0; i < m; ++i)
            if (t[i] != best_trace_[i]) return t[i] < best_trace_[i] ? -1 : 1;
        return 0;
    }

    void leaf(const std::vector<int>& color, const std::vector<std::uint64_t>& trace) {
        std::vector<int> order(n_);
        for (int x = 0; x < n_; ++x) order[color[x]] = x;
        std::string code;
        put_header(code, r_);
        serialize(code, r_, order.data());
        if (!have_best_) {
            have_best_ = true;
            best_trace_ = trace;
            best_code_ = std::move(code);
            best_order_ = std::move(order);
            return;
        }
        int ct = compare_trace(trace);
        int cc = ct != 0 ? ct : code.compare(best_code_);
        if (cc == 0) {
            // same leaf up to relabeling: best_order_[p] -> order[p] is an automorphism
            std::vector<int> g(n_);
            for (int p = 0; p < n_; ++p) g[best_order_[p]] = order[p];
            autos_.push_back(std::move(g));
        } else if (cc < 0) {
            best_trace_ = trace;
            best_code_ = std::move(code);
            best_order_ = std::move(order);
        }
    }

    // orbit representatives of the group generated by automorphisms fixing prefix
    int find(std::vector<int>& p, int x) const {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }

    void search(std::vector<int>& color, std::vector<std::uint64_t>& trace, std::vector<int>& prefix) {
        if (have_best_ && compare_trace(trace) > 0) return;
        int ncol = count_colors(color);
        if (ncol == n_) {
            leaf(color, trace);
            return;
        }
        // target cell: first non-singleton cell in color order
        std::vector<int> size(ncol, 0);
        for (int x = 0; x < n_; ++x) ++size[color[x]];
        int target = 0;
        while (size[target] == 1) ++target;
        std::vector<int> cell;
        for (int x = 0; x < n_; ++x)
            if (color[x] == target) cell.push_back(x);

        std::vector<int> tried;
        for (int v : cell) {
            if (!tried.empty() && !autos_.empty()) {
                std::vector<int> parent(n_);
                std::iota(parent.begin(), parent.end(), 0);
                for (const auto& g : autos_) {
                    bool fixes = true;
                    for (int p : prefix)
                        if (g[p] != p) {
                            fixes = false;
                            break;
                        }
                    if (!fixes) continue;
                    for (int x = 0; x < n_; ++x) {
                        int a = find(parent, x), b = find(parent, g[x]);
                        if (a != b) parent[a] = b;
                    }
                }
                int rv = find(parent, v);
                bool skip = false;
                for (int u : tried)
                    if (find(parent, u) == rv) {
                        skip = true;
                        break;
                    }
                if (skip) continue;
            }
            tried.push_back(v);
            std::vector<int> child(color);
            // individualize v in front of the rest of its cell
            for (int x = 0; x < n_; ++x) child[x] = 2 * child[x] + (child[x] == target && x != v ? 1 : 0);
            normalize(child);
            trace.push_back(refine(child));
            prefix.push_back(v);
            search(child, trace, prefix);
            prefix.pop_back();
            trace.pop_back();
        }
    }
};

}  // namespace

std::string labeled_code(const Structure& r) {
    std::string code;
    put_header(code, r);
    std::vector<int> id(r.n);
    std::iota(id.begin(), id.end(), 0);
    serialize(code, r, id.data());
    return code;
}

std::string canonical_code(const Structure& r) {
    if (r.ordered || r.n <= 1) return labeled_code(r);
    return Canonizer(r).run();
}

}  // namespace rs
