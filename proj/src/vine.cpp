#include "vine.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace rvc {

namespace {

std::vector<int> complete_union(const VineEdge& e) {
    std::vector<int> u = e.conditioning;
    u.push_back(e.a);
    u.push_back(e.b);
    std::sort(u.begin(), u.end());
    return u;
}

bool contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::string tree_name(int t) { return "tree " + std::to_string(t + 1); }

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

} // namespace

std::string edge_label(const VineEdge& e) {
    std::string s = std::to_string(e.a + 1) + "," + std::to_string(e.b + 1);
    if (!e.conditioning.empty()) {
        s += "|";
        for (std::size_t i = 0; i < e.conditioning.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e.conditioning[i] + 1);
        }
    }
    return s;
}

ValidationReport validate_structure(const VineStructure& s) {
    try {
        VineModel m(s);
        return {};
    } catch (const Error& e) {
        return {false, e.what()};
    }
}

VineModel::VineModel(VineStructure s) : structure_(std::move(s)) {
    const int K = structure_.dimension;
    if (K < 2) fail(ErrorKind::invalid_argument, "vine dimension must be at least 2");
    if (int(structure_.trees.size()) != K - 1)
        fail(ErrorKind::invalid_argument,
             "vine must have " + std::to_string(K - 1) + " trees, found " +
             std::to_string(structure_.trees.size()));

    // Per-edge normalization and local checks.
    for (int t = 0; t < K - 1; ++t) {
        auto& tree = structure_.trees[t];
        if (int(tree.size()) != K - 1 - t)
            fail(ErrorKind::invalid_argument,
                 tree_name(t) + " must have " + std::to_string(K - 1 - t) +
                 " edges, found " + std::to_string(tree.size()));
        for (VineEdge& e : tree) {
            if (e.a == e.b)
                fail(ErrorKind::invalid_argument,
                     tree_name(t) + ": conditioned pair repeats a variable");
            if (e.a > e.b) std::swap(e.a, e.b);
            std::sort(e.conditioning.begin(), e.conditioning.end());
            if (std::adjacent_find(e.conditioning.begin(), e.conditioning.end())
                    != e.conditioning.end())
                fail(ErrorKind::invalid_argument, tree_name(t) + ", edge " +
                     edge_label(e) + ": duplicate conditioning variable");
            if (int(e.conditioning.size()) != t)
                fail(ErrorKind::invalid_argument,
                     tree_name(t) + ", edge " + edge_label(e) +
                     ": conditioning set must have " + std::to_string(t) +
                     " variables");
            if (contains(e.conditioning, e.a) || contains(e.conditioning, e.b))
                fail(ErrorKind::invalid_argument,
                     tree_name(t) + ", edge " + edge_label(e) +
                     ": conditioned variable inside conditioning set");
            for (int x : complete_union(e))
                if (x < 0 || x >= K)
                    fail(ErrorKind::invalid_argument,
                         tree_name(t) + ", edge " + edge_label(e) +
                         ": variable id out of range");
        }
    }

    // First tree: spanning tree on the variables.
    wire_.assign(K - 1, {});
    {
        UnionFind uf(K);
        for (const VineEdge& e : structure_.trees[0])
            if (!uf.unite(e.a, e.b))
                fail(ErrorKind::invalid_argument,
                     "tree 1: edge " + edge_label(e) + " closes a cycle");
        wire_[0].assign(structure_.trees[0].size(), Wire{});
    }

    // Higher trees: each edge joins two adjacent edges of the tree below and
    // its label must be the complete-union intersection / symmetric difference.
    std::vector<std::vector<int>> prev_unions;
    for (const VineEdge& e : structure_.trees[0]) prev_unions.push_back(complete_union(e));

    for (int t = 1; t < K - 1; ++t) {
        const auto& prev = structure_.trees[t - 1];
        auto& tree = structure_.trees[t];
        wire_[t].assign(tree.size(), Wire{});
        UnionFind uf(int(prev.size()));
        std::vector<std::vector<int>> cur_unions;

        for (std::size_t i = 0; i < tree.size(); ++i) {
            VineEdge& e = tree[i];
            std::vector<int> ue = complete_union(e);
            int found_j = -1, found_k = -1;
            for (std::size_t j = 0; j + 1 < prev.size() && found_j < 0; ++j) {
                for (std::size_t k = j + 1; k < prev.size(); ++k) {
                    bool adjacent;
                    if (t == 1) {
                        adjacent = prev[j].a == prev[k].a || prev[j].a == prev[k].b ||
                                   prev[j].b == prev[k].a || prev[j].b == prev[k].b;
                    } else {
                        const Wire& wj = wire_[t - 1][j];
                        const Wire& wk = wire_[t - 1][k];
                        adjacent = wj.pa == wk.pa || wj.pa == wk.pb ||
                                   wj.pb == wk.pa || wj.pb == wk.pb;
                    }
                    if (!adjacent) continue;
                    std::vector<int> uni, inter;
                    std::set_union(prev_unions[j].begin(), prev_unions[j].end(),
                                   prev_unions[k].begin(), prev_unions[k].end(),
                                   std::back_inserter(uni));
                    if (uni != ue) continue;
                    std::set_intersection(prev_unions[j].begin(), prev_unions[j].end(),
                                          prev_unions[k].begin(), prev_unions[k].end(),
                                          std::back_inserter(inter));
                    if (inter != e.conditioning) continue;
                    found_j = int(j);
                    found_k = int(k);
                    break;
                }
            }
            if (found_j < 0)
                fail(ErrorKind::invalid_argument,
                     tree_name(t) + ", edge " + edge_label(e) +
                     ": does not join two adjacent edges of " + tree_name(t - 1));
            if (!uf.unite(found_j, found_k))
                fail(ErrorKind::invalid_argument,
                     tree_name(t) + ": edge " + edge_label(e) + " closes a cycle");

            Wire w;
            bool a_in_j = contains(prev_unions[found_j], e.a);
            w.pa = a_in_j ? found_j : found_k;
            w.pb = a_in_j ? found_k : found_j;
            w.pa_first = (e.a == prev[w.pa].a);
            w.pb_first = (e.b == prev[w.pb].a);
            wire_[t][i] = w;
            cur_unions.push_back(std::move(ue));
        }
        prev_unions = std::move(cur_unions);
    }

    // Sampling order: peel the top edge's larger conditioned variable, walking
    // its single edge per tree downward; repeat on the remaining sub-vine.
    std::vector<std::vector<char>> alive(K - 1);
    for (int t = 0; t < K - 1; ++t) alive[t].assign(structure_.trees[t].size(), 1);
    order_.assign(K, -1);
    chains_.assign(K, {});
    std::vector<char> taken(K, 0);

    for (int pos = K - 1; pos >= 1; --pos) {
        int ttop = -1;
        for (int t = K - 2; t >= 0 && ttop < 0; --t)
            for (char f : alive[t])
                if (f) { ttop = t; break; }
        int top_edge = -1;
        for (std::size_t i = 0; i < alive[ttop].size(); ++i)
            if (alive[ttop][i]) {
                if (top_edge >= 0)
                    fail(ErrorKind::numerical, "vine wiring failed: ambiguous top edge");
                top_edge = int(i);
            }
        int w = structure_.trees[ttop][top_edge].b;
        order_[pos] = w;
        taken[w] = 1;

        for (int t = ttop; t >= 0; --t) {
            int hit = -1;
            for (std::size_t i = 0; i < structure_.trees[t].size(); ++i) {
                if (!alive[t][i]) continue;
                const VineEdge& e = structure_.trees[t][i];
                if (e.a == w || e.b == w) {
                    if (hit >= 0)
                        fail(ErrorKind::numerical,
                             "vine wiring failed: variable on two live edges");
                    hit = int(i);
                }
            }
            if (hit < 0)
                fail(ErrorKind::numerical, "vine wiring failed: broken chain");
            const VineEdge& e = structure_.trees[t][hit];
            int z = (e.a == w) ? e.b : e.a;
            ChainStep cs;
            cs.tree = t;
            cs.edge = hit;
            if (t == 0) {
                cs.raw_var = z;
            } else {
                const Wire& wr = wire_[t][hit];
                cs.parent_edge = (z == e.a) ? wr.pa : wr.pb;
                cs.parent_first = (z == e.a) ? wr.pa_first : wr.pb_first;
            }
            chains_[pos].push_back(cs);
            alive[t][hit] = 0;
        }
    }
    for (int v = 0; v < K; ++v)
        if (!taken[v]) order_[0] = v;

    // Positions at which each edge's pair of h values becomes computable.
    std::vector<int> pos_of(K);
    for (int p = 0; p < K; ++p) pos_of[order_[p]] = p;
    compute_at_.assign(K, {});
    for (int t = 0; t < K - 1; ++t)
        for (std::size_t i = 0; i < structure_.trees[t].size(); ++i) {
            int lvl = 0;
            for (int x : complete_union(structure_.trees[t][i]))
                lvl = std::max(lvl, pos_of[x]);
            if (lvl < K - 1) compute_at_[lvl].push_back({t, int(i)});
        }
}

VineModel::State VineModel::make_state() const {
    State st(structure_.trees.size());
    for (std::size_t t = 0; t < structure_.trees.size(); ++t)
        st[t].assign(structure_.trees[t].size(), {0.0, 0.0});
    return st;
}

std::pair<double, double> VineModel::edge_args(int t, int i,
                                               std::span<const double> u,
                                               const State& st) const {
    const VineEdge& e = structure_.trees[t][i];
    if (t == 0) return {u[e.a], u[e.b]};
    const Wire& w = wire_[t][i];
    return {st[t - 1][w.pa][w.pa_first ? 0 : 1],
            st[t - 1][w.pb][w.pb_first ? 0 : 1]};
}

void VineModel::fill_tree(int t, std::span<const double> u, State& st) const {
    for (std::size_t i = 0; i < structure_.trees[t].size(); ++i) {
        auto [fa, fb] = edge_args(t, int(i), u, st);
        const PairCopula& c = structure_.trees[t][i].copula;
        st[t][i] = {c.hfunc(fa, fb), c.hfunc(fb, fa)};
    }
}

double VineModel::log_density(std::span<const double> u) const {
    const int K = structure_.dimension;
    if (int(u.size()) != K)
        fail(ErrorKind::invalid_argument,
             "dimension mismatch: expected " + std::to_string(K) + " inputs, got " +
             std::to_string(u.size()));
    require_finite(u, "vine log_density input");

    State st = make_state();
    std::vector<double> terms;
    terms.reserve(std::size_t(K) * (K - 1) / 2);
    for (int t = 0; t < K - 1; ++t) {
        for (std::size_t i = 0; i < structure_.trees[t].size(); ++i) {
            auto [fa, fb] = edge_args(t, int(i), u, st);
            const PairCopula& c = structure_.trees[t][i].copula;
            terms.push_back(std::max(c.log_density(fa, fb), kLogFloor));
            if (t < K - 2) st[t][i] = {c.hfunc(fa, fb), c.hfunc(fb, fa)};
        }
    }
    // value-sorted accumulation keeps the result invariant under variable
    // relabelings, which permute edge order within a tree
    std::sort(terms.begin(), terms.end());
    double ll = 0.0;
    for (double v : terms) ll += v;
    return ll;
}

Matrix VineModel::sample(std::size_t n, std::uint64_t seed) const {
    const int K = structure_.dimension;
    UniformRng rng(seed);
    Matrix out(n, std::size_t(K));
    std::vector<double> u(K);
    State st = make_state();

    for (std::size_t row = 0; row < n; ++row) {
        u[order_[0]] = rng.next();
        for (int pos = 1; pos < K; ++pos) {
            double p = rng.next();
            for (const ChainStep& cs : chains_[pos]) {
                double s = cs.raw_var >= 0
                               ? u[cs.raw_var]
                               : st[cs.tree - 1][cs.parent_edge][cs.parent_first ? 0 : 1];
                p = structure_.trees[cs.tree][cs.edge].copula.hinv(p, s);
            }
            u[order_[pos]] = p;
            if (pos < K - 1)
                for (auto [t, i] : compute_at_[pos]) {
                    auto [fa, fb] = edge_args(t, i, u, st);
                    const PairCopula& c = structure_.trees[t][i].copula;
                    st[t][i] = {c.hfunc(fa, fb), c.hfunc(fb, fa)};
                }
        }
        for (int k = 0; k < K; ++k) out(row, k) = u[k];
    }
    return out;
}

double VineModel::conditional_cdf(int tree, int edge, std::span<const double> u,
                                  Side side) const {
    const int K = structure_.dimension;
    if (tree < 0 || tree >= int(structure_.trees.size()) || edge < 0 ||
        edge >= int(structure_.trees[tree].size()))
        fail(ErrorKind::invalid_argument, "edge not in model");
    if (int(u.size()) != K)
        fail(ErrorKind::invalid_argument,
             "dimension mismatch: expected " + std::to_string(K) + " inputs, got " +
             std::to_string(u.size()));
    require_finite(u, "conditional_cdf input");

    const VineEdge& e = structure_.trees[tree][edge];
    if (tree == 0) return side == Side::a ? u[e.a] : u[e.b];

    State st = make_state();
    for (int t = 0; t < tree; ++t) fill_tree(t, u, st);
    const Wire& w = wire_[tree][edge];
    return side == Side::a ? st[tree - 1][w.pa][w.pa_first ? 0 : 1]
                           : st[tree - 1][w.pb][w.pb_first ? 0 : 1];
}

} // namespace rvc
