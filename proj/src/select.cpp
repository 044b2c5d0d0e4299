#include "select.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "kendall.hpp"

namespace rvc {

namespace {

std::vector<Family> canonical_candidates(const SelectionConfig& cfg) {
    if (cfg.candidate_families.empty())
        fail(ErrorKind::invalid_argument, "candidate family set is empty");
    std::vector<Family> out;
    for (Family f : kAllFamilies) {
        bool wanted = f == Family::independence ||
                      std::find(cfg.candidate_families.begin(),
                                cfg.candidate_families.end(),
                                f) != cfg.candidate_families.end();
        if (wanted) out.push_back(f);
    }
    return out;
}

struct BuiltEdge {
    int a = 0, b = 0;                  // a < b
    std::vector<int> conditioning;     // sorted
    std::vector<int> cunion;           // conditioning + {a, b}, sorted
    int pa = -1, pb = -1;              // parent indices one level down
    FamilyChoice choice;
    std::vector<double> col_a, col_b;  // F(a | rest), F(b | rest)
};

struct Candidate {
    int j = 0, k = 0;                  // node indices at this level
    int a = 0, b = 0;
    std::vector<int> conditioning;
    double tau = 0.0;
    const std::vector<double>* ca = nullptr;
    const std::vector<double>* cb = nullptr;
};

// Lexicographic candidate identity: conditioned pair then conditioning set.
bool label_less(const Candidate& x, const Candidate& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.conditioning < y.conditioning;
}

// Prim over the admissible candidates, maximizing |tau|; weight ties resolve
// to the smaller candidate label so the result is input-deterministic.
std::vector<const Candidate*> max_spanning_tree(
    const std::vector<Candidate>& cands, int nodes) {
    std::vector<char> in_tree(nodes, 0);
    in_tree[0] = 1;
    std::vector<const Candidate*> chosen;
    for (int step = 1; step < nodes; ++step) {
        const Candidate* best = nullptr;
        for (const Candidate& c : cands) {
            if (in_tree[c.j] == in_tree[c.k]) continue;   // not a crossing edge
            if (!best || std::fabs(c.tau) > std::fabs(best->tau) ||
                (std::fabs(c.tau) == std::fabs(best->tau) && label_less(c, *best)))
                best = &c;
        }
        if (!best)
            fail(ErrorKind::numerical, "spanning tree construction failed");
        in_tree[best->j] = in_tree[best->k] = 1;
        chosen.push_back(best);
    }
    return chosen;
}

} // namespace

FamilyChoice select_family(std::span<const double> u, std::span<const double> v,
                           const SelectionConfig& cfg) {
    std::vector<Family> cands = canonical_candidates(cfg);
    if (u.size() != v.size())
        fail(ErrorKind::invalid_argument, "family selection: length mismatch");

    FamilyChoice out;
    if (cfg.force_independence) {
        out.tau_hat = kendall_tau(u, v);
        out.aic = {{Family::independence, 0.0}};
        return out;
    }

    double tau_hat = kendall_tau(u, v);
    out.tau_hat = tau_hat;

    bool have = false;
    double best_aic = 0.0;
    for (Family f : cands) {
        if (tau_hat < 0.0 && family_positive_only(f)) continue;
        auto fit = PairCopula::fit_mle(f, u, v);
        double q = family_param_count(f);
        double aic = (cfg.standard_aic ? -2.0 * fit.loglik : -fit.loglik) + 2.0 * q;
        out.aic.emplace_back(f, aic);
        if (!have || aic < best_aic) {
            have = true;
            best_aic = aic;
            out.copula = fit.copula;
            out.loglik = fit.loglik;
        }
    }
    return out;
}

SelectResult select_structure_and_fit(const Matrix& u, const SelectionConfig& cfg) {
    canonical_candidates(cfg);   // validates the family set up front
    const std::size_t n = u.rows();
    const int K = int(u.cols());
    if (K < 2)
        fail(ErrorKind::invalid_argument, "need at least 2 columns");
    if (n < 30)
        fail(ErrorKind::insufficient_data,
             "need at least 30 rows, got " + std::to_string(n));
    for (int k = 0; k < K; ++k) {
        auto col = u.col(k);
        require_finite(col, "column " + std::to_string(k + 1));
        for (double x : col)
            if (!(x > 0.0 && x < 1.0))
                fail(ErrorKind::invalid_argument,
                     "column " + std::to_string(k + 1) +
                     ": pseudo-observations must lie in (0,1)");
        if (std::all_of(col.begin(), col.end(),
                        [&](double x) { return x == col[0]; }))
            fail(ErrorKind::degenerate_data,
                 "column " + std::to_string(k + 1) + " is constant");
    }

    auto fit_edge = [&](const Candidate& c) {
        BuiltEdge e;
        e.a = c.a;
        e.b = c.b;
        e.conditioning = c.conditioning;
        e.cunion = c.conditioning;
        e.cunion.push_back(c.a);
        e.cunion.push_back(c.b);
        std::sort(e.cunion.begin(), e.cunion.end());
        e.pa = c.j;
        e.pb = c.k;
        if (cfg.force_independence) {
            FamilyChoice fc;
            fc.tau_hat = c.tau;
            fc.aic = {{Family::independence, 0.0}};
            e.choice = fc;
        } else {
            e.choice = select_family(*c.ca, *c.cb, cfg);
        }
        const PairCopula& cop = e.choice.copula;
        e.col_a.resize(n);
        e.col_b.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            e.col_a[i] = cop.hfunc((*c.ca)[i], (*c.cb)[i]);
            e.col_b[i] = cop.hfunc((*c.cb)[i], (*c.ca)[i]);
        }
        return e;
    };

    std::vector<std::vector<BuiltEdge>> levels;

    // First tree: complete graph on the variables.
    {
        std::vector<std::vector<double>> cols(K);
        for (int k = 0; k < K; ++k) {
            auto c = u.col(k);
            cols[k].assign(c.begin(), c.end());
        }
        std::vector<Candidate> cands;
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) {
                Candidate c;
                c.j = i;
                c.k = j;
                c.a = i;
                c.b = j;
                c.tau = kendall_tau(cols[i], cols[j]);
                c.ca = &cols[i];
                c.cb = &cols[j];
                cands.push_back(std::move(c));
            }
        auto chosen = max_spanning_tree(cands, K);
        std::vector<Candidate> picked;
        for (const Candidate* c : chosen) picked.push_back(*c);
        std::sort(picked.begin(), picked.end(), label_less);
        std::vector<BuiltEdge> level;
        for (const Candidate& c : picked) level.push_back(fit_edge(c));
        levels.push_back(std::move(level));
    }

    // Higher trees over the previous level's h columns.
    for (int t = 1; t < K - 1; ++t) {
        const auto& prev = levels[t - 1];
        std::vector<Candidate> cands;
        for (std::size_t j = 0; j + 1 < prev.size(); ++j)
            for (std::size_t k = j + 1; k < prev.size(); ++k) {
                bool adjacent =
                    t == 1 ? (prev[j].a == prev[k].a || prev[j].a == prev[k].b ||
                              prev[j].b == prev[k].a || prev[j].b == prev[k].b)
                           : (prev[j].pa == prev[k].pa || prev[j].pa == prev[k].pb ||
                              prev[j].pb == prev[k].pa || prev[j].pb == prev[k].pb);
                if (!adjacent) continue;
                Candidate c;
                c.j = int(j);
                c.k = int(k);
                std::set_intersection(prev[j].cunion.begin(), prev[j].cunion.end(),
                                      prev[k].cunion.begin(), prev[k].cunion.end(),
                                      std::back_inserter(c.conditioning));
                std::vector<int> sym;
                std::set_symmetric_difference(
                    prev[j].cunion.begin(), prev[j].cunion.end(),
                    prev[k].cunion.begin(), prev[k].cunion.end(),
                    std::back_inserter(sym));
                if (sym.size() != 2 || c.conditioning.size() != std::size_t(t))
                    continue;
                int x = sym[0], y = sym[1];   // x < y; x may come from either side
                bool x_in_j = std::binary_search(prev[j].cunion.begin(),
                                                 prev[j].cunion.end(), x);
                const BuiltEdge& ej = x_in_j ? prev[j] : prev[k];
                const BuiltEdge& ek = x_in_j ? prev[k] : prev[j];
                c.a = x;
                c.b = y;
                c.ca = (x == ej.a) ? &ej.col_a : &ej.col_b;
                c.cb = (y == ek.a) ? &ek.col_a : &ek.col_b;
                c.tau = kendall_tau(*c.ca, *c.cb);
                cands.push_back(std::move(c));
            }
        auto chosen = max_spanning_tree(cands, int(prev.size()));
        std::vector<Candidate> picked;
        for (const Candidate* c : chosen) picked.push_back(*c);
        std::sort(picked.begin(), picked.end(), label_less);
        std::vector<BuiltEdge> level;
        for (const Candidate& c : picked) level.push_back(fit_edge(c));
        levels.push_back(std::move(level));
    }

    VineStructure s;
    s.dimension = K;
    FitReport report;
    for (int t = 0; t < K - 1; ++t) {
        std::vector<VineEdge> tree;
        for (const BuiltEdge& be : levels[t]) {
            VineEdge e;
            e.a = be.a;
            e.b = be.b;
            e.conditioning = be.conditioning;
            e.copula = be.choice.copula;
            e.sample_tau = be.choice.tau_hat;
            e.fit_loglik = be.choice.loglik;
            e.fit_aic = be.choice.aic;
            tree.push_back(e);

            FitReportRow row;
            row.tree = t;
            row.a = be.a;
            row.b = be.b;
            row.conditioning = be.conditioning;
            row.tau_hat = be.choice.tau_hat;
            row.family = be.choice.copula.family();
            row.theta = be.choice.copula.theta();
            row.loglik = be.choice.loglik;
            row.aic = be.choice.aic;
            report.rows.push_back(std::move(row));
            report.total_loglik += be.choice.loglik;
        }
        s.trees.push_back(std::move(tree));
    }
    return {VineModel(std::move(s)), std::move(report)};
}

std::string FitReport::text(const std::vector<std::string>& names) const {
    auto var_name = [&](int v) {
        return v < int(names.size()) ? names[v] : std::to_string(v + 1);
    };
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-5s %-28s %9s %-13s %10s %10s\n", "tree",
                  "edge", "tau", "family", "theta", "loglik");
    out += buf;
    for (const FitReportRow& r : rows) {
        std::string label = var_name(r.a) + "," + var_name(r.b);
        if (!r.conditioning.empty()) {
            label += "|";
            for (std::size_t i = 0; i < r.conditioning.size(); ++i) {
                if (i) label += ",";
                label += var_name(r.conditioning[i]);
            }
        }
        std::snprintf(buf, sizeof buf, "%-5d %-28s %9.4f %-13s %10.4f %10.2f\n",
                      r.tree + 1, label.c_str(), r.tau_hat,
                      family_name(r.family), r.theta, r.loglik);
        out += buf;
        out += "      aic:";
        for (const auto& [f, a] : r.aic) {
            std::snprintf(buf, sizeof buf, " %s=%.2f", family_name(f), a);
            out += buf;
        }
        out += "\n";
    }
    std::snprintf(buf, sizeof buf, "total loglik %.2f\n", total_loglik);
    out += buf;
    return out;
}

} // namespace rvc
