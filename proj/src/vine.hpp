#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pair_copula.hpp"
#include "util.hpp"

namespace rvc {

// One edge of a vine tree. Variables are 0-based internally; rendering and
// serialization add 1. After normalization a < b and conditioning is sorted.
struct VineEdge {
    int a = 0, b = 0;
    std::vector<int> conditioning;
    PairCopula copula;

    // Fit metadata; NaN / empty when the edge was built rather than fitted.
    double sample_tau = std::numeric_limits<double>::quiet_NaN();
    double fit_loglik = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<Family, double>> fit_aic;
};

struct VineStructure {
    int dimension = 0;
    std::vector<std::vector<VineEdge>> trees;   // trees[0] = first tree
};

struct ValidationReport {
    bool ok = true;
    std::string message;   // names the first violated tree/edge when !ok
};

std::string edge_label(const VineEdge& e);   // "1,3|2" style, 1-based

ValidationReport validate_structure(const VineStructure& s);

// A fully validated vine with evaluation, sampling and conditional access.
class VineModel {
public:
    enum class Side { a, b };

    explicit VineModel(VineStructure s);   // throws on validation failure

    int dimension() const { return structure_.dimension; }
    const VineStructure& structure() const { return structure_; }

    // Sum of pair-copula log densities; each term floored at log(1e-300).
    double log_density(std::span<const double> u) const;

    // Inverse Rosenblatt sampling. Row i consumes dimension() draws, one per
    // sampling position in fixed order, so output is seed-deterministic.
    Matrix sample(std::size_t n, std::uint64_t seed) const;

    // F(conditioned-side variable | the edge's conditioning set).
    double conditional_cdf(int tree, int edge, std::span<const double> u,
                           Side side) const;

private:
    struct Wire {
        int pa = -1, pb = -1;        // parent edge indices in the tree below
        bool pa_first = true, pb_first = true;
    };
    struct ChainStep {
        int tree = 0, edge = 0;
        int raw_var = -1;            // >= 0: second arg is u[raw_var]
        int parent_edge = -1;        // else: h value of this parent edge
        bool parent_first = true;
    };

    using State = std::vector<std::vector<std::array<double, 2>>>;

    State make_state() const;
    std::pair<double, double> edge_args(int t, int i, std::span<const double> u,
                                        const State& st) const;
    void fill_tree(int t, std::span<const double> u, State& st) const;

    VineStructure structure_;
    std::vector<std::vector<Wire>> wire_;
    std::vector<int> order_;                            // position -> variable
    std::vector<std::vector<ChainStep>> chains_;        // per position
    std::vector<std::vector<std::pair<int, int>>> compute_at_;   // per position
};

} // namespace rvc
