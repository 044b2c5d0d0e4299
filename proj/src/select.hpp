#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "family.hpp"
#include "pair_copula.hpp"
#include "util.hpp"
#include "vine.hpp"

namespace rvc {

struct SelectionConfig {
    // Canonicalized to enumeration order; independence is always included.
    std::vector<Family> candidate_families{kAllFamilies.begin(), kAllFamilies.end()};
    bool standard_aic = false;        // false: -loglik + 2q, true: -2 loglik + 2q
    bool force_independence = false;  // keep MST structure, skip family fitting
};

struct FamilyChoice {
    PairCopula copula;
    double loglik = 0.0;
    double tau_hat = 0.0;
    std::vector<std::pair<Family, double>> aic;   // admissible candidates only
};

// Fits every admissible candidate family by MLE and keeps the AIC minimizer;
// ties resolve to the earliest family in enumeration order. Negative sample
// tau removes Clayton and Gumbel from the candidate list.
FamilyChoice select_family(std::span<const double> u, std::span<const double> v,
                           const SelectionConfig& cfg);

struct FitReportRow {
    int tree = 0;          // 0-based
    int a = 0, b = 0;
    std::vector<int> conditioning;
    double tau_hat = 0.0;
    Family family = Family::independence;
    double theta = 0.0;
    double loglik = 0.0;
    std::vector<std::pair<Family, double>> aic;
};

struct FitReport {
    std::vector<FitReportRow> rows;   // tree-major, canonical edge order
    double total_loglik = 0.0;
    // Human-readable table; names (when sized to the dimension) replace ids.
    std::string text(const std::vector<std::string>& names = {}) const;
};

struct SelectResult {
    VineModel model;
    FitReport report;
};

// Sequential maximum spanning trees on |sample tau|, first over variables,
// then over the h-transformed columns of each chosen edge.
SelectResult select_structure_and_fit(const Matrix& u, const SelectionConfig& cfg);

} // namespace rvc
