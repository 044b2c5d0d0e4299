#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "marginal.hpp"
#include "metrics.hpp"
#include "select.hpp"
#include "util.hpp"
#include "vine.hpp"

namespace rvc {

struct TrainOptions {
    SelectionConfig selection;
    bool empirical_priors = false;   // default: every class weighted 1/G
};

struct ClassModel {
    std::string label;
    double prior = 0.0;
    std::vector<MarginalModel> marginals;   // one per feature
    VineModel vine;
    FitReport report;
};

// Per-class marginals + vine, combined through unnormalized log posteriors.
class ClassifierBundle {
public:
    static ClassifierBundle train(const Matrix& features,
                                  const std::vector<int>& labels,
                                  const std::vector<std::string>& class_names,
                                  std::vector<std::string> feature_names,
                                  const TrainOptions& opts);

    static ClassifierBundle from_parts(std::vector<ClassModel> classes,
                                       std::vector<std::string> feature_names);

    const std::vector<ClassModel>& classes() const { return classes_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    std::size_t dimension() const { return feature_names_.size(); }

    // log prior + sum of marginal log pdfs + vine log density at the
    // class-conditional CDF transform of x. One value per class.
    std::vector<double> log_posterior(std::span<const double> x) const;

    // Argmax class; ties go to the earliest class in enumeration order.
    int predict(std::span<const double> x) const;

    ConfusionMatrix evaluate(const Matrix& features,
                             const std::vector<int>& labels) const;

    int class_index(const std::string& label) const;   // -1 when absent

    std::map<std::string, std::string>& provenance() { return provenance_; }
    const std::map<std::string, std::string>& provenance() const {
        return provenance_;
    }

    std::string fit_report_text() const;
    std::string inspect_text(int class_idx) const;
    std::string inspect_dot(int class_idx) const;   // first tree only

private:
    ClassifierBundle() = default;
    std::vector<ClassModel> classes_;
    std::vector<std::string> feature_names_;
    std::map<std::string, std::string> provenance_;
};

} // namespace rvc
