#include "classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "errors.hpp"

namespace rvc {

namespace {

// Feature names carry an optional "source.name" tag; the prefix groups
// features by origin in the inspect views.
std::string source_of(const std::string& name) {
    auto dot = name.find('.');
    return dot == std::string::npos ? std::string("-") : name.substr(0, dot);
}

} // namespace

ClassifierBundle ClassifierBundle::train(const Matrix& features,
                                         const std::vector<int>& labels,
                                         const std::vector<std::string>& class_names,
                                         std::vector<std::string> feature_names,
                                         const TrainOptions& opts) {
    const std::size_t n = features.rows();
    const std::size_t k = features.cols();
    if (labels.size() != n)
        fail(ErrorKind::invalid_argument, "labels/features row mismatch");
    if (k < 2)
        fail(ErrorKind::invalid_argument, "need at least 2 features");
    if (feature_names.size() != k)
        fail(ErrorKind::invalid_argument, "feature name count mismatch");
    {
        std::set<std::string> seen;
        for (const std::string& f : feature_names) {
            if (f.empty())
                fail(ErrorKind::invalid_argument, "empty feature name");
            if (!seen.insert(f).second)
                fail(ErrorKind::invalid_argument, "duplicate feature name '" + f + "'");
        }
    }
    const std::size_t g = class_names.size();
    if (g < 2)
        fail(ErrorKind::invalid_argument, "need at least 2 classes");
    for (int l : labels)
        if (l < 0 || std::size_t(l) >= g)
            fail(ErrorKind::invalid_argument, "label id out of range");

    std::vector<std::size_t> counts(g, 0);
    for (int l : labels) ++counts[l];
    for (std::size_t c = 0; c < g; ++c)
        if (counts[c] < 30)
            fail(ErrorKind::insufficient_data,
                 "class " + class_names[c] + " has " + std::to_string(counts[c]) +
                 " rows; need at least 30");

    ClassifierBundle out;
    out.feature_names_ = std::move(feature_names);
    for (std::size_t c = 0; c < g; ++c) {
        Matrix rows(counts[c], k);
        std::size_t r = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::size_t(labels[i]) != c) continue;
            for (std::size_t j = 0; j < k; ++j) rows(r, j) = features(i, j);
            ++r;
        }

        std::vector<MarginalModel> margins;
        for (std::size_t j = 0; j < k; ++j) {
            try {
                margins.push_back(MarginalModel::fit(rows.col(j)));
            } catch (const Error& e) {
                fail(e.kind(), "class " + class_names[c] + ", feature " +
                               out.feature_names_[j] + ": " + e.what());
            }
        }

        Matrix pseudo(counts[c], k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < counts[c]; ++i)
                pseudo(i, j) = margins[j].cdf(rows(i, j));

        SelectResult sel = select_structure_and_fit(pseudo, opts.selection);
        double prior = opts.empirical_priors ? double(counts[c]) / double(n)
                                             : 1.0 / double(g);
        out.classes_.push_back(ClassModel{class_names[c], prior,
                                          std::move(margins),
                                          std::move(sel.model),
                                          std::move(sel.report)});
    }
    return out;
}

ClassifierBundle ClassifierBundle::from_parts(
    std::vector<ClassModel> classes, std::vector<std::string> feature_names) {
    if (classes.empty())
        fail(ErrorKind::invalid_argument, "bundle needs at least one class");
    double prior_sum = 0.0;
    std::set<std::string> seen;
    for (const ClassModel& c : classes) {
        if (!seen.insert(c.label).second)
            fail(ErrorKind::invalid_argument, "duplicate class label '" + c.label + "'");
        if (!(c.prior > 0.0))
            fail(ErrorKind::invalid_argument, "class prior must be positive");
        prior_sum += c.prior;
        if (c.marginals.size() != feature_names.size())
            fail(ErrorKind::invalid_argument, "marginal count mismatch");
        if (c.vine.dimension() != int(feature_names.size()))
            fail(ErrorKind::invalid_argument, "vine dimension mismatch");
    }
    if (std::fabs(prior_sum - 1.0) > 1e-12)
        fail(ErrorKind::invalid_argument, "class priors must sum to 1");
    ClassifierBundle out;
    out.classes_ = std::move(classes);
    out.feature_names_ = std::move(feature_names);
    return out;
}

std::vector<double> ClassifierBundle::log_posterior(std::span<const double> x) const {
    const std::size_t k = feature_names_.size();
    if (x.size() != k)
        fail(ErrorKind::invalid_argument,
             "feature vector length " + std::to_string(x.size()) + ", expected " +
             std::to_string(k));
    require_finite(x, "log_posterior input");

    std::vector<double> out;
    std::vector<double> u(k);
    out.reserve(classes_.size());
    for (const ClassModel& c : classes_) {
        double lp = std::log(c.prior);
        for (std::size_t j = 0; j < k; ++j) {
            lp += std::log(c.marginals[j].pdf(x[j]));
            u[j] = clamp_unit(c.marginals[j].cdf(x[j]));
        }
        lp += c.vine.log_density(u);
        out.push_back(lp);
    }
    return out;
}

int ClassifierBundle::predict(std::span<const double> x) const {
    std::vector<double> lp = log_posterior(x);
    int best = 0;
    for (int c = 1; c < int(lp.size()); ++c)
        if (lp[c] > lp[best]) best = c;
    return best;
}

ConfusionMatrix ClassifierBundle::evaluate(const Matrix& features,
                                           const std::vector<int>& labels) const {
    const std::size_t n = features.rows();
    if (n == 0) fail(ErrorKind::invalid_argument, "empty evaluation set");
    if (labels.size() != n)
        fail(ErrorKind::invalid_argument, "labels/features row mismatch");
    const std::size_t g = classes_.size();
    for (int l : labels)
        if (l < 0 || std::size_t(l) >= g)
            fail(ErrorKind::invalid_argument, "label id out of range");

    ConfusionMatrix cm;
    for (const ClassModel& c : classes_) cm.labels.push_back(c.label);
    cm.counts.assign(g * g, 0);
    std::vector<double> row(features.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < features.cols(); ++j) row[j] = features(i, j);
        ++cm.at(std::size_t(labels[i]), std::size_t(predict(row)));
    }
    return cm;
}

int ClassifierBundle::class_index(const std::string& label) const {
    for (std::size_t c = 0; c < classes_.size(); ++c)
        if (classes_[c].label == label) return int(c);
    return -1;
}

std::string ClassifierBundle::fit_report_text() const {
    std::string out;
    for (const ClassModel& c : classes_) {
        out += "class " + c.label + " (prior " + std::to_string(c.prior) + ")\n";
        out += c.report.text(feature_names_);
        out += "\n";
    }
    return out;
}

std::string ClassifierBundle::inspect_text(int class_idx) const {
    if (class_idx < 0 || class_idx >= int(classes_.size()))
        fail(ErrorKind::not_found, "class index out of range");
    const ClassModel& c = classes_[class_idx];
    std::string out = "class: " + c.label + "\n";
    out += "features:";
    for (std::size_t j = 0; j < feature_names_.size(); ++j)
        out += " " + std::to_string(j + 1) + "=" + feature_names_[j];
    out += "\n";
    out += c.report.text(feature_names_);
    return out;
}

std::string ClassifierBundle::inspect_dot(int class_idx) const {
    if (class_idx < 0 || class_idx >= int(classes_.size()))
        fail(ErrorKind::not_found, "class index out of range");
    const ClassModel& c = classes_[class_idx];
    std::string out = "graph tree1 {\n";
    out += "  label=\"" + c.label + ": first tree\";\n";
    for (const std::string& f : feature_names_)
        out += "  \"" + f + "\" [label=\"" + f + "\\n[" + source_of(f) + "]\"];\n";
    char buf[160];
    for (const VineEdge& e : c.vine.structure().trees[0]) {
        std::snprintf(buf, sizeof buf, "  \"%s\" -- \"%s\" [label=\"tau=%.2f %s(%.3g)\"];\n",
                      feature_names_[e.a].c_str(), feature_names_[e.b].c_str(),
                      e.sample_tau, family_name(e.copula.family()),
                      e.copula.theta());
        out += buf;
    }
    out += "}\n";
    return out;
}

} // namespace rvc
