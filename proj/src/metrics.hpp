#pragma once

#include <string>
#include <vector>

namespace rvc {

// Rows are true labels, columns are predicted labels.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<long long> counts;   // row-major, labels.size()^2

    long long at(std::size_t i, std::size_t j) const {
        return counts[i * labels.size() + j];
    }
    long long& at(std::size_t i, std::size_t j) {
        return counts[i * labels.size() + j];
    }
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
};

struct Metrics {
    std::vector<ClassMetrics> per_class;
    double macro_f1 = 0.0;   // (2/G) * sum of p*r/(p+r); empty terms count 0
};

Metrics metrics_from_confusion(const ConfusionMatrix& cm);

// Counts with a trailing recall column, a bottom precision row, and the
// macro F1 in the corner; percentages to one decimal.
std::string format_confusion_table(const ConfusionMatrix& cm);

} // namespace rvc
