#include "metrics.hpp"

#include <cstdio>

#include "errors.hpp"

namespace rvc {

Metrics metrics_from_confusion(const ConfusionMatrix& cm) {
    const std::size_t g = cm.labels.size();
    if (g == 0 || cm.counts.size() != g * g)
        fail(ErrorKind::invalid_argument, "confusion matrix shape mismatch");
    Metrics m;
    m.per_class.resize(g);
    double f1_sum = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        long long row = 0, col = 0;
        for (std::size_t j = 0; j < g; ++j) {
            row += cm.at(i, j);
            col += cm.at(j, i);
        }
        double tp = double(cm.at(i, i));
        double p = col > 0 ? tp / double(col) : 0.0;
        double r = row > 0 ? tp / double(row) : 0.0;
        m.per_class[i] = {p, r};
        if (p + r > 0.0) f1_sum += p * r / (p + r);
    }
    m.macro_f1 = 2.0 * f1_sum / double(g);
    return m;
}

std::string format_confusion_table(const ConfusionMatrix& cm) {
    const std::size_t g = cm.labels.size();
    Metrics m = metrics_from_confusion(cm);

    std::size_t w = 9;   // cell width; grow to fit labels
    for (const std::string& l : cm.labels) w = std::max(w, l.size() + 2);

    auto pad = [&](const std::string& s) {
        std::string out = s;
        while (out.size() < w) out.insert(out.begin(), ' ');
        return out;
    };
    auto pct = [&](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * x);
        return pad(buf);
    };

    std::size_t first = w + 2;
    std::string out(first, ' ');
    for (const std::string& l : cm.labels) out += pad(l);
    out += pad("Recall");
    out += "\n";
    for (std::size_t i = 0; i < g; ++i) {
        std::string head = cm.labels[i];
        while (head.size() < first) head += ' ';
        out += head;
        for (std::size_t j = 0; j < g; ++j)
            out += pad(std::to_string(cm.at(i, j)));
        out += pct(m.per_class[i].recall);
        out += "\n";
    }
    std::string head = "Precision";
    while (head.size() < first) head += ' ';
    out += head;
    for (std::size_t j = 0; j < g; ++j) out += pct(m.per_class[j].precision);
    out += pct(m.macro_f1);
    out += "\n";
    return out;
}

} // namespace rvc
