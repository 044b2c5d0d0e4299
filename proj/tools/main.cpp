#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <rvc/rvc.h>

#include "csv.hpp"

namespace {

using cli::CliError;
using cli::Csv;

int exit_code(rvc_status s) {
    switch (s) {
        case RVC_OK: return 0;
        case RVC_ERROR_INVALID_ARGUMENT:
        case RVC_ERROR_PARSE:
        case RVC_ERROR_IO: return 2;
        case RVC_ERROR_INSUFFICIENT_DATA:
        case RVC_ERROR_DEGENERATE_DATA: return 3;
        case RVC_ERROR_NOT_FOUND: return 4;
        default: return 5;
    }
}

void check(rvc_status s) {
    if (s != RVC_OK) throw CliError{exit_code(s), rvc_last_error()};
}

struct ClassifierDeleter {
    void operator()(rvc_classifier* c) const { rvc_classifier_free(c); }
};
using ClassifierPtr = std::unique_ptr<rvc_classifier, ClassifierDeleter>;

struct VineDeleter {
    void operator()(rvc_vine* v) const { rvc_vine_free(v); }
};
using VinePtr = std::unique_ptr<rvc_vine, VineDeleter>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    rvc_string_free(s);
    return out;
}

ClassifierPtr load_model(const std::string& path) {
    rvc_classifier* raw = nullptr;
    check(rvc_classifier_load(path.c_str(), &raw));
    return ClassifierPtr(raw);
}

std::vector<std::string> model_feature_names(const rvc_classifier* c) {
    size_t k = 0;
    check(rvc_classifier_num_features(c, &k));
    std::vector<std::string> out;
    for (size_t j = 0; j < k; ++j) {
        char* s = nullptr;
        check(rvc_classifier_feature_name(c, j, &s));
        out.push_back(take_string(s));
    }
    return out;
}

std::vector<std::string> model_class_labels(const rvc_classifier* c) {
    size_t g = 0;
    check(rvc_classifier_num_classes(c, &g));
    std::vector<std::string> out;
    for (size_t i = 0; i < g; ++i) {
        char* s = nullptr;
        check(rvc_classifier_class_label(c, i, &s));
        out.push_back(take_string(s));
    }
    return out;
}

std::size_t find_column(const Csv& csv, const std::string& name,
                        const std::string& what) {
    for (std::size_t c = 0; c < csv.header.size(); ++c)
        if (csv.header[c] == name) return c;
    std::string available;
    for (std::size_t c = 0; c < csv.header.size(); ++c)
        available += (c ? ", " : "") + csv.header[c];
    throw CliError{4, what + " column '" + name + "' not found; available: " +
                          available};
}

// Maps every model feature to a CSV column; missing names are a reference
// mismatch (exit 4) listing both sides of the difference.
std::vector<std::size_t> bind_features(const Csv& csv,
                                       const std::vector<std::string>& names,
                                       const std::string& skip_col) {
    std::vector<std::size_t> idx;
    std::vector<std::string> missing;
    std::set<std::string> used;
    for (const std::string& n : names) {
        bool found = false;
        for (std::size_t c = 0; c < csv.header.size(); ++c)
            if (csv.header[c] == n) {
                idx.push_back(c);
                used.insert(n);
                found = true;
                break;
            }
        if (!found) missing.push_back(n);
    }
    if (!missing.empty()) {
        std::string msg = "feature columns missing from input:";
        for (const std::string& m : missing) msg += " " + m;
        std::string extra;
        for (const std::string& h : csv.header)
            if (!used.count(h) && h != skip_col) extra += " " + h;
        if (!extra.empty()) msg += "; unmatched input columns:" + extra;
        throw CliError{4, msg};
    }
    return idx;
}

struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<double> values;        // row-major
    std::vector<int> labels;
    std::vector<std::string> classes;  // first-appearance order
    std::size_t rows = 0;
};

Dataset load_dataset(const Csv& csv, const std::string& label_col,
                     const std::vector<std::string>& sources) {
    Dataset d;
    std::size_t label_idx = find_column(csv, label_col, "label");
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < csv.header.size(); ++c) {
        if (c == label_idx) continue;
        if (!sources.empty()) {
            const std::string& name = csv.header[c];
            std::string src = name.substr(0, name.find('.'));
            bool keep = false;
            for (const std::string& s : sources) keep = keep || s == src;
            if (!keep) continue;
        }
        cols.push_back(c);
        d.feature_names.push_back(csv.header[c]);
    }
    if (cols.size() < 2)
        throw CliError{2, "need at least 2 feature columns, found " +
                              std::to_string(cols.size())};

    std::map<std::string, int> class_ids;
    d.rows = csv.rows.size();
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        for (std::size_t c : cols) d.values.push_back(cli::parse_cell(csv, i, c));
        const std::string& label = csv.rows[i][label_idx];
        if (label.empty())
            throw CliError{2, "line " + std::to_string(csv.line_of[i]) +
                                  ": empty label"};
        auto it = class_ids.find(label);
        if (it == class_ids.end()) {
            it = class_ids.emplace(label, int(d.classes.size())).first;
            d.classes.push_back(label);
        }
        d.labels.push_back(it->second);
    }
    return d;
}

int cmd_train(const std::string& features_path, const std::string& label_col,
              const std::string& out_path, const std::string& priors,
              const std::string& aic, std::uint64_t seed,
              const std::vector<std::string>& families,
              bool independence_only, const std::vector<std::string>& sources) {
    std::string text = cli::read_file(features_path);
    Csv csv = cli::parse_csv(text, features_path);
    Dataset d = load_dataset(csv, label_col, sources);

    std::string family_list;
    for (const std::string& f : families)
        family_list += (family_list.empty() ? "" : ",") + f;

    rvc_train_options opts{};
    opts.empirical_priors = priors == "empirical";
    opts.standard_aic = aic == "standard";
    opts.force_independence = independence_only;
    opts.families = family_list.empty() ? nullptr : family_list.c_str();

    std::vector<const char*> class_ptrs, feat_ptrs;
    for (const std::string& s : d.classes) class_ptrs.push_back(s.c_str());
    for (const std::string& s : d.feature_names) feat_ptrs.push_back(s.c_str());

    rvc_classifier* raw = nullptr;
    check(rvc_classifier_train(d.values.data(), d.rows, d.feature_names.size(),
                               d.labels.data(), class_ptrs.data(),
                               d.classes.size(), feat_ptrs.data(), &opts, &raw));
    ClassifierPtr model(raw);

    std::string config = "priors=" + priors + " aic=" + aic;
    if (!family_list.empty()) config += " families=" + family_list;
    if (independence_only) config += " independence-only";
    if (!sources.empty()) {
        config += " sources=";
        for (std::size_t i = 0; i < sources.size(); ++i)
            config += (i ? "," : "") + sources[i];
    }
    check(rvc_classifier_set_provenance(model.get(), "config", config.c_str()));
    check(rvc_classifier_set_provenance(model.get(), "seed",
                                        std::to_string(seed).c_str()));
    check(rvc_classifier_set_provenance(model.get(), "input_digest",
                                        cli::fnv1a_hex(text).c_str()));
    check(rvc_classifier_set_provenance(model.get(), "input_rows",
                                        std::to_string(d.rows).c_str()));
    check(rvc_classifier_save(model.get(), out_path.c_str()));

    char* report = nullptr;
    check(rvc_classifier_fit_report(model.get(), &report));
    std::cout << take_string(report);
    std::cout << "model written to " << out_path << "\n";
    return 0;
}

int cmd_classify(const std::string& model_path, const std::string& features_path,
                 const std::string& out_path) {
    ClassifierPtr model = load_model(model_path);
    Csv csv = cli::read_csv(features_path);
    std::vector<std::string> names = model_feature_names(model.get());
    std::vector<std::string> labels = model_class_labels(model.get());
    std::vector<std::size_t> cols = bind_features(csv, names, "");

    Csv out;
    out.header.push_back("row");
    out.header.push_back("predicted");
    for (const std::string& l : labels) out.header.push_back("logpost." + l);

    std::vector<double> x(names.size());
    std::vector<double> lp(labels.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j)
            x[j] = cli::parse_cell(csv, i, cols[j]);
        int cls = 0;
        check(rvc_classifier_predict(model.get(), x.data(), x.size(), &cls));
        check(rvc_classifier_log_posterior(model.get(), x.data(), x.size(),
                                           lp.data()));
        std::vector<std::string> row;
        row.push_back(std::to_string(i + 1));
        row.push_back(labels[cls]);
        for (double v : lp) row.push_back(cli::format_double(v));
        out.rows.push_back(std::move(row));
    }
    cli::write_csv(out_path, out);
    std::cout << out.rows.size() << " rows classified\n";
    return 0;
}

int print_metrics(const std::vector<std::string>& labels,
                  const std::vector<long long>& counts) {
    std::vector<const char*> ptrs;
    for (const std::string& l : labels) ptrs.push_back(l.c_str());
    char* table = nullptr;
    check(rvc_metrics_format(ptrs.data(), labels.size(), counts.data(), &table));
    std::cout << take_string(table);
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& features_path,
                 const std::string& label_col, const std::string& confusion_path) {
    if (!confusion_path.empty()) {
        // Fixture mode: a square counts table, row labels in the first column.
        Csv csv = cli::read_csv(confusion_path);
        if (csv.header.size() < 2)
            throw CliError{2, confusion_path + ": expected label column plus counts"};
        std::vector<std::string> labels(csv.header.begin() + 1, csv.header.end());
        if (csv.rows.size() != labels.size())
            throw CliError{2, confusion_path + ": counts must be square, got " +
                                  std::to_string(csv.rows.size()) + " rows for " +
                                  std::to_string(labels.size()) + " labels"};
        std::vector<long long> counts;
        for (std::size_t i = 0; i < csv.rows.size(); ++i) {
            if (csv.rows[i][0] != labels[i])
                throw CliError{2, confusion_path + ": row label '" + csv.rows[i][0] +
                                      "' does not match header label '" +
                                      labels[i] + "'"};
            for (std::size_t j = 1; j < csv.header.size(); ++j)
                counts.push_back((long long)cli::parse_cell(csv, i, j));
        }
        return print_metrics(labels, counts);
    }

    ClassifierPtr model = load_model(model_path);
    Csv csv = cli::read_csv(features_path);
    std::vector<std::string> names = model_feature_names(model.get());
    std::vector<std::string> labels = model_class_labels(model.get());
    std::size_t label_idx = find_column(csv, label_col, "label");
    std::vector<std::size_t> cols = bind_features(csv, names, label_col);

    std::vector<double> values;
    std::vector<int> ids;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        for (std::size_t c : cols) values.push_back(cli::parse_cell(csv, i, c));
        const std::string& l = csv.rows[i][label_idx];
        auto it = std::find(labels.begin(), labels.end(), l);
        if (it == labels.end())
            throw CliError{4, "line " + std::to_string(csv.line_of[i]) + ": label '" +
                                  l + "' is not a model class"};
        ids.push_back(int(it - labels.begin()));
    }
    if (ids.empty()) throw CliError{2, features_path + ": no data rows"};

    std::vector<long long> counts(labels.size() * labels.size());
    check(rvc_classifier_evaluate(model.get(), values.data(), ids.size(),
                                  names.size(), ids.data(), counts.data()));
    return print_metrics(labels, counts);
}

int cmd_simulate(const std::string& spec_path, std::size_t n, std::uint64_t seed,
                 const std::string& out_path) {
    if (n < 1) throw CliError{2, "--n must be at least 1"};
    rvc_vine* raw = nullptr;
    check(rvc_vine_from_spec_json(cli::read_file(spec_path).c_str(), &raw));
    VinePtr vine(raw);

    int k = 0;
    check(rvc_vine_dimension(vine.get(), &k));
    std::vector<double> buf(n * std::size_t(k));
    check(rvc_vine_sample_features(vine.get(), n, seed, buf.data()));

    Csv out;
    for (int j = 0; j < k; ++j) {
        char* name = nullptr;
        check(rvc_vine_name(vine.get(), j, &name));
        out.header.push_back(take_string(name));
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < k; ++j)
            row.push_back(cli::format_double(buf[i * std::size_t(k) + j]));
        out.rows.push_back(std::move(row));
    }
    cli::write_csv(out_path, out);
    std::cout << n << " rows written to " << out_path << "\n";
    return 0;
}

int cmd_inspect(const std::string& model_path, const std::string& class_name,
                const std::string& format) {
    ClassifierPtr model = load_model(model_path);
    bool dot = format == "dot";
    if (dot && class_name.empty())
        throw CliError{2, "dot format requires --class"};

    std::vector<std::string> targets;
    if (!class_name.empty())
        targets.push_back(class_name);
    else
        targets = model_class_labels(model.get());

    for (const std::string& t : targets) {
        char* text = nullptr;
        check(rvc_classifier_inspect(model.get(), t.c_str(), dot ? 1 : 0, &text));
        std::cout << take_string(text);
        if (!dot) std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"R-vine copula feature-fusion classifier"};
    app.require_subcommand(1);

    std::string features_path, label_col, out_path, model_path, spec_path;
    std::string priors = "uniform", aic = "paper", class_name, format = "text";
    std::string confusion_path;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::vector<std::string> families, sources;
    bool independence_only = false;

    CLI::App* train = app.add_subcommand("train", "Fit a classifier from a CSV");
    train->add_option("--features", features_path, "training CSV")->required();
    train->add_option("--label-col", label_col, "label column name")->required();
    train->add_option("--out", out_path, "model file to write")->required();
    train->add_option("--priors", priors, "uniform|empirical")
        ->check(CLI::IsMember({"uniform", "empirical"}));
    train->add_option("--aic", aic, "paper|standard")
        ->check(CLI::IsMember({"paper", "standard"}));
    train->add_option("--seed", seed, "recorded in model provenance");
    train->add_option("--families", families,
                      "candidate copula families (default: all)");
    train->add_flag("--independence-only", independence_only,
                    "force every pair copula to independence");
    train->add_option("--sources", sources,
                      "keep only features whose source tag matches");

    CLI::App* classify = app.add_subcommand("classify", "Predict classes");
    classify->add_option("--model", model_path, "model file")->required();
    classify->add_option("--features", features_path, "input CSV")->required();
    classify->add_option("--out", out_path, "predictions CSV")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "Score labeled data");
    evaluate->add_option("--model", model_path, "model file");
    evaluate->add_option("--features", features_path, "labeled CSV");
    evaluate->add_option("--label-col", label_col, "label column name");
    evaluate->add_option("--confusion", confusion_path,
                         "format a stored confusion-count table instead");

    CLI::App* simulate = app.add_subcommand("simulate", "Sample from a vine spec");
    simulate->add_option("--spec", spec_path, "vine spec file")->required();
    simulate->add_option("--n", n, "rows to sample")->required();
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--out", out_path, "output CSV")->required();

    CLI::App* inspect = app.add_subcommand("inspect", "Show fitted dependence");
    inspect->add_option("--model", model_path, "model file")->required();
    inspect->add_option("--class", class_name, "class to show (default: all)");
    inspect->add_option("--format", format, "text|dot")
        ->check(CLI::IsMember({"text", "dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (train->parsed())
            return cmd_train(features_path, label_col, out_path, priors, aic, seed,
                             families, independence_only, sources);
        if (classify->parsed())
            return cmd_classify(model_path, features_path, out_path);
        if (evaluate->parsed()) {
            if (confusion_path.empty() &&
                (model_path.empty() || features_path.empty() || label_col.empty()))
                throw CliError{2,
                               "evaluate needs --model, --features and --label-col "
                               "(or --confusion)"};
            return cmd_evaluate(model_path, features_path, label_col,
                                confusion_path);
        }
        if (simulate->parsed()) return cmd_simulate(spec_path, n, seed, out_path);
        if (inspect->parsed()) return cmd_inspect(model_path, class_name, format);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    }
    return 2;
}
