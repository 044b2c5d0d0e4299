#include "rvc/rvc.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "classify.hpp"
#include "errors.hpp"
#include "marginal.hpp"
#include "metrics.hpp"
#include "normal.hpp"
#include "pair_copula.hpp"
#include "select.hpp"
#include "serialize.hpp"
#include "vine.hpp"

struct rvc_bicop {
    rvc::PairCopula c;
};
struct rvc_vine {
    rvc::SimSpec spec;
};
struct rvc_classifier {
    rvc::ClassifierBundle b;
};

namespace {

thread_local std::string t_last_error = "no error";

template <typename F>
rvc_status wrap(F&& f) noexcept {
    try {
        f();
        return RVC_OK;
    } catch (const rvc::Error& e) {
        t_last_error = e.what();
        return rvc_status(int(e.kind()));
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return RVC_ERROR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return RVC_ERROR_INTERNAL;
    }
}

rvc_status fail_null() {
    t_last_error = "null argument";
    return RVC_ERROR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

rvc::SelectionConfig selection_from_options(const rvc_train_options* opts) {
    rvc::SelectionConfig cfg;
    if (!opts) return cfg;
    cfg.standard_aic = opts->standard_aic != 0;
    cfg.force_independence = opts->force_independence != 0;
    if (opts->families) {
        cfg.candidate_families.clear();
        std::string list = opts->families;
        std::size_t pos = 0;
        while (pos <= list.size()) {
            std::size_t comma = list.find(',', pos);
            std::string token = list.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!token.empty())
                cfg.candidate_families.push_back(rvc::family_from_name(token));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return cfg;
}

rvc::ConfusionMatrix confusion_from_raw(const char* const* labels, size_t g,
                                        const long long* counts) {
    rvc::ConfusionMatrix cm;
    for (size_t i = 0; i < g; ++i) cm.labels.push_back(labels[i]);
    cm.counts.assign(counts, counts + g * g);
    return cm;
}

} // namespace

extern "C" {

const char* rvc_last_error(void) { return t_last_error.c_str(); }

void rvc_string_free(char* s) { ::free(s); }

/* ------------------------------------------------------------- pair copula */

rvc_status rvc_bicop_create(const char* family, double theta, rvc_bicop** out) {
    if (!family || !out) return fail_null();
    return wrap([&] {
        rvc::Family f = rvc::family_from_name(family);
        *out = new rvc_bicop{f == rvc::Family::independence
                                 ? rvc::PairCopula()
                                 : rvc::PairCopula(f, theta)};
    });
}

rvc_status rvc_bicop_from_tau(const char* family, double tau, rvc_bicop** out) {
    if (!family || !out) return fail_null();
    return wrap([&] {
        *out = new rvc_bicop{
            rvc::PairCopula::from_tau(rvc::family_from_name(family), tau)};
    });
}

void rvc_bicop_free(rvc_bicop* c) { delete c; }

rvc_status rvc_bicop_family(const rvc_bicop* c, const char** out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = rvc::family_name(c->c.family()); });
}

rvc_status rvc_bicop_theta(const rvc_bicop* c, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.theta(); });
}

rvc_status rvc_bicop_tau(const rvc_bicop* c, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.tau(); });
}

rvc_status rvc_bicop_density(const rvc_bicop* c, double u, double v, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.density(u, v); });
}

rvc_status rvc_bicop_log_density(const rvc_bicop* c, double u, double v,
                                 double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.log_density(u, v); });
}

rvc_status rvc_bicop_cdf(const rvc_bicop* c, double u, double v, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.cdf(u, v); });
}

rvc_status rvc_bicop_hfunc(const rvc_bicop* c, double u, double v, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.hfunc(u, v); });
}

rvc_status rvc_bicop_hinv(const rvc_bicop* c, double p, double v, double* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->c.hinv(p, v); });
}

rvc_status rvc_bicop_fit(const char* family, const double* u, const double* v,
                         size_t n, rvc_bicop** out, double* out_loglik) {
    if (!family || !u || !v || !out) return fail_null();
    return wrap([&] {
        auto res = rvc::PairCopula::fit_mle(rvc::family_from_name(family),
                                            std::span(u, n), std::span(v, n));
        *out = new rvc_bicop{res.copula};
        if (out_loglik) *out_loglik = res.loglik;
    });
}

rvc_status rvc_bicop_sample(const rvc_bicop* c, size_t n, uint64_t seed,
                            double* out_uv) {
    if (!c || !out_uv) return fail_null();
    return wrap([&] {
        rvc::Matrix m = c->c.sample(n, seed);
        for (size_t i = 0; i < n; ++i) {
            out_uv[2 * i] = m(i, 0);
            out_uv[2 * i + 1] = m(i, 1);
        }
    });
}

/* -------------------------------------------------------------------- vine */

rvc_status rvc_vine_from_spec_json(const char* text, rvc_vine** out) {
    if (!text || !out) return fail_null();
    return wrap([&] { *out = new rvc_vine{rvc::parse_sim_spec(text)}; });
}

void rvc_vine_free(rvc_vine* v) { delete v; }

rvc_status rvc_vine_dimension(const rvc_vine* v, int* out) {
    if (!v || !out) return fail_null();
    return wrap([&] { *out = v->spec.model.dimension(); });
}

rvc_status rvc_vine_name(const rvc_vine* v, int index, char** out) {
    if (!v || !out) return fail_null();
    return wrap([&] {
        if (index < 0 || index >= int(v->spec.names.size()))
            rvc::fail(rvc::ErrorKind::not_found, "variable index out of range");
        *out = dup_string(v->spec.names[index]);
    });
}

rvc_status rvc_vine_log_density(const rvc_vine* v, const double* u, size_t k,
                                double* out) {
    if (!v || !u || !out) return fail_null();
    return wrap([&] { *out = v->spec.model.log_density(std::span(u, k)); });
}

rvc_status rvc_vine_sample(const rvc_vine* v, size_t n, uint64_t seed,
                           double* out) {
    if (!v || !out) return fail_null();
    return wrap([&] {
        rvc::Matrix m = v->spec.model.sample(n, seed);
        size_t k = m.cols();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) out[i * k + j] = m(i, j);
    });
}

rvc_status rvc_vine_sample_features(const rvc_vine* v, size_t n, uint64_t seed,
                                    double* out) {
    if (!v || !out) return fail_null();
    return wrap([&] {
        rvc::Matrix m = v->spec.model.sample(n, seed);
        size_t k = m.cols();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) {
                double x = m(i, j);
                if (v->spec.margins) {
                    const auto& nm = (*v->spec.margins)[j];
                    x = nm.mean + nm.sd * rvc::norm_quantile(rvc::clamp_unit(x));
                }
                out[i * k + j] = x;
            }
    });
}

/* -------------------------------------------------------------- classifier */

rvc_status rvc_classifier_train(const double* features, size_t n, size_t k,
                                const int* labels,
                                const char* const* class_names, size_t n_classes,
                                const char* const* feature_names,
                                const rvc_train_options* opts,
                                rvc_classifier** out) {
    if (!features || !labels || !class_names || !feature_names || !out)
        return fail_null();
    return wrap([&] {
        rvc::Matrix m(n, k);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) m(i, j) = features[i * k + j];
        std::vector<int> lab(labels, labels + n);
        std::vector<std::string> cls(class_names, class_names + n_classes);
        std::vector<std::string> feats(feature_names, feature_names + k);
        rvc::TrainOptions topts;
        topts.selection = selection_from_options(opts);
        topts.empirical_priors = opts && opts->empirical_priors;
        *out = new rvc_classifier{
            rvc::ClassifierBundle::train(m, lab, cls, std::move(feats), topts)};
    });
}

void rvc_classifier_free(rvc_classifier* c) { delete c; }

rvc_status rvc_classifier_save(const rvc_classifier* c, const char* path) {
    if (!c || !path) return fail_null();
    return wrap([&] { rvc::save_text_file(path, rvc::bundle_to_json(c->b)); });
}

rvc_status rvc_classifier_load(const char* path, rvc_classifier** out) {
    if (!path || !out) return fail_null();
    return wrap([&] {
        *out = new rvc_classifier{
            rvc::bundle_from_json(rvc::load_text_file(path))};
    });
}

rvc_status rvc_classifier_num_classes(const rvc_classifier* c, size_t* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->b.classes().size(); });
}

rvc_status rvc_classifier_class_label(const rvc_classifier* c, size_t index,
                                      char** out) {
    if (!c || !out) return fail_null();
    return wrap([&] {
        if (index >= c->b.classes().size())
            rvc::fail(rvc::ErrorKind::not_found, "class index out of range");
        *out = dup_string(c->b.classes()[index].label);
    });
}

rvc_status rvc_classifier_num_features(const rvc_classifier* c, size_t* out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = c->b.feature_names().size(); });
}

rvc_status rvc_classifier_feature_name(const rvc_classifier* c, size_t index,
                                       char** out) {
    if (!c || !out) return fail_null();
    return wrap([&] {
        if (index >= c->b.feature_names().size())
            rvc::fail(rvc::ErrorKind::not_found, "feature index out of range");
        *out = dup_string(c->b.feature_names()[index]);
    });
}

rvc_status rvc_classifier_log_posterior(const rvc_classifier* c, const double* x,
                                        size_t k, double* out) {
    if (!c || !x || !out) return fail_null();
    return wrap([&] {
        std::vector<double> lp = c->b.log_posterior(std::span(x, k));
        for (size_t i = 0; i < lp.size(); ++i) out[i] = lp[i];
    });
}

rvc_status rvc_classifier_predict(const rvc_classifier* c, const double* x,
                                  size_t k, int* out) {
    if (!c || !x || !out) return fail_null();
    return wrap([&] { *out = c->b.predict(std::span(x, k)); });
}

rvc_status rvc_classifier_evaluate(const rvc_classifier* c, const double* features,
                                   size_t n, size_t k, const int* labels,
                                   long long* out_counts) {
    if (!c || !features || !labels || !out_counts) return fail_null();
    return wrap([&] {
        rvc::Matrix m(n, k);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < k; ++j) m(i, j) = features[i * k + j];
        std::vector<int> lab(labels, labels + n);
        rvc::ConfusionMatrix cm = c->b.evaluate(m, lab);
        for (size_t i = 0; i < cm.counts.size(); ++i) out_counts[i] = cm.counts[i];
    });
}

rvc_status rvc_classifier_fit_report(const rvc_classifier* c, char** out) {
    if (!c || !out) return fail_null();
    return wrap([&] { *out = dup_string(c->b.fit_report_text()); });
}

rvc_status rvc_classifier_inspect(const rvc_classifier* c, const char* class_label,
                                  int dot_format, char** out) {
    if (!c || !class_label || !out) return fail_null();
    return wrap([&] {
        int idx = c->b.class_index(class_label);
        if (idx < 0)
            rvc::fail(rvc::ErrorKind::not_found,
                      std::string("unknown class '") + class_label + "'");
        *out = dup_string(dot_format ? c->b.inspect_dot(idx)
                                     : c->b.inspect_text(idx));
    });
}

rvc_status rvc_classifier_set_provenance(rvc_classifier* c, const char* key,
                                         const char* value) {
    if (!c || !key || !value) return fail_null();
    return wrap([&] { c->b.provenance()[key] = value; });
}

/* ----------------------------------------------------------------- metrics */

rvc_status rvc_metrics_format(const char* const* labels, size_t g,
                              const long long* counts, char** out) {
    if (!labels || !counts || !out) return fail_null();
    return wrap([&] {
        *out = dup_string(
            rvc::format_confusion_table(confusion_from_raw(labels, g, counts)));
    });
}

rvc_status rvc_metrics_macro_f1(const char* const* labels, size_t g,
                                const long long* counts, double* out) {
    if (!labels || !counts || !out) return fail_null();
    return wrap([&] {
        *out = rvc::metrics_from_confusion(confusion_from_raw(labels, g, counts))
                   .macro_f1;
    });
}

} // extern "C"
