#include "serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace rvc {

using nlohmann::json;

namespace {

const char* kModelFormat = "rvc-model/1";
const char* kVineFormat = "rvc-vine/1";

json require(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end())
        fail(ErrorKind::parse, ctx + ": missing field '" + key + "'");
    return *it;
}

json edge_to_json(const VineEdge& e) {
    json out;
    out["conditioned"] = {e.a + 1, e.b + 1};
    json cond = json::array();
    for (int x : e.conditioning) cond.push_back(x + 1);
    out["conditioning"] = cond;
    out["family"] = family_name(e.copula.family());
    out["parameter"] = e.copula.theta();
    if (!std::isnan(e.sample_tau)) out["sample_tau"] = e.sample_tau;
    if (!std::isnan(e.fit_loglik)) out["loglik"] = e.fit_loglik;
    if (!e.fit_aic.empty()) {
        json aic;
        for (const auto& [f, a] : e.fit_aic) aic[family_name(f)] = a;
        out["aic"] = aic;
    }
    return out;
}

VineEdge edge_from_json(const json& j, const std::string& ctx) {
    VineEdge e;
    json cd = require(j, "conditioned", ctx);
    if (!cd.is_array() || cd.size() != 2)
        fail(ErrorKind::parse, ctx + ": 'conditioned' must be a pair");
    e.a = cd[0].get<int>() - 1;
    e.b = cd[1].get<int>() - 1;
    if (j.contains("conditioning"))
        for (const json& x : j["conditioning"])
            e.conditioning.push_back(x.get<int>() - 1);
    Family f = family_from_name(require(j, "family", ctx).get<std::string>());
    double theta = j.value("parameter", 0.0);
    e.copula = f == Family::independence ? PairCopula() : PairCopula(f, theta);
    e.sample_tau = j.value("sample_tau",
                           std::numeric_limits<double>::quiet_NaN());
    e.fit_loglik = j.value("loglik", std::numeric_limits<double>::quiet_NaN());
    if (j.contains("aic")) {
        const json& aic = j["aic"];
        for (Family g : kAllFamilies) {
            auto it = aic.find(family_name(g));
            if (it != aic.end()) e.fit_aic.emplace_back(g, it->get<double>());
        }
    }
    return e;
}

json trees_to_json(const VineStructure& s) {
    json trees = json::array();
    for (const auto& tree : s.trees) {
        json t = json::array();
        for (const VineEdge& e : tree) t.push_back(edge_to_json(e));
        trees.push_back(t);
    }
    return trees;
}

VineStructure trees_from_json(const json& trees, int dim, const std::string& ctx) {
    VineStructure s;
    s.dimension = dim;
    if (!trees.is_array())
        fail(ErrorKind::parse, ctx + ": 'trees' must be an array");
    int t = 0;
    for (const json& tree : trees) {
        std::vector<VineEdge> edges;
        int i = 0;
        for (const json& ej : tree) {
            edges.push_back(edge_from_json(
                ej, ctx + ", tree " + std::to_string(t + 1) + ", edge " +
                    std::to_string(i + 1)));
            ++i;
        }
        s.trees.push_back(std::move(edges));
        ++t;
    }
    return s;
}

FitReport report_from_edges(const VineStructure& s) {
    FitReport r;
    for (std::size_t t = 0; t < s.trees.size(); ++t)
        for (const VineEdge& e : s.trees[t]) {
            FitReportRow row;
            row.tree = int(t);
            row.a = e.a;
            row.b = e.b;
            row.conditioning = e.conditioning;
            row.tau_hat = e.sample_tau;
            row.family = e.copula.family();
            row.theta = e.copula.theta();
            row.loglik = e.fit_loglik;
            row.aic = e.fit_aic;
            r.rows.push_back(std::move(row));
            if (!std::isnan(e.fit_loglik)) r.total_loglik += e.fit_loglik;
        }
    return r;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)x);
    return buf;
}

SimSpec parse_sim_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, std::string("vine spec: ") + e.what());
    }
    try {
        std::string fmt = require(j, "format", "vine spec").get<std::string>();
        if (fmt != kVineFormat)
            fail(ErrorKind::parse, "vine spec: unsupported format '" + fmt + "'");
        int dim = require(j, "dimension", "vine spec").get<int>();
        VineStructure s =
            trees_from_json(require(j, "trees", "vine spec"), dim, "vine spec");

        ValidationReport rep = validate_structure(s);
        if (!rep.ok) fail(ErrorKind::invalid_argument, rep.message);

        SimSpec out{VineModel(std::move(s)), {}, std::nullopt};
        if (j.contains("names")) {
            for (const json& n : j["names"]) out.names.push_back(n.get<std::string>());
            if (int(out.names.size()) != dim)
                fail(ErrorKind::parse, "vine spec: names/dimension mismatch");
        } else {
            for (int k = 0; k < dim; ++k)
                out.names.push_back("z" + std::to_string(k + 1));
        }
        if (j.contains("marginals")) {
            std::vector<SimSpec::Normal> ms;
            for (const json& m : j["marginals"]) {
                SimSpec::Normal nm;
                nm.mean = require(m, "mean", "vine spec marginal").get<double>();
                nm.sd = require(m, "sd", "vine spec marginal").get<double>();
                if (!(nm.sd > 0.0))
                    fail(ErrorKind::parse, "vine spec: marginal sd must be positive");
                ms.push_back(nm);
            }
            if (int(ms.size()) != dim)
                fail(ErrorKind::parse, "vine spec: marginals/dimension mismatch");
            out.margins = std::move(ms);
        }
        return out;
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, std::string("vine spec: ") + e.what());
    }
}

std::string sim_spec_to_json(const VineStructure& s,
                             const std::vector<std::string>& names) {
    json j;
    j["format"] = kVineFormat;
    j["dimension"] = s.dimension;
    if (!names.empty()) j["names"] = names;
    j["trees"] = trees_to_json(s);
    return j.dump(2) + "\n";
}

std::string bundle_to_json(const ClassifierBundle& b) {
    json j;
    j["format"] = kModelFormat;
    j["features"] = b.feature_names();
    if (!b.provenance().empty()) j["provenance"] = b.provenance();
    json classes = json::array();
    for (const ClassModel& c : b.classes()) {
        json jc;
        jc["label"] = c.label;
        jc["prior"] = c.prior;
        json ms = json::array();
        for (const MarginalModel& m : c.marginals) {
            json jm;
            jm["sample"] = m.sample();
            jm["bandwidth"] = m.bandwidth();
            ms.push_back(std::move(jm));
        }
        jc["marginals"] = std::move(ms);
        jc["vine"] = {{"trees", trees_to_json(c.vine.structure())}};
        classes.push_back(std::move(jc));
    }
    j["classes"] = std::move(classes);
    return j.dump(2) + "\n";
}

ClassifierBundle bundle_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, std::string("model file: ") + e.what());
    }
    try {
        std::string fmt = require(j, "format", "model file").get<std::string>();
        if (fmt != kModelFormat)
            fail(ErrorKind::parse, "model file: unsupported format '" + fmt + "'");
        std::vector<std::string> features;
        for (const json& f : require(j, "features", "model file"))
            features.push_back(f.get<std::string>());
        int dim = int(features.size());

        std::vector<ClassModel> classes;
        for (const json& jc : require(j, "classes", "model file")) {
            std::string label = require(jc, "label", "model class").get<std::string>();
            std::string ctx = "model class " + label;
            double prior = require(jc, "prior", ctx).get<double>();
            std::vector<MarginalModel> margins;
            for (const json& jm : require(jc, "marginals", ctx)) {
                std::vector<double> sample =
                    require(jm, "sample", ctx).get<std::vector<double>>();
                double bw = require(jm, "bandwidth", ctx).get<double>();
                margins.push_back(MarginalModel::from_parts(std::move(sample), bw));
            }
            VineStructure s = trees_from_json(
                require(require(jc, "vine", ctx), "trees", ctx), dim, ctx);
            VineModel vine{std::move(s)};
            FitReport report = report_from_edges(vine.structure());
            classes.push_back(ClassModel{label, prior, std::move(margins),
                                         std::move(vine), std::move(report)});
        }
        ClassifierBundle b =
            ClassifierBundle::from_parts(std::move(classes), std::move(features));
        if (j.contains("provenance"))
            for (auto it = j["provenance"].begin(); it != j["provenance"].end(); ++it)
                b.provenance()[it.key()] = it.value().get<std::string>();
        return b;
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, std::string("model file: ") + e.what());
    }
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::io, "cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) fail(ErrorKind::io, "write failed for '" + path + "'");
}

std::string load_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(ErrorKind::io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) fail(ErrorKind::io, "read failed for '" + path + "'");
    return ss.str();
}

} // namespace rvc
