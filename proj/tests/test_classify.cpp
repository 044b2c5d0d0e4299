#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "classify.hpp"
#include "errors.hpp"
#include "normal.hpp"

using namespace rvc;

namespace {

// two classes, standard normal margins, gaussian dependence rho and -rho
struct PairProblem {
    Matrix x;
    std::vector<int> y;
};

PairProblem correlated_pair_data(double rho, std::size_t per_class,
                                 std::uint64_t seed) {
    PairProblem p;
    p.x = Matrix(2 * per_class, 2);
    p.y.resize(2 * per_class);
    PairCopula pos(Family::gaussian, rho), neg(Family::gaussian, -rho);
    Matrix a = pos.sample(per_class, seed), b = neg.sample(per_class, seed + 1);
    for (std::size_t i = 0; i < per_class; ++i) {
        p.x(i, 0) = norm_quantile(a(i, 0));
        p.x(i, 1) = norm_quantile(a(i, 1));
        p.y[i] = 0;
        p.x(per_class + i, 0) = norm_quantile(b(i, 0));
        p.x(per_class + i, 1) = norm_quantile(b(i, 1));
        p.y[per_class + i] = 1;
    }
    return p;
}

ClassifierBundle train_pair(double rho, std::size_t per_class, std::uint64_t seed,
                            bool force_independence = false) {
    PairProblem p = correlated_pair_data(rho, per_class, seed);
    TrainOptions opts;
    opts.selection.force_independence = force_independence;
    return ClassifierBundle::train(p.x, p.y, {"pos", "neg"}, {"a.f1", "b.f1"}, opts);
}

// a symmetric bundle: identical marginals, independence vines
ClassifierBundle symmetric_bundle(const std::vector<double>& priors) {
    std::vector<double> xs(40);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(i * 1.7) * 2.0;
    auto marg = MarginalModel::fit(xs);

    VineStructure s;
    s.dimension = 2;
    VineEdge e;
    e.a = 0;
    e.b = 1;
    s.trees = {{e}};

    std::vector<ClassModel> classes;
    for (std::size_t g = 0; g < priors.size(); ++g) {
        ClassModel cm{"c" + std::to_string(g + 1), priors[g],
                      {marg, marg}, VineModel(s), FitReport{}};
        classes.push_back(std::move(cm));
    }
    return ClassifierBundle::from_parts(std::move(classes), {"x.f1", "x.f2"});
}

ConfusionMatrix six_activity_table() {
    ConfusionMatrix cm;
    cm.labels = {"Sit", "Stand", "Walk", "Stairsup", "Stairsdown", "Bike"};
    cm.counts = {
        498, 0,   0,   0,   2,   0,
        0,   454, 0,   0,   46,  0,
        0,   0,   402, 43,  17,  38,
        0,   0,   24,  408, 50,  18,   // final entry restored from the column sums
        0,   0,   39,  53,  408, 0,
        0,   0,   8,   4,   2,   486,
    };
    return cm;
}

ConfusionMatrix smartphone_table() {
    ConfusionMatrix cm;
    cm.labels = {"W", "WU", "WD", "Si", "St", "L"};
    cm.counts = {
        276, 0,   17,  3,   0,   0,
        6,   259, 0,   3,   3,   0,
        8,   0,   211, 0,   1,   0,
        3,   6,   1,   248, 33,  0,
        3,   3,   2,   26,  298, 0,
        2,   0,   0,   0,   6,   329,
    };
    return cm;
}

double pct(double x) { return std::round(x * 1000.0) / 10.0; }

} // namespace

TEST_CASE("uniform priors across six classes") {
    std::mt19937_64 gen(50);
    std::normal_distribution<double> nd;
    const int per = 40, G = 6;
    Matrix x(per * G, 2);
    std::vector<int> y(per * G);
    for (int g = 0; g < G; ++g)
        for (int i = 0; i < per; ++i) {
            x(g * per + i, 0) = nd(gen) + g;
            x(g * per + i, 1) = nd(gen) - g;
            y[g * per + i] = g;
        }
    TrainOptions opts;
    opts.selection.candidate_families = {Family::gaussian};
    auto b = ClassifierBundle::train(
        x, y, {"c1", "c2", "c3", "c4", "c5", "c6"}, {"s.f1", "s.f2"}, opts);
    REQUIRE(b.classes().size() == 6);
    for (const auto& c : b.classes())
        CHECK(c.prior == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("empirical priors follow class frequencies") {
    std::mt19937_64 gen(51);
    std::normal_distribution<double> nd;
    Matrix x(1000, 2);
    std::vector<int> y(1000);
    for (int i = 0; i < 1000; ++i) {
        x(i, 0) = nd(gen);
        x(i, 1) = nd(gen);
        y[i] = i < 300 ? 0 : 1;
    }
    TrainOptions opts;
    opts.selection.candidate_families = {Family::gaussian};
    opts.empirical_priors = true;
    auto b = ClassifierBundle::train(x, y, {"s", "t"}, {"a.u", "a.v"}, opts);
    CHECK(b.classes()[0].prior == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(b.classes()[1].prior == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("fitted pair dependence matches the generating strength") {
    auto b = train_pair(0.8, 1000, 99);
    REQUIRE(b.classes().size() == 2);
    const double target = 0.59033447651712743;   // 2 asin(0.8) / pi
    for (int g = 0; g < 2; ++g) {
        const auto& edge = b.classes()[g].vine.structure().trees[0][0];
        double t = param_to_tau(edge.copula.family(), edge.copula.theta());
        double want = g == 0 ? target : -target;
        CHECK(t == doctest::Approx(want).epsilon(0.0).scale(1.0).epsilon(0.12));
        CHECK(std::fabs(t - want) < 0.07);
    }
}

TEST_CASE("symmetric bundle ties resolve to the first class") {
    auto b = symmetric_bundle({0.5, 0.5});
    std::vector<double> x{0.4, -1.2};
    auto lp = b.log_posterior(x);
    REQUIRE(lp.size() == 2);
    CHECK(lp[0] == doctest::Approx(lp[1]).epsilon(1e-12));
    CHECK(b.predict(x) == 0);
}

TEST_CASE("prior ratio shifts the log posterior by its log") {
    auto b = symmetric_bundle({0.9, 0.1});
    std::vector<double> x{1.0, 0.5};
    auto lp = b.log_posterior(x);
    CHECK(lp[0] - lp[1] == doctest::Approx(std::log(9.0)).epsilon(1e-9));
    CHECK(b.predict(x) == 0);
}

TEST_CASE("concordant points prefer the positively dependent class") {
    auto b = train_pair(0.8, 1000, 7);
    std::vector<double> conc{1.5, 1.5}, disc{1.5, -1.5};
    auto lp = b.log_posterior(conc);
    CHECK(lp[0] > lp[1]);
    CHECK(b.predict(conc) == 0);
    auto lp2 = b.log_posterior(disc);
    CHECK(lp2[1] > lp2[0]);
    CHECK(b.predict(disc) == 1);
}

TEST_CASE("dependence aware fusion separates what independence cannot") {
    auto b = train_pair(0.8, 1000, 21);
    auto ablation = train_pair(0.8, 1000, 21, true);
    PairProblem test = correlated_pair_data(0.8, 1000, 555);

    auto accuracy = [&](const ClassifierBundle& m) {
        int hit = 0;
        for (std::size_t i = 0; i < test.x.rows(); ++i) {
            std::vector<double> row{test.x(i, 0), test.x(i, 1)};
            if (m.predict(row) == test.y[i]) hit++;
        }
        return double(hit) / double(test.x.rows());
    };
    CHECK(accuracy(b) > 0.70);          // near the Bayes rate for this pair
    CHECK(accuracy(ablation) < 0.60);   // marginals are identical by design
}

TEST_CASE("log posterior stays finite far outside the training range") {
    auto b = train_pair(0.8, 200, 3);
    std::vector<double> far{1e6, -1e6};
    auto lp = b.log_posterior(far);
    for (double v : lp) CHECK(std::isfinite(v));
}

TEST_CASE("input validation") {
    auto b = symmetric_bundle({0.5, 0.5});
    std::vector<double> bad{0.5};
    CHECK_THROWS_AS(b.log_posterior(bad), Error);
    std::vector<double> nan3{0.5, std::nan("")};
    CHECK_THROWS_AS(b.log_posterior(nan3), Error);

    Matrix f(2, 2);
    std::vector<int> wrong{0, 5};
    CHECK_THROWS_AS(b.evaluate(f, wrong), Error);
    CHECK(b.class_index("c2") == 1);
    CHECK(b.class_index("zzz") == -1);
}

TEST_CASE("undersized classes are named in the error") {
    Matrix x(40, 2);
    std::vector<int> y(40);
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 40; ++i) {
        x(i, 0) = nd(gen);
        x(i, 1) = nd(gen);
        y[i] = i < 30 ? 0 : 1;   // second class has only 10 rows
    }
    try {
        ClassifierBundle::train(x, y, {"big", "small"}, {"a.x", "a.y"},
                                TrainOptions{});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_data);
        CHECK(std::string(e.what()).find("small") != std::string::npos);
    }
}

TEST_CASE("perfect predictions give unit f1 and a diagonal matrix") {
    std::mt19937_64 gen(70);
    std::normal_distribution<double> nd;
    const int per = 200;
    Matrix x(2 * per, 2);
    std::vector<int> y(2 * per);
    for (int i = 0; i < 2 * per; ++i) {
        int g = i < per ? 0 : 1;
        x(i, 0) = nd(gen) + (g == 0 ? -10.0 : 10.0);
        x(i, 1) = nd(gen) + (g == 0 ? -10.0 : 10.0);
        y[i] = g;
    }
    TrainOptions opts;
    opts.selection.candidate_families = {Family::gaussian};
    auto b = ClassifierBundle::train(x, y, {"lo", "hi"}, {"m.p", "m.q"}, opts);
    auto cm = b.evaluate(x, y);
    CHECK(cm.at(0, 1) == 0);
    CHECK(cm.at(1, 0) == 0);
    CHECK(cm.at(0, 0) == per);
    CHECK(cm.at(1, 1) == per);
    auto m = metrics_from_confusion(cm);
    CHECK(m.macro_f1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("replayed fixture recovers the first published table") {
    auto cm = six_activity_table();
    auto m = metrics_from_confusion(cm);
    REQUIRE(m.per_class.size() == 6);

    CHECK(pct(m.per_class[0].recall) == 99.6);
    CHECK(pct(m.per_class[1].recall) == 90.8);
    CHECK(pct(m.per_class[2].recall) == 80.4);
    CHECK(pct(m.per_class[3].recall) == 81.6);
    CHECK(pct(m.per_class[4].recall) == 81.6);
    CHECK(pct(m.per_class[5].recall) == 97.2);

    CHECK(pct(m.per_class[0].precision) == 100.0);
    CHECK(pct(m.per_class[1].precision) == 100.0);
    CHECK(pct(m.per_class[2].precision) == 85.0);
    CHECK(pct(m.per_class[3].precision) == 80.3);
    CHECK(pct(m.per_class[4].precision) == 77.7);
    CHECK(pct(m.per_class[5].precision) == 89.7);

    CHECK(pct(m.macro_f1) == 88.6);

    std::string table = format_confusion_table(cm);
    CHECK(table.find("99.6") != std::string::npos);
    CHECK(table.find("88.6") != std::string::npos);
    CHECK(table.find("Stairsdown") != std::string::npos);
}

TEST_CASE("replayed fixture recovers the second published table") {
    auto cm = smartphone_table();
    auto m = metrics_from_confusion(cm);

    CHECK(pct(m.per_class[0].recall) == 93.2);
    CHECK(pct(m.per_class[1].recall) == 95.6);
    CHECK(pct(m.per_class[2].recall) == 95.9);
    CHECK(pct(m.per_class[3].recall) == 85.2);
    CHECK(pct(m.per_class[4].recall) == 89.8);   // from the counts themselves
    CHECK(pct(m.per_class[5].recall) == 97.6);

    CHECK(pct(m.per_class[0].precision) == 92.6);
    CHECK(pct(m.per_class[1].precision) == 96.6);
    CHECK(pct(m.per_class[2].precision) == 91.3);
    CHECK(pct(m.per_class[3].precision) == 88.6);
    CHECK(pct(m.per_class[4].precision) == 87.4);
    CHECK(pct(m.per_class[5].precision) == 100.0);

    CHECK(pct(m.macro_f1) == 92.8);
}

TEST_CASE("zero denominator classes contribute nothing") {
    ConfusionMatrix cm;
    cm.labels = {"a", "b", "ghost"};
    cm.counts = {
        10, 0, 0,
        0, 10, 0,
        0, 0, 0,   // never present, never predicted
    };
    auto m = metrics_from_confusion(cm);
    CHECK(m.per_class[2].precision == 0.0);
    CHECK(m.per_class[2].recall == 0.0);
    CHECK(m.macro_f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("single class test set") {
    auto b = train_pair(0.8, 200, 77);
    PairProblem p = correlated_pair_data(0.8, 50, 31);
    Matrix firsthalf(50, 2);
    std::vector<int> y(50, 0);
    for (int i = 0; i < 50; ++i) {
        firsthalf(i, 0) = p.x(i, 0);
        firsthalf(i, 1) = p.x(i, 1);
    }
    auto cm = b.evaluate(firsthalf, y);
    CHECK(cm.at(0, 0) + cm.at(0, 1) == 50);
    CHECK(cm.at(1, 0) + cm.at(1, 1) == 0);
    auto m = metrics_from_confusion(cm);
    double r = double(cm.at(0, 0)) / 50.0;
    CHECK(m.per_class[0].recall == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("assembled bundles enforce their invariants") {
    std::vector<double> xs(40);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::cos(i * 0.9);
    auto marg = MarginalModel::fit(xs);
    VineStructure s;
    s.dimension = 2;
    VineEdge e;
    e.a = 0;
    e.b = 1;
    s.trees = {{e}};

    std::vector<ClassModel> bad;
    bad.push_back({"only", 0.5, {marg, marg}, VineModel(s), FitReport{}});
    // priors must sum to one
    CHECK_THROWS_AS(
        ClassifierBundle::from_parts(std::move(bad), {"q.a", "q.b"}), Error);

    std::vector<ClassModel> mismatch;
    mismatch.push_back({"c1", 0.5, {marg}, VineModel(s), FitReport{}});
    mismatch.push_back({"c2", 0.5, {marg}, VineModel(s), FitReport{}});
    CHECK_THROWS_AS(
        ClassifierBundle::from_parts(std::move(mismatch), {"q.a", "q.b"}), Error);

    std::vector<ClassModel> dup;
    dup.push_back({"c", 0.5, {marg, marg}, VineModel(s), FitReport{}});
    dup.push_back({"c", 0.5, {marg, marg}, VineModel(s), FitReport{}});
    CHECK_THROWS_AS(ClassifierBundle::from_parts(std::move(dup), {"q.a", "q.b"}),
                    Error);
}

TEST_CASE("inspection output names classes and features") {
    auto b = train_pair(0.8, 200, 13);
    std::string text = b.inspect_text(0);
    CHECK(text.find("pos") != std::string::npos);
    CHECK(text.find("a.f1") != std::string::npos);
    std::string dot = b.inspect_dot(1);
    CHECK(dot.find("graph") != std::string::npos);
    CHECK(dot.find("b.f1") != std::string::npos);
    CHECK_THROWS_AS(b.inspect_text(5), Error);
    CHECK_THROWS_AS(b.inspect_dot(-1), Error);

    std::string rep = b.fit_report_text();
    CHECK(rep.find("pos") != std::string::npos);
    CHECK(rep.find("neg") != std::string::npos);
}
