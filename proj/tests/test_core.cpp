#include "doctest.h"

#include "kcnf/core.hpp"
#include "kcnf/harness.hpp"
#include "kcnf/madnb.hpp"
#include "kcnf/predictors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace kcnf;

TEST_CASE("bit vector construction and queries") {
    const BitVector v = BitVector::from_bits({1, 0, 1, 1});
    CHECK(v.size() == 4);
    CHECK(v.to_string() == "1011");
    CHECK(v.count() == 3);
    CHECK_FALSE(v.all());
    CHECK(BitVector::from_string("1011") == v);
    CHECK(BitVector::from_mask(0b1101, 4) == v);
    CHECK(v.to_mask() == 0b1101);
    CHECK_THROWS_AS(BitVector::from_bits({0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(BitVector::from_string("01x"), std::invalid_argument);

    const BitVector neg = ~v;
    CHECK(neg.to_string() == "0100");
    CHECK(neg.count() == 1);  // bits past size stay clear
    CHECK(v.concat(neg).to_string() == "10110100");
}

TEST_CASE("bit vector set operations across word boundaries") {
    BitVector a(130, true);
    BitVector b(130);
    b.set(0);
    b.set(64);
    b.set(129);
    CHECK(a.covers(b));
    CHECK_FALSE(b.covers(a));
    CHECK(a.count_and_not(b) == 127);
    a &= b;
    CHECK(a == b);
    CHECK((~BitVector(130)).all());
    CHECK(BitVector(130).none());
    CHECK_THROWS_AS(a &= BitVector(3), std::invalid_argument);
    CHECK(std::hash<BitVector>{}(a) == std::hash<BitVector>{}(b));
}

TEST_CASE("log2(1 - 2^x) near both ends") {
    CHECK(log2_one_minus_exp2(0.0) == kNegInf);
    CHECK(log2_one_minus_exp2(kNegInf) == 0.0);
    CHECK(log2_one_minus_exp2(-1.0) == doctest::Approx(-1.0).epsilon(1e-15));

    // 1 - 2^x = -x ln2 (1 + x ln2 / 2 + ...) for tiny |x|.
    const double x = -1e-20;
    CHECK(log2_one_minus_exp2(x) == doctest::Approx(std::log2(-x * std::numbers::ln2)).epsilon(1e-14));

    // log(1 - e) = -e for tiny e, so the result is -2^-100 / ln 2, not 0.
    const double far = log2_one_minus_exp2(-100.0);
    CHECK(far < 0.0);
    CHECK(far == doctest::Approx(-std::exp2(-100.0) / std::numbers::ln2).epsilon(1e-12));

    CHECK_THROWS_AS(log2_one_minus_exp2(0.5), std::domain_error);
    CHECK_THROWS_AS(log2_one_minus_exp2(std::nan("")), std::domain_error);
}

TEST_CASE("log-domain sums") {
    CHECK(log2_add_exp2(-1.0, -1.0) == doctest::Approx(0.0));
    CHECK(log2_add_exp2(kNegInf, -3.0) == -3.0);
    CHECK(log2_add_exp2(kNegInf, kNegInf) == kNegInf);
    const std::vector<double> v{-2.0, -2.0, -2.0, -2.0};
    CHECK(log2_sum_exp2(v) == doctest::Approx(0.0));
    CHECK(log2_sum_exp2(std::vector<double>{}) == kNegInf);
    CHECK(log2_sum_exp2(std::vector<double>{-2000.0, -2001.0}) ==
          doctest::Approx(-2000.0 + std::log2(1.5)));
}

TEST_CASE("predictions are normalized and report a label") {
    const Prediction p = Prediction::from_log_p1(std::log2(0.25));
    CHECK(p.p0() + p.p1() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(p.predicted_label());
    CHECK(Prediction::from_log_p0(std::log2(0.25)).predicted_label());

    const Prediction c = Prediction::certain(true);
    CHECK(c.log_p0 == kNegInf);
    CHECK(c.log_p1 == 0.0);

    const Prediction u = Prediction::uniform(true);
    CHECK(u.p1() == 0.5);
    CHECK(u.predicted_label());
    CHECK_FALSE(Prediction::uniform(false).predicted_label());

    const Prediction f = p.flipped();
    CHECK(f.log_p1 == p.log_p0);
    CHECK(f.log_p0 == p.log_p1);
    CHECK(f.predicted_label());

    CHECK_THROWS_AS(Prediction::from_log_p1(0.1), std::domain_error);
}

TEST_CASE("labels outside {0,1} are rejected") {
    CHECK(checked_label(1));
    CHECK_FALSE(checked_label(0));
    CHECK_THROWS_AS(checked_label(2), std::invalid_argument);
    CHECK_THROWS_AS(checked_label(-1), std::invalid_argument);
}

TEST_CASE("loss ledger accumulates and keeps infinity") {
    LossLedger ledger;
    CHECK(ledger.total_bits() == 0.0);
    CHECK(ledger.record(Prediction::uniform(), true) == 1.0);
    CHECK(ledger.record(Prediction::from_log_p1(-3.0), true) == 3.0);
    CHECK(ledger.steps() == 2);
    CHECK(ledger.total_bits() == 4.0);
    CHECK(ledger.record(Prediction::certain(false), true) == kPosInf);
    CHECK(ledger.infinite());
    ledger.record(Prediction::uniform(), false);
    CHECK(ledger.infinite());
    CHECK(ledger.steps() == 4);
}

TEST_CASE("dimension mismatch is rejected with a diagnostic") {
    MemorizerPredictor m(3);
    CHECK_THROWS_WITH_AS(m.predict(BitVector(2)), doctest::Contains("expected 3"), std::invalid_argument);
    CHECK_THROWS_AS(m.update(BitVector(4), true), std::invalid_argument);
}

TEST_CASE("cumulative loss") {
    MemorizerPredictor m(2);
    CHECK(cumulative_loss(m, {}).total_bits() == 0.0);

    // Two of the four hypotheses are consistent with ((1,0), 1).
    BayesMixturePredictor mixture(2);
    const std::vector<Example> trace{{BitVector::from_bits({1, 0}), true}};
    CHECK(cumulative_loss(mixture, trace).total_bits() == doctest::Approx(1.0));

    const std::vector<Example> bad{{BitVector(2), true}, {BitVector(3), true}};
    CHECK_THROWS_AS(trace_dimension(bad), std::invalid_argument);
    CHECK(trace_dimension(trace) == 2);
}

TEST_CASE("every predictor normalizes and telescopes on random traces") {
    Rng rng(7);
    for (Algorithm algo : {Algorithm::bayes_exact, Algorithm::xi_plus, Algorithm::memorize,
                           Algorithm::alg1, Algorithm::alg2, Algorithm::madnb}) {
        CAPTURE(to_string(algo));
        const std::size_t d = 5;
        const HypothesisIndexSet target = sample_hypothesis(rng, d);
        std::vector<Example> trace;
        for (int t = 0; t < 200; ++t) {
            const SideInfo side = random_side(rng, d);
            trace.push_back({side, target.evaluate(side)});
        }

        auto p1 = make_predictor(algo, d);
        double product_log = 0.0;
        for (const Example& ex : trace) {
            const Prediction p = p1->predict(ex.side);
            CHECK(std::exp2(p.log_p0) + std::exp2(p.log_p1) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK_FALSE((p.log_p0 == kNegInf && p.log_p1 == kNegInf));
            product_log += p.log_prob(ex.label);
            p1->update(ex.side, ex.label);
        }
        auto p2 = make_predictor(algo, d);
        const LossLedger ledger = cumulative_loss(*p2, trace);
        CHECK(ledger.total_bits() == doctest::Approx(-product_log).epsilon(1e-9));

        // Same trace, same configuration, same ledger.
        auto p3 = make_predictor(algo, d);
        CHECK(cumulative_loss(*p3, trace).total_bits() == ledger.total_bits());
    }
}
