#include "doctest.h"

#include "kcnf/harness.hpp"
#include "kcnf/oracles.hpp"
#include "kcnf/predictors.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace kcnf;

namespace {

SideInfo bits(std::initializer_list<int> b) { return BitVector::from_bits(b); }

std::vector<Example> realizable_trace(Rng& rng, std::size_t d, std::size_t n) {
    const HypothesisIndexSet target = sample_hypothesis(rng, d);
    std::vector<Example> trace;
    for (std::size_t t = 0; t < n; ++t) {
        const SideInfo side = random_side(rng, d);
        trace.push_back({side, target.evaluate(side)});
    }
    return trace;
}

}  // namespace

TEST_CASE("hypothesis index sets") {
    const HypothesisIndexSet s(4, {2, 0});
    CHECK(s.indices() == std::vector<std::size_t>{0, 2});
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(1));
    CHECK(s.evaluate(bits({1, 0, 1, 0})));
    CHECK_FALSE(s.evaluate(bits({1, 1, 0, 1})));
    CHECK(HypothesisIndexSet(3, {}).evaluate(bits({0, 0, 0})));
    CHECK(HypothesisIndexSet::from_mask(0b101, 4) == s);
    CHECK(HypothesisIndexSet::from_bits(s.members()) == s);
    CHECK_THROWS_AS(HypothesisIndexSet(3, {3}), std::invalid_argument);
    CHECK_THROWS_AS(HypothesisIndexSet(3, {1, 1}), std::invalid_argument);
}

TEST_CASE("exhaustive mixture joint") {
    const Alpha u = Alpha::uniform();
    CHECK(log2_exact_mixture_joint(u, 2, {}) == 0.0);
    const std::vector<Example> one{{bits({1, 0}), true}};
    CHECK(log2_exact_mixture_joint(u, 2, one) == doctest::Approx(-1.0));
    const std::vector<Example> two{{bits({1, 0}), false}, {bits({0, 1}), false}};
    CHECK(log2_exact_mixture_joint(u, 2, two) == doctest::Approx(-2.0));

    const std::vector<Example> contradiction{{bits({1, 1}), true}, {bits({1, 1}), false}};
    CHECK(log2_exact_mixture_joint(u, 2, contradiction) == kNegInf);

    CHECK_THROWS_WITH_AS(log2_exact_mixture_joint(u, 21, {}), doctest::Contains("20"), std::length_error);
    CHECK_NOTHROW(log2_exact_mixture_joint(u, 21, {}, 21));
    CHECK_THROWS_AS(log2_exact_mixture_joint(u, 2, {}, 31), std::invalid_argument);
}

TEST_CASE("alpha validation and weights") {
    CHECK_THROWS_AS(Alpha::from_value(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Alpha::from_value(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Alpha::from_value(1.5), std::invalid_argument);
    const Alpha a = Alpha::from_value(0.75);
    CHECK(a.log2_alpha() == doctest::Approx(std::log2(0.75)));
    CHECK(a.log2_complement() == doctest::Approx(-2.0));
    CHECK(a.log2_weight(1, 3) == doctest::Approx(std::log2(0.75 * 0.25 * 0.25)));
}

TEST_CASE("hybrid alpha stays exact in the exponent") {
    // d = 2: alpha = 2^(-1/2)
    const Alpha a2 = Alpha::hybrid(2);
    CHECK(a2.log2_alpha() == -0.5);
    CHECK(a2.log2_complement() == doctest::Approx(std::log2(1.0 - std::sqrt(0.5))).epsilon(1e-14));

    // For large d, -log2(1 - alpha) = d - log2(d) - log2(ln 2) + O(d 2^-d).
    for (std::size_t d = 45; d <= 64; ++d) {
        const double dd = static_cast<double>(d);
        CHECK(Alpha::hybrid(d).log2_complement() ==
              doctest::Approx(std::log2(dd) - dd + std::log2(std::numbers::ln2)).epsilon(1e-12));
    }
    const Alpha a256 = Alpha::hybrid(256);
    CHECK(std::isfinite(a256.log2_complement()));
    CHECK(a256.log2_complement() == doctest::Approx(8.0 - 256.0 + std::log2(std::numbers::ln2)));
    CHECK(Alpha::hybrid(65).log2_complement() < Alpha::hybrid(64).log2_complement());
}

TEST_CASE("factored mixture over positive examples") {
    const std::vector<SideInfo> ones{bits({1, 1}), bits({1, 1})};
    CHECK(log2_xi_alpha_positive(Alpha::from_value(0.3), 2, ones) == 0.0);
    const std::vector<SideInfo> a{bits({1, 0})};
    CHECK(log2_xi_alpha_positive(Alpha::uniform(), 2, a) == doctest::Approx(-1.0));
    // (0.25 + 0.75)(0.25)
    CHECK(log2_xi_alpha_positive(Alpha::from_value(0.75), 2, a) == doctest::Approx(-2.0));
    CHECK(log2_exact_mixture_joint(Alpha::uniform(), 2, std::vector<Example>{{bits({1, 0}), true}}) ==
          log2_xi_alpha_positive(Alpha::uniform(), 2, a));
}

TEST_CASE("factored form equals enumeration for d up to 12") {
    Rng rng(11);
    for (std::size_t d = 1; d <= 12; ++d) {
        std::vector<SideInfo> pos;
        std::vector<Example> trace;
        for (int t = 0; t < 6; ++t) {
            SideInfo s = random_side(rng, d);
            for (std::size_t i = 0; i < d; ++i) {
                if (rng() % 4 != 0) s.set(i);
            }
            pos.push_back(s);
            trace.push_back({s, true});
            CHECK(std::abs(log2_xi_alpha_positive(Alpha::uniform(), d, pos) -
                           log2_exact_mixture_joint(Alpha::uniform(), d, trace)) <= 1e-12);
        }
    }
}

TEST_CASE("MAP model") {
    const MapModel fresh = map_model(Alpha::from_value(0.9), 3, {});
    CHECK(fresh.set.indices() == std::vector<std::size_t>{0, 1, 2});
    CHECK(fresh.unique);

    const std::vector<SideInfo> pos{bits({1, 1, 0}), bits({1, 0, 0})};
    CHECK(map_model(Alpha::from_value(0.9), 3, pos).set.indices() == std::vector<std::size_t>{0});
    CHECK(map_model(Alpha::from_value(0.1), 3, pos).set.empty());
    const MapModel half = map_model(Alpha::uniform(), 3, pos);
    CHECK(half.set.indices() == std::vector<std::size_t>{0});
    CHECK_FALSE(half.unique);
}

TEST_CASE("uniform mixture predictor") {
    BayesMixturePredictor m(2);
    CHECK(m.consistent_count() == 4);
    CHECK(m.predict(bits({1, 0})).p1() == doctest::Approx(0.5));
    m.update(bits({1, 0}), true);
    CHECK(m.consistent_count() == 2);
    CHECK(m.log2_evidence() == doctest::Approx(-1.0));
    CHECK(m.predict(bits({1, 1})).log_p1 == 0.0);
    // non-realizable label empties the posterior
    m.update(bits({1, 1}), false);
    CHECK(m.consistent_count() == 0);
    CHECK(m.predict(bits({0, 0})).p1() == 0.5);
    CHECK_THROWS_AS(BayesMixturePredictor(21), std::length_error);
}

TEST_CASE("heuristic predictor ignores negatives") {
    HeuristicPredictor h(2);
    CHECK(h.predict(bits({1, 0})).p1() == doctest::Approx(0.5));
    h.update(bits({1, 0}), true);
    CHECK(h.predict(bits({1, 1})).log_p1 == 0.0);

    HeuristicPredictor g(2);
    LossLedger ledger;
    for (int t = 0; t < 100; ++t) {
        ledger.record(g.predict(bits({1, 0})), false);
        g.update(bits({1, 0}), false);
    }
    CHECK(ledger.total_bits() == doctest::Approx(100.0));
}

TEST_CASE("memorizer") {
    MemorizerPredictor m(3);
    const Prediction unseen = m.predict(bits({1, 0, 1}));
    CHECK(unseen.log_p0 == -1.0);
    CHECK(unseen.log_p1 == -1.0);
    m.update(bits({1, 0, 1}), true);
    CHECK(m.predict(bits({1, 0, 1})).log_p1 == 0.0);
    m.update(bits({1, 0, 1}), false);  // first label is kept
    CHECK(m.predict(bits({1, 0, 1})).log_p1 == 0.0);
    CHECK(m.table_size() == 1);

    // Every input twice: 8 bits on the first pass, nothing after.
    MemorizerPredictor r(3);
    const HypothesisIndexSet target(3, {0, 2});
    std::vector<Example> trace;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::uint64_t x = 0; x < 8; ++x) {
            const SideInfo s = SideInfo::from_mask(x, 3);
            trace.push_back({s, target.evaluate(s)});
        }
    }
    CHECK(cumulative_loss(r, trace).total_bits() == 8.0);
    CHECK(bounds::memorizer(3) == 8.0);
}

TEST_CASE("hybrid predictor") {
    CHECK_THROWS_AS(HybridPredictor(1), std::invalid_argument);

    HybridPredictor h(2);
    const Prediction fresh = h.predict(bits({1, 0}));
    CHECK(fresh.p1() == doctest::Approx(1.0 - std::pow(2.0, -0.5)).epsilon(1e-14));
    CHECK(fresh.p1() == doctest::Approx(0.29289).epsilon(1e-5));
    BayesMixturePredictor reference(2, Alpha::hybrid(2));
    CHECK(reference.predict(bits({1, 0})).log_p1 == doctest::Approx(fresh.log_p1).epsilon(1e-12));

    CHECK(h.predict(bits({1, 1})).log_p1 == 0.0);
    h.update(bits({0, 1}), false);
    CHECK(h.negatives_size() == 1);
    const Prediction neg = h.predict(bits({0, 1}));
    CHECK(neg.log_p0 == 0.0);
    CHECK(neg.log_p1 == kNegInf);
    CHECK(h.columns().all());
    h.update(bits({1, 0}), true);
    CHECK(h.columns().to_string() == "10");
}

TEST_CASE("hybrid closed form equals the per-column product on every small state") {
    const std::size_t d = 3;
    const double alpha = std::exp2(-3.0 / 8.0);
    for (std::uint64_t w = 0; w < 8; ++w) {
        HybridPredictor h(d);
        if (w != 7) h.update(SideInfo::from_mask(w, d), true);
        REQUIRE(h.columns() == SideInfo::from_mask(w, d));
        for (std::uint64_t a = 0; a < 8; ++a) {
            double product = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double wi = (w >> i) & 1u;
                const double ai = (a >> i) & 1u;
                product *= ((1 - alpha) + alpha * wi * ai) / ((1 - alpha) + alpha * wi);
            }
            CHECK(h.predict(SideInfo::from_mask(a, d)).p1() == doctest::Approx(product).epsilon(1e-12));
        }
    }
}

TEST_CASE("elimination predictor") {
    EliminationPredictor e(2);
    CHECK(e.step() == 1);
    const Prediction first = e.predict(bits({1, 1}));
    CHECK(first.p1() == 0.5);
    CHECK(first.predicted_label());  // tie goes to the conjunction label
    CHECK_FALSE(e.predict(bits({1, 0})).predicted_label());

    e.update(bits({1, 0}), true);
    CHECK(e.surviving().to_string() == "10");
    e.update(bits({0, 0}), false);
    CHECK(e.step() == 3);
    const Prediction p = e.predict(bits({0, 1}));
    CHECK(p.p1() == doctest::Approx(0.25));
    CHECK(p.p0() == doctest::Approx(0.75));
}

TEST_CASE("bound formulas") {
    CHECK(bounds::bayes_mixture(5) == 5.0);
    CHECK(bounds::hybrid(8) == 128.0);
    CHECK(bounds::elimination(8, 8192) == doctest::Approx(9.0 * std::log2(8193.0)));
    CHECK(std::round(bounds::elimination(8, 8192)) == 117.0);
    CHECK(bounds::elimination(3, 0) == 0.0);
}

TEST_CASE("state monotonicity and per-step limits on random realizable traces") {
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t d = 2 + rng() % 9;
        const auto trace = realizable_trace(rng, d, 300);
        HybridPredictor h(d);
        EliminationPredictor e(d);
        std::size_t large_steps = 0;
        for (std::size_t t = 0; t < trace.size(); ++t) {
            const Example& ex = trace[t];
            const BitVector w = h.columns();
            const std::size_t negatives = h.negatives_size();
            const BitVector surviving = e.surviving();

            const double loss = -e.predict(ex.side).log_prob(ex.label);
            CHECK(loss <= std::log2(static_cast<double>(t) + 2.0) + 1e-12);
            if (loss > 1.0 + 1e-12) ++large_steps;

            h.update(ex.side, ex.label);
            e.update(ex.side, ex.label);
            CHECK(w.covers(h.columns()));
            CHECK(h.negatives_size() >= negatives);
            CHECK(surviving.covers(e.surviving()));
        }
        CHECK(large_steps <= d);
    }
}

TEST_CASE("realizable loss bounds for d = 2..10") {
    Rng rng(99);
    for (std::size_t d = 2; d <= 10; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto trace = realizable_trace(rng, d, 2000);
            HybridPredictor h(d);
            EliminationPredictor e(d);
            CHECK(cumulative_loss(h, trace).total_bits() <= bounds::hybrid(d));
            CHECK(cumulative_loss(e, trace).total_bits() <= bounds::elimination(d, trace.size()));
            if (d <= 10) {
                BayesMixturePredictor b(d);
                CHECK(cumulative_loss(b, trace).total_bits() <= bounds::bayes_mixture(d) + 1e-9);
            }
        }
        // Adversarial order: every input once, counting upward, for every d-bit target mask.
        if (d <= 6) {
            const auto rows = counting_side_info(d);
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
                const auto target = HypothesisIndexSet::from_mask(mask, d);
                std::vector<Example> trace;
                for (const auto& r : rows) trace.push_back({r, target.evaluate(r)});
                HybridPredictor h(d);
                EliminationPredictor e(d);
                CHECK(cumulative_loss(h, trace).total_bits() <= bounds::hybrid(d));
                CHECK(cumulative_loss(e, trace).total_bits() <= bounds::elimination(d, trace.size()));
            }
        }
    }
}

TEST_CASE("hybrid records infinite loss off-model and keeps going") {
    HybridPredictor h(3);
    const SideInfo s = bits({1, 0, 1});
    LossLedger ledger;
    ledger.record(h.predict(s), false);
    h.update(s, false);
    ledger.record(h.predict(s), true);
    h.update(s, true);
    CHECK(ledger.infinite());
    CHECK(h.columns().to_string() == "101");
    ledger.record(h.predict(bits({1, 1, 1})), true);
    CHECK(ledger.steps() == 3);
}
