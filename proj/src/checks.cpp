#include "kcnf/checks.hpp"

#include "kcnf/harness.hpp"
#include "kcnf/madnb.hpp"
#include "kcnf/oracles.hpp"
#include "kcnf/predictors.hpp"
#include "kcnf/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace kcnf {

namespace {

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

SideInfo biased_side(Rng& rng, std::size_t d, double p_one) {
    SideInfo side(d);
    for (std::size_t i = 0; i < d; ++i) side.set(i, uniform01(rng) < p_one);
    return side;
}

bool same_log(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol;
}

CheckResult pass(std::string name, std::string detail) {
    return {std::move(name), true, std::move(detail)};
}

CheckResult fail(std::string name, std::string detail) {
    return {std::move(name), false, std::move(detail)};
}

}  // namespace

CheckResult check_negative_trace_identity(std::uint64_t seed, std::size_t trials, std::size_t max_d) {
    const std::string name = "negative-trace-count";
    Rng rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t d = pick(rng, 1, max_d);
        std::vector<std::uint32_t> sets(pick(rng, 0, 8));
        for (auto& s : sets) s = static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << d) - 1));
        const SubsetList list(d, sets);
        const auto trace = characteristic_trace(list);
        const std::uint64_t full = std::uint64_t{1} << d;
        const std::uint64_t covered = upow(list);
        const std::uint64_t consistent = count_consistent(d, trace);
        const double mass = std::exp2(log2_exact_mixture_joint(Alpha::uniform(), d, trace) +
                                      static_cast<double>(d));
        if (consistent + covered != full || std::llround(mass) != static_cast<long long>(full - covered) ||
            std::abs(mass - static_cast<double>(full - covered)) > 1e-6) {
            std::ostringstream msg;
            msg << "trial " << trial << ": d=" << d << " consistent=" << consistent
                << " union=" << covered << " mixture mass=" << mass;
            return fail(name, msg.str());
        }
    }
    return pass(name, std::to_string(trials) + " random instances");
}

CheckResult check_independent_set_identity(std::uint64_t seed, std::size_t trials,
                                           std::size_t max_vertices) {
    const std::string name = "independent-set-count";
    Rng rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t v = pick(rng, 1, max_vertices);
        const double density = uniform01(rng);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (std::uint32_t a = 0; a < v; ++a) {
            for (std::uint32_t b = a + 1; b < v; ++b) {
                if (uniform01(rng) < density) edges.emplace_back(a, b);
            }
        }
        const Graph g(v, edges);
        const std::uint64_t independent = independent_set_count(g);
        const std::uint64_t covered = upow(edge_complements(g));
        if (independent + covered != (std::uint64_t{1} << v)) {
            std::ostringstream msg;
            msg << "trial " << trial << ": |V|=" << v << " |E|=" << edges.size()
                << " independent=" << independent << " union=" << covered;
            return fail(name, msg.str());
        }
    }
    return pass(name, std::to_string(trials) + " random graphs");
}

CheckResult check_counting_construction(std::size_t max_d) {
    const std::string name = "counting-side-info";
    for (std::size_t d = 1; d <= max_d; ++d) {
        const auto rows = counting_side_info(d);
        std::set<std::uint64_t> strings;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
            const auto target = HypothesisIndexSet::from_mask(mask, d);
            std::vector<Example> trace;
            std::uint64_t labels = 0;
            for (std::size_t t = 0; t < rows.size(); ++t) {
                const bool x = target.evaluate(rows[t]);
                labels |= std::uint64_t{x} << t;
                trace.push_back({rows[t], x});
            }
            strings.insert(labels);
            BayesMixturePredictor mixture(d);
            const double bits = cumulative_loss(mixture, trace).total_bits();
            if (std::abs(bits - static_cast<double>(d)) > 1e-9) {
                std::ostringstream msg;
                msg << "d=" << d << " S=" << target.members().to_string() << ": loss " << bits
                    << " bits, expected " << d;
                return fail(name, msg.str());
            }
        }
        if (strings.size() != (std::size_t{1} << d)) {
            return fail(name, "d=" + std::to_string(d) + ": only " + std::to_string(strings.size()) +
                                  " distinct label strings");
        }
    }
    return pass(name, "d=1.." + std::to_string(max_d) + ", every hypothesis");
}

CheckResult check_alpha_margin(std::size_t min_d, std::size_t max_d) {
    const std::string name = "alpha-margin";
    for (std::size_t d = min_d; d <= max_d; ++d) {
        const Lemma4Margin m = lemma4_margin(d);
        if (!m.upper_ok || !m.lower_ok) {
            std::ostringstream msg;
            msg << "d=" << d << ": value " << m.value;
            return fail(name, msg.str());
        }
    }
    return pass(name, "d=" + std::to_string(min_d) + ".." + std::to_string(max_d));
}

CheckResult check_positive_factorization(std::uint64_t seed, std::size_t trials, std::size_t max_d,
                                         std::size_t max_n) {
    const std::string name = "positive-factorization";
    Rng rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t d = pick(rng, 1, max_d);
        const std::size_t n = pick(rng, 0, max_n);
        const double density = 0.5 + 0.5 * uniform01(rng);
        std::vector<SideInfo> positives;
        std::vector<Example> trace;
        for (std::size_t t = 0; t < n; ++t) {
            positives.push_back(biased_side(rng, d, density));
            trace.push_back({positives.back(), true});
        }
        const double factored = log2_xi_alpha_positive(Alpha::uniform(), d, positives);
        const double exact = log2_exact_mixture_joint(Alpha::uniform(), d, trace);
        if (!same_log(factored, exact, 1e-12)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "trial " << trial << ": d=" << d << " n=" << n << " factored=" << factored
                << " enumerated=" << exact;
            return fail(name, msg.str());
        }
    }
    return pass(name, std::to_string(trials) + " positive traces");
}

CheckResult check_hybrid_equivalence(std::uint64_t seed, std::size_t trials, std::size_t min_d,
                                     std::size_t max_d, std::size_t max_n) {
    const std::string name = "hybrid-equivalence";
    Rng rng(seed);
    std::size_t compared = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t d = pick(rng, min_d, max_d);
        const std::size_t n = pick(rng, 1, max_n);
        const Alpha alpha = Alpha::hybrid(d);
        const HypothesisIndexSet target = sample_hypothesis(rng, d);
        HybridPredictor hybrid(d);
        BayesMixturePredictor mixture(d, alpha);
        std::vector<Example> positives;
        for (std::size_t t = 0; t < n; ++t) {
            const SideInfo side = random_side(rng, d);
            const bool label = target.evaluate(side);
            const Prediction p = hybrid.predict(side);
            if (hybrid.is_memorized_negative(side)) {
                if (p.log_p1 != kNegInf) return fail(name, "memorized negative not predicted 0");
            } else {
                const Prediction q = mixture.predict(side);
                double ratio = q.log_p1;
                if (d <= 6) {
                    // Direct ratio of joints for small d.
                    auto extended = positives;
                    extended.push_back({side, true});
                    ratio = log2_exact_mixture_joint(alpha, d, extended) -
                            log2_exact_mixture_joint(alpha, d, positives);
                }
                ++compared;
                if (!same_log(p.log_p1, q.log_p1, 1e-9) || !same_log(p.log_p1, ratio, 1e-9) ||
                    !same_log(p.log_p0, q.log_p0, 1e-9)) {
                    std::ostringstream msg;
                    msg.precision(17);
                    msg << "trial " << trial << " step " << t << ": d=" << d
                        << " hybrid log p1=" << p.log_p1 << " enumerated=" << q.log_p1
                        << " joint ratio=" << ratio;
                    return fail(name, msg.str());
                }
            }
            hybrid.update(side, label);
            if (label) {
                mixture.update(side, true);
                positives.push_back({side, true});
            }
        }
    }
    return pass(name, std::to_string(trials) + " traces, " + std::to_string(compared) +
                          " predictions compared");
}

CheckResult check_madnb_identity(std::uint64_t seed, std::size_t trials, std::size_t max_d,
                                 std::size_t max_n) {
    const std::string name = "madnb-identity";
    Rng rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t d = pick(rng, 1, max_d);
        const std::size_t n = pick(rng, 0, max_n);
        const double label_rate = uniform01(rng);
        std::vector<Example> trace;
        MadnbPredictor madnb(d);
        for (std::size_t t = 0; t < n; ++t) {
            const SideInfo side = random_side(rng, d);
            const bool label = uniform01(rng) < label_rate;
            auto with0 = trace;
            with0.push_back({side, false});
            auto with1 = trace;
            with1.push_back({side, true});
            const double s0 = log2_nb_star_joint(d, with0);
            const double s1 = log2_nb_star_joint(d, with1);
            const double expected = s1 - log2_add_exp2(s0, s1);
            const Prediction p = madnb.predict(side);
            if (!same_log(p.log_p1, expected, 1e-9)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "trial " << trial << " step " << t << ": predictive log p1=" << p.log_p1
                    << ", normalized joint " << expected;
                return fail(name, msg.str());
            }
            madnb.update(side, label);
            trace.push_back({side, label});
        }
        const double factored = log2_nb_star_joint(d, trace);
        const double brute = log2_nb_star_joint_brute(d, trace);
        if (std::abs(std::exp2(factored - brute) - 1.0) > 1e-9) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "trial " << trial << ": d=" << d << " n=" << n << " factored=" << factored
                << " summed=" << brute;
            return fail(name, msg.str());
        }
    }
    return pass(name, std::to_string(trials) + " random traces");
}

CheckResult check_kcnf_completeness(std::size_t max_d, std::size_t max_k) {
    const std::string name = "kcnf-completeness";
    std::size_t functions_checked = 0;
    for (std::size_t d = 1; d <= max_d; ++d) {
        const std::size_t inputs = std::size_t{1} << d;
        const std::uint32_t everything = static_cast<std::uint32_t>((std::uint64_t{1} << inputs) - 1);
        std::vector<std::uint32_t> literal_table(2 * d, 0);
        for (std::size_t x = 0; x < inputs; ++x) {
            for (std::size_t i = 0; i < d; ++i) {
                const bool bit = (x >> i) & 1u;
                literal_table[bit ? i : d + i] |= 1u << x;
            }
        }
        for (std::size_t k = 1; k <= max_k; ++k) {
            // Clause truth tables from all (2d)^k ordered literal tuples.
            std::set<std::uint32_t> clause_tables;
            std::vector<std::size_t> tuple(k, 0);
            while (true) {
                std::uint32_t table = 0;
                for (std::size_t l : tuple) table |= literal_table[l];
                if (table != everything) clause_tables.insert(table);
                std::size_t pos = 0;
                while (pos < k && ++tuple[pos] == 2 * d) tuple[pos++] = 0;
                if (pos == k) break;
            }
            std::set<std::uint32_t> formulas{everything};
            for (std::uint32_t c : clause_tables) {
                std::vector<std::uint32_t> grown;
                for (std::uint32_t f : formulas) grown.push_back(f & c);
                formulas.insert(grown.begin(), grown.end());
            }

            auto reducer = std::make_shared<const Reducer>(ReductionKind::kcnf, d, k);
            const ClauseBasis& basis = *reducer->basis();
            std::vector<SideInfo> expanded;
            for (std::size_t x = 0; x < inputs; ++x) {
                expanded.push_back(basis.expand(SideInfo::from_mask(x, d)));
            }
            std::vector<std::uint32_t> basis_table(basis.d_prime(), 0);
            for (std::size_t x = 0; x < inputs; ++x) {
                for (std::size_t j = 0; j < basis.d_prime(); ++j) {
                    if (expanded[x].test(j)) basis_table[j] |= 1u << x;
                }
            }
            if (std::set<std::uint32_t>(basis_table.begin(), basis_table.end()) != clause_tables) {
                return fail(name, "d=" + std::to_string(d) + " k=" + std::to_string(k) +
                                      ": basis clauses differ from the tuple enumeration");
            }

            const double bound = bounds::elimination(basis.d_prime(), inputs);
            for (std::uint32_t f : formulas) {
                std::vector<std::size_t> chosen;
                std::uint32_t conj = everything;
                for (std::size_t j = 0; j < basis.d_prime(); ++j) {
                    if ((basis_table[j] & f) == f) {
                        chosen.push_back(j);
                        conj &= basis_table[j];
                    }
                }
                if (conj != f) {
                    return fail(name, "d=" + std::to_string(d) + " k=" + std::to_string(k) +
                                          ": truth table " + std::to_string(f) +
                                          " is not a conjunction over the basis");
                }
                const HypothesisIndexSet target(basis.d_prime(), chosen);
                ReducedPredictor learner(reducer, std::make_unique<EliminationPredictor>(basis.d_prime()));
                LossLedger ledger;
                for (std::size_t x = 0; x < inputs; ++x) {
                    const SideInfo side = SideInfo::from_mask(x, d);
                    const bool label = (f >> x) & 1u;
                    if (target.evaluate(expanded[x]) != label) {
                        return fail(name, "conjunction disagrees with truth table " + std::to_string(f));
                    }
                    ledger.record(learner.predict(side), label);
                    learner.update(side, label);
                }
                if (ledger.infinite() || ledger.total_bits() > bound + 1e-9) {
                    std::ostringstream msg;
                    msg << "d=" << d << " k=" << k << " table " << f << ": loss "
                        << ledger.total_bits() << " > bound " << bound;
                    return fail(name, msg.str());
                }
                ++functions_checked;
            }
        }
    }
    return pass(name, "d<=" + std::to_string(max_d) + ", k<=" + std::to_string(max_k) + ", " +
                          std::to_string(functions_checked) + " truth tables");
}

std::vector<CheckResult> run_oracle_checks(const CheckSuiteConfig& config) {
    const std::size_t d = std::max<std::size_t>(config.max_d, 2);
    const std::size_t trials = std::max<std::size_t>(config.trials, 1);
    const std::uint64_t s = config.seed;
    return {
        check_negative_trace_identity(trial_seed(s, 1), trials, std::min<std::size_t>(d, 12)),
        check_independent_set_identity(trial_seed(s, 2), std::max<std::size_t>(trials / 2, 1),
                                       std::min<std::size_t>(d, 12)),
        check_counting_construction(std::min<std::size_t>(d, 4)),
        check_alpha_margin(2, 64),
        check_positive_factorization(trial_seed(s, 3), trials, std::min<std::size_t>(d, 12), 32),
        check_hybrid_equivalence(trial_seed(s, 4), 2 * trials, 2, std::min<std::size_t>(d, 10), 64),
        check_madnb_identity(trial_seed(s, 5), std::max<std::size_t>(trials / 2, 1),
                             std::min<std::size_t>(d, 8), 64),
        check_kcnf_completeness(std::min<std::size_t>(d, 4), 2),
    };
}

}  // namespace kcnf
