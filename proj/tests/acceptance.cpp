// One PASS/FAIL line per acceptance criterion. `--long-only` runs just the
// 3-CNF dataset check, which takes minutes.

#include "kcnf/checks.hpp"
#include "kcnf/harness.hpp"
#include "kcnf/madnb.hpp"
#include "kcnf/predictors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <functional>
#include <string>

using namespace kcnf;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(int criterion, bool passed, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", passed ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

void info(int criterion, const std::string& detail) {
    std::printf("INFO criterion %d: %s\n", criterion, detail.c_str());
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Runs one criterion, turning an exception into a failure.
void guarded(int criterion, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(criterion, false, std::string("exception: ") + e.what());
    }
}

void combine(int criterion, const std::vector<CheckResult>& parts, double elapsed, double limit) {
    bool ok = elapsed < limit;
    std::string detail;
    for (const CheckResult& r : parts) {
        ok = ok && r.passed;
        detail += r.name + (r.passed ? " ok" : " FAILED") + " (" + r.detail + "); ";
    }
    detail += fmt("%.2f s", elapsed);
    report(criterion, ok, detail);
}

void criterion1() {
    const auto start = Clock::now();
    const std::vector<CheckResult> parts{check_hybrid_equivalence(101, 200, 2, 10, 64),
                                         check_positive_factorization(102, 200, 10, 64)};
    combine(1, parts, seconds_since(start), 60.0);
}

void criterion2() {
    const auto start = Clock::now();
    const auto rows = bounds_table({2, 4, 8}, 8192, 1000, 0);
    const double elapsed = seconds_since(start);
    const std::string table = emit_bounds_table(rows);

    std::uint64_t violations = 0;
    double alg1_max8 = -1.0;
    for (const BoundsRow& r : rows) {
        violations += r.violations;
        if (r.algo == "alg1" && r.d == 8) alg1_max8 = r.max_bits;
    }
    const bool has128 = table.find("\nalg1,8,8192,1000,") != std::string::npos &&
                        table.find(",128,128,") != std::string::npos;
    const bool has117 = table.find("\nalg2,8,8192,1000,") != std::string::npos &&
                        table.find(",117,117.002,") != std::string::npos;
    report(2, violations == 0 && has128 && has117 && elapsed < 120.0,
           "violations=" + std::to_string(violations) + ", d=8 bounds printed 128: " + (has128 ? "yes" : "no") +
               ", 117: " + (has117 ? "yes" : "no") + fmt(", %.1f s", elapsed));
    const bool in_range = alg1_max8 >= 15.0 && alg1_max8 <= 128.0;
    info(2, fmt("alg1 d=8 max loss %.2f bits", alg1_max8) + (in_range ? " (within [15, 128])" : " (outside [15, 128])"));
}

void criterion3() {
    const auto start = Clock::now();
    const std::vector<CheckResult> parts{check_negative_trace_identity(301, 100, 12),
                                         check_independent_set_identity(302, 50, 12)};
    combine(3, parts, seconds_since(start), 60.0);
}

void criterion4() {
    const auto start = Clock::now();
    combine(4, {check_alpha_margin(2, 64)}, seconds_since(start), 10.0);
}

void criterion5() {
    const auto start = Clock::now();
    combine(5, {check_counting_construction(4)}, seconds_since(start), 10.0);
}

void criterion6() {
    const auto start = Clock::now();
    combine(6, {check_madnb_identity(601, 50, 8, 64)}, seconds_since(start), 60.0);
}

void criterion7() {
    const auto start = Clock::now();
    combine(7, {check_kcnf_completeness(4, 2)}, seconds_since(start), 60.0);
}

std::string mushroom_path() { return std::string(KCNF_DATA_DIR) + "/mushroom.csv"; }

void criterion8() {
    const Dataset data = ingest_dataset({mushroom_path(), "class", "e", std::nullopt});
    const RunReport cnf2 = run_dataset(data, Algorithm::alg2, ReductionKind::kcnf, 2);
    const RunReport mono = run_dataset(data, Algorithm::alg2, ReductionKind::none, 1);
    const RunReport nb = run_dataset(data, Algorithm::madnb, ReductionKind::none, 1);

    const double acc2 = 100.0 * cnf2.accuracy;
    const double acc_mono = 100.0 * mono.accuracy;
    const bool ok2 = std::abs(acc2 - 93.27) <= 2.0;
    const bool ok_mono = acc_mono < 60.0;
    const bool ok_nb = nb.max_bits < 6000.0;
    report(8, ok2 && ok_mono && ok_nb,
           "mushroom n=" + std::to_string(data.examples.size()) + " d=" + std::to_string(data.dimension()) +
               fmt("; 2-CNF accuracy %.2f%% (target 93.27 +/- 2)", acc2) + (ok2 ? "" : " MISS") +
               fmt("; monotone accuracy %.2f%% (target < 60)", acc_mono) + (ok_mono ? "" : " MISS") +
               fmt("; MADNB loss %.1f bits (target < 6000)", nb.max_bits) + (ok_nb ? "" : " MISS"));
}

void criterion8_long() {
    const auto start = Clock::now();
    const Dataset data = ingest_dataset({mushroom_path(), "class", "e", std::nullopt});
    const RunReport cnf3 = run_dataset(data, Algorithm::alg2, ReductionKind::kcnf, 3);
    const double acc = 100.0 * cnf3.accuracy;
    report(8, std::abs(acc - 98.6) <= 1.5,
           "long: 3-CNF d_prime=" + std::to_string(cnf3.d_prime) + fmt(" accuracy %.2f%% (target 98.6 +/- 1.5)", acc) +
               fmt("; %.1f s", seconds_since(start)));
}

void criterion9() {
    const auto start = Clock::now();
    const std::size_t steps = 1'000'000;
    const std::size_t d = 12;
    std::string detail;
    bool ok = true;

    for (Algorithm algo : {Algorithm::alg2, Algorithm::madnb}) {
        Rng rng(trial_seed(900, static_cast<std::uint64_t>(algo)));
        auto predictor = make_predictor(algo, d);
        std::size_t bad = 0;
        for (std::size_t t = 0; t < steps; ++t) {
            const SideInfo side = random_side(rng, d);
            // Arbitrary, non-realizable labels: a noisy function of the input.
            const bool label = (side.test(0) && side.test(1)) != (uniform01(rng) < 0.1);
            const Prediction p = predictor->predict(side);
            if (!std::isfinite(p.log_p0) || !std::isfinite(p.log_p1)) ++bad;
            predictor->update(side, label);
        }
        ok = ok && bad == 0;
        detail += to_string(algo) + ": " + std::to_string(bad) + " zero-probability predictions in " +
                  std::to_string(steps) + " steps; ";
    }

    // The same input seen first as negative, then as positive.
    HybridPredictor alg1(4);
    const std::vector<Example> trace{{SideInfo::from_mask(0b0101, 4), false},
                                     {SideInfo::from_mask(0b1111, 4), true},
                                     {SideInfo::from_mask(0b0101, 4), true},
                                     {SideInfo::from_mask(0b0011, 4), false}};
    const LossLedger ledger = cumulative_loss(alg1, trace);
    const bool inf_ok = ledger.infinite() && ledger.total_bits() == kPosInf;
    ok = ok && inf_ok;
    detail += std::string("alg1 non-realizable trace total ") + (inf_ok ? "+inf" : fmt("%.3f", ledger.total_bits()));
    detail += fmt("; %.1f s", seconds_since(start));
    report(9, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
    const bool long_only = argc > 1 && std::strcmp(argv[1], "--long-only") == 0;
    if (long_only) {
        guarded(8, criterion8_long);
    } else {
        guarded(1, criterion1);
        guarded(2, criterion2);
        guarded(3, criterion3);
        guarded(4, criterion4);
        guarded(5, criterion5);
        guarded(6, criterion6);
        guarded(7, criterion7);
        guarded(8, criterion8);
        guarded(9, criterion9);
    }
    std::printf("%d failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
