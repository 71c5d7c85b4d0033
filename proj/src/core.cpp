#include "kcnf/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kcnf {

double log2_one_minus_exp2(double x) {
    if (std::isnan(x) || x > 0.0) {
        throw std::domain_error("log2_one_minus_exp2: argument must be <= 0");
    }
    if (x == 0.0) return kNegInf;
    if (x == kNegInf) return 0.0;
    // Split at 2^x = 1/2: expm1 is accurate when 2^x is near one, log1p when
    // 2^x is small.
    if (x > -1.0) {
        return std::log2(-std::expm1(x * std::numbers::ln2));
    }
    return std::log1p(-std::exp2(x)) / std::numbers::ln2;
}

double log2_add_exp2(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == kNegInf) return a;
    return a + std::log1p(std::exp2(b - a)) / std::numbers::ln2;
}

double log2_sum_exp2(std::span<const double> values) {
    if (values.empty()) return kNegInf;
    const double top = *std::max_element(values.begin(), values.end());
    if (top == kNegInf) return kNegInf;
    if (top == kPosInf) return kPosInf;
    double acc = 0.0;
    for (double v : values) acc += std::exp2(v - top);
    return top + std::log2(acc);
}

bool checked_label(long long value) {
    if (value != 0 && value != 1) {
        throw std::invalid_argument("label must be 0 or 1, got " + std::to_string(value));
    }
    return value == 1;
}

Prediction Prediction::from_log_p1(double log_p1, bool tie_label) {
    if (std::isnan(log_p1) || log_p1 > 0.0) {
        throw std::domain_error("Prediction: log_p1 must be <= 0");
    }
    return Prediction{log2_one_minus_exp2(log_p1), log_p1, tie_label};
}

Prediction Prediction::from_log_p0(double log_p0, bool tie_label) {
    if (std::isnan(log_p0) || log_p0 > 0.0) {
        throw std::domain_error("Prediction: log_p0 must be <= 0");
    }
    return Prediction{log_p0, log2_one_minus_exp2(log_p0), tie_label};
}

Prediction Prediction::certain(bool label) {
    return label ? Prediction{kNegInf, 0.0, true} : Prediction{0.0, kNegInf, false};
}

Prediction Prediction::uniform(bool tie_label) { return Prediction{-1.0, -1.0, tie_label}; }

double Prediction::p1() const { return std::exp2(log_p1); }
double Prediction::p0() const { return std::exp2(log_p0); }

bool Prediction::predicted_label() const {
    if (log_p1 > log_p0) return true;
    if (log_p0 > log_p1) return false;
    return tie_label;
}

Prediction Prediction::flipped() const { return Prediction{log_p1, log_p0, !tie_label}; }

double LossLedger::record(const Prediction& p, bool label) {
    const double bits = -p.log_prob(label);
    record_bits(bits);
    return bits;
}

void LossLedger::record_bits(double bits) {
    ++m_steps;
    m_total_bits += bits;
}

void Predictor::check_dimension(const SideInfo& side) const {
    if (side.size() != m_dimension) {
        throw std::invalid_argument(name() + ": side information has " +
                                    std::to_string(side.size()) + " components, expected " +
                                    std::to_string(m_dimension));
    }
}

Prediction Predictor::predict(const SideInfo& side) const {
    check_dimension(side);
    return do_predict(side);
}

void Predictor::update(const SideInfo& side, bool label) {
    check_dimension(side);
    do_update(side, label);
}

Prediction Predictor::predict(const SideInfo& features, const SideInfo& key) const {
    check_dimension(features);
    return do_predict_keyed(features, key);
}

void Predictor::update(const SideInfo& features, const SideInfo& key, bool label) {
    check_dimension(features);
    do_update_keyed(features, key, label);
}

Prediction Predictor::do_predict_keyed(const SideInfo& features, const SideInfo&) const {
    return do_predict(features);
}

void Predictor::do_update_keyed(const SideInfo& features, const SideInfo&, bool label) {
    do_update(features, label);
}

LossLedger cumulative_loss(Predictor& predictor, std::span<const Example> trace) {
    LossLedger ledger;
    for (const Example& ex : trace) {
        const Prediction p = predictor.predict(ex.side);
        ledger.record(p, ex.label);
        predictor.update(ex.side, ex.label);
    }
    return ledger;
}

std::size_t trace_dimension(std::span<const Example> trace) {
    if (trace.empty()) return 0;
    const std::size_t d = trace.front().side.size();
    for (std::size_t t = 1; t < trace.size(); ++t) {
        if (trace[t].side.size() != d) {
            throw std::invalid_argument("trace: example " + std::to_string(t) + " has dimension " +
                                        std::to_string(trace[t].side.size()) + ", expected " +
                                        std::to_string(d));
        }
    }
    return d;
}

}  // namespace kcnf
