#pragma once

#include "kcnf/bits.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace kcnf {

// All probabilities in this library are base-2 logarithms. Linear-domain
// values are only ever derived for display or comparison.

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log2(1 - 2^x) for x <= 0, accurate both near x = 0 and for very negative x.
/// Returns -inf at x = 0 and 0 at x = -inf.
double log2_one_minus_exp2(double x);

/// log2(2^a + 2^b).
double log2_add_exp2(double a, double b);

/// log2 of the sum of 2^v over `values`; -inf for an empty range.
double log2_sum_exp2(std::span<const double> values);

using SideInfo = BitVector;

struct Example {
    SideInfo side;
    bool label = false;
};

/// Converts an integer label to a Boolean, rejecting anything but 0 and 1.
bool checked_label(long long value);

/// Distribution over {0,1}, carried as log2-probabilities.
struct Prediction {
    double log_p0 = -1.0;
    double log_p1 = -1.0;
    /// Label reported as "predicted" when both outcomes are equally likely.
    bool tie_label = false;

    static Prediction from_log_p1(double log_p1, bool tie_label = false);
    static Prediction from_log_p0(double log_p0, bool tie_label = false);
    static Prediction certain(bool label);
    static Prediction uniform(bool tie_label = false);

    double log_prob(bool label) const { return label ? log_p1 : log_p0; }
    double p1() const;
    double p0() const;
    /// Label carrying strictly more than half the mass, tie_label otherwise.
    bool predicted_label() const;
    /// Swaps the roles of the two labels.
    Prediction flipped() const;
};

/// Running count of steps and cumulative log-loss in bits.
class LossLedger {
public:
    /// Records the loss of `p` on `label` and returns the instantaneous loss.
    double record(const Prediction& p, bool label);
    void record_bits(double bits);

    std::size_t steps() const { return m_steps; }
    double total_bits() const { return m_total_bits; }
    bool infinite() const { return m_total_bits == kPosInf; }

private:
    std::size_t m_steps = 0;
    double m_total_bits = 0.0;
};

/// Sequential probabilistic predictor over d-dimensional side information.
///
/// Construction plays the role of begin(d). predict() is pure; update() folds
/// in the revealed label. The keyed overloads let a wrapper pass an identity
/// key distinct from the feature vector (e.g. the pre-expansion input of a
/// feature reduction); predictors that do not memorize ignore the key.
class Predictor {
public:
    explicit Predictor(std::size_t dimension) : m_dimension(dimension) {}
    virtual ~Predictor() = default;

    Predictor(const Predictor&) = default;
    Predictor& operator=(const Predictor&) = default;
    Predictor(Predictor&&) = default;
    Predictor& operator=(Predictor&&) = default;

    std::size_t dimension() const { return m_dimension; }
    virtual std::string name() const = 0;

    Prediction predict(const SideInfo& side) const;
    void update(const SideInfo& side, bool label);

    Prediction predict(const SideInfo& features, const SideInfo& key) const;
    void update(const SideInfo& features, const SideInfo& key, bool label);

protected:
    virtual Prediction do_predict(const SideInfo& side) const = 0;
    virtual void do_update(const SideInfo& side, bool label) = 0;

    virtual Prediction do_predict_keyed(const SideInfo& features, const SideInfo& key) const;
    virtual void do_update_keyed(const SideInfo& features, const SideInfo& key, bool label);

    void check_dimension(const SideInfo& side) const;

private:
    std::size_t m_dimension;
};

/// Runs `predictor` over `trace` (predict, record, update per step).
LossLedger cumulative_loss(Predictor& predictor, std::span<const Example> trace);

/// Common dimension of all examples; throws if they disagree.
std::size_t trace_dimension(std::span<const Example> trace);

}  // namespace kcnf
