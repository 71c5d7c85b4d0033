#include "kcnf/harness.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <sstream>

namespace kcnf {

namespace {

using Json = nlohmann::ordered_json;

std::string format_value(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Json json_value(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return round_report_value(x);
}

double from_json_value(const Json& j) {
    if (j.is_null()) return std::nan("");
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kPosInf;
        if (s == "-inf") return kNegInf;
        throw std::invalid_argument("report: unexpected string value '" + s + "'");
    }
    return j.get<double>();
}

std::string csv_algo(const RunReport& r) {
    return r.reduction == "none" ? r.algo : r.algo + "+" + r.reduction;
}

// Clause count when clauses are ordered k-tuples of the 2d literals, the
// unreduced form of the k-CNF feature space. Saturates at SIZE_MAX.
std::size_t ordered_tuple_count(std::size_t d, std::size_t k) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (out > SIZE_MAX / (2 * d)) return SIZE_MAX;
        out *= 2 * d;
    }
    return out;
}

}  // namespace

double round_report_value(double x) {
    if (!std::isfinite(x)) return x;
    return std::strtod(format_value(x).c_str(), nullptr);
}

ReportFormat parse_format(const std::string& text) {
    if (text == "csv") return ReportFormat::csv;
    if (text == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format '" + text + "' (expected csv|json)");
}

std::string emit_report(const RunReport& r, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::ostringstream out;
        if (r.kind == RunKind::synthetic) {
            out << kSyntheticCsvHeader << '\n'
                << csv_algo(r) << ',' << r.d << ',' << r.d_prime << ',' << r.k << ',' << r.n << ','
                << r.repeats << ',' << r.seed << ',' << format_value(r.max_bits) << ','
                << format_value(r.mean_bits) << ',' << format_value(r.bound_bits) << ','
                << r.infinite_losses << '\n';
        } else {
            out << kDatasetCsvHeader << '\n'
                << csv_algo(r) << ',' << r.d << ',' << r.d_prime << ',' << r.k << ',' << r.n << ','
                << format_value(r.accuracy) << ',' << r.correct << ',' << r.mistakes << ','
                << format_value(r.max_bits) << ',' << format_value(r.bound_bits) << ','
                << r.infinite_losses << '\n';
        }
        return out.str();
    }

    Json j;
    j["kind"] = r.kind == RunKind::synthetic ? "synthetic" : "dataset";
    j["algo"] = r.algo;
    j["reduction"] = r.reduction;
    j["d"] = r.d;
    j["d_prime"] = r.d_prime;
    j["k"] = r.k;
    if (r.reduction == "kcnf" && r.d > 0) j["d_ordered_tuples"] = ordered_tuple_count(r.d, r.k);
    j["n"] = r.n;
    j["repeats"] = r.repeats;
    j["seed"] = r.seed;
    j["source"] = r.source;
    j["max_bits"] = json_value(r.max_bits);
    j["mean_bits"] = json_value(r.mean_bits);
    j["bound_bits"] = json_value(r.bound_bits);
    j["infinite_losses"] = r.infinite_losses;
    j["violations"] = r.violations;
    j["accuracy"] = json_value(r.accuracy);
    j["correct"] = r.correct;
    j["mistakes"] = r.mistakes;
    Json bits = Json::array();
    for (double b : r.trial_bits) bits.push_back(json_value(b));
    j["trial_bits"] = std::move(bits);
    return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    const Json j = Json::parse(text);
    RunReport r;
    const auto kind = j.at("kind").get<std::string>();
    if (kind != "synthetic" && kind != "dataset") {
        throw std::invalid_argument("report: unknown kind '" + kind + "'");
    }
    r.kind = kind == "synthetic" ? RunKind::synthetic : RunKind::dataset;
    r.algo = j.at("algo").get<std::string>();
    r.reduction = j.at("reduction").get<std::string>();
    r.d = j.at("d").get<std::size_t>();
    r.d_prime = j.at("d_prime").get<std::size_t>();
    r.k = j.at("k").get<std::size_t>();
    r.n = j.at("n").get<std::uint64_t>();
    r.repeats = j.at("repeats").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.source = j.at("source").get<std::string>();
    r.max_bits = from_json_value(j.at("max_bits"));
    r.mean_bits = from_json_value(j.at("mean_bits"));
    r.bound_bits = from_json_value(j.at("bound_bits"));
    r.infinite_losses = j.at("infinite_losses").get<std::uint64_t>();
    r.violations = j.at("violations").get<std::uint64_t>();
    r.accuracy = from_json_value(j.at("accuracy"));
    r.correct = j.at("correct").get<std::uint64_t>();
    r.mistakes = j.at("mistakes").get<std::uint64_t>();
    for (const Json& b : j.at("trial_bits")) r.trial_bits.push_back(from_json_value(b));
    return r;
}

std::string emit_bounds_table(const std::vector<BoundsRow>& rows) {
    std::ostringstream out;
    out << "algo,d,n,repeats,max_bits,mean_bits,bound_bits,bound_exact,violations\n";
    for (const BoundsRow& row : rows) {
        char bound[32];
        std::snprintf(bound, sizeof bound, "%.0f", std::round(row.bound_bits));
        out << row.algo << ',' << row.d << ',' << row.n << ',' << row.repeats << ','
            << format_value(row.max_bits) << ',' << format_value(row.mean_bits) << ',' << bound
            << ',' << format_value(row.bound_bits) << ',' << row.violations << '\n';
    }
    return out.str();
}

}  // namespace kcnf
