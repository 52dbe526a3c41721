#include "pfaudit/report.hpp"

#include <cstdio>
#include <sstream>

namespace pfaudit {

namespace {

std::string fmt(const std::optional<double>& v, int width = 10) {
    char buf[64];
    if (v)
        std::snprintf(buf, sizeof(buf), "%*.4f", width, *v);
    else
        std::snprintf(buf, sizeof(buf), "%*s", width, "NA");
    return buf;
}

std::string csv_value(const std::optional<double>& v) {
    return v ? format_double(*v) : "NA";
}

std::string config_hash(const FairnessReport& report) {
    std::string blob = "seed=" + std::to_string(report.seed) +
                       ";draws=" + std::to_string(report.draws_used);
    for (const auto& p : report.provenance) blob += ";" + p;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(blob)));
    return buf;
}

} // namespace

std::string report_to_text(const FairnessReport& report) {
    std::ostringstream out;
    out << "principal fairness report\n"
        << "=========================\n"
        << "seed:        " << report.seed << "\n"
        << "draws:       " << report.draws_used << "\n"
        << "config_hash: " << config_hash(report) << "\n";
    for (const auto& p : report.provenance) out << "provenance:  " << p << "\n";

    out << "\ndelta(h) = p(D=1 | h, A=1) - p(D=1 | h, A=0)\n";
    out << "stratum          mean      lower      upper   defined\n";
    for (auto h : kAllStrata) {
        const auto& s = report.delta[static_cast<std::size_t>(h)];
        char frac[16];
        std::snprintf(frac, sizeof(frac), "%9.2f", s.defined_fraction);
        out << std::string(stratum_name(h)) +
                   std::string(14 - std::string(stratum_name(h)).size(), ' ')
            << fmt(s.mean) << " " << fmt(s.lower) << " " << fmt(s.upper) << frac
            << (s.unreliable ? "  UNRELIABLE" : "") << "\n";
    }

    out << "\ndecision probability p(D=1 | h, a), posterior mean\n";
    out << "stratum              A=0        A=1\n";
    for (auto h : kAllStrata) {
        const auto hi = static_cast<std::size_t>(h);
        out << std::string(stratum_name(h)) +
                   std::string(14 - std::string(stratum_name(h)).size(), ' ')
            << fmt(report.decision_prob[hi][0]) << " " << fmt(report.decision_prob[hi][1])
            << "\n";
    }

    out << "\nstrata proportion within group, posterior mean\n";
    out << "stratum              A=0        A=1\n";
    for (auto h : kAllStrata) {
        const auto hi = static_cast<std::size_t>(h);
        out << std::string(stratum_name(h)) +
                   std::string(14 - std::string(stratum_name(h)).size(), ' ')
            << fmt(report.strata_proportion[hi][0]) << " "
            << fmt(report.strata_proportion[hi][1]) << "\n";
    }

    out << "\nassociational metrics (observed data)\n";
    out << "statistical parity p(D=1|A): A=0 " << fmt(report.parity.rate_a0, 0) << ", A=1 "
        << fmt(report.parity.rate_a1, 0) << ", gap " << fmt(report.parity.gap, 0) << "\n";
    out << "calibration p(Y=1|D,A):\n";
    for (int d = 0; d < 2; ++d)
        out << "  D=" << d << "  A=0 " << fmt(report.calibration_table[d][0], 0) << "  A=1 "
            << fmt(report.calibration_table[d][1], 0) << "\n";
    out << "accuracy p(D=1|Y,A):\n";
    for (int y = 0; y < 2; ++y)
        out << "  Y=" << y << "  A=0 " << fmt(report.accuracy_table[y][0], 0) << "  A=1 "
            << fmt(report.accuracy_table[y][1], 0) << "\n";
    return out.str();
}

std::string report_to_csv(const FairnessReport& report) {
    std::ostringstream out;
    out << "# pfaudit report v1\n"
        << "# seed: " << report.seed << "\n"
        << "# draws: " << report.draws_used << "\n"
        << "# config_hash: " << config_hash(report) << "\n";
    for (const auto& p : report.provenance) out << "# provenance: " << p << "\n";
    out << "block,key1,key2,metric,value\n";

    for (auto h : kAllStrata) {
        const auto hi = static_cast<std::size_t>(h);
        const auto& s = report.delta[hi];
        const std::string name = stratum_name(h);
        out << "delta," << name << ",,mean," << csv_value(s.mean) << "\n"
            << "delta," << name << ",,lower," << csv_value(s.lower) << "\n"
            << "delta," << name << ",,upper," << csv_value(s.upper) << "\n"
            << "delta," << name << ",,defined_fraction," << format_double(s.defined_fraction)
            << "\n"
            << "delta," << name << ",,unreliable," << (s.unreliable ? 1 : 0) << "\n";
        for (int a = 0; a < 2; ++a) {
            out << "decision_prob," << name << ",a" << a << ",posterior_mean,"
                << csv_value(report.decision_prob[hi][static_cast<std::size_t>(a)]) << "\n";
            out << "strata_proportion," << name << ",a" << a << ",posterior_mean,"
                << csv_value(report.strata_proportion[hi][static_cast<std::size_t>(a)]) << "\n";
        }
    }

    out << "statistical_parity,a0,,rate," << csv_value(report.parity.rate_a0) << "\n"
        << "statistical_parity,a1,,rate," << csv_value(report.parity.rate_a1) << "\n"
        << "statistical_parity,gap,,rate," << csv_value(report.parity.gap) << "\n";
    for (int d = 0; d < 2; ++d)
        for (int a = 0; a < 2; ++a)
            out << "calibration,d" << d << ",a" << a << ",rate,"
                << csv_value(report.calibration_table[d][a]) << "\n";
    for (int y = 0; y < 2; ++y)
        for (int a = 0; a < 2; ++a)
            out << "accuracy,y" << y << ",a" << a << ",rate,"
                << csv_value(report.accuracy_table[y][a]) << "\n";
    return out.str();
}

} // namespace pfaudit
