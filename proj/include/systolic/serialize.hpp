#pragma once

// JSON and CSV emission for reports, and the JSON wire format for Clifford
// elements. Exact values always travel as strings ("p/q", "a+b*sqrt(d)");
// floating-point fields carry an explicit tolerance where one applies.
// Emission is byte-deterministic for identical inputs.

#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "systolic/census.hpp"
#include "systolic/clifford.hpp"
#include "systolic/congruence.hpp"
#include "systolic/kleinian.hpp"
#include "systolic/quadfield.hpp"
#include "systolic/salem.hpp"

namespace systolic {

using json = nlohmann::ordered_json;

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline json field_to_json(const FieldDescriptor& f) {
    return json{{"d", f.d()}, {"degree", f.degree()}};
}

inline FieldDescriptor field_from_json(const json& j) {
    int degree = j.at("degree").get<int>();
    if (degree == 1) return FieldDescriptor::rationals();
    return FieldDescriptor::quadratic(j.at("d").get<long long>());
}

// {"field": {...}, "form": ["a0", ...], "terms": {"mask": "coeff", ...}}
inline json clifford_to_json(const CliffordElement& x) {
    json j;
    j["field"] = field_to_json(x.form().field());
    json form = json::array();
    for (int i = 0; i < x.form().generators(); ++i) form.push_back(to_string(x.form().coefficient(i)));
    j["form"] = form;
    json terms = json::object();
    for (const auto& [mask, c] : x.terms()) terms[std::to_string(mask)] = to_string(c);
    j["terms"] = terms;
    return j;
}

inline CliffordElement clifford_from_json(const json& j) {
    FieldDescriptor field = field_from_json(j.at("field"));
    std::vector<std::string> coeffs = j.at("form").get<std::vector<std::string>>();
    DiagonalForm form = DiagonalForm::from_strings(coeffs, field);
    CliffordElement out(form);
    for (const auto& [key, value] : j.at("terms").items()) {
        Mask mask = static_cast<Mask>(std::stoul(key));
        out.add_term(mask, parse_field_element(value.get<std::string>(), field));
    }
    return out;
}

inline json inequality_to_json(const InequalityCheck& c) {
    return json{{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}};
}

inline InequalityCheck inequality_from_json(const json& j) {
    return InequalityCheck{j.at("name").get<std::string>(), j.at("lhs").get<std::string>(),
                           j.at("rhs").get<std::string>(), j.at("holds").get<bool>()};
}

inline json level_certificate_to_json(const LevelCertificate& cert) {
    json j;
    j["field"] = field_to_json(cert.alpha.field());
    j["l"] = cert.l;
    j["m"] = cert.m;
    j["alpha"] = to_string(cert.alpha);
    j["t_l"] = to_string(cert.t_l);
    json checks = json::array();
    for (const auto& c : cert.checks) checks.push_back(inequality_to_json(c));
    j["checks"] = checks;
    j["certified"] = cert.certified;
    return j;
}

inline LevelCertificate level_certificate_from_json(const json& j) {
    FieldDescriptor field = field_from_json(j.at("field"));
    LevelCertificate cert{j.at("l").get<int>(), j.at("m").get<int>(),
                          parse_ring_integer(j.at("alpha").get<std::string>(), field),
                          parse_ring_integer(j.at("t_l").get<std::string>(), field),
                          {},
                          j.at("certified").get<bool>()};
    for (const auto& c : j.at("checks")) cert.checks.push_back(inequality_from_json(c));
    return cert;
}

inline json square_systole_to_json(const SquareSystoleCertificate& cert) {
    json j;
    j["trace"] = cert.trace_text;
    j["certified"] = cert.certified;
    j["length"] = cert.length;
    j["length_ok"] = cert.length_ok;
    j["holonomy"] = cert.holonomy;
    j["holonomy_ok"] = cert.holonomy_ok;
    j["N0"] = cert.n0;
    j["L0"] = cert.l0;
    j["epsilon"] = cert.epsilon;
    json checks = json::array();
    for (const auto& h : cert.h_checks)
        checks.push_back(json{{"zeta", h.zeta}, {"value", h.value}, {"nonnegative", h.nonnegative}});
    j["h_checks"] = checks;
    j["note"] = cert.note;
    return j;
}

inline SquareSystoleCertificate square_systole_from_json(const json& j) {
    SquareSystoleCertificate cert;
    cert.trace_text = j.at("trace").get<std::string>();
    cert.certified = j.at("certified").get<bool>();
    cert.length = j.at("length").get<double>();
    cert.length_ok = j.at("length_ok").get<bool>();
    cert.holonomy = j.at("holonomy").get<double>();
    cert.holonomy_ok = j.at("holonomy_ok").get<bool>();
    cert.n0 = j.at("N0").get<double>();
    cert.l0 = j.at("L0").get<double>();
    cert.epsilon = j.at("epsilon").get<double>();
    for (const auto& h : j.at("h_checks"))
        cert.h_checks.push_back(HFunctionCheck{h.at("zeta").get<std::string>(),
                                               h.at("value").get<double>(),
                                               h.at("nonnegative").get<bool>()});
    cert.note = j.at("note").get<std::string>();
    return cert;
}

inline json bound_report_to_json(const BoundReport& r) {
    json j;
    j["quantity"] = r.quantity;
    j["bound_exact"] = r.bound_exact;
    j["bound_approx"] = r.bound_approx;
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    j["certified"] = r.certified;
    return j;
}

// summary statistics of a census run (the per-trace records go to CSV)
struct CensusSummary {
    FieldDescriptor field = FieldDescriptor::rationals();
    std::string max_norm;
    double hol_lo = 0;
    double hol_hi = 0;
    long long height = 0;
    bool primitive_only = false;
    long long tau_hat = 0;
    long long sigma_hat = 0;
    std::string mu_hat; // exact "p/q", empty when undefined
    int workers = 1;
    unsigned long long seed = 0;

    bool operator==(const CensusSummary&) const = default;
};

inline CensusSummary summarize(const CensusReport& report, int workers, unsigned long long seed) {
    CensusSummary s;
    s.field = report.query.field;
    s.max_norm = to_string(report.query.max_norm);
    s.hol_lo = report.query.hol_lo;
    s.hol_hi = report.query.hol_hi;
    s.height = report.query.height;
    s.primitive_only = report.query.primitive_only;
    s.tau_hat = report.tau_hat;
    s.sigma_hat = report.sigma_hat;
    s.mu_hat = report.mu_defined ? to_string(report.mu_hat) : "";
    s.workers = workers;
    s.seed = seed;
    return s;
}

inline json census_summary_to_json(const CensusSummary& s) {
    json j;
    j["field"] = field_to_json(s.field);
    j["max_norm"] = s.max_norm;
    j["hol_lo"] = s.hol_lo;
    j["hol_hi"] = s.hol_hi;
    j["height"] = s.height;
    j["primitive_only"] = s.primitive_only;
    j["tau_hat"] = s.tau_hat;
    j["sigma_hat_surrogate"] = s.sigma_hat;
    j["mu_hat"] = s.mu_hat;
    j["workers"] = s.workers;
    j["seed"] = s.seed;
    return j;
}

inline CensusSummary census_summary_from_json(const json& j) {
    CensusSummary s;
    s.field = field_from_json(j.at("field"));
    s.max_norm = j.at("max_norm").get<std::string>();
    s.hol_lo = j.at("hol_lo").get<double>();
    s.hol_hi = j.at("hol_hi").get<double>();
    s.height = j.at("height").get<long long>();
    s.primitive_only = j.at("primitive_only").get<bool>();
    s.tau_hat = j.at("tau_hat").get<long long>();
    s.sigma_hat = j.at("sigma_hat_surrogate").get<long long>();
    s.mu_hat = j.at("mu_hat").get<std::string>();
    s.workers = j.at("workers").get<int>();
    s.seed = j.at("seed").get<unsigned long long>();
    return s;
}

// fixed column order; exact values as strings, floats via %.12g
inline std::string census_csv(const CensusReport& report) {
    std::string out = "trace,trace_norm,length,holonomy,holonomy_reduced,realizations,axis_classes_surrogate,primitive\n";
    for (const auto& rec : report.records) {
        out += to_string(rec.trace) + "," + to_string(rec.trace_norm) + "," +
               format_double(rec.length) + "," + format_double(rec.holonomy) + "," +
               format_double(rec.holonomy_reduced) + "," + std::to_string(rec.realization_count) +
               "," + std::to_string(rec.axis_class_count) + "," + (rec.primitive ? "1" : "0") + "\n";
    }
    return out;
}

inline std::string growth_csv(const std::vector<GrowthRow>& rows) {
    std::string out = "max_norm,tau_hat,sigma_hat_surrogate,mu_hat,n_over_log_n,mu_hat_log_n_over_n\n";
    for (const auto& row : rows) {
        out += to_string(row.max_norm) + "," + std::to_string(row.tau_hat) + "," +
               std::to_string(row.sigma_hat) + "," + (row.mu_defined ? to_string(row.mu_hat) : "") +
               "," + format_double(row.n_over_log_n) + "," + format_double(row.mu_scaled) + "\n";
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw precondition_error("cannot open output file: " + path);
    out << contents;
    if (!out) throw precondition_error("failed writing output file: " + path);
}

inline json json_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot open input file: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

} // namespace systolic
