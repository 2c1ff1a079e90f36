#pragma once

// Command-line frontend. Exit codes: 0 success, 1 precondition/usage error,
// 2 invariant violation (bug signal). Exact values are printed as strings;
// a config file (INI/TOML style, --config) may set defaults, flags override.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "systolic/serialize.hpp"

namespace systolic {

namespace cli_detail {

inline FieldDescriptor bianchi_field(long long d) {
    require(d >= 1, "expected a positive squarefree d (the field is Q(sqrt(-d)))");
    return FieldDescriptor::quadratic(-d);
}

inline FieldDescriptor signed_field(long long d) {
    return d == 0 ? FieldDescriptor::rationals() : FieldDescriptor::quadratic(d);
}

inline void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

inline std::vector<Rational> parse_norm_list(const std::string& csv) {
    std::vector<Rational> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse_rational(item));
    }
    require(!out.empty(), "empty norm list");
    return out;
}

} // namespace cli_detail

inline int run(int argc, const char* const* argv) {
    CLI::App app{"exact-arithmetic toolkit for systoles of arithmetic hyperbolic manifolds"};
    app.set_version_flag("--version", "systolic 1.0.0");
    app.set_config("--config", "", "INI-style config file with per-subcommand sections");
    app.require_subcommand(1);

    unsigned long long seed = 0;
    double tol = 1e-12;
    app.add_option("--seed", seed, "seed echoed into reports (used by the property-test drivers)")
        ->capture_default_str();
    app.add_option("--tol", tol, "floating-point comparison tolerance for self-checks")
        ->capture_default_str();

    // ---- clifford ----
    auto* clifford = app.add_subcommand("clifford", "Clifford algebra operations on JSON elements");
    clifford->require_subcommand(1);

    std::string cl_lhs, cl_rhs, cl_out;
    auto* cl_mul = clifford->add_subcommand("mul", "multiply two Clifford elements");
    cl_mul->add_option("lhs", cl_lhs, "JSON file with the left factor")->required();
    cl_mul->add_option("rhs", cl_rhs, "JSON file with the right factor")->required();
    cl_mul->add_option("--out", cl_out, "output path (default stdout)");
    cl_mul->callback([&] {
        CliffordElement x = clifford_from_json(json_from_file(cl_lhs));
        CliffordElement y = clifford_from_json(json_from_file(cl_rhs));
        cli_detail::emit(clifford_to_json(cliff_mul(x, y)).dump(2) + "\n", cl_out);
    });

    std::string cl_star_in, cl_star_out;
    auto* cl_star = clifford->add_subcommand("star", "apply the anti-involution *");
    cl_star->add_option("element", cl_star_in, "JSON file with the element")->required();
    cl_star->add_option("--out", cl_star_out, "output path (default stdout)");
    cl_star->callback([&] {
        CliffordElement x = clifford_from_json(json_from_file(cl_star_in));
        cli_detail::emit(clifford_to_json(star(x)).dump(2) + "\n", cl_star_out);
    });

    std::string cl_check_in, cl_check_out;
    auto* cl_check = clifford->add_subcommand("check", "spin membership and form admissibility");
    cl_check->add_option("element", cl_check_in, "JSON file with the element")->required();
    cl_check->add_option("--out", cl_check_out, "output path (default stdout)");
    cl_check->callback([&] {
        CliffordElement x = clifford_from_json(json_from_file(cl_check_in));
        SpinCheck sc = is_spin(x);
        json j;
        j["real_part"] = to_string(real_part(x));
        j["integral"] = x.integral();
        j["even_support"] = x.even_support();
        j["spin"] = sc.spin;
        j["reason"] = sc.reason;
        if (x.form().field().is_real()) {
            AdmissibilityResult adm = admissible_check(x.form());
            j["form_admissible"] = adm.admissible;
            j["form_admissible_reason"] = adm.reason;
        } else {
            j["form_admissible"] = false;
            j["form_admissible_reason"] = "imaginary base field";
        }
        cli_detail::emit(j.dump(2) + "\n", cl_check_out);
    });

    // ---- congruence ----
    auto* congruence = app.add_subcommand("congruence", "congruence subgroup membership and bounds");
    congruence->require_subcommand(1);

    std::string cg_alpha, cg_tau, cg_elem, cg_out;
    int cg_dim = 0;
    auto* cg_check = congruence->add_subcommand("check", "membership in Gamma(alpha) / Gamma_tau(alpha)");
    cg_check->add_option("element", cg_elem, "JSON file with the Clifford element")->required();
    cg_check->add_option("--alpha", cg_alpha, "level generator, e.g. \"2\" or \"3+1*sqrt(2)\"")->required();
    cg_check->add_option("--tau", cg_tau, "order-two residue representative (optional)");
    cg_check->add_option("--n", cg_dim, "ambient dimension for the index bound (default: form dimension)");
    cg_check->add_option("--out", cg_out, "output path (default stdout)");
    cg_check->callback([&] {
        CliffordElement x = clifford_from_json(json_from_file(cg_elem));
        SpinElement s = SpinElement::certify(x);
        FieldDescriptor field = x.form().field();
        RingInteger alpha = parse_ring_integer(cg_alpha, field);
        json j;
        j["alpha"] = to_string(alpha);
        bool in_plain = in_gamma_alpha(s, alpha);
        j["in_gamma_alpha"] = in_plain;
        if (in_plain) j["zeta"] = to_string(realpart_residue(s, alpha));
        if (!cg_tau.empty()) {
            CongruenceLevel level(alpha, parse_ring_integer(cg_tau, field));
            j["tau"] = to_string(*level.tau_rep());
            j["in_gamma_tau_alpha"] = in_gamma_tau_alpha(s, level);
        }
        j["realpart_lower_bound"] = bound_report_to_json(realpart_bound_report(alpha, field.degree()));
        int n = cg_dim > 0 ? cg_dim : x.form().dimension();
        if (n >= 2) j["index_upper_bound"] = to_string(index_upper_bound(alpha, n));
        cli_detail::emit(j.dump(2) + "\n", cg_out);
    });

    // ---- salem ----
    auto* salem = app.add_subcommand("salem", "degree-4 Salem level selection and certification");
    salem->require_subcommand(1);

    long long sm_field = 0;
    std::string sm_t, sm_u, sm_D, sm_out;
    int sm_degree = 0;
    auto* sm_certify = salem->add_subcommand("certify", "select the level and certify equal systoles");
    sm_certify->add_option("--field", sm_field, "field descriptor d (0 = Q, else Q(sqrt(d)), d > 0)")
        ->required();
    sm_certify->add_option("--t", sm_t, "t with lambda = t + u*sqrt(D)")->required();
    sm_certify->add_option("--u", sm_u, "u (default 1)");
    sm_certify->add_option("--D", sm_D, "D (default t^2 - 1)");
    sm_certify->add_option("--degree", sm_degree, "degree d used in the bound constants (default: field degree)");
    sm_certify->add_option("--out", sm_out, "output path (default stdout)");
    sm_certify->callback([&] {
        FieldDescriptor field = cli_detail::signed_field(sm_field);
        RingInteger t = parse_ring_integer(sm_t, field);
        RingInteger u = sm_u.empty() ? RingInteger::one(field) : parse_ring_integer(sm_u, field);
        RingInteger D = sm_D.empty()
                            ? RingInteger(t.value() * t.value() - FieldElement::one(field))
                            : parse_ring_integer(sm_D, field);
        SalemQuartic sq(t, u, D);
        int degree = sm_degree == 0 ? field.degree() : sm_degree;
        LevelCertificate cert = certify_surface_systole(sq, degree);
        cli_detail::emit(level_certificate_to_json(cert).dump(2) + "\n", sm_out);
    });

    // ---- kleinian ----
    auto* kleinian = app.add_subcommand("kleinian", "dimension-3 invariants, certificates, enumeration");
    kleinian->require_subcommand(1);

    std::string ki_trace, ki_out;
    long long ki_d = 1;
    auto* ki_inv = kleinian->add_subcommand("invariants", "classification, eigenvalue, length, holonomy");
    ki_inv->add_option("--trace", ki_trace, "trace, e.g. \"3\" or \"2+1*sqrt(-1)\"")->required();
    ki_inv->add_option("--d", ki_d, "positive d: the trace lives in Q(sqrt(-d))")->capture_default_str();
    ki_inv->add_option("--out", ki_out, "output path (default stdout)");
    ki_inv->callback([&] {
        FieldDescriptor field = cli_detail::bianchi_field(ki_d);
        NormalizedTrace t = NormalizedTrace::normalize(parse_field_element(ki_trace, field));
        json j;
        j["trace"] = to_string(t.value());
        j["mu"] = t.mu();
        j["trace_norm"] = to_string(t.norm());
        ElementType type = classify(t);
        j["type"] = to_string(type);
        if (type == ElementType::loxodromic) {
            GeodesicInvariant inv = length_holonomy(t);
            j["eigenvalue_re"] = inv.eigenvalue.real();
            j["eigenvalue_im"] = inv.eigenvalue.imag();
            j["length"] = inv.length;
            j["holonomy"] = inv.holonomy;
            j["holonomy_reduced"] = inv.holonomy_reduced();
            auto [lhs, rhs] = trace_identity_sides(t, inv.length);
            j["trace_identity_lhs"] = lhs;
            j["trace_identity_rhs"] = rhs;
            j["trace_identity_ok"] = std::abs(lhs - rhs) <= tol * (1.0 + std::abs(rhs));
            j["tol"] = tol;
        }
        cli_detail::emit(j.dump(2) + "\n", ki_out);
    });

    std::string kc_trace, kc_out;
    long long kc_d = 1;
    double kc_n0 = 0.0;
    auto* ki_cert = kleinian->add_subcommand("certify", "square-systole certificate for a trace");
    ki_cert->add_option("--trace", kc_trace, "integral loxodromic trace")->required();
    ki_cert->add_option("--d", kc_d, "positive d: the trace lives in Q(sqrt(-d))")->capture_default_str();
    ki_cert->add_option("--n0", kc_n0, "override the Case-1 constant N0 (default 2(4+sqrt(17)))");
    ki_cert->add_option("--out", kc_out, "output path (default stdout)");
    ki_cert->callback([&] {
        FieldDescriptor field = cli_detail::bianchi_field(kc_d);
        NormalizedTrace t = NormalizedTrace::normalize(parse_field_element(kc_trace, field));
        SystoleGateParams params = kc_n0 > 0.0 ? SystoleGateParams::with_n0(kc_n0)
                                               : SystoleGateParams::defaults();
        SquareSystoleCertificate cert = certify_square_systole(t, params);
        cli_detail::emit(square_systole_to_json(cert).dump(2) + "\n", kc_out);
    });

    long long ke_d = 1, ke_height = 1;
    std::string ke_level, ke_out;
    auto* ki_enum = kleinian->add_subcommand("enumerate", "height-bounded SL2(O) stream (JSON lines)");
    ki_enum->add_option("--d", ke_d, "positive d: entries in O of Q(sqrt(-d))")->required();
    ki_enum->add_option("--height", ke_height, "max |integer coordinate| over all entries")->required();
    ki_enum->add_option("--level", ke_level, "restrict to +-identity mod this element");
    ki_enum->add_option("--out", ke_out, "output path (default stdout)");
    ki_enum->callback([&] {
        FieldDescriptor field = cli_detail::bianchi_field(ke_d);
        std::optional<RingInteger> level;
        if (!ke_level.empty()) level = parse_ring_integer(ke_level, field);
        std::string out;
        enumerate_sl2(field, ke_height, level, [&](const MoebiusElement& g) {
            json j;
            j["a"] = to_string(g.a());
            j["b"] = to_string(g.b());
            j["c"] = to_string(g.c());
            j["d"] = to_string(g.d());
            NormalizedTrace t = g.trace();
            j["trace"] = to_string(t.value());
            ElementType type = classify(t);
            j["type"] = to_string(type);
            if (type == ElementType::loxodromic) {
                GeodesicInvariant inv = length_holonomy(t);
                j["length"] = inv.length;
                j["holonomy"] = inv.holonomy;
            }
            out += j.dump() + "\n";
        });
        cli_detail::emit(out, ke_out);
    });

    // ---- census ----
    auto* census = app.add_subcommand("census", "trace census and growth tables");
    census->require_subcommand(1);

    long long cs_d = 1, cs_norm = 1, cs_height = 1;
    double cs_lo = 0.0, cs_hi = 2.0 * std::numbers::pi;
    bool cs_primitive = false;
    int cs_workers = 1;
    std::string cs_out, cs_summary;
    auto* cs_run = census->add_subcommand("run", "bucketed trace census (CSV + JSON summary)");
    cs_run->add_option("--d", cs_d, "positive d: the group is SL2 over O of Q(sqrt(-d))")->required();
    cs_run->add_option("--max-norm", cs_norm, "keep traces with |t|^2 <= N")->required();
    cs_run->add_option("--height", cs_height, "enumeration height")->required();
    cs_run->add_option("--hol-lo", cs_lo, "reduced-holonomy interval start")->capture_default_str();
    cs_run->add_option("--hol-hi", cs_hi, "reduced-holonomy interval end")->capture_default_str();
    cs_run->add_flag("--primitive", cs_primitive, "drop imprimitive trace records");
    cs_run->add_option("--workers", cs_workers, "parallel enumeration workers")->capture_default_str();
    cs_run->add_option("--out", cs_out, "CSV output path")->required();
    cs_run->add_option("--summary", cs_summary, "JSON summary path (default stdout)");
    cs_run->callback([&] {
        require(cs_workers >= 1 && cs_workers <= 64, "census: workers must be in [1, 64]");
        CensusQuery q = CensusQuery::make(cli_detail::bianchi_field(cs_d), to_rational(cs_norm), cs_lo,
                                          cs_hi, cs_height, cs_primitive);
        CensusReport report = trace_census(q, cs_workers);
        write_file(cs_out, census_csv(report));
        json j = census_summary_to_json(summarize(report, cs_workers, seed));
        cli_detail::emit(j.dump(2) + "\n", cs_summary);
    });

    long long gw_d = 1, gw_height = 1;
    std::string gw_norms = "25,50,100";
    double gw_lo = 0.0, gw_hi = 2.0 * std::numbers::pi;
    bool gw_primitive = false;
    int gw_workers = 1;
    std::string gw_out;
    auto* cs_growth = census->add_subcommand("growth", "tau/sigma/mu growth table vs N/log N (CSV)");
    cs_growth->add_option("--d", gw_d, "positive d")->required();
    cs_growth->add_option("--norms", gw_norms, "comma-separated increasing norm bounds")->capture_default_str();
    cs_growth->add_option("--height", gw_height, "enumeration height")->required();
    cs_growth->add_option("--hol-lo", gw_lo, "reduced-holonomy interval start")->capture_default_str();
    cs_growth->add_option("--hol-hi", gw_hi, "reduced-holonomy interval end")->capture_default_str();
    cs_growth->add_flag("--primitive", gw_primitive, "drop imprimitive trace records");
    cs_growth->add_option("--workers", gw_workers, "parallel enumeration workers")->capture_default_str();
    cs_growth->add_option("--out", gw_out, "CSV output path (default stdout)");
    cs_growth->callback([&] {
        require(gw_workers >= 1 && gw_workers <= 64, "census: workers must be in [1, 64]");
        auto rows = growth_table(cli_detail::bianchi_field(gw_d), cli_detail::parse_norm_list(gw_norms),
                                 gw_lo, gw_hi, gw_height, gw_primitive, gw_workers);
        cli_detail::emit(growth_csv(rows), gw_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invariant_violation& e) {
        std::cerr << "invariant violation (bug): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace systolic
