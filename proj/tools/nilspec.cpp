// nilspec: Reidemeister numbers and spectra of 2-step nilpotent groups
// defined by graphs, their direct products, and free abelian factors.
// Every verb emits one JSON report {command, inputs, result, cross_checks}
// on stdout; redundant verifications are listed in cross_checks so CI can
// assert theorem-level consistency without re-parsing internals.
//
// Exit codes: 0 success, 1 domain error, 2 format/usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "nilspec/json_io.hpp"
#include "nilspec/product.hpp"
#include "nilspec/spectrum.hpp"

using namespace nilspec;

namespace {

json make_report(const std::string& command, json inputs, json result,
                 json cross_checks = json::array()) {
    return json{{"command", command},
                {"inputs", std::move(inputs)},
                {"result", std::move(result)},
                {"cross_checks", std::move(cross_checks)}};
}

bool join_bruteforce(const Graph& g) {
    const std::size_t n = g.size();
    if (n < 2) return false;
    for (std::size_t mask = 0; mask + 1 < (1u << (n - 1)); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            bool ai = i == 0 || ((mask >> (i - 1)) & 1);
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                bool aj = ((mask >> (j - 1)) & 1) != 0;
                if (ai != aj && !g.has_edge(i, j)) ok = false;
            }
        }
        if (ok) return true;
    }
    return false;
}

json run_graph_join(const std::string& path) {
    Graph g = graph_from_json(load_json_file(path));
    auto split = split_join(g);
    json result;
    if (!split) {
        result = "indecomposable";
    } else {
        result = json::array();
        for (const auto& part : split->parts) {
            json labels = json::array();
            for (std::size_t v : part) labels.push_back(g.vertices()[v]);
            result.push_back(std::move(labels));
        }
    }
    json checks = json::array();
    if (g.size() <= 7) {
        if (join_bruteforce(g) != split.has_value())
            throw InternalError("graph join: complement-component criterion "
                                "disagrees with the bipartition search");
        checks.push_back("bipartition-bruteforce-agree");
    }
    return make_report("graph join", json{{"graph", path}}, std::move(result),
                       std::move(checks));
}

json run_group_info(const std::string& path) {
    TwoStepGroup g = group_from_file(path);
    json result{{"base_rank", g.base_rank()},
                {"central_rank", g.central_rank()},
                {"hirsch_length", g.hirsch_length()},
                {"center_rank", g.center_base_directions().size() + g.central_rank()},
                {"gamma2_rank", g.gamma2_basis().size()},
                {"factors", g.factors().size()}};
    if (g.provenance())
        result["rationally_indecomposable"] =
            is_rationally_indecomposable(*g.provenance());
    return make_report("group info", json{{"group", path}}, std::move(result));
}

json run_reidemeister(const std::string& group_path, const std::string& aut_path,
                      long box) {
    TwoStepGroup g = group_from_file(group_path);
    Endo f = make_endomorphism(g, images_from_json(load_json_file(aut_path)));
    ExtNat r = reidemeister(g, f);

    json checks = json::array();
    ExtNat via_series = reidemeister_via_series(g, f, Series::Gamma2Isolator);
    if (!(via_series == r))
        throw InternalError("reidemeister: series cross-check disagrees");
    checks.push_back("series-agree");
    if (!r.is_infinite() && r.value() <= 6) {
        std::size_t classes = census_classes(g, f, box);
        checks.push_back("census-" + std::to_string(classes));
        if (Int(classes) != r.value())
            throw InternalError("reidemeister: box census found " +
                                std::to_string(classes) + " classes, expected " +
                                r.str());
    }
    return make_report("reidemeister",
                       json{{"group", group_path}, {"aut", aut_path}, {"box", box}},
                       extnat_to_json(r), std::move(checks));
}

json run_census(const std::string& group_path, const std::string& aut_path, long box) {
    TwoStepGroup g = group_from_file(group_path);
    Endo f = make_endomorphism(g, images_from_json(load_json_file(aut_path)));
    if (!is_automorphism(g, f))
        throw DomainError("census: input is not an automorphism");
    std::size_t classes = census_classes(g, f, box);
    json checks = json::array();
    ExtNat r = reidemeister(g, f);
    if (!r.is_infinite() && r.value() == Int(classes))
        checks.push_back("reidemeister-agrees");
    json result{{"classes", classes},
                {"witnesses_verified", true},
                {"reidemeister", extnat_to_json(r)}};
    return make_report("census",
                       json{{"group", group_path}, {"aut", aut_path}, {"box", box}},
                       std::move(result), std::move(checks));
}

json run_check_structure(const std::string& blocks_path) {
    BlockMap b = blockmap_from_file(blocks_path);
    StructureReport report = analyze_automorphism(b);
    json result{{"sigma", report.sigma},
                {"iso_flags", report.iso_flags},
                {"central_flags", report.central_flags},
                {"center_kill_flags", report.center_kill_flags},
                {"violations", report.violations}};
    json checks = json::array();
    if (report.ok()) {
        result["reidemeister"] = extnat_to_json(reidemeister_block(b));
        checks.push_back("three-way-reidemeister-agree");
    }
    json out = make_report("check-structure", json{{"blocks", blocks_path}},
                           std::move(result), std::move(checks));
    if (!report.ok()) {
        std::cout << out.dump(2) << "\n";
        throw DomainError("check-structure: structure theorem violated");
    }
    return out;
}

json run_spectrum_compose(const std::vector<std::string>& spec_paths,
                          std::vector<unsigned> mults, unsigned abelian_rank,
                          long bound) {
    if (mults.empty()) mults.assign(spec_paths.size(), 1);
    if (mults.size() != spec_paths.size())
        throw FormatError("spectrum compose: need one --mult per --spec (or none)");
    std::vector<std::pair<SpectrumExpr, unsigned>> factors;
    for (std::size_t i = 0; i < spec_paths.size(); ++i) {
        std::ifstream in(spec_paths[i]);
        if (!in) throw FormatError("cannot open file: " + spec_paths[i]);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        factors.emplace_back(parse_spectrum(text), mults[i]);
    }
    SpectrumExpr composed = spectrum_compose(factors, abelian_rank);
    SpectrumEnumeration en = spec_enumerate(composed, Int(bound));
    json members = json::array();
    for (const Int& v : en.members) members.push_back(int_to_json(v));
    json result{{"expression", format_spectrum(composed)},
                {"members_up_to_bound", std::move(members)},
                {"has_infinity", en.has_infinity}};
    return make_report("spectrum compose",
                       json{{"specs", spec_paths},
                            {"mults", mults},
                            {"abelian_rank", abelian_rank},
                            {"bound", bound}},
                       std::move(result));
}

json run_spectrum_sample(const std::string& group_path, unsigned trials,
                         std::uint64_t seed, long coeff_bound, long bound) {
    TwoStepGroup g = group_from_file(group_path);
    SpectrumExpr sampled = spectrum_sample(g, trials, seed, 8, coeff_bound);
    SpectrumEnumeration en = spec_enumerate(sampled, Int(bound));
    json members = json::array();
    for (const Int& v : en.members) members.push_back(int_to_json(v));
    json result{{"expression", format_spectrum(sampled)},
                {"members_up_to_bound", std::move(members)},
                {"has_infinity", en.has_infinity},
                {"note", "sampled values form a subset of the full spectrum"}};
    return make_report("spectrum sample",
                       json{{"group", group_path},
                            {"trials", trials},
                            {"seed", seed},
                            {"coeff_bound", coeff_bound},
                            {"bound", bound}},
                       std::move(result));
}

json run_witt(long r, long c) {
    return make_report("witt", json{{"r", r}, {"c", c}}, int_to_json(witt_rank(r, c)));
}

json run_oracle_snf(const std::string& matrix_path) {
    IntMatrix m = matrix_from_json(load_json_file(matrix_path));
    SnfResult s = smith_normal_form(m);
    if (!(s.U * m * s.V == s.D)) throw InternalError("snf: U M V != D");
    json checks = json::array({"snf-product-ok"});
    json diag = json::array();
    for (const Int& d : snf_diagonal(s)) diag.push_back(int_to_json(d));
    json result{{"diagonal", std::move(diag)},
                {"U", matrix_to_json(s.U)},
                {"V", matrix_to_json(s.V)}};
    if (m.is_square()) {
        Int dm = det(m);
        ExtNat order = cokernel_order(m);
        bool consistent =
            (dm == 0) ? order.is_infinite() : order == ExtNat::finite(abs(dm));
        if (!consistent) throw InternalError("snf: determinant cross-check failed");
        checks.push_back("snf-vs-det-ok");
        result["det"] = int_to_json(dm);
        result["cokernel_order"] = extnat_to_json(order);
    }
    return make_report("oracle snf", json{{"matrix", matrix_path}}, std::move(result),
                       std::move(checks));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reidemeister numbers and spectra of 2-step nilpotent groups"};
    app.require_subcommand(1);
    json report;

    auto* graph_cmd = app.add_subcommand("graph", "graph-level queries");
    graph_cmd->require_subcommand(1);
    auto* join_cmd = graph_cmd->add_subcommand("join", "simplicial join decomposition");
    std::string join_path;
    join_cmd->add_option("file", join_path, "graph JSON file")->required();
    join_cmd->callback([&] { report = run_graph_join(join_path); });

    auto* group_cmd = app.add_subcommand("group", "group-level queries");
    group_cmd->require_subcommand(1);
    auto* info_cmd = group_cmd->add_subcommand("info", "ranks and structure");
    std::string info_path;
    info_cmd->add_option("--group", info_path, "group JSON file")->required();
    info_cmd->callback([&] { report = run_group_info(info_path); });

    auto* reid_cmd =
        app.add_subcommand("reidemeister", "Reidemeister number of an automorphism");
    std::string reid_group, reid_aut;
    long reid_box = 2;
    reid_cmd->add_option("--group", reid_group)->required();
    reid_cmd->add_option("--aut", reid_aut)->required();
    reid_cmd->add_option("--box", reid_box, "census box radius (default 2)");
    reid_cmd->callback([&] { report = run_reidemeister(reid_group, reid_aut, reid_box); });

    auto* census_cmd = app.add_subcommand("census", "twisted conjugacy classes in a box");
    std::string census_group, census_aut;
    long census_box = 2;
    census_cmd->add_option("--group", census_group)->required();
    census_cmd->add_option("--aut", census_aut)->required();
    census_cmd->add_option("--box", census_box);
    census_cmd->callback(
        [&] { report = run_census(census_group, census_aut, census_box); });

    auto* check_cmd = app.add_subcommand("check-structure", "block automorphism analysis");
    std::string blocks_path;
    check_cmd->add_option("--blocks", blocks_path)->required();
    check_cmd->callback([&] { report = run_check_structure(blocks_path); });

    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "spectrum composition and sampling");
    spectrum_cmd->require_subcommand(1);
    auto* compose_cmd = spectrum_cmd->add_subcommand("compose", "compose factor spectra");
    std::vector<std::string> compose_specs;
    std::vector<unsigned> compose_mults;
    unsigned compose_rank = 0;
    long compose_bound = 100;
    compose_cmd->add_option("--spec", compose_specs, "spectrum literal file")->required();
    compose_cmd->add_option("--mult", compose_mults, "factor multiplicity");
    compose_cmd->add_option("--abelian-rank", compose_rank);
    compose_cmd->add_option("--bound", compose_bound, "enumeration bound");
    compose_cmd->callback([&] {
        report = run_spectrum_compose(compose_specs, compose_mults, compose_rank,
                                      compose_bound);
    });
    auto* sample_cmd = spectrum_cmd->add_subcommand("sample", "sample automorphisms");
    std::string sample_group;
    unsigned sample_trials = 100;
    std::uint64_t sample_seed = 0;
    long sample_coeff = 5, sample_bound = 100000;
    sample_cmd->add_option("--group", sample_group)->required();
    sample_cmd->add_option("--trials", sample_trials);
    sample_cmd->add_option("--seed", sample_seed);
    sample_cmd->add_option("--coeff-bound", sample_coeff);
    sample_cmd->add_option("--bound", sample_bound, "enumeration bound");
    sample_cmd->callback([&] {
        report = run_spectrum_sample(sample_group, sample_trials, sample_seed,
                                     sample_coeff, sample_bound);
    });

    auto* witt_cmd = app.add_subcommand("witt", "Witt rank of a free Lie algebra layer");
    long witt_r = 0, witt_c = 0;
    witt_cmd->add_option("r", witt_r)->required();
    witt_cmd->add_option("c", witt_c)->required();
    witt_cmd->callback([&] { report = run_witt(witt_r, witt_c); });

    auto* oracle_cmd = app.add_subcommand("oracle", "exact linear algebra oracles");
    oracle_cmd->require_subcommand(1);
    auto* snf_cmd = oracle_cmd->add_subcommand("snf", "Smith normal form");
    std::string matrix_path;
    snf_cmd->add_option("--matrix", matrix_path)->required();
    snf_cmd->callback([&] { report = run_oracle_snf(matrix_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return 1;
    }

    std::cout << report.dump(2) << "\n";
    return 0;
}
