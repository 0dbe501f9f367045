#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bisphere/common.hpp"
#include "bisphere/harness.hpp"

namespace {

std::vector<double> parse_comma_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using bisphere::harness::Command;
    using bisphere::harness::RunConfig;

    CLI::App app{"bisphere: exact and asymptotic electric fields of two nearly touching "
                 "conducting spheres"};
    app.set_config("--config", "", "key=value config file mirroring all flags; flags override");
    app.set_version_flag("--version", bisphere::version);

    RunConfig rc;
    std::vector<double> r2s;
    std::string field_str, theta_str, grid_str, format_str = "csv";

    app.add_option("--r1", rc.r1, "radius of sphere 1");
    app.add_option("--r2", r2s, "radius of sphere 2 (repeatable; q-table sweeps the list)");
    app.add_option("--eps", rc.eps_list, "surface gap (repeatable)");
    app.add_option("--field", field_str, "axial field coefficients b1,b2,...");
    app.add_option("--h0", rc.field_h0, "constant field term H(0)");
    app.add_option("--e0", rc.e0, "uniform field strength for exact solutions");
    app.add_option("--tol", rc.tol, "series tolerance");
    app.add_option("--terms-cap", rc.terms_cap, "hard cap on series terms");
    app.add_option("--format", format_str, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", rc.out_path, "output path (default: stdout)");
    app.add_option("--grid", grid_str, "grid resolution NxM for field-map");
    app.add_option("--theta-list", theta_str, "theta values in units of pi, comma separated");
    app.add_option("--kmax", rc.k_max, "largest Q_k order");
    app.add_option("--precision", rc.precision, "significant digits in output");

    const std::map<std::string, Command> commands = {
        {"q-table", Command::q_table},
        {"c-h", Command::c_h},
        {"exact-profile", Command::exact_profile},
        {"blowup-profile", Command::blowup_profile},
        {"compare", Command::compare},
        {"field-map", Command::field_map},
        {"rate-study", Command::rate_study},
        {"invariants", Command::invariants},
    };
    const std::map<std::string, std::string> descriptions = {
        {"q-table", "blow-up coefficients Q_k(r1, r2) over an r2 list"},
        {"c-h", "concentration factor: limit, double series, and per-eps exact value"},
        {"exact-profile", "exact normal derivatives of h and u-H on sphere 1"},
        {"blowup-profile", "blow-up profile q(theta) and C_H q(theta) on sphere 1"},
        {"compare", "exact vs asymptotic normal derivative over eps and theta"},
        {"field-map", "|grad u| map over the axial half-plane"},
        {"rate-study", "blow-up rate and concentration-factor convergence study"},
        {"invariants", "run every module invariant and report residuals"},
    };
    for (const auto& [name, cmd] : commands) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->fallthrough();
    }
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    const auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::cerr << app.help();
        return 3;
    }
    rc.command = commands.at(subs.front()->get_name());
    if (!r2s.empty()) {
        rc.r2 = r2s.front();
        rc.r2_list = r2s;
    }
    try {
        if (!field_str.empty()) rc.field_b = parse_comma_list(field_str);
        if (!theta_str.empty()) rc.theta_list = parse_comma_list(theta_str);
        if (!grid_str.empty()) {
            const auto x = grid_str.find('x');
            if (x == std::string::npos) throw std::invalid_argument("grid must be NxM");
            rc.grid_nx = std::stoi(grid_str.substr(0, x));
            rc.grid_ny = std::stoi(grid_str.substr(x + 1));
        }
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    }

    return bisphere::harness::run(rc, std::cout, std::cerr);
}
