#include "runner.hpp"

#include "pcalc/bv1d.hpp"
#include "pcalc/errors.hpp"
#include "pcalc/json_io.hpp"
#include "pcalc/pairing_nd.hpp"
#include "pcalc/tvmin.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace pcalc;

namespace {

int emit(const std::vector<cli::ReportRow>& rows, const std::string& output, bool timing) {
    std::string csv = cli::report_csv(rows, timing);
    if (output.empty() || output == "-") {
        std::cout << csv;
    } else {
        std::ofstream out(output);
        if (!out) throw ConfigError("cannot write " + output);
        out << csv;
    }
    return cli::all_pass(rows) ? 0 : 1;
}

std::vector<double> read_csv_grid(const std::string& path, std::vector<int>& shape) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::vector<double> v;
    std::string line;
    int rows = 0, cols = -1;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string cell;
        int c = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                v.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("bad number '" + cell + "' in " + path);
            }
            ++c;
        }
        if (cols >= 0 && c != cols) throw ConfigError("ragged CSV grid " + path);
        cols = c;
        ++rows;
    }
    if (shape.empty()) shape = rows == 1 ? std::vector<int>{cols} : std::vector<int>{rows, cols};
    return v;
}

void write_csv_grid(const std::string& path, const GridFunction& u) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    int cols = u.shape.back();
    for (std::size_t i = 0; i < u.size(); ++i)
        out << cli::format_number(u.values[i]) << ((static_cast<int>(i % cols) == cols - 1) ? "\n" : ",");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcalc: lambda-pairings of divergence-measure fields with BV functions"};
    app.fallthrough();
    app.require_subcommand(1);
    cli::RunOptions opt;
    std::string output;
    app.add_option("-j,--jobs", opt.jobs, "Scenarios run concurrently")->check(CLI::PositiveNumber);
    app.add_option("--tol-scale", opt.tol_scale, "Multiplier applied to every tolerance")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", output, "Report path (default stdout)");
    app.add_flag("--fail-fast", opt.fail_fast, "Stop at the first failing check");
    app.add_flag("--timing", opt.timing, "Add a wall-time column");

    auto* run = app.add_subcommand("run", "Run every scenario of a JSON config");
    std::string config;
    run->add_option("config", config, "Config file")->required();

    auto* verify = app.add_subcommand("verify", "Run one family of checks on a scenario");
    std::string family, scenario;
    verify->add_option("family", family, "gauss-green | coarea | identities | additivity")
        ->required()
        ->check(CLI::IsMember({"gauss-green", "coarea", "identities", "additivity"}));
    verify->add_option("scenario", scenario, "Scenario JSON file or inline JSON")->required();

    auto* pair = app.add_subcommand("pair1d", "Print the 1D pairing measure as JSON");
    std::string u_s, a_s, l_s;
    pair->add_option("u", u_s, "Function JSON (file or inline)")->required();
    pair->add_option("A", a_s, "Field JSON (file or inline)")->required();
    pair->add_option("lambda", l_s, "Number or selector JSON")->required();

    auto* per = app.add_subcommand("perimeter", "(A, lambda)-perimeter of a box set");
    std::string per_s;
    per->add_option("scenario", per_s, "Scenario JSON")->required();

    auto* den = app.add_subcommand("denoise", "Minimize the discrete E_p functional");
    std::string g_path, u_out = "u.csv", trace_out = "trace.csv", field_name = "constant", shape_s;
    double p = 2.0, h = 1.0;
    int max_iter = 20000;
    den->add_option("--g", g_path, "Data as a CSV grid")->required();
    den->add_option("--field", field_name, "Catalog field sampled at cell centres");
    den->add_option("--p", p, "Fidelity exponent (inf allowed)");
    den->add_option("--spacing", h, "Cell size h");
    den->add_option("--shape", shape_s, "Grid shape, e.g. 5,5 (default from the CSV)");
    den->add_option("--max-iter", max_iter, "Iteration budget");
    den->add_option("--u-out", u_out, "Minimizer CSV");
    den->add_option("--trace-out", trace_out, "Energy trace CSV");

    auto* demo = app.add_subcommand("demo", "Demonstrations");
    auto* comp = demo->add_subcommand("compactness", "Loss of compactness for u_k = k chi_{(-1,1)^{N-1} x (0,1/k)}");
    demo->require_subcommand(1);
    int dim = 2;
    std::vector<int> ks{1, 10, 100, 1000, 100000};
    std::string f_s = "1";
    comp->add_option("--N", dim, "Dimension");
    comp->add_option("--k", ks, "Sequence indices")->delimiter(',');
    comp->add_option("--f", f_s, "Profile JSON for f");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        opt.seed = cli::seed_from_env(opt.seed);
        if (*run) return emit(cli::run_scenarios(cli::load_json(config), opt), output, opt.timing);
        if (*verify) {
            json sc = cli::load_json(scenario);
            if (!sc.contains("id")) sc["id"] = family;
            static const std::map<std::string, std::vector<std::string>> families = {
                {"gauss-green", {"gauss-green"}},
                {"coarea", {"coarea"}},
                {"identities", {"complement", "convex", "lambda-difference", "boundary-divergence"}},
                {"additivity", {"additivity"}},
            };
            sc["checks"] = families.at(family);
            return emit(cli::run_scenario(sc, opt), output, opt.timing);
        }
        if (*pair) {
            auto u = function1d_from_json(cli::load_json(u_s));
            auto A = function1d_from_json(cli::load_json(a_s));
            auto lam = lambda_from_json(cli::load_json(l_s));
            auto r = pairing_1d(A, u, lam);
            std::cout << measure_to_json(r.pairing).dump(2) << "\n";
            return 0;
        }
        if (*per) {
            json sc = cli::load_json(per_s);
            if (!sc.contains("id")) sc["id"] = "perimeter";
            sc["checks"] = {"perimeter"};
            return emit(cli::run_scenario(sc, opt), output, opt.timing);
        }
        if (*den) {
            std::vector<int> shape;
            if (!shape_s.empty()) {
                std::stringstream ss(shape_s);
                std::string t;
                while (std::getline(ss, t, ',')) shape.push_back(std::stoi(t));
            }
            auto vals = read_csv_grid(g_path, shape);
            GridFunction g(shape, h);
            if (vals.size() != g.size()) throw ConfigError("grid shape does not match the CSV");
            g.values = vals;
            EnergyParams params;
            params.p = p;
            params.g = g;
            params.max_iter = max_iter;
            params.A = sample_field(catalog(field_name, {{"N", g.dim()}}), g, std::vector<double>(g.dim(), 0.0));
            auto r = minimize(params);
            write_csv_grid(u_out, r.u);
            std::ofstream t(trace_out);
            t << "iteration,energy\n";
            for (std::size_t i = 0; i < r.trace.size(); ++i) t << i << ',' << cli::format_number(r.trace[i]) << '\n';
            std::cout << "energy," << cli::format_number(r.trace.back()) << "\niterations," << r.iterations
                      << "\nconverged," << (r.converged ? "true" : "false") << "\n";
            return 0;
        }
        if (*comp) {
            auto r = compactness_failure_demo(dim, profile_from_json(cli::load_json(f_s)), ks);
            std::cout << "k,mass,pairing_zero,seminorm\n";
            for (std::size_t i = 0; i < r.k.size(); ++i)
                std::cout << r.k[i] << ',' << cli::format_number(r.masses[i]) << ',' << (r.pairing_zero[i] ? 1 : 0)
                          << ',' << cli::format_number(r.seminorms[i]) << '\n';
            std::cout << "limit," << cli::format_number(r.limit) << "\nfailure_confirmed,"
                      << (r.failure_confirmed ? "true" : "false") << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const UnknownEntry& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const BadParams& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
