// Copyright 2026 The Roam Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "roam/experiments.hpp"
#include "roam/json_io.hpp"
#include "roam/oracle.hpp"
#include "roam/solver.hpp"

namespace {

using namespace roam;

std::vector<int> parse_members(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

std::string describe(const Assortment& s, const std::vector<int>& label_map) {
    std::string out = "{";
    bool first = true;
    for (int i : s.members()) {
        if (!first) out += ",";
        out += std::to_string(label_map.empty() ? i : label_map[static_cast<size_t>(i)]);
        first = false;
    }
    return out + "}";
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) fail(ErrorCode::BadInput, "cannot write " + path);
    out << content;
    std::cout << "wrote " << path << "\n";
}

int cmd_solve(const std::string& file, const std::string& method_name, bool as_json) {
    Instance inst = load_instance(file);
    SolveMethod method = SolveMethod::Auto;
    if (method_name == "brute") method = SolveMethod::Brute;
    else if (method_name == "nested-milp") method = SolveMethod::NestedMilp;
    else if (method_name == "two-flow") method = SolveMethod::TwoFlow;
    else if (method_name == "closed-form") method = SolveMethod::ClosedForm;
    else if (method_name != "auto") fail(ErrorCode::BadParams, "unknown method " + method_name);

    SolveReport report = solve_ro(inst, method);
    if (as_json) {
        json j;
        j["method"] = method_name;
        j["method_used"] = roam::method_name(report.method_used);
        j["value"] = report.value;
        j["best_past"] = report.best_past;
        std::vector<int> opt;
        for (int i : report.optimal.members()) opt.push_back(report.label_map[static_cast<size_t>(i)]);
        j["optimal"] = opt;
        j["seconds"] = report.seconds;
        json table = json::array();
        for (const auto& row : report.table) {
            json r;
            std::vector<int> mem;
            for (int i : row.assortment.members()) mem.push_back(report.label_map[static_cast<size_t>(i)]);
            r["assortment"] = mem;
            r["worst"] = row.worst;
            if (row.has_best) r["best"] = row.best;
            table.push_back(r);
        }
        j["table"] = table;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "method:     " << roam::method_name(report.method_used) << "\n";
    std::cout << "optimal:    " << describe(report.optimal, report.label_map) << "\n";
    std::cout << "value:      " << report.value << "\n";
    std::cout << "best past:  " << report.best_past << "\n";
    std::cout << "improves:   " << (report.value > report.best_past + 1e-9 ? "yes" : "no") << "\n";
    std::cout << "seconds:    " << report.seconds << "\n";
    if (!report.table.empty() && report.table.size() <= 64) {
        std::cout << "candidates (worst";
        bool has_best = report.table.front().has_best;
        std::cout << (has_best ? ", best):\n" : "):\n");
        for (const auto& row : report.table) {
            std::cout << "  " << describe(row.assortment, report.label_map) << "  " << row.worst;
            if (row.has_best) std::cout << "  " << row.best;
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_eval(const std::string& file, const std::string& members_csv, bool best) {
    Instance inst = load_instance(file);
    std::vector<int> members = parse_members(members_csv);
    Assortment s(inst.n);
    bool has_zero = false;
    for (int i : members) {
        if (i == 0) has_zero = true;
        // map raw labels to internal
        int internal = -1;
        for (int j = 0; j <= inst.n; ++j)
            if (inst.original_label[static_cast<size_t>(j)] == i) internal = j;
        if (internal < 0) fail(ErrorCode::IndexOutOfRange, "product " + std::to_string(i));
        s.insert(internal);
    }
    if (!has_zero) fail(ErrorCode::MissingNoPurchase, "assortments must contain product 0");
    RobustValue wc = worst_case_revenue(inst, s);
    std::cout << "worst case: " << wc.value << "\n";
    if (best) {
        RobustValue bc = best_case_revenue(inst, s);
        std::cout << "best case:  " << bc.value << "\n";
    }
    return 0;
}

int cmd_pareto(const std::string& file, int grid, const std::string& out_path) {
    Instance inst = load_instance(file);
    std::vector<double> qs;
    for (int g = 0; g < grid; ++g) qs.push_back(grid == 1 ? 1.0 : static_cast<double>(g) / (grid - 1));
    std::vector<ParetoPoint> points = pareto_sweep(inst, qs);
    std::ostringstream csv;
    csv << "theta,assortment,worst,best\n";
    for (const auto& p : points) {
        std::string members;
        for (int i : p.assortment.members()) members += (members.empty() ? "" : " ") + std::to_string(i);
        csv << p.theta << ",\"" << members << "\"," << p.worst_case << "," << p.best_case << "\n";
    }
    write_or_print(out_path, csv.str());
    return 0;
}

int cmd_gen(const std::string& kind, int n, int m, int k, const std::string& sbar, uint64_t seed, double eta,
            const std::string& norm, const std::string& out_path) {
    GeneratorParams params;
    params.n = n;
    params.m = m;
    params.k = k;
    params.eta = eta;
    if (norm == "l1") params.norm = Norm::L1;
    else if (norm == "linf") params.norm = Norm::LInf;
    else fail(ErrorCode::BadParams, "norm must be l1 or linf");
    if (!sbar.empty()) params.sbar = parse_members(sbar);
    GeneratedInstance gen = generate(parse_generator_kind(kind), params, seed);
    save_instance(gen.instance, out_path);
    std::cout << "wrote " << out_path << " (n=" << gen.instance.n << ", M=" << gen.instance.num_assortments()
              << ")\n";
    return 0;
}

int cmd_experiment(const std::string& name, int reps, uint64_t seed, int n, int m, int k, int grid,
                   const std::string& out_path) {
    ExperimentParams params;
    params.reps = reps;
    params.seed = seed;
    params.n = n;
    params.m = m;
    params.k = k;
    params.grid = grid;
    std::string csv = run_experiment(name, params);
    write_or_print(out_path, csv);
    return 0;
}

int cmd_oracle(const std::string& file, const std::string& check) {
    Instance inst = load_instance(file);
    json report;
    report["checks"] = json::array();
    bool all_pass = true;
    auto add = [&](const std::string& name, bool pass, double deviation, const std::string& detail) {
        report["checks"].push_back(
            {{"name", name}, {"pass", pass}, {"max_deviation", deviation}, {"detail", detail}});
        all_pass &= pass;
    };

    if (check == "all" || check == "L") {
        FeasibleTupleSet fast = build_feasible_tuples(inst);
        FeasibleTupleSet slow = oracle_feasible_tuples(inst);
        bool pass = fast.tuples == slow.tuples;
        add("feasible_tuples", pass, pass ? 0.0 : 1.0,
            "fast " + std::to_string(fast.size()) + " vs oracle " + std::to_string(slow.size()));
    }
    if (check == "all" || check == "rho") {
        FeasibleTupleSet l = build_feasible_tuples(inst);
        double dev = 0.0;
        std::string worst_detail = "exact match";
        for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n); ++mask) {
            Assortment s(inst.n);
            s.insert(0);
            for (int i = 1; i <= inst.n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            for (const Tuple& t : l.tuples) {
                double d = std::abs(rho(t, s, inst) - oracle_rho(t, s, inst));
                if (d > dev) {
                    dev = d;
                    worst_detail = "S=" + s.to_string();
                }
            }
        }
        add("rho", dev == 0.0, dev, worst_detail);
    }
    if (check == "all" || check == "wc") {
        double dev = 0.0;
        for (uint64_t mask = 0; mask < (uint64_t{1} << inst.n); ++mask) {
            Assortment s(inst.n);
            s.insert(0);
            for (int i = 1; i <= inst.n; ++i)
                if ((mask >> (i - 1)) & 1) s.insert(i);
            dev = std::max(dev, std::abs(worst_case_revenue(inst, s).value - oracle_worst_case(inst, s)));
            dev = std::max(dev, std::abs(best_case_revenue(inst, s).value - oracle_best_case(inst, s)));
        }
        add("worst_best_case", dev <= 1e-6 * inst.top_revenue(), dev, "all assortments containing 0");
    }
    if (check == "all" || check == "ro") {
        auto [winners, value] = oracle_ro(inst);
        SolveReport report_ro = solve_ro(inst);
        bool pass = std::abs(report_ro.value - value) <= 1e-6 * inst.top_revenue();
        // the solver's optimum must be among the oracle winners
        Assortment mapped(inst.n);
        for (int i : report_ro.optimal.members())
            mapped.insert(report_ro.label_map[static_cast<size_t>(i)]);
        bool member = false;
        for (const auto& w : winners) member |= (w == mapped);
        add("ro", pass && member, std::abs(report_ro.value - value),
            std::to_string(winners.size()) + " oracle optima");
    }
    report["pass"] = all_pass;
    std::cout << report.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

int cmd_min_eta(const std::string& file) {
    Instance inst = load_instance(file);
    std::cout << "minimal consistency radius: " << min_consistency_radius(inst) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust assortment optimization under ranking-based choice models"};
    app.require_subcommand(1);

    std::string file, method = "auto", assortment, out_path, kind, sbar, check = "all", norm = "linf", name;
    int grid = 101, n = 4, m = 0, k = 10, reps = 100;
    uint64_t seed = 1;
    double eta = 0.0;
    bool best = false, as_json = false;

    auto* solve = app.add_subcommand("solve", "solve the robust problem");
    solve->add_option("--instance", file, "instance JSON")->required();
    solve->add_option("--method", method, "auto|brute|nested-milp|two-flow|closed-form");
    solve->add_flag("--json", as_json, "emit a JSON report");

    auto* eval = app.add_subcommand("eval", "worst-case revenue of one assortment");
    eval->add_option("--instance", file, "instance JSON")->required();
    eval->add_option("--assortment", assortment, "comma-separated products, e.g. 0,2,4")->required();
    eval->add_flag("--best", best, "also report the best case");

    auto* pareto = app.add_subcommand("pareto", "sweep the RO-Pareto frontier");
    pareto->add_option("--instance", file, "instance JSON")->required();
    pareto->add_option("--grid", grid, "number of theta grid points");
    pareto->add_option("-o,--output", out_path, "CSV output path");

    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--kind", kind, "revordered|two|nested|adversarial")->required();
    gen->add_option("--n", n, "number of products")->required();
    gen->add_option("--m", m, "past assortments (nested)");
    gen->add_option("--k", k, "sparse model support");
    gen->add_option("--sbar", sbar, "adversarial target, e.g. 0,2,3");
    gen->add_option("--seed", seed, "seed");
    gen->add_option("--eta", eta, "radius");
    gen->add_option("--norm", norm, "l1|linf");
    gen->add_option("-o,--output", out_path, "instance output path")->required();

    auto* exp = app.add_subcommand("experiment", "run a batch experiment");
    exp->add_option("--name", name, "fig1_2|fig3|fig4|fig5|fig6")->required();
    exp->add_option("--reps", reps, "replications");
    exp->add_option("--seed", seed, "master seed");
    exp->add_option("--n", n, "override the scale");
    exp->add_option("--m", m, "override the assortment count");
    exp->add_option("--k", k, "override the model support");
    exp->add_option("--grid", grid, "theta grid (fig6)");
    exp->add_option("-o,--output", out_path, "CSV output path");

    auto* oracle = app.add_subcommand("oracle", "brute-force verification report");
    oracle->add_option("--instance", file, "instance JSON")->required();
    oracle->add_option("--check", check, "all|L|rho|wc|ro");

    auto* mineta = app.add_subcommand("min-eta", "minimal consistency radius");
    mineta->add_option("--instance", file, "instance JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(file, method, as_json);
        if (eval->parsed()) return cmd_eval(file, assortment, best);
        if (pareto->parsed()) return cmd_pareto(file, grid, out_path);
        if (gen->parsed()) return cmd_gen(kind, n, m, k, sbar, seed, eta, norm, out_path);
        if (exp->parsed()) return cmd_experiment(name, reps, seed, n, m, k, grid, out_path);
        if (oracle->parsed()) return cmd_oracle(file, check);
        if (mineta->parsed()) return cmd_min_eta(file);
    } catch (const roam::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
