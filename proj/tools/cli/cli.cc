// Copyright 2026 The nelsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cli/selftest.h"
#include "nelsim/certify/certification.h"
#include "nelsim/certify/edqc.h"
#include "nelsim/games/chsh.h"
#include "nelsim/games/sqg.h"
#include "nelsim/lhv/lhv.h"
#include "nelsim/postsim/circuit.h"
#include "nelsim/postsim/dotprod.h"
#include "nelsim/qcore/errors.h"
#include "nelsim/qcore/json_io.h"
#include "nelsim/qcore/named_states.h"
#include "nelsim/qcore/ops.h"
#include "nelsim/rsp/rsp.h"
#include "nelsim/witness/witness.h"

using nlohmann::json;

namespace nelsim::cli {

namespace {

const std::vector<std::string> SUBCOMMANDS = {"chsh", "sqg", "lhv", "dotprod", "rsp", "certify", "edqc", "selftest"};

void require(bool cond, const std::string &what) {
    if (!cond) {
        throw ValidationError(what);
    }
}

bool needs_seed(const std::string &sub) {
    return sub != "selftest";
}

ScalarBackend parse_backend(const std::string &name) {
    if (name == "float") {
        return ScalarBackend::Float;
    }
    if (name == "extended") {
        return ScalarBackend::Extended;
    }
    throw ValidationError("unknown backend '" + name + "' (float, extended)");
}

ProverPhysics parse_physics(const std::string &name) {
    if (name == "oracle") {
        return ProverPhysics::Oracle;
    }
    if (name == "claw-search") {
        return ProverPhysics::ClawSearch;
    }
    if (name == "statevector") {
        return ProverPhysics::Statevector;
    }
    throw ValidationError("unknown prover physics '" + name + "' (oracle, claw-search, statevector)");
}

std::string default_physics(const std::string &sub) {
    return sub == "certify" ? "oracle" : "claw-search";
}

/// "marginals" is the product of the target's reduced states; "product:<tokA>:<tokB>" names qubit states.
SeparableSource parse_source(const std::string &spec, const DensityMatrix &target) {
    if (spec == "marginals") {
        return SeparableSource::product(partial_trace(target, KEEP_A), partial_trace(target, KEEP_B));
    }
    const std::string prefix = "product:";
    if (spec.rfind(prefix, 0) == 0) {
        std::string rest = spec.substr(prefix.size());
        size_t colon = rest.find(':');
        require(colon != std::string::npos, "source 'product' needs two qubit tokens");
        return SeparableSource::product(qubit_state(rest.substr(0, colon)), qubit_state(rest.substr(colon + 1)));
    }
    throw ValidationError("unknown source '" + spec + "' (marginals, product:<tokA>:<tokB>)");
}

json report_header(const RunConfig &cfg) {
    return json{{"schema", REPORT_SCHEMA}, {"command", cfg.subcommand}, {"config", cfg.to_json()}};
}

std::string dump(const json &j) {
    return j.dump(2) + "\n";
}

/// A supply or target state: a vector JSON, or {"circuit": ..., "outcome": "<bits>"} naming an eigenvector.
struct StateFile {
    Vector amplitudes;
    std::optional<EigenPair> pair;
};

StateFile read_state_file(const std::string &path) {
    json j = read_json_file(path);
    StateFile f;
    if (j.is_object() && j.contains("circuit")) {
        require(j.contains("outcome") && j["outcome"].is_string(), "circuit state file needs an \"outcome\" bitstring");
        Circuit c = Circuit::from_json(j["circuit"]);
        std::string bits = j["outcome"].get<std::string>();
        require(bits.size() == c.qubits(), "outcome bitstring length must equal the circuit's qubit count");
        uint64_t outcome = 0;
        for (char ch : bits) {
            require(ch == '0' || ch == '1', "outcome must be a bitstring");
            outcome = (outcome << 1) | (uint64_t)(ch - '0');
        }
        EigenPair pair = eigenvector_from_circuit(c, outcome);
        require(!pair.is_zero(), "outcome " + bits + " has a zero POVM element");
        f.amplitudes = pair.psi->amplitudes();
        f.pair = pair;
    } else {
        f.amplitudes = pure_from_json(j).amplitudes();
    }
    require(f.amplitudes.size() == 2, "state file must describe a single qubit");
    return f;
}

CommandOutput cmd_chsh(const RunConfig &cfg) {
    ChshResult r = chsh_demo(*cfg.seed, cfg.samples, cfg.workers);
    json report = report_header(cfg);
    report["classical_optimum"] = chsh_classical_optimum();
    report["quantum_value"] = chsh_quantum_value();
    report["result"] = r.to_json();
    CommandOutput o;
    o.report = dump(report);
    o.summary = {{"command", "chsh"},
                 {"rounds", r.rounds},
                 {"classical_rate", r.classical_rate()},
                 {"quantum_rate", r.quantum_rate()}};
    return o;
}

CommandOutput cmd_sqg(const RunConfig &cfg) {
    DensityMatrix rho = named_state(cfg.state);
    json report = report_header(cfg);
    CommandOutput o;
    std::optional<Witness> witness;
    try {
        witness = ppt_witness(rho, cfg.state);
    } catch (const NotEntangledOrPptError &e) {
        report["verdict"] = verdict_name(Verdict::NotEntangled);
        report["reason"] = e.what();
        o.report = dump(report);
        o.summary = {{"command", "sqg"}, {"verdict", verdict_name(Verdict::NotEntangled)}, {"reason", "ppt"}};
        return o;
    }
    const Witness &w = *witness;
    SqgRunOptions opt;
    opt.delta = cfg.delta;
    opt.seed = *cfg.seed;
    opt.workers = cfg.workers;
    opt.rounds = cfg.samples;
    SharedResource resource = rho;
    if (!cfg.source.empty()) {
        resource = parse_source(cfg.source, rho);
    }
    GameTables tables(resource, SqgStrategy::honest(), SqgStrategy::honest());
    ScoreReport r = run_sqg_experiment(resource, w, SqgStrategy::honest(), SqgStrategy::honest(), opt);
    report["witness"] = witness_to_json(w);
    report["exact_score"] = tables.exact_score(w.beta);
    report["report"] = r.to_json();
    o.report = dump(report);
    o.summary = {{"command", "sqg"},
                 {"rounds", r.rounds},
                 {"score", r.score},
                 {"exact_score", tables.exact_score(w.beta)},
                 {"verdict", verdict_name(r.verdict)}};
    return o;
}

Projector binary_projector(const Povm &povm, const std::string &which) {
    require(povm.size() == 2, which + " must have two elements for the Werner models");
    return Projector::from_matrix(povm[1]);
}

CommandOutput cmd_lhv(const RunConfig &cfg) {
    Povm pa = povm_from_json(read_json_file(cfg.povm_a));
    Povm pb = povm_from_json(read_json_file(cfg.povm_b));
    require(pa.dim() == 2 && pb.dim() == 2, "LHV POVMs act on a single qubit");
    LhvOutcomeTable table;
    std::vector<double> exact;
    if (cfg.model == "hirsch") {
        HirschModel model = HirschModel::make(cfg.q, qubit_state(cfg.sigma_a), qubit_state(cfg.sigma_b));
        table = hirsch_mc(model, fine_grain(pa), fine_grain(pb), cfg.samples, *cfg.seed, cfg.workers);
        exact = joint_table(model.target_state(), pa, pb);
    } else {
        MixMode mode = cfg.model == "werner" ? MixMode::Werner : MixMode::Rho0;
        Projector p = binary_projector(pa, "--povm-a"), qp = binary_projector(pb, "--povm-b");
        table = werner_mix_mc(mode, cfg.q, p, qp, cfg.samples, *cfg.seed, cfg.workers);
        exact = joint_table(mode == MixMode::Werner ? werner(cfg.q) : rho0(cfg.q), pa, pb);
    }
    CommandOutput o;
    o.report = table.to_csv(exact);
    o.summary = {{"command", "lhv"},
                 {"model", cfg.model},
                 {"samples", table.samples},
                 {"total_variation", table.total_variation(exact)},
                 {"max_z", table.max_z(exact)}};
    return o;
}

CommandOutput cmd_dotprod(const RunConfig &cfg) {
    StateFile supply = read_state_file(cfg.psi);
    StateFile target = read_state_file(cfg.psi_prime);
    DotProductOptions opt;
    opt.ell = cfg.ell;
    opt.backend = parse_backend(cfg.backend);
    Rng rng(*cfg.seed, 0xd07);
    DotTarget t = DotTarget::from_vector(target.amplitudes);
    DotProductResult r = supply.pair ? dot_product_with_eigenvector(*supply.pair, t, opt, rng)
                                     : dot_product_estimate(supply.amplitudes, t, opt, rng);
    double exact = std::norm(supply.amplitudes.normalized().dot(target.amplitudes.normalized()));
    json report = report_header(cfg);
    report["estimate"] = r.value;
    report["exact"] = exact;
    report["error"] = std::abs(r.value - exact);
    report["bound"] = std::ldexp(1.0, -(int)cfg.ell);
    report["ratio_infinite"] = r.ratio_infinite;
    report["beta0"] = r.beta0;
    report["sign"] = r.sign;
    report["comparisons"] = r.comparisons;
    CommandOutput o;
    o.report = dump(report);
    o.summary = {{"command", "dotprod"}, {"estimate", r.value}, {"exact", exact}, {"ell", cfg.ell}};
    return o;
}

CommandOutput cmd_rsp(const RunConfig &cfg) {
    RspOptions opt;
    opt.n = cfg.tcf_n;
    opt.ell = cfg.tcf_n;
    opt.physics = parse_physics(cfg.physics.empty() ? default_physics("rsp") : cfg.physics);
    RspSummary s = run_rsp_session(opt, cfg.samples, *cfg.seed, cfg.workers, true);
    std::string lines;
    for (const auto &t : s.transcripts) {
        lines += t.to_json().dump() + "\n";
    }
    CommandOutput o;
    o.report = std::move(lines);
    s.transcripts.clear();
    o.summary = s.to_json();
    o.summary["command"] = "rsp";
    o.exit_code = s.aborts ? Aborted : Ok;
    return o;
}

CommandOutput cmd_certify(const RunConfig &cfg) {
    DensityMatrix rho = named_state(cfg.state);
    Witness w = ppt_witness(rho, cfg.state);
    SharedResource resource = rho;
    if (!cfg.source.empty()) {
        resource = parse_source(cfg.source, rho);
    }
    CertifyOptions opt;
    opt.delta = cfg.delta;
    opt.tcf_n = cfg.tcf_n;
    opt.repetitions = cfg.samples;
    opt.seed = *cfg.seed;
    opt.physics = parse_physics(cfg.physics.empty() ? default_physics("certify") : cfg.physics);
    opt.keep_tuples = cfg.keep_tuples;
    CertificationReport r = run_certification(resource, w, opt);
    json report = report_header(cfg);
    report["witness"] = witness_to_json(w);
    report["report"] = r.to_json();
    CommandOutput o;
    o.report = dump(report);
    o.summary = {{"command", "certify"},
                 {"planned", r.planned},
                 {"executed", r.executed},
                 {"collected", r.collected()},
                 {"score", r.score.score},
                 {"verdict", verdict_name(r.verdict)},
                 {"aborted", r.first_abort.has_value()}};
    o.exit_code = r.first_abort ? Aborted : Ok;
    return o;
}

CommandOutput cmd_edqc(const RunConfig &cfg) {
    DensityMatrix rho = named_state(cfg.state);
    Witness w = ppt_witness(rho, cfg.state);
    EdqcGameOptions opt;
    opt.delta = cfg.delta;
    opt.seed = *cfg.seed;
    opt.workers = cfg.workers;
    opt.rounds = cfg.samples;
    json report = report_header(cfg);
    report["witness"] = witness_to_json(w);
    EdqcReport r;
    if (cfg.mode == "honest") {
        r = run_edqc_game(rho, w, opt);
    } else {
        SeparableSource source = parse_source(cfg.source.empty() ? "marginals" : cfg.source, rho);
        if (cfg.mode == "separable") {
            r = run_edqc_game(source, w, opt);
        } else {
            CheatingPlan plan = plan_input_dependent_cheat(edqc_beta(w.beta));
            report["cheating_plan"] = {{"alice", plan.alice}, {"bob", plan.bob}, {"score", plan.score}};
            r = run_edqc_game(source, w, opt, EdqcStrategy::input_dependent_bits("cheat-alice", plan.alice),
                              EdqcStrategy::input_dependent_bits("cheat-bob", plan.bob));
        }
    }
    report["circuit"] = BellTestCircuit::to_json();
    report["report"] = r.to_json();
    CommandOutput o;
    o.report = dump(report);
    o.summary = {{"command", "edqc"},
                 {"mode", cfg.mode},
                 {"rounds", r.rounds},
                 {"score", r.score},
                 {"exact_score", r.exact_score},
                 {"verdict", verdict_name(r.verdict)}};
    return o;
}

CommandOutput cmd_selftest(const RunConfig &cfg) {
    std::vector<SuiteResult> suites = run_selftest(cfg.workers);
    json report = report_header(cfg);
    report["suites"] = selftest_to_json(suites);
    bool ok = std::all_of(suites.begin(), suites.end(), [](const SuiteResult &s) { return s.passed; });
    CommandOutput o;
    o.report = dump(report);
    json brief = json::object();
    for (const auto &s : suites) {
        brief[s.name] = s.passed ? "pass" : "fail";
    }
    o.summary = {{"command", "selftest"}, {"passed", ok}, {"suites", brief}};
    o.exit_code = ok ? Ok : Failure;
    return o;
}

CommandOutput dispatch(const RunConfig &cfg) {
    const std::string &s = cfg.subcommand;
    if (s == "chsh") {
        return cmd_chsh(cfg);
    }
    if (s == "sqg") {
        return cmd_sqg(cfg);
    }
    if (s == "lhv") {
        return cmd_lhv(cfg);
    }
    if (s == "dotprod") {
        return cmd_dotprod(cfg);
    }
    if (s == "rsp") {
        return cmd_rsp(cfg);
    }
    if (s == "certify") {
        return cmd_certify(cfg);
    }
    if (s == "edqc") {
        return cmd_edqc(cfg);
    }
    return cmd_selftest(cfg);
}

uint64_t default_samples(const std::string &sub) {
    if (sub == "chsh" || sub == "lhv") {
        return 1000000;
    }
    if (sub == "rsp") {
        return 10000;
    }
    return 0;
}

void add_common(CLI::App *sub, RunConfig &cfg) {
    sub->add_option("--seed", cfg.seed, "Seed of every random stream in the run");
    sub->add_option("--workers", cfg.workers, "Worker threads; results do not depend on it");
    sub->add_option("--out", cfg.out, "Report path");
}

void build_app(CLI::App &app, RunConfig &cfg) {
    app.require_subcommand(1);
    auto *chsh = app.add_subcommand("chsh", "CHSH classical optimum and quantum strategy");
    chsh->add_option("--rounds", cfg.samples, "Rounds to play");

    auto *sqg = app.add_subcommand("sqg", "Semi-quantum witness game with honest players");
    sqg->add_option("--state", cfg.state, "Target state spec (werner:p, rho0:q, bell:..., hirsch:..., product:...)");
    sqg->add_option("--source", cfg.source, "Play on a separable source instead: marginals | product:<tokA>:<tokB>");
    sqg->add_option("--delta", cfg.delta, "Error probability");
    sqg->add_option("--rounds", cfg.samples, "Rounds (0 = repetition formula)");

    auto *lhv = app.add_subcommand("lhv", "Local hidden variable simulation against exact traces");
    lhv->add_option("--model", cfg.model, "hirsch | werner | rho0");
    lhv->add_option("--q", cfg.q, "Mixing parameter");
    lhv->add_option("--povm-a", cfg.povm_a, "Alice's POVM JSON")->required();
    lhv->add_option("--povm-b", cfg.povm_b, "Bob's POVM JSON")->required();
    lhv->add_option("--sigma-a", cfg.sigma_a, "Hirsch sigma_A qubit token");
    lhv->add_option("--sigma-b", cfg.sigma_b, "Hirsch sigma_B qubit token");
    lhv->add_option("--samples", cfg.samples, "Shared draws");

    auto *dot = app.add_subcommand("dotprod", "Postselection dot-product estimate");
    dot->add_option("--psi", cfg.psi, "Supply state JSON (vector or circuit + outcome)")->required();
    dot->add_option("--psi-prime", cfg.psi_prime, "Target state JSON (vector or circuit + outcome)")->required();
    dot->add_option("--ell", cfg.ell, "Precision parameter");
    dot->add_option("--backend", cfg.backend, "float | extended");

    auto *rsp = app.add_subcommand("rsp", "Remote state preparation rounds with the honest prover");
    rsp->add_option("--n", cfg.tcf_n, "Claw-free function input length");
    rsp->add_option("--rounds", cfg.samples, "Protocol instances");
    rsp->add_option("--physics", cfg.physics, "claw-search | oracle | statevector");

    auto *cert = app.add_subcommand("certify", "Entanglement certification over two RSP instances");
    cert->add_option("--state", cfg.state, "Target state spec");
    cert->add_option("--source", cfg.source, "Play on a separable source instead: marginals | product:<tokA>:<tokB>");
    cert->add_option("--delta", cfg.delta, "Error probability");
    cert->add_option("--tcf-n", cfg.tcf_n, "Claw-free function input length");
    cert->add_option("--repetitions", cfg.samples, "Repetitions (0 = repetition formula)");
    cert->add_option("--physics", cfg.physics, "oracle | claw-search | statevector");
    cert->add_flag("--keep-tuples", cfg.keep_tuples, "Record every collected tuple");

    auto *edqc = app.add_subcommand("edqc", "Witness game compiled through the ideal EDQC functionality");
    edqc->add_option("--state", cfg.state, "Target state spec");
    edqc->add_option("--mode", cfg.mode, "honest | separable | cheat");
    edqc->add_option("--source", cfg.source, "Separable source for separable/cheat modes (default marginals)");
    edqc->add_option("--delta", cfg.delta, "Error probability");
    edqc->add_option("--rounds", cfg.samples, "Rounds (0 = repetition formula)");

    auto *self = app.add_subcommand("selftest", "Oracle suites");

    for (auto *sub : {chsh, sqg, lhv, dot, rsp, cert, edqc, self}) {
        add_common(sub, cfg);
    }
}

std::string usage_text() {
    CLI::App app("nelsim: simulations of entanglement certification protocols", "nelsim");
    RunConfig cfg;
    build_app(app, cfg);
    return app.help();
}

CommandOutput invalid(const std::string &message, const std::string &usage) {
    CommandOutput o;
    o.exit_code = Invalid;
    o.report = usage;
    o.summary = {{"error", message}};
    return o;
}

}  // namespace

void RunConfig::validate() const {
    require(std::find(SUBCOMMANDS.begin(), SUBCOMMANDS.end(), subcommand) != SUBCOMMANDS.end(),
            "unknown subcommand '" + subcommand + "'");
    if (needs_seed(subcommand)) {
        require(seed.has_value(), "--seed is required");
    }
    require(workers >= 1 && workers <= 256, "--workers must be in [1, 256]");
    if (subcommand == "chsh" || subcommand == "lhv" || subcommand == "rsp") {
        require(samples > 0, "sample count must be positive");
    }
    if (subcommand == "sqg" || subcommand == "certify" || subcommand == "edqc") {
        require(delta > 0 && delta < 1, "--delta must lie in (0, 1)");
    }
    if (subcommand == "lhv") {
        require(model == "hirsch" || model == "werner" || model == "rho0", "--model must be hirsch, werner or rho0");
        double cap = model == "werner" ? 0.5 : 1.0 / 3.0;
        require(q >= 0 && q <= cap + 1e-12, "--q out of range for the model");
    }
    if (subcommand == "dotprod") {
        ScalarBackend b = parse_backend(backend);
        require(ell >= 1 && ell <= max_dot_product_ell(b), "--ell must lie in [1, " +
                                                               std::to_string(max_dot_product_ell(b)) + "]");
    }
    if (subcommand == "rsp" || subcommand == "certify") {
        require(tcf_n >= 2 && tcf_n <= 40, "claw-free function length must lie in [2, 40]");
        if (!physics.empty()) {
            parse_physics(physics);
        }
    }
    if (subcommand == "edqc") {
        require(mode == "honest" || mode == "separable" || mode == "cheat", "--mode must be honest, separable or cheat");
    }
}

json RunConfig::to_json() const {
    json j;
    j["subcommand"] = subcommand;
    if (seed) {
        j["seed"] = *seed;
    }
    const std::string &s = subcommand;
    if (s == "sqg" || s == "certify" || s == "edqc") {
        j["state"] = state;
        j["delta"] = delta;
        j["source"] = source;
    }
    if (s == "edqc") {
        j["mode"] = mode;
    }
    if (s == "lhv") {
        j["model"] = model;
        j["q"] = q;
        j["povm_a"] = povm_a;
        j["povm_b"] = povm_b;
        j["sigma_a"] = sigma_a;
        j["sigma_b"] = sigma_b;
    }
    if (s == "dotprod") {
        j["psi"] = psi;
        j["psi_prime"] = psi_prime;
        j["ell"] = ell;
        j["backend"] = backend;
    }
    if (s == "rsp" || s == "certify") {
        j["tcf_n"] = tcf_n;
        j["physics"] = physics.empty() ? default_physics(s) : physics;
    }
    if (s != "dotprod" && s != "selftest") {
        j["samples"] = samples;
    }
    return j;
}

CommandOutput execute(const std::vector<std::string> &args) {
    CLI::App app("nelsim: simulations of entanglement certification protocols", "nelsim");
    RunConfig cfg;
    build_app(app, cfg);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        CommandOutput o;
        o.report = app.help();
        o.summary = {{"help", true}};
        return o;
    } catch (const CLI::ParseError &e) {
        return invalid(e.what(), usage_text());
    }
    for (const auto &name : SUBCOMMANDS) {
        if (app.got_subcommand(name)) {
            cfg.subcommand = name;
        }
    }
    if (cfg.samples == 0) {
        cfg.samples = default_samples(cfg.subcommand);
    }
    try {
        cfg.validate();
        auto start = std::chrono::steady_clock::now();
        CommandOutput o = dispatch(cfg);
        o.out_path = cfg.out;
        o.summary["elapsed_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return o;
    } catch (const ValidationError &e) {
        return invalid(e.what(), app.get_subcommand(cfg.subcommand)->help());
    } catch (const NotEntangledOrPptError &e) {
        return invalid(e.what(), "");
    } catch (const Error &e) {
        CommandOutput o;
        o.exit_code = Failure;
        o.summary = {{"error", e.what()}};
        return o;
    }
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    std::vector<std::string> args(argv + 1, argv + argc);
    CommandOutput o = execute(args);
    if (o.exit_code == Invalid) {
        err << o.summary.value("error", std::string("invalid arguments")) << "\n\n" << o.report;
        out << o.summary.dump() << "\n";
        return o.exit_code;
    }
    if (o.summary.contains("help")) {
        out << o.report;
        return Ok;
    }
    const std::string &path = o.out_path;
    if (!path.empty() && !o.report.empty()) {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            err << "cannot write '" << path << "'\n";
            return Failure;
        }
        f << o.report;
        o.summary["out"] = path;
    }
    out << o.summary.dump() << "\n";
    return o.exit_code;
}

}  // namespace nelsim::cli
