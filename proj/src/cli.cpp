#include "lindkit/cli.hpp"

#include "lindkit/geometry.hpp"
#include "lindkit/models.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <variant>

namespace lindkit::cli {

namespace {

using nlohmann::json;

struct ParseFailure : std::runtime_error {
    explicit ParseFailure(const std::string& what) : std::runtime_error(what) {}
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void emit_csv(std::ostream& os) const {
        for (size_t c = 0; c < columns.size(); ++c)
            os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
        for (const auto& row : rows)
            for (size_t c = 0; c < row.size(); ++c) {
                if (std::holds_alternative<double>(row[c]))
                    os << fmt_double(std::get<double>(row[c]));
                else
                    os << std::get<std::string>(row[c]);
                os << (c + 1 < row.size() ? "," : "\n");
            }
    }
    void emit_json(std::ostream& os) const {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (size_t c = 0; c < row.size(); ++c) {
                if (std::holds_alternative<double>(row[c]))
                    obj[columns[c]] = std::get<double>(row[c]);
                else
                    obj[columns[c]] = std::get<std::string>(row[c]);
            }
            arr.push_back(std::move(obj));
        }
        os << arr.dump(2) << "\n";
    }
};

struct Options {
    std::string model;
    std::vector<std::string> params;
    std::string out_path;
    std::string format = "csv";
    double tol_zero = 1e-9;
    double tol_cluster = 1e-7;
    long long nmax = -1;
    unsigned seed = 1u;

    Tolerances tolerances() const {
        Tolerances t;
        t.zero_scale = tol_zero;
        t.cluster_scale = tol_cluster;
        return t;
    }
    std::map<std::string, double> param_map() const {
        std::map<std::string, double> m;
        for (const auto& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ParseFailure("--param expects k=v, got: " + kv);
            try {
                m[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw ParseFailure("--param value is not a number: " + kv);
            }
        }
        return m;
    }
};

Mat parse_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseFailure("matrix literal must be a non-empty array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(j[static_cast<size_t>(r)].size()) != cols)
            throw ParseFailure("matrix literal is ragged");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& cell = j[static_cast<size_t>(r)][static_cast<size_t>(c)];
            if (cell.is_number())
                m(r, c) = cell.get<double>();
            else if (cell.is_array() && cell.size() == 2)
                m(r, c) = cxd(cell[0].get<double>(), cell[1].get<double>());
            else
                throw ParseFailure("matrix entries must be numbers or [re, im] pairs");
        }
    }
    return m;
}

struct Hilbert {
    std::vector<Eigen::Index> factor_dims;
    std::vector<bool> is_fock;  // else qubit-like
    Eigen::Index dim() const {
        Eigen::Index d = 1;
        for (auto f : factor_dims) d *= f;
        return d;
    }
};

Hilbert parse_hilbert(const json& j) {
    Hilbert h;
    const std::string type = j.at("type").get<std::string>();
    if (type == "qubits") {
        const int n = j.at("n").get<int>();
        for (int k = 0; k < n; ++k) {
            h.factor_dims.push_back(2);
            h.is_fock.push_back(false);
        }
    } else if (type == "fock") {
        h.factor_dims.push_back(j.at("n_max").get<Eigen::Index>() + 1);
        h.is_fock.push_back(true);
    } else if (type == "composite") {
        for (const auto& f : j.at("factors")) {
            const Hilbert sub = parse_hilbert(f);
            h.factor_dims.insert(h.factor_dims.end(), sub.factor_dims.begin(),
                                 sub.factor_dims.end());
            h.is_fock.insert(h.is_fock.end(), sub.is_fock.begin(), sub.is_fock.end());
        }
    } else {
        throw ParseFailure("unknown hilbert type: " + type);
    }
    return h;
}

double builder_param(const json& params, const std::map<std::string, double>& named,
                     const std::string& key, double fallback) {
    if (!params.contains(key)) return fallback;
    const auto& v = params.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto it = named.find(v.get<std::string>());
        if (it == named.end()) throw ParseFailure("unknown named parameter: " + v.get<std::string>());
        return it->second;
    }
    throw ParseFailure("builder parameter must be a number or a parameter name");
}

Mat lift_to_factor(const Hilbert& h, int which, const Mat& op) {
    Mat full = Mat::Identity(1, 1);
    for (size_t f = 0; f < h.factor_dims.size(); ++f)
        full = kron(full, static_cast<int>(f) == which
                              ? op
                              : Mat(Mat::Identity(h.factor_dims[f], h.factor_dims[f])));
    return full;
}

Mat build_operator(const Hilbert& h, const json& spec, const std::map<std::string, double>& named) {
    if (spec.contains("matrix")) return parse_matrix(spec.at("matrix"));
    const std::string name = spec.at("builder").get<std::string>();
    const json params = spec.contains("params") ? spec.at("params") : json::object();
    const int mode = static_cast<int>(builder_param(params, named, "mode", 0));
    if (mode < 0 || mode >= static_cast<int>(h.factor_dims.size()))
        throw ParseFailure("builder mode index out of range");

    if (name == "annihilate" || name == "create" || name == "number") {
        if (!h.is_fock[static_cast<size_t>(mode)])
            throw ParseFailure("builder '" + name + "' needs a fock factor");
        FockSpace fock(h.factor_dims[static_cast<size_t>(mode)] - 1);
        const Mat local = name == "annihilate" ? fock.a : (name == "create" ? fock.adag : fock.n);
        return lift_to_factor(h, mode, local);
    }
    if (name == "poly") {
        if (!h.is_fock[static_cast<size_t>(mode)])
            throw ParseFailure("builder 'poly' needs a fock factor");
        const Eigen::Index nm = h.factor_dims[static_cast<size_t>(mode)] - 1;
        std::vector<cxd> roots;
        for (int k = 0;; ++k) {
            const std::string re = "root" + std::to_string(k) + "_re";
            if (!params.contains(re)) break;
            roots.emplace_back(builder_param(params, named, re, 0.0),
                               builder_param(params, named, "root" + std::to_string(k) + "_im", 0.0));
        }
        if (roots.empty()) throw ParseFailure("builder 'poly' needs root0_re, ...");
        FockSpace fock(nm);
        Mat local = Mat::Identity(nm + 1, nm + 1);
        for (const auto& r : roots) local = local * (fock.a - r * Mat::Identity(nm + 1, nm + 1));
        return lift_to_factor(h, mode, local);
    }
    if (name == "projector_mod") {
        if (!h.is_fock[static_cast<size_t>(mode)])
            throw ParseFailure("builder 'projector_mod' needs a fock factor");
        const Eigen::Index nm = h.factor_dims[static_cast<size_t>(mode)] - 1;
        return lift_to_factor(h, mode,
                              mod_projector(static_cast<Eigen::Index>(builder_param(params, named, "k", 0)),
                                            static_cast<Eigen::Index>(builder_param(params, named, "modulus", 2)),
                                            nm));
    }
    if (name == "pauli") {
        // e.g. {"string": "X1 Z2"}; 1-based qubit index
        if (!params.contains("string")) throw ParseFailure("builder 'pauli' needs a string");
        Mat full = Mat::Identity(h.dim(), h.dim());
        std::istringstream iss(params.at("string").get<std::string>());
        std::string tok;
        while (iss >> tok) {
            if (tok.size() < 2) throw ParseFailure("bad pauli token: " + tok);
            const char axis = tok[0];
            const int idx = std::stoi(tok.substr(1)) - 1;
            if (idx < 0 || idx >= static_cast<int>(h.factor_dims.size()) ||
                h.factor_dims[static_cast<size_t>(idx)] != 2)
                throw ParseFailure("pauli index out of range: " + tok);
            const Mat local = axis == 'X' ? pauli_x() : (axis == 'Y' ? pauli_y() : pauli_z());
            full = full * lift_to_factor(h, idx, local);
        }
        return full;
    }
    throw ParseFailure("unknown builder: " + name);
}

LindbladSpec load_model_file(const std::string& path, const std::map<std::string, double>& cli_params) {
    std::ifstream in(path);
    if (!in) throw ParseFailure("cannot open model file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string("model file: ") + e.what());
    }
    try {
        const Hilbert h = parse_hilbert(j.at("hilbert"));
        std::map<std::string, double> named;
        if (j.contains("parameters"))
            for (const auto& [k, v] : j.at("parameters").items()) named[k] = v.get<double>();
        for (const auto& [k, v] : cli_params) named[k] = v;  // CLI overrides

        Mat ham = Mat::Zero(h.dim(), h.dim());
        if (j.contains("hamiltonian") && !j.at("hamiltonian").is_null())
            ham = build_operator(h, j.at("hamiltonian"), named);
        std::vector<Jump> jumps;
        for (const auto& jj : j.at("jumps")) {
            const double rate = jj.contains("rate") ? jj.at("rate").get<double>() : 1.0;
            jumps.push_back({build_operator(h, jj, named), rate});
        }
        return make_spec(ham, std::move(jumps));
    } catch (const json::exception& e) {
        throw ParseFailure(std::string("model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseFailure(std::string("model file: ") + e.what());
    }
}

LindbladSpec random_spec(Eigen::Index dim, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    auto rand_mat = [&]() {
        Mat m(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cxd(dist(gen), dist(gen));
        return m;
    };
    Mat h = rand_mat();
    h = 0.5 * (h + Mat(h.adjoint()));
    return make_spec(h, {{rand_mat(), 1.0}, {rand_mat(), 0.5}});
}

struct LoadedModel {
    LindbladSpec spec;
    std::string description;
};

LoadedModel load_model(const Options& opt) {
    if (opt.model.empty()) throw ParseFailure("--model is required for this command");
    if (opt.model.rfind("catalog:", 0) == 0) {
        auto params = opt.param_map();
        if (opt.nmax >= 0) params["nmax"] = double(opt.nmax);
        auto built = models::build_catalog(opt.model.substr(8), params);
        return {built.spec, built.name};
    }
    if (opt.model.rfind("random:", 0) == 0) {
        const auto dim = static_cast<Eigen::Index>(std::stoll(opt.model.substr(7)));
        return {random_spec(dim, opt.seed), "random instance"};
    }
    return {load_model_file(opt.model, opt.param_map()), opt.model};
}

Mat parse_initial_state(const std::string& text, Eigen::Index dim) {
    if (text == "vacuum" || text.rfind("basis:", 0) == 0) {
        const Eigen::Index k = text == "vacuum" ? 0 : std::stoll(text.substr(6));
        if (k < 0 || k >= dim) throw ParseFailure("basis state out of range");
        Mat rho = Mat::Zero(dim, dim);
        rho(k, k) = 1.0;
        return rho;
    }
    if (text == "maxmixed") return Mat(Mat::Identity(dim, dim) / double(dim));
    if (text.rfind("coherent:", 0) == 0) {
        const auto body = text.substr(9);
        const auto comma = body.find(',');
        const double re = std::stod(body.substr(0, comma));
        const double im = comma == std::string::npos ? 0.0 : std::stod(body.substr(comma + 1));
        const auto st = coherent_state(cxd(re, im), dim - 1);
        if (st.tail_mass > 1e-10)
            throw TruncationError("coherent state tail mass " + fmt_double(st.tail_mass));
        return Mat(st.amplitudes * st.amplitudes.adjoint());
    }
    // otherwise: JSON file with a density matrix literal
    std::ifstream in(text);
    if (!in) throw ParseFailure("cannot open state file: " + text);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string("state file: ") + e.what());
    }
    return parse_matrix(j.contains("matrix") ? j.at("matrix") : j);
}

// Operator argument: op:number / op:annihilate / op:create shortcuts for a
// single-mode Fock model, otherwise a JSON matrix file.
Mat parse_operator_arg(const std::string& text, Eigen::Index dim) {
    if (text.rfind("op:", 0) == 0) {
        FockSpace fock(dim - 1);
        const std::string name = text.substr(3);
        if (name == "number") return fock.n;
        if (name == "annihilate") return fock.a;
        if (name == "create") return fock.adag;
        if (name == "position") return Mat((fock.a + fock.adag) / std::sqrt(2.0));
        throw ParseFailure("unknown operator shortcut: " + text);
    }
    std::ifstream in(text);
    if (!in) throw ParseFailure("cannot open operator file: " + text);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseFailure(std::string("operator file: ") + e.what());
    }
    const Mat m = parse_matrix(j.contains("matrix") ? j.at("matrix") : j);
    if (m.rows() != dim || m.cols() != dim)
        throw ParseFailure("operator dimension mismatch in " + text);
    return m;
}

void push_matrix_rows(Table& table, const std::string& label, double delta, const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            table.rows.push_back({Cell{label}, Cell{delta}, Cell{double(i)}, Cell{double(j)},
                                  Cell{m(i, j).real()}, Cell{m(i, j).imag()}});
        }
}

std::string term_string(const DysonTermInfo& info) {
    std::string s = info.sign < 0 ? "-" : "+";
    if (info.t_power > 0)
        s += " t^" + std::to_string(info.t_power) + "/" + std::to_string(info.t_power) + "! ";
    else
        s += " ";
    for (int v : info.seq) s += v == 0 ? "P O " : ("L^-" + std::to_string(v) + " O ");
    s += "P";
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    CLI::App app{"lindkit: asymptotics of Lindbladians with degenerate steady-state structure"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--model", opt.model, "model file, catalog:NAME, or random:DIM");
    app.add_option("--param", opt.params, "model parameter k=v (repeatable)");
    app.add_option("--out", opt.out_path, "write data to a file instead of stdout");
    app.add_option("--format", opt.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol-zero", opt.tol_zero, "peripheral threshold (relative)");
    app.add_option("--tol-cluster", opt.tol_cluster, "eigenvalue clustering radius (relative)");
    app.add_option("--nmax", opt.nmax, "Fock truncation override for catalog models");
    app.add_option("--seed", opt.seed, "seed for random test instances");

    auto* cmd_spectrum = app.add_subcommand("spectrum", "eigenvalues of the Lindbladian");
    auto* cmd_steady = app.add_subcommand("steady", "asymptotic basis elements Psi");
    auto* cmd_conserved = app.add_subcommand("conserved", "conserved quantities J");

    auto* cmd_evolve = app.add_subcommand("evolve", "propagate an initial state");
    double evolve_t = 1.0;
    std::string rho_text = "maxmixed";
    cmd_evolve->add_option("--t", evolve_t, "evolution time");
    cmd_evolve->add_option("--rho", rho_text,
                           "vacuum|maxmixed|basis:K|coherent:RE,IM|file.json");

    auto* cmd_kubo = app.add_subcommand("kubo", "first-order response of the steady state");
    std::string pert_kind = "ham";
    std::string pert_file, obs_file;
    int jump_index = 0;
    double kubo_t = 1.0;
    bool sudden = false;
    cmd_kubo->add_option("--pert-kind", pert_kind, "ham or jump")
        ->check(CLI::IsMember({"ham", "jump"}));
    cmd_kubo->add_option("--pert", pert_file, "JSON matrix of V (ham) or f (jump)")->required();
    cmd_kubo->add_option("--jump-index", jump_index, "which jump is shifted (jump kind)");
    cmd_kubo->add_option("--observable", obs_file, "JSON matrix of the observable A")->required();
    cmd_kubo->add_option("--t", kubo_t, "response time");
    cmd_kubo->add_flag("--sudden", sudden, "step ramp with ringdown instead of slow ramp");

    auto* cmd_dyson = app.add_subcommand("dyson-table", "Catalan sequences and Dyson terms");
    int dyson_order = 2;
    cmd_dyson->add_option("--order", dyson_order, "expansion order N")->required();

    auto* cmd_holonomy = app.add_subcommand("holonomy", "adiabatic holonomy of a named family");
    std::string family_name = "cat-loop";
    double hol_alpha = 2.0, hol_side = 0.3, hol_phi = M_PI / 2.0;
    long long hol_nmax = -1;
    cmd_holonomy->add_option("--family", family_name, "cat-loop or cat-collision")
        ->check(CLI::IsMember({"cat-loop", "cat-collision"}));
    cmd_holonomy->add_option("--alpha", hol_alpha, "cat amplitude");
    cmd_holonomy->add_option("--side", hol_side, "square loop side (cat-loop)");
    cmd_holonomy->add_option("--phi", hol_phi, "rotation angle (cat-collision)");
    cmd_holonomy->add_option("--fock-nmax", hol_nmax, "truncation override");

    auto* cmd_scan = app.add_subcommand("scan", "parameter grids");
    std::string scan_what = "purity";
    double scan_alpha = 5.0;
    double re_min = -6, re_max = 6, im_min = -6, im_max = 6;
    int re_steps = 13, im_steps = 13;
    double a_min = 0.2, a_max = 2.5;
    int a_steps = 12;
    long long scan_nmax = -1;
    cmd_scan->add_option("--what", scan_what, "purity or gap")
        ->check(CLI::IsMember({"purity", "gap"}));
    cmd_scan->add_option("--alpha", scan_alpha, "pump amplitude (purity scan)");
    cmd_scan->add_option("--re-min", re_min);
    cmd_scan->add_option("--re-max", re_max);
    cmd_scan->add_option("--re-steps", re_steps);
    cmd_scan->add_option("--im-min", im_min);
    cmd_scan->add_option("--im-max", im_max);
    cmd_scan->add_option("--im-steps", im_steps);
    cmd_scan->add_option("--alpha-min", a_min);
    cmd_scan->add_option("--alpha-max", a_max);
    cmd_scan->add_option("--alpha-steps", a_steps);
    cmd_scan->add_option("--fock-nmax", scan_nmax, "truncation for the gap scan");

    std::vector<const char*> argv;
    argv.push_back("lindkit");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    }

    Table table;
    try {
        const Tolerances tol = opt.tolerances();
        if (cmd_spectrum->parsed()) {
            const auto model = load_model(opt);
            const auto spec = spectrum(build_superop(model.spec), tol);
            table.columns = {"cluster", "re", "im", "peripheral"};
            for (size_t c = 0; c < spec.clusters.size(); ++c)
                for (auto m : spec.clusters[c].members)
                    table.rows.push_back({Cell{double(c)}, Cell{spec.eigenvalues(m).real()},
                                          Cell{spec.eigenvalues(m).imag()},
                                          Cell{double(spec.is_peripheral(spec.clusters[c]))}});
        } else if (cmd_steady->parsed() || cmd_conserved->parsed()) {
            const auto model = load_model(opt);
            const auto basis = asymptotic_basis(build_superop(model.spec), tol);
            table.columns = {"entry", "delta", "i", "j", "re", "im"};
            for (Eigen::Index k = 0; k < basis.size(); ++k) {
                const auto& e = basis.entries[static_cast<size_t>(k)];
                push_matrix_rows(table, (cmd_steady->parsed() ? "psi" : "J") + std::to_string(k),
                                 e.delta, cmd_steady->parsed() ? e.psi : e.j);
            }
        } else if (cmd_evolve->parsed()) {
            const auto model = load_model(opt);
            const Mat rho0 = parse_initial_state(rho_text, model.spec.dim());
            const Mat rho = propagate(build_superop(model.spec), rho0, evolve_t);
            table.columns = {"entry", "delta", "i", "j", "re", "im"};
            push_matrix_rows(table, "rho", 0.0, rho);
            table.rows.push_back({Cell{"trace"}, Cell{0.0}, Cell{0.0}, Cell{0.0},
                                  Cell{rho.trace().real()}, Cell{rho.trace().imag()}});
            table.rows.push_back({Cell{"purity"}, Cell{0.0}, Cell{0.0}, Cell{0.0},
                                  Cell{(rho * rho).trace().real()}, Cell{0.0}});
        } else if (cmd_kubo->parsed()) {
            const auto model = load_model(opt);
            const SuperOp l = build_superop(model.spec);
            const auto basis = asymptotic_basis(l, tol);
            const auto split = find_nondecay_projector(l, tol);
            const auto proj = asymptotic_projector(basis, split);
            const Mat pert_mat = parse_operator_arg(pert_file, model.spec.dim());
            const Mat obs = parse_operator_arg(obs_file, model.spec.dim());
            const auto pert =
                pert_kind == "ham"
                    ? PerturbationSpec::hamiltonian(pert_mat)
                    : PerturbationSpec::jump_shift(static_cast<size_t>(jump_index), pert_mat);
            const Mat rho_inf = infinite_time_state(
                basis, Mat(Mat::Identity(model.spec.dim(), model.spec.dim()) / double(model.spec.dim())),
                0.0);
            const auto res = kubo_first_order(l, split, proj, pert.to_superop(model.spec), obs,
                                              rho_inf, kubo_t, sudden);
            table.columns = {"quantity", "re", "im"};
            table.rows.push_back({Cell{"zeno"}, Cell{res.zeno.real()}, Cell{res.zeno.imag()}});
            table.rows.push_back(
                {Cell{"leakage"}, Cell{res.leakage.real()}, Cell{res.leakage.imag()}});
            table.rows.push_back(
                {Cell{"ringdown"}, Cell{res.ringdown.real()}, Cell{res.ringdown.imag()}});
            table.rows.push_back({Cell{"value"}, Cell{res.value.real()}, Cell{res.value.imag()}});
        } else if (cmd_dyson->parsed()) {
            table.columns = {"N", "M", "sequence", "sign", "t_power", "term"};
            for (const auto& info : dyson_term_table(dyson_order)) {
                std::string seq;
                for (int v : info.seq) seq += std::to_string(v);
                table.rows.push_back({Cell{double(dyson_order)}, Cell{double(info.m)}, Cell{seq},
                                      Cell{double(info.sign)}, Cell{double(info.t_power)},
                                      Cell{term_string(info)}});
            }
        } else if (cmd_holonomy->parsed()) {
            const double alpha = hol_alpha;
            const Eigen::Index nm = hol_nmax > 0 ? hol_nmax : models::default_nmax(alpha);
            LindbladFamily family;
            PathSpec path;
            path.closed = true;
            if (family_name == "cat-loop") {
                family.param_dim = 2;
                family.spec_at = [alpha, nm](const RVec& x) {
                    FockSpace fock(nm);
                    const Mat id = identity(nm + 1);
                    const cxd a1(x(0), x(1));
                    return jump_only((fock.a - alpha * id) * (fock.a - a1 * id));
                };
                family.basis_at = [alpha, nm](const RVec& x) {
                    const cxd a1(x(0), x(1));
                    const cxd plus = 0.5 * (alpha + a1), minus = 0.5 * (alpha - a1);
                    const Mat disp = displacement(plus, nm);
                    const Vec c0 = disp * models::cat_state(0, minus, 2, nm);
                    const Vec c1 = disp * models::cat_state(1, minus, 2, nm);
                    const Mat j01 = disp * models::cat_j01(minus, nm) * disp.adjoint();
                    std::vector<AsymptoticEntry> basis;
                    basis.push_back({0.0, Mat(c0 * c0.adjoint()),
                                     Mat(disp * mod_projector(0, 2, nm) * disp.adjoint())});
                    basis.push_back({0.0, Mat(c1 * c1.adjoint()),
                                     Mat(disp * mod_projector(1, 2, nm) * disp.adjoint())});
                    basis.push_back({0.0, Mat(c0 * c1.adjoint()), j01});
                    basis.push_back({0.0, Mat(c1 * c0.adjoint()), Mat(j01.adjoint())});
                    return basis;
                };
                const double s = hol_side;
                const RVec base = (RVec(2) << -alpha, 0.0).finished();
                std::vector<RVec> corners = {base,
                                             base + (RVec(2) << s, 0.0).finished(),
                                             base + (RVec(2) << s, s).finished(),
                                             base + (RVec(2) << 0.0, s).finished(),
                                             base};
                path.points = corners;
            } else {  // cat-collision: alpha -> 0 -> alpha e^{i phi} -> alpha
                family.param_dim = 2;
                family.spec_at = [nm](const RVec& x) {
                    FockSpace fock(nm);
                    const cxd a0(x(0), x(1));
                    return jump_only(fock.a * fock.a - a0 * a0 * identity(nm + 1));
                };
                family.basis_at = [nm](const RVec& x) {
                    const cxd a0(x(0), x(1));
                    const Vec c0 = models::cat_state(0, a0, 2, nm);
                    const Vec c1 = models::cat_state(1, a0, 2, nm);
                    const Mat j01 = models::cat_j01(a0, nm);
                    std::vector<AsymptoticEntry> basis;
                    basis.push_back({0.0, Mat(c0 * c0.adjoint()), mod_projector(0, 2, nm)});
                    basis.push_back({0.0, Mat(c1 * c1.adjoint()), mod_projector(1, 2, nm)});
                    basis.push_back({0.0, Mat(c0 * c1.adjoint()), j01});
                    basis.push_back({0.0, Mat(c1 * c0.adjoint()), Mat(j01.adjoint())});
                    return basis;
                };
                const double phi = hol_phi;
                path.points = {(RVec(2) << alpha, 0.0).finished(),
                               (RVec(2) << 0.0, 0.0).finished(),
                               (RVec(2) << alpha * std::cos(phi), alpha * std::sin(phi)).finished(),
                               (RVec(2) << alpha, 0.0).finished()};
                path.closed = (path.points.front() - path.points.back()).norm() < 1e-12;
            }
            const auto res = holonomy(family, path);
            table.columns = {"entry", "delta", "i", "j", "re", "im"};
            push_matrix_rows(table, "B", 0.0, res.b_coeff);
            table.rows.push_back({Cell{"segments"}, Cell{0.0}, Cell{0.0}, Cell{0.0},
                                  Cell{double(res.segments)}, Cell{double(res.converged)}});
        } else if (cmd_scan->parsed()) {
            if (scan_what == "purity") {
                const auto model = models::two_cat_pump(scan_alpha, 2);  // scalar data only
                table.columns = {"re", "im", "purity", "c00", "c01_re", "c01_im"};
                for (int i = 0; i < re_steps; ++i)
                    for (int j = 0; j < im_steps; ++j) {
                        const double re = re_steps == 1 ? re_min
                                                        : re_min + (re_max - re_min) * i / (re_steps - 1);
                        const double im = im_steps == 1 ? im_min
                                                        : im_min + (im_max - im_min) * j / (im_steps - 1);
                        const cxd beta(re, im);
                        const cxd c01 = model.c01_series(beta);
                        table.rows.push_back({Cell{re}, Cell{im},
                                              Cell{model.purity_from_coherent(beta)},
                                              Cell{model.c_diag(0, beta)}, Cell{c01.real()},
                                              Cell{c01.imag()}});
                    }
            } else {  // gap sweep vs alpha
                table.columns = {"alpha", "gap_dg", "gap_edg"};
                for (int k = 0; k < a_steps; ++k) {
                    const double alpha =
                        a_steps == 1 ? a_min : a_min + (a_max - a_min) * k / (a_steps - 1);
                    const Eigen::Index nm =
                        scan_nmax > 0 ? scan_nmax : models::default_nmax(alpha);
                    const auto model = models::two_cat_pump(alpha, nm);
                    // parity sectors keep the eigenproblems small
                    std::vector<Eigen::Index> even, odd;
                    for (Eigen::Index n = 0; n <= nm; ++n) (n % 2 == 0 ? even : odd).push_back(n);
                    double gap_dg = std::numeric_limits<double>::infinity();
                    for (const auto* rows : {&even, &odd})
                        for (const auto* cols : {&even, &odd}) {
                            const Mat block = sector_block(model.spec, *rows, *cols);
                            Eigen::ComplexEigenSolver<Mat> es(block, false);
                            const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
                            for (Eigen::Index q = 0; q < es.eigenvalues().size(); ++q) {
                                const double re = std::abs(es.eigenvalues()(q).real());
                                if (re > 1e-9 * scale) gap_dg = std::min(gap_dg, re);
                            }
                        }
                    Eigen::SelfAdjointEigenSolver<Mat> hs(decoherence_hamiltonian(model.spec));
                    double gap_edg = std::numeric_limits<double>::infinity();
                    const double escale = std::max(1.0, hs.eigenvalues().maxCoeff());
                    for (Eigen::Index q = 0; q < hs.eigenvalues().size(); ++q)
                        if (hs.eigenvalues()(q) > 1e-9 * escale)
                            gap_edg = std::min(gap_edg, hs.eigenvalues()(q));
                    table.rows.push_back({Cell{alpha}, Cell{gap_dg}, Cell{gap_edg}});
                }
            }
        }
    } catch (const ParseFailure& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const TruncationError& e) {
        err << "truncation insufficient: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    }

    std::ofstream file_out;
    std::ostream* sink = &out;
    if (!opt.out_path.empty()) {
        file_out.open(opt.out_path);
        if (!file_out) {
            err << "cannot open output file: " << opt.out_path << "\n";
            return 2;
        }
        sink = &file_out;
    }
    if (opt.format == "json")
        table.emit_json(*sink);
    else
        table.emit_csv(*sink);

    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    err << "# lindkit run ok: rows=" << table.rows.size() << " tol_zero=" << opt.tol_zero
        << " tol_cluster=" << opt.tol_cluster << " wall_s=" << elapsed << "\n";
    return 0;
}

}  // namespace lindkit::cli
