// Command line front end: every decision procedure with JSON/CSV output.
//
// Exit codes: 0 decided (either way), 2 boundary/indeterminate, 64 usage
// error, 65 input parse error, 70 size cap exceeded.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "paradis/error.hpp"
#include "paradis/feasibility.hpp"
#include "paradis/linalg.hpp"
#include "paradis/numrange.hpp"
#include "paradis/salpha.hpp"
#include "paradis/subspace.hpp"
#include "paradis/synthesis.hpp"

namespace {

using paradis::CMat;
using paradis::Cx;
using ojson = nlohmann::ordered_json;

constexpr const char* kVersion = "paradis 0.1.0";
constexpr int kExitDecided = 0;
constexpr int kExitBoundary = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitCap = 70;

struct CliFailure {
    int code;
    std::string message;
};

uint64_t g_digest = 1469598103934665603ull; // FNV-1a state over all inputs

void digest_bytes(const std::string& bytes) {
    for (unsigned char c : bytes) {
        g_digest ^= c;
        g_digest *= 1099511628211ull;
    }
}

std::string digest_hex() {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a-%016llx", static_cast<unsigned long long>(g_digest));
    return buf;
}

uint64_t solver_seed() {
    if (const char* env = std::getenv("PARADIS_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw CliFailure{kExitUsage, "PARADIS_SEED must be an unsigned integer"};
    }
    return paradis::FeasibilityOptions{}.seed;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliFailure{kExitParse, "cannot open " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string bytes = ss.str();
    digest_bytes(path);
    digest_bytes(bytes);
    return bytes;
}

CMat parse_matrix(const std::string& path) {
    const std::string bytes = read_file(path);
    ojson j;
    try {
        j = ojson::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw CliFailure{kExitParse, path + ": " + e.what()};
    }
    try {
        const int rows = j.at("d_rows").get<int>();
        const int cols = j.at("d_cols").get<int>();
        const auto& re = j.at("re");
        const auto& im = j.at("im");
        if (rows <= 0 || cols <= 0) throw paradis::Error(paradis::ErrorKind::ParseError, "non-positive dimensions");
        if (static_cast<int>(re.size()) != rows || static_cast<int>(im.size()) != rows)
            throw paradis::Error(paradis::ErrorKind::ParseError, "row count mismatch");
        CMat m = CMat::zeros(rows, cols);
        for (int i = 0; i < rows; ++i) {
            if (static_cast<int>(re[i].size()) != cols || static_cast<int>(im[i].size()) != cols)
                throw paradis::Error(paradis::ErrorKind::ParseError, "column count mismatch");
            for (int k = 0; k < cols; ++k) m(i, k) = Cx(re[i][k].get<double>(), im[i][k].get<double>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw CliFailure{kExitParse, path + ": " + e.what()};
    } catch (const paradis::Error& e) {
        throw CliFailure{kExitParse, path + ": " + e.what()};
    }
}

ojson matrix_json(const CMat& m) {
    ojson re = ojson::array();
    ojson im = ojson::array();
    for (int i = 0; i < m.rows; ++i) {
        ojson rrow = ojson::array();
        ojson irow = ojson::array();
        for (int j = 0; j < m.cols; ++j) {
            rrow.push_back(m(i, j).real());
            irow.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    ojson out;
    out["d_rows"] = m.rows;
    out["d_cols"] = m.cols;
    out["re"] = std::move(re);
    out["im"] = std::move(im);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliFailure{kExitParse, "cannot write " + path};
    out << text;
}

int map_error(const paradis::Error& e) {
    switch (e.kind()) {
        case paradis::ErrorKind::CapExceeded: return kExitCap;
        case paradis::ErrorKind::InvalidArgument:
        case paradis::ErrorKind::InsufficientCopies: return kExitUsage;
        default: return kExitParse;
    }
}

struct Report {
    ojson root;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Report(const std::vector<std::string>& argv) {
        root["tool"] = kVersion;
        ojson cmd = ojson::array();
        for (const std::string& a : argv) cmd.push_back(a);
        root["command"] = std::move(cmd);
    }

    int finish(int code) {
        root["input_digest"] = digest_hex();
        const auto dt = std::chrono::steady_clock::now() - t0;
        root["wall_ms"] = std::chrono::duration<double, std::milli>(dt).count();
        std::cout << root.dump(2) << "\n";
        return code;
    }
};

ojson field_angle_json(const paradis::FieldAngleReport& r) {
    ojson out;
    out["theta"] = r.theta;
    out["classification"] = paradis::cone_class_name(r.classification);
    out["zero_in_range"] = r.zero_in_range;
    if (r.optimal_n)
        out["optimal_n"] = *r.optimal_n;
    else
        out["optimal_n"] = "never";
    return out;
}

ojson outcome_json(const paradis::FeasibilityOutcome& out) {
    ojson j;
    j["status"] = paradis::feasibility_status_name(out.status);
    j["projection_residual"] = out.projection_residual;
    j["dual_supremum"] = out.dual_supremum;
    j["iterations"] = out.iterations;
    if (out.witness) j["witness"] = matrix_json(*out.witness);
    if (out.certificate) {
        j["certificate"] = *out.certificate;
        j["certificate_lambda_min"] = out.certificate_lambda_min;
    }
    return j;
}

paradis::OperatorSubspace load_subspace(const std::vector<std::string>& files) {
    std::vector<CMat> gens;
    gens.reserve(files.size());
    for (const std::string& f : files) gens.push_back(parse_matrix(f));
    try {
        return paradis::from_generators(gens);
    } catch (const paradis::Error& e) {
        throw CliFailure{kExitParse, e.what()};
    }
}

// ------------------------------------------------------------ subcommands

int run_field_angle(Report& rep, const std::string& file, double tol) {
    const CMat a = parse_matrix(file);
    rep.root["outcome"] = field_angle_json(paradis::field_angle(a, tol));
    return rep.finish(kExitDecided);
}

int run_onedim(Report& rep, const std::string& file, std::optional<int> copies) {
    const CMat a = parse_matrix(file);
    const paradis::FieldAngleReport fa = paradis::field_angle(a);
    ojson out;
    out["field_angle"] = field_angle_json(fa);
    if (!fa.optimal_n) {
        out["witness"] = nullptr;
        rep.root["outcome"] = std::move(out);
        return rep.finish(kExitDecided);
    }
    const CMat w = paradis::onedim_witness(a, copies);
    const int used = copies.value_or(*fa.optimal_n);
    CMat an = a;
    for (int k = 1; k < used; ++k) an = paradis::kron(an, a);
    out["copies_used"] = used;
    out["witness"] = matrix_json(w);
    ojson resid;
    resid["orthogonality"] = std::abs(paradis::hs_inner(paradis::adjoint(an), w));
    resid["trace_error"] = std::abs(paradis::trace(w).real() - 1.0);
    resid["min_eigenvalue"] = paradis::eigh(w).values.front();
    rep.root["residuals"] = std::move(resid);
    rep.root["outcome"] = std::move(out);
    return rep.finish(kExitDecided);
}

int run_hermitian(Report& rep, const std::vector<std::string>& files) {
    const paradis::OperatorSubspace s = load_subspace(files);
    paradis::FeasibilityOptions opts;
    opts.seed = solver_seed();
    const paradis::FeasibilityOutcome out = paradis::hermitian_space_decision(s, opts);
    rep.root["seed"] = opts.seed;
    rep.root["outcome"] = outcome_json(out);
    if (out.status == paradis::FeasibilityStatus::Indeterminate) {
        rep.root["outcome"]["note"] = "boundary case - no strict certificate";
        return rep.finish(kExitBoundary);
    }
    return rep.finish(kExitDecided);
}

int run_check(Report& rep, const std::vector<std::string>& files, int max_copies) {
    const paradis::OperatorSubspace s = load_subspace(files);
    paradis::FeasibilityOptions opts;
    opts.seed = solver_seed();
    const std::vector<paradis::ParallelCheckRow> rows = paradis::parallel_check(s, max_copies, opts);
    rep.root["seed"] = opts.seed;
    ojson table = ojson::array();
    bool witness_found = false;
    bool any_indeterminate = false;
    for (const paradis::ParallelCheckRow& row : rows) {
        ojson r = outcome_json(row.outcome);
        r.erase("witness"); // keep the table compact; rerun onedim/hermitian for the matrix
        ojson entry;
        entry["copies"] = row.copies;
        entry.update(r);
        table.push_back(std::move(entry));
        witness_found |= row.outcome.status == paradis::FeasibilityStatus::Witness;
        any_indeterminate |= row.outcome.status == paradis::FeasibilityStatus::Indeterminate;
    }
    ojson out;
    out["rows"] = std::move(table);
    out["distinguishable_within"] = witness_found ? ojson(rows.back().copies) : ojson(nullptr);
    rep.root["outcome"] = std::move(out);
    return rep.finish(!witness_found && any_indeterminate ? kExitBoundary : kExitDecided);
}

int run_synthesize(Report& rep, const std::vector<std::string>& files, const std::string& out_dir) {
    const paradis::OperatorSubspace s = load_subspace(files);
    const paradis::ChannelPair pair = paradis::channels_from_subspace(s);
    std::filesystem::create_directories(out_dir);
    const int nk = static_cast<int>(pair.e.kraus.size());
    for (int j = 0; j < nk; ++j) {
        write_text(out_dir + "/E_" + std::to_string(j) + ".json", matrix_json(pair.e.kraus[j]).dump(2) + "\n");
        write_text(out_dir + "/F_" + std::to_string(j) + ".json", matrix_json(pair.f.kraus[j]).dump(2) + "\n");
    }
    // Round trip: the span rebuilt from the channels must match s.
    const paradis::OperatorSubspace back = paradis::from_channel_pair(pair.e, pair.f);
    double roundtrip = 0.0;
    for (const CMat& b : s.basis) {
        if (!paradis::contains(back, b, 1e-8)) roundtrip = std::max(roundtrip, 1.0);
    }
    for (const CMat& b : back.basis) {
        CMat proj = CMat::zeros(s.d, s.d);
        for (const CMat& e : s.basis) proj = paradis::add(proj, paradis::scale(paradis::hs_inner(e, b), e));
        roundtrip = std::max(roundtrip, paradis::frob_norm(paradis::sub(b, proj)));
    }
    ojson meta;
    meta["dim_in"] = pair.e.dim_in;
    meta["dim_out"] = pair.e.dim_out;
    meta["kraus_count"] = nk;
    meta["scale_factors"] = pair.scale_factors;
    meta["roundtrip_residual"] = roundtrip;
    write_text(out_dir + "/pair.json", meta.dump(2) + "\n");
    rep.root["outcome"] = meta;
    rep.root["outcome"]["out_dir"] = out_dir;
    return rep.finish(kExitDecided);
}

paradis::KrausChannel load_channel(const std::string& dir, const std::string& prefix, int count) {
    std::vector<CMat> kraus;
    kraus.reserve(count);
    for (int j = 0; j < count; ++j) kraus.push_back(parse_matrix(dir + "/" + prefix + "_" + std::to_string(j) + ".json"));
    try {
        return paradis::KrausChannel::from_kraus(kraus);
    } catch (const paradis::Error& e) {
        throw CliFailure{kExitParse, dir + ": " + e.what()};
    }
}

int run_simulate(Report& rep, const std::string& dir, int copies, const std::string& witness_file) {
    const std::string meta_bytes = read_file(dir + "/pair.json");
    ojson meta;
    try {
        meta = ojson::parse(meta_bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw CliFailure{kExitParse, dir + "/pair.json: " + e.what()};
    }
    const int nk = meta.at("kraus_count").get<int>();
    const paradis::KrausChannel e = load_channel(dir, "E", nk);
    const paradis::KrausChannel f = load_channel(dir, "F", nk);

    CMat rho;
    if (!witness_file.empty()) {
        rho = parse_matrix(witness_file);
    } else {
        int dn = 1;
        for (int k = 0; k < copies; ++k) dn *= e.dim_in;
        rho = paradis::scale(Cx(1.0 / dn, 0.0), CMat::identity(dn));
    }
    const CMat phi = paradis::discrimination_input(rho);
    const CMat rho_in = paradis::matmul(phi, paradis::adjoint(phi));
    const CMat rho_e = paradis::apply_parallel(e, copies, rho_in);
    const CMat rho_f = paradis::apply_parallel(f, copies, rho_in);
    ojson out;
    out["copies"] = copies;
    out["overlap"] = paradis::output_overlap(rho_e, rho_f);
    out["trace_e"] = paradis::trace(rho_e).real();
    out["trace_f"] = paradis::trace(rho_f).real();
    rep.root["outcome"] = std::move(out);
    return rep.finish(kExitDecided);
}

int run_salpha_solve(Report& rep, int n, double alpha) {
    const paradis::SAlphaSystem sys = paradis::build_reduced_system(n, alpha);
    const paradis::SAlphaSolveResult sol = paradis::solve_nonneg(sys);
    ojson out;
    out["n"] = n;
    out["alpha"] = alpha;
    out["feasible"] = sol.feasible;
    out["phase1_objective"] = sol.phase1_objective;
    if (sol.feasible) {
        out["p"] = sol.p;
        ojson vars = ojson::array();
        for (int i = 0; i < paradis::salpha_var_count(n); ++i) {
            const paradis::Occupation occ = paradis::salpha_var_abc(n, i);
            vars.push_back({occ.a, occ.b, occ.c});
        }
        out["p_index"] = std::move(vars);
        double resid = 0.0;
        for (const std::vector<Cx>& row : sys.rows) {
            Cx acc = 0.0;
            for (size_t j = 0; j < row.size(); ++j) acc += row[j] * sol.p[j];
            resid = std::max(resid, std::abs(acc));
        }
        out["max_row_residual"] = resid;
    }
    rep.root["outcome"] = std::move(out);
    return rep.finish(kExitDecided);
}

int run_salpha_scan(Report& rep, int n, double grid, double refine, int jobs, const std::string& csv_path) {
    const paradis::ThresholdReport th = paradis::threshold_alpha(n, grid, refine, jobs);
    ojson out;
    out["n"] = th.n;
    out["monotone"] = th.monotone;
    if (th.alpha_star)
        out["alpha_star"] = *th.alpha_star;
    else
        out["alpha_star"] = nullptr;
    out["grid_points"] = th.profile.size();
    rep.root["outcome"] = std::move(out);
    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "n,alpha,feasible,phase1_objective,alpha_star_refined\n";
        char buf[160];
        for (const paradis::ThresholdPoint& pt : th.profile) {
            std::snprintf(buf, sizeof(buf), "%d,%.12g,%d,%.12g,", th.n, pt.alpha, pt.feasible ? 1 : 0,
                          pt.phase1_objective);
            csv << buf;
            if (th.alpha_star)
                csv << std::to_string(*th.alpha_star);
            csv << "\n";
        }
        write_text(csv_path, csv.str());
        rep.root["outcome"]["csv"] = csv_path;
    }
    return rep.finish(kExitDecided);
}

int run_salpha_verify(Report& rep, int n, double alpha) {
    const paradis::ClosedFormReport r = paradis::closed_form_solution(n, alpha);
    ojson out;
    out["n"] = n;
    out["alpha"] = alpha;
    out["p"] = r.p;
    out["max_residual"] = r.max_residual;
    out["min_entry"] = r.min_entry;
    rep.root["outcome"] = std::move(out);
    return rep.finish(kExitDecided);
}

int run_salpha_counterexample(Report& rep, int max_n) {
    const std::vector<paradis::CounterexampleRow> rows = paradis::counterexample_check(max_n);
    ojson table = ojson::array();
    bool all_consistent = true;
    for (const paradis::CounterexampleRow& r : rows) {
        ojson row;
        row["n"] = r.n;
        row["reduced_infeasible"] = r.reduced_infeasible;
        if (r.full_infeasible) row["full_infeasible"] = *r.full_infeasible;
        if (r.sdp_outcome) row["sdp_outcome"] = *r.sdp_outcome;
        row["consistent"] = r.consistent;
        all_consistent &= r.consistent;
        table.push_back(std::move(row));
    }
    ojson out;
    out["alpha"] = "pi/2";
    out["rows"] = std::move(table);
    out["all_consistent"] = all_consistent;
    rep.root["outcome"] = std::move(out);
    return rep.finish(kExitDecided);
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Parallel distinguishability toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    bool pi_units = false;
    app.add_flag("--pi-units", pi_units, "interpret angle arguments as multiples of pi");

    std::string matrix_file, out_dir, pair_dir, witness_file, csv_path;
    std::vector<std::string> generator_files;
    double tol = 1e-9, alpha = 0.0, grid = 1e-3, refine = 1e-6;
    int copies = 0, max_copies = 1, nval = 1, jobs = 1, max_n = 3;
    bool have_copies = false;

    CLI::App* fa = app.add_subcommand("field-angle", "cone classification of one matrix");
    fa->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    fa->add_option("--tol", tol, "endpoint tolerance");

    CLI::App* od = app.add_subcommand("onedim", "minimal copies and witness for one matrix");
    od->add_option("--matrix", matrix_file, "matrix JSON file")->required();
    od->add_option("--copies", copies, "witness copy count (defaults to the minimum)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { have_copies = true; });

    CLI::App* he = app.add_subcommand("hermitian", "witness/certificate decision for a Hermitian-closed span");
    he->add_option("--generators", generator_files, "generator matrix files")->required()->expected(-1);

    CLI::App* ck = app.add_subcommand("check", "per-copy feasibility table");
    ck->add_option("--generators", generator_files, "generator matrix files")->required()->expected(-1);
    ck->add_option("--max-copies", max_copies, "largest copy count to try")->required()->check(CLI::PositiveNumber);

    CLI::App* sy = app.add_subcommand("synthesize", "channel pair realizing a span");
    sy->add_option("--generators", generator_files, "generator matrix files")->required()->expected(-1);
    sy->add_option("--out", out_dir, "output directory")->required();

    CLI::App* si = app.add_subcommand("simulate", "apply a synthesized pair in parallel");
    si->add_option("--pair", pair_dir, "directory written by synthesize")->required();
    si->add_option("--copies", copies, "parallel uses")->required()->check(CLI::PositiveNumber);
    si->add_option("--witness", witness_file, "input state matrix file");

    CLI::App* sa = app.add_subcommand("salpha", "diagonal test family");
    sa->require_subcommand(1);
    CLI::App* sa_solve = sa->add_subcommand("solve", "reduced LP at one angle");
    sa_solve->add_option("--n", nval, "copies")->required()->check(CLI::PositiveNumber);
    sa_solve->add_option("--alpha", alpha, "angle")->required();
    CLI::App* sa_scan = sa->add_subcommand("scan", "threshold scan over angles");
    sa_scan->add_option("--n", nval, "copies")->required()->check(CLI::PositiveNumber);
    sa_scan->add_option("--grid", grid, "grid step");
    sa_scan->add_option("--refine", refine, "bisection tolerance");
    sa_scan->add_option("--jobs", jobs, "concurrent grid workers")->check(CLI::PositiveNumber);
    sa_scan->add_option("--csv", csv_path, "write per-point rows to this CSV file");
    CLI::App* sa_verify = sa->add_subcommand("verify", "closed-form solution residuals");
    sa_verify->add_option("--n", nval, "3 or 4")->required();
    sa_verify->add_option("--alpha", alpha, "angle")->required();
    CLI::App* sa_cx = sa->add_subcommand("counterexample", "alpha = pi/2 infeasibility sweep");
    sa_cx->add_option("--max-n", max_n, "largest copy count")->required()->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help/--version
        app.exit(e);
        return kExitUsage;
    }

    Report rep(args);
    try {
        const double pi = 3.14159265358979323846;
        if (pi_units) alpha *= pi;
        if (fa->parsed()) return run_field_angle(rep, matrix_file, tol);
        if (od->parsed())
            return run_onedim(rep, matrix_file, have_copies ? std::optional<int>(copies) : std::nullopt);
        if (he->parsed()) return run_hermitian(rep, generator_files);
        if (ck->parsed()) return run_check(rep, generator_files, max_copies);
        if (sy->parsed()) return run_synthesize(rep, generator_files, out_dir);
        if (si->parsed()) return run_simulate(rep, pair_dir, copies, witness_file);
        if (sa->parsed()) {
            if (sa_solve->parsed()) return run_salpha_solve(rep, nval, alpha);
            if (sa_scan->parsed()) return run_salpha_scan(rep, nval, grid, refine, jobs, csv_path);
            if (sa_verify->parsed()) return run_salpha_verify(rep, nval, alpha);
            if (sa_cx->parsed()) return run_salpha_counterexample(rep, max_n);
        }
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const CliFailure& e) {
        std::cerr << e.message << "\n";
        return e.code;
    } catch (const paradis::Error& e) {
        std::cerr << paradis::error_kind_name(e.kind()) << ": " << e.what() << "\n";
        return map_error(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
}
