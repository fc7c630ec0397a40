// redop: command-line front end. Structured output is JSON on stdout,
// human-readable summaries go to stderr.
//
// Exit codes: 0 success/pass, 1 verification failure, 2 usage or input error,
// 3 inconclusive (exclusion budget exceeded).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "redop/acceptance.hpp"
#include "redop/burgers.hpp"
#include "redop/heat.hpp"
#include "redop/io/json.hpp"
#include "redop/reduction.hpp"
#include "redop/symmetry.hpp"
#include "redop/verify.hpp"

namespace {

using redop::io::Json;
using namespace redop;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

int exit_code(Status s)
{
    switch (s) {
        case Status::Pass: return kExitPass;
        case Status::Fail: return kExitFail;
        case Status::Inconclusive: return kExitInconclusive;
    }
    return kExitFail;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

void summary(const std::string& what, const VerificationReport& r)
{
    std::cerr << what << ": " << status_name(r.status) << ", max |residual| " << r.max_abs_residual
              << (r.symbolic_zero ? " (exact zero)" : "") << ", excluded " << r.excluded_count << "/"
              << r.total_count << ", tolerance " << r.tolerance << '\n';
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> out;
    for (auto part : redop::detail::split_top_level(s, ',')) out.emplace_back(redop::detail::trim(part));
    return out;
}

template <std::size_t N>
std::array<Rational, N> rationals(const std::string& text, const char* flag)
{
    const auto parts = split(text);
    if (parts.size() != N)
        throw UsageError(std::string(flag) + " expects " + std::to_string(N) + " comma-separated rationals");
    std::array<Rational, N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = parse_rational(parts[i]);
    return out;
}

double parse_real(const std::string& text, const char* what)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(d)) throw std::invalid_argument(text);
        return d;
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": not a finite number: '" + text + "'");
    }
}

Json read_json(const std::string& path)
{
    std::string text;
    if (path.empty() || path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError(std::string("malformed JSON input: ") + e.what());
    }
}

/// Grid and tolerance flags shared by the verifying subcommands.
struct Common {
    std::string grid;
    std::optional<double> tol;
    std::optional<double> exclusion_threshold;

    void attach(CLI::App* app)
    {
        app->add_option("--grid", grid, "tmin,tmax,nt,xmin,xmax,nx");
        app->add_option("--exclusion-threshold", exclusion_threshold,
                        "denominator magnitude below which a point is skipped");
        app->add_option("--tol", tol, "tolerance (default per check, or $REDOP_TOL)");
    }

    [[nodiscard]] Grid make_grid(TimeDomain domain) const
    {
        Grid g = Grid::standard(domain);
        if (!grid.empty()) {
            const auto p = split(grid);
            if (p.size() != 6) throw UsageError("--grid expects tmin,tmax,nt,xmin,xmax,nx");
            const auto count = [](const std::string& s) {
                const double d = parse_real(s, "--grid");
                if (d != std::floor(d) || d < 2 || d > 1e6) throw UsageError("--grid point counts must be integers >= 2");
                return static_cast<int>(d);
            };
            g.t = Range{parse_real(p[0], "--grid"), parse_real(p[1], "--grid"), count(p[2])};
            g.x = Range{parse_real(p[3], "--grid"), parse_real(p[4], "--grid"), count(p[5])};
        }
        if (exclusion_threshold) g.exclusion_threshold = *exclusion_threshold;
        g.validate();
        return g;
    }

    [[nodiscard]] Grid3D make_grid3(TimeDomain domain) const
    {
        Grid3D g = Grid3D::standard(domain);
        g.base = make_grid(domain);
        return g;
    }

    /// --tol, then $REDOP_TOL, then the check's own default.
    [[nodiscard]] double tolerance(double fallback) const
    {
        double t = fallback;
        if (const char* env = std::getenv("REDOP_TOL"); env && *env) t = parse_real(env, "REDOP_TOL");
        if (tol) t = *tol;
        if (!(t > 0.0)) throw UsageError("tolerance must be positive");
        return t;
    }
};

const char* domain_name(TimeDomain d) { return d == TimeDomain::Negative ? "t<0" : "t>0"; }

TimeDomain domain_of(const Json& j)
{
    return j.is_object() && j.value("domain", std::string("t>0")) == "t<0" ? TimeDomain::Negative
                                                                          : TimeDomain::Positive;
}

BurgersSolution solution_input(const std::string& expr, const std::string& file)
{
    if (!expr.empty() && !file.empty()) throw UsageError("give either --expr or --solution, not both");
    if (!expr.empty()) {
        BurgersSolution s;
        s.u = parse(expr);
        if (depends_on(s.u, Var::u)) throw UsageError("a solution expression depends on t and x only");
        s.provenance.source = "user";
        return s;
    }
    return io::solution_from_json(read_json(file));
}

Json with_report(Json j, const char* key, const VerificationReport& r)
{
    j[key] = io::to_json(r);
    return j;
}

// Subcommand bodies. Each returns the process exit code.

int cmd_catalog(const std::string& what)
{
    if (what != "heat") throw UsageError("catalog: only 'heat' is available");
    Json out = Json::array();
    for (const auto& h : heat_catalog()) out.push_back(io::to_json(h));
    emit(out);
    std::cerr << out.size() << " heat solutions\n";
    return kExitPass;
}

int cmd_gen_heat(const std::string& family, int n, const std::string& a, const std::string& phase,
                 const std::string& label, const Common& common)
{
    HeatSolution h;
    if (!label.empty()) {
        if (!family.empty()) throw UsageError("gen-heat: give either --label or --family");
        h = heat_from_text(label);
    } else if (family == "poly") {
        if (n < 0) throw UsageError("gen-heat --family poly needs --n");
        h = heat_polynomial(n);
    } else if (family == "exp") {
        h = exp_solution(parse_rational(a));
    } else if (family == "trig") {
        h = trig_solution(parse_rational(a), parse_rational(phase));
    } else if (family == "kernel") {
        h = heat_kernel();
    } else {
        throw UsageError("gen-heat: --family must be poly, exp, trig or kernel (or use --label)");
    }
    const VerificationReport r = validate_heat(h.v, common.make_grid(h.domain), common.tolerance(kHeatTolerance));
    summary("heat residual of " + h.label, r);
    emit(with_report(io::to_json(h), "residual", r));
    return exit_code(r.status);
}

int finish_solution(const BurgersSolution& s, const Common& common)
{
    const VerificationReport r =
        burgers_residual(s.u, common.make_grid(s.domain), common.tolerance(kBurgersTolerance));
    summary("Burgers residual of u = " + to_string(s.u), r);
    emit(with_report(io::to_json(s), "residual", r));
    return exit_code(r.status);
}

int cmd_hopf_cole(const std::string& heat, const Common& common)
{
    return finish_solution(hopf_cole(heat_from_text(heat)), common);
}

int cmd_invariant_family(const std::string& triple, const std::string& c, const Common& common)
{
    return finish_solution(invariant_family(make_triple(triple), rationals<3>(c, "--c")), common);
}

int cmd_make_operator(const std::string& cls, const std::string& triple, const std::string& c,
                      const std::string& phi)
{
    const OperatorClass k = class_from_name(cls);
    const auto forbid = [&](bool given, const char* flag) {
        if (given) throw UsageError(std::string(flag) + " does not apply to --class " + cls);
    };
    Json out;
    switch (k) {
        case OperatorClass::NoGo: {
            forbid(!c.empty(), "--c");
            forbid(!phi.empty(), "--phi");
            if (triple.empty()) throw UsageError("--class nogo needs --heat-triple");
            const HeatTriple tr = make_triple(triple);
            out = io::to_json(assemble_nogo(nogo_from_heat_triple(tr)));
            out["heat_triple"] = split(triple);
            out["domain"] = domain_name(tr.domain);
            break;
        }
        case OperatorClass::LieCase:
            forbid(!triple.empty(), "--heat-triple");
            forbid(!phi.empty(), "--phi");
            if (c.empty()) throw UsageError("--class lie needs --c c0,c1,c2,c3,c4");
            out = io::to_json(lie_case_operator(rationals<5>(c, "--c")));
            break;
        case OperatorClass::Singular:
            forbid(!triple.empty(), "--heat-triple");
            forbid(!c.empty(), "--c");
            if (phi.empty()) throw UsageError("--class singular needs --phi");
            out = io::to_json(singular_operator(parse(phi)));
            break;
        case OperatorClass::Trivial:
            forbid(!triple.empty(), "--heat-triple");
            forbid(!c.empty(), "--c");
            forbid(!phi.empty(), "--phi");
            out = io::to_json(trivial_operator());
            break;
    }
    emit(out);
    std::cerr << cls << " operator: tau = " << out["expression_strings"]["tau"].get<std::string>()
              << ", xi = " << out["expression_strings"]["xi"].get<std::string>()
              << ", eta = " << out["expression_strings"]["eta"].get<std::string>() << '\n';
    return kExitPass;
}

int cmd_verify_operator(const std::string& op_path, const std::string& against, const Common& common)
{
    if (op_path.empty() && !against.empty() && against == "-")
        throw UsageError("only one of --op and --against-solution can come from stdin");
    const Json j = read_json(op_path);
    const ReductionOperator q = io::operator_from_json(j);
    const TimeDomain domain = domain_of(j);
    VerificationReport determining;
    if (q.cls == OperatorClass::NoGo) {
        NogoCoefficients k{q.xi0, q.eta_coeffs[1], q.eta_coeffs[0]};
        determining = nogo_determining_residual(k, common.make_grid(domain), common.tolerance(1e-8));
    } else if (q.cls == OperatorClass::Singular) {
        determining =
            singular_determining_residual(*q.eta_general, common.make_grid3(domain), common.tolerance(kDeterminingTolerance));
    } else {
        determining = general_determining_residual(q, common.make_grid3(domain), common.tolerance(kDeterminingTolerance));
    }
    summary(std::string(class_name(q.cls)) + " determining system", determining);
    Json out{{"class", class_name(q.cls)}, {"determining", io::to_json(determining)}};
    std::vector<VerificationReport> all{determining};
    if (!against.empty()) {
        const BurgersSolution s = io::solution_from_json(read_json(against));
        const Grid g = common.make_grid(s.domain);
        const VerificationReport surface = invariant_surface_residual(q, s.u, g, common.tolerance(1e-8));
        const VerificationReport burgers = burgers_residual(s.u, g, common.tolerance(kBurgersTolerance));
        summary("invariant surface condition", surface);
        summary("Burgers residual", burgers);
        out["invariant_surface"] = io::to_json(surface);
        out["burgers"] = io::to_json(burgers);
        all.push_back(surface);
        all.push_back(burgers);
    }
    Status worst = Status::Pass;
    for (const auto& r : all)
        if (r.status == Status::Inconclusive || (r.status == Status::Fail && worst == Status::Pass)) worst = r.status;
    out["status"] = status_name(worst);
    out["passed"] = worst == Status::Pass;
    emit(out);
    return exit_code(worst);
}

int cmd_verify_solution(const std::string& expr, const std::string& file, const Common& common)
{
    const BurgersSolution s = solution_input(expr, file);
    const VerificationReport r =
        burgers_residual(s.u, common.make_grid(s.domain), common.tolerance(kBurgersTolerance));
    summary("Burgers residual of u = " + to_string(s.u), r);
    emit(io::to_json(r));
    return exit_code(r.status);
}

int cmd_commutator_table()
{
    const auto table = commutator_table();
    Json rows = Json::array();
    for (int i = 0; i < 5; ++i) {
        Json row = Json::array();
        for (int j = 0; j < 5; ++j) row.push_back(describe(table[i][j]));
        rows.push_back(row);
    }
    emit(Json{{"basis", kGBNames}, {"table", rows}});
    std::ostringstream s;
    s << "[row, column]";
    for (const char* n : kGBNames) s << '\t' << n;
    s << '\n';
    for (int i = 0; i < 5; ++i) {
        s << kGBNames[i];
        for (int j = 0; j < 5; ++j) s << '\t' << describe(table[i][j]);
        s << '\n';
    }
    std::cerr << s.str();
    return kExitPass;
}

int cmd_transform(const std::string& params, const std::string& file, const Common& common)
{
    const auto p = rationals<7>(params, "--params");
    const PointTransformation g{p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
    g.validate();
    const BurgersSolution image = apply_point_transformation(g, io::solution_from_json(read_json(file)));
    const VerificationReport r =
        burgers_residual(image.u, common.make_grid(image.domain), common.tolerance(kBurgersTolerance));
    summary("Burgers residual of the image u = " + to_string(image.u), r);
    Json out = with_report(io::to_json(image), "residual", r);
    out["transformation"] = io::to_json(g);
    emit(out);
    return exit_code(r.status);
}

int cmd_prop2(const std::string& heat, const std::string& element, const std::string& mu, const Common& common)
{
    const HeatSolution v = heat_from_text(heat);
    GBElement e;
    e.c = rationals<5>(element, "--element");
    const Rational m = parse_rational(mu);
    const Prop2Report r = check_proposition2(v.v, e, m, common.make_grid(v.domain));
    summary("heat side", r.heat_side);
    summary("Burgers side", r.burgers_side);
    std::cerr << "verdict: " << verdict_name(r.verdict) << '\n';
    Json out = io::to_json(r);
    out["element"] = io::to_json(e);
    out["heat_operator"] = io::to_json(corresponding_heat_operator(e, m));
    emit(out);
    if (r.verdict == Prop2Verdict::Inconclusive) return kExitInconclusive;
    return r.consistent() ? kExitPass : kExitFail;
}

int cmd_export(const std::string& expr, const std::string& file, const std::string& out_path, const Common& common)
{
    const BurgersSolution s = solution_input(expr, file);
    const Grid g = common.make_grid(s.domain);
    const CompiledExpr u(s.u);
    std::ostringstream csv;
    csv << "t,x,u\r\n";
    std::size_t rows = 0;
    std::size_t excluded = 0;
    char buf[128];
    redop::detail::for_each_point(g, [&](const Point& p) {
        const EvalOutcome r = u.run(p, g.exclusion_threshold);
        if (r.status != EvalStatus::Ok) {
            ++excluded;
            return;
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\r\n", p.t, p.x, r.value);
        csv << buf;
        ++rows;
    });
    const double fraction = static_cast<double>(excluded) / static_cast<double>(g.size());
    Json summary_json{{"path", out_path}, {"rows", rows}, {"excluded_count", excluded}, {"total_count", g.size()}};
    if (rows == 0 || fraction > g.exclusion_budget) {
        summary_json["status"] = "inconclusive";
        emit(summary_json);
        std::cerr << "export: " << excluded << "/" << g.size() << " points excluded; no file written\n";
        return kExitInconclusive;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out_path + "'");
    f << csv.str();
    f.close();
    if (!f) throw UsageError("write to '" + out_path + "' failed");
    summary_json["status"] = "pass";
    emit(summary_json);
    std::cerr << "wrote " << rows << " rows to " << out_path << '\n';
    return kExitPass;
}

int cmd_selftest(std::uint64_t seed, bool verbose)
{
    acceptance::Options opt;
    opt.seed = seed;
    if (verbose) opt.log = &std::cerr;
    acceptance::Suite suite(opt);
    Json criteria = Json::array();
    bool all = true;
    for (const auto& o : suite.run()) {
        std::cerr << acceptance::format(o) << '\n';
        criteria.push_back(
            Json{{"id", o.id}, {"name", o.name}, {"passed", o.passed}, {"detail", o.detail}, {"seconds", o.seconds}});
        all = all && o.passed;
    }
    emit(Json{{"criteria", criteria}, {"passed", all}});
    return all ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Reduction operators of the Burgers equation u_t + u u_x + u_xx = 0"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand help for every subcommand");

    Common common;

    auto* catalog = app.add_subcommand("catalog", "list catalog entries (heat)");
    std::string catalog_what;
    catalog->add_option("what", catalog_what, "catalog to list")->required();

    auto* gen_heat = app.add_subcommand("gen-heat", "build and validate one heat-equation solution");
    std::string family, a = "1", phase = "0", label;
    int n = -1;
    gen_heat->add_option("--family", family, "poly, exp, trig or kernel");
    gen_heat->add_option("--n", n, "degree of the heat polynomial");
    gen_heat->add_option("--a", a, "rate for exp/trig");
    gen_heat->add_option("--phase", phase, "phase for trig");
    gen_heat->add_option("--label", label, "catalog label or expression");
    common.attach(gen_heat);

    auto* hc = app.add_subcommand("hopf-cole", "map a heat solution to u = 2 v_x / v");
    std::string heat;
    hc->add_option("--heat", heat, "catalog label or expression")->required();
    common.attach(hc);

    auto* family_cmd = app.add_subcommand("invariant-family", "solution family of a heat triple");
    std::string triple, constants;
    family_cmd->add_option("--triple", triple, "three comma-separated labels")->required();
    family_cmd->add_option("--c", constants, "c1,c2,c3")->required();
    common.attach(family_cmd);

    auto* make_op = app.add_subcommand("make-operator", "construct a reduction operator");
    std::string op_class, op_triple, op_c, op_phi;
    make_op->add_option("--class", op_class, "nogo, lie, singular or trivial")->required();
    make_op->add_option("--heat-triple", op_triple, "labels for --class nogo");
    make_op->add_option("--c", op_c, "c0,...,c4 for --class lie");
    make_op->add_option("--phi", op_phi, "Phi(t,x,u) for --class singular");

    auto* verify_op = app.add_subcommand("verify-operator", "check an operator's determining equations");
    std::string op_path, against;
    verify_op->add_option("--op", op_path, "operator JSON file (default: stdin)");
    verify_op->add_option("--against-solution", against, "solution JSON file to test for invariance");
    common.attach(verify_op);

    auto* verify_sol = app.add_subcommand("verify-solution", "Burgers residual of a solution");
    std::string sol_expr, sol_file;
    verify_sol->add_option("--expr", sol_expr, "u(t,x)");
    verify_sol->add_option("--solution", sol_file, "solution JSON file (default: stdin)");
    common.attach(verify_sol);

    auto* lie = app.add_subcommand("lie", "the Lie algebra g^B and its group");
    lie->require_subcommand(1);
    auto* table = lie->add_subcommand("commutator-table", "print the 5x5 bracket table");
    auto* transform = lie->add_subcommand("transform", "apply a point transformation to a solution");
    std::string params, transform_file;
    transform->add_option("--params", params, "alpha,beta,gamma,delta,kappa,mu0,mu1")->required();
    transform->add_option("--solution", transform_file, "solution JSON file (default: stdin)");
    common.attach(transform);
    auto* prop2 = lie->add_subcommand("prop2-check", "compare invariance of v and u = 2 v_x / v");
    std::string p2_heat, element, mu = "0";
    prop2->add_option("--heat", p2_heat, "catalog label or expression")->required();
    prop2->add_option("--element", element, "c0,c1,c2,c3,c4")->required();
    prop2->add_option("--mu", mu, "identity coefficient of the heat operator");
    common.attach(prop2);

    auto* export_cmd = app.add_subcommand("export", "sample a solution to CSV");
    std::string exp_expr, exp_file, out_path;
    export_cmd->add_option("--expr", exp_expr, "u(t,x)");
    export_cmd->add_option("--solution", exp_file, "solution JSON file (default: stdin)");
    export_cmd->add_option("--out", out_path, "CSV path")->required();
    common.attach(export_cmd);

    auto* selftest = app.add_subcommand("selftest", "run the acceptance suite");
    bool verbose = false;
    std::uint64_t selftest_seed = acceptance::Options{}.seed;
    selftest->add_flag("--verbose", verbose, "print every check");
    selftest->add_option("--seed", selftest_seed, "seed for the random constant vectors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*catalog) return cmd_catalog(catalog_what);
        if (*gen_heat) return cmd_gen_heat(family, n, a, phase, label, common);
        if (*hc) return cmd_hopf_cole(heat, common);
        if (*family_cmd) return cmd_invariant_family(triple, constants, common);
        if (*make_op) return cmd_make_operator(op_class, op_triple, op_c, op_phi);
        if (*verify_op) return cmd_verify_operator(op_path, against, common);
        if (*verify_sol) return cmd_verify_solution(sol_expr, sol_file, common);
        if (*table) return cmd_commutator_table();
        if (*transform) return cmd_transform(params, transform_file, common);
        if (*prop2) return cmd_prop2(p2_heat, element, mu, common);
        if (*export_cmd) return cmd_export(exp_expr, exp_file, out_path, common);
        if (*selftest) return cmd_selftest(selftest_seed, verbose);
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency failure: " << e.what() << '\n';
        return kExitFail;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Json::exception& e) {
        std::cerr << "error: bad JSON input: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
