// bvft: command-line front end for transforms, inversion, identity suites
// and the acceptance self-check.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bvft/bvft.hpp"

namespace
{

using json = nlohmann::json;
using bvft::cplx;

constexpr int exit_pass = 0;
constexpr int exit_check_failure = 1;
constexpr int exit_usage = 2;

/// Raised for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputSpec {
    std::string catalog;
    std::string define_file;
    std::string expr;
};

struct Common {
    InputSpec input;
    std::string out;
    std::string format = "csv";
    double tol = 1e-6;
};

double default_tol()
{
    if (const char* env = std::getenv("BVFT_TOL")) {
        try {
            std::size_t used = 0;
            const double v = std::stod(env, &used);
            if (used == std::string(env).size() && v > 0.0)
                return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("BVFT_TOL must be a positive number, got '") + env + "'");
    }
    return 1e-6;
}

/// The function to work on, with its catalog entry when named.
struct Resolved {
    bvft::PiecewiseFunction f;
    std::optional<bvft::CatalogEntry> entry;
    std::string label;
};

Resolved resolve(const InputSpec& in)
{
    const int given = !in.catalog.empty() + !in.define_file.empty() + !in.expr.empty();
    if (given != 1)
        throw UsageError("give exactly one of --catalog, --define, --expr");
    if (!in.catalog.empty()) {
        bvft::CatalogEntry e = bvft::catalog_entry(in.catalog);
        bvft::PiecewiseFunction f = e.function;
        return {std::move(f), std::move(e), in.catalog};
    }
    if (!in.define_file.empty()) {
        std::ifstream is(in.define_file);
        if (!is)
            throw UsageError("cannot read definition file '" + in.define_file + "'");
        std::stringstream ss;
        ss << is.rdbuf();
        return {bvft::parse_function(ss.str()), std::nullopt, in.define_file};
    }
    return {bvft::parse_function(in.expr), std::nullopt, "expr"};
}

double parse_number(const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError("not a number: '" + text + "'");
    return v;
}

/// "a,b,c" or "lo:hi:n" (n evenly spaced points, ends included).
std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');)
            parts.push_back(p);
        if (parts.size() != 3)
            throw UsageError("range must be lo:hi:n, got '" + text + "'");
        const double lo = parse_number(parts[0]), hi = parse_number(parts[1]);
        const double n = parse_number(parts[2]);
        if (n < 1 || n != std::floor(n) || n > 1e6)
            throw UsageError("range count must be a positive integer");
        const int count = static_cast<int>(n);
        for (int k = 0; k < count; ++k)
            out.push_back(count == 1 ? lo : lo + (hi - lo) * k / (count - 1));
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');)
        out.push_back(parse_number(p));
    if (out.empty())
        throw UsageError("empty list");
    return out;
}

/// Writes to --out when given, else stdout.
class Sink
{
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw UsageError("cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string fmt17(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

/// One output row: input, value, error estimate, optional expectation.
struct Row {
    double input;
    cplx value;
    double err;
    std::optional<cplx> expected;
    std::optional<bool> pass;
};

void emit_rows(std::ostream& os, const std::string& format, const std::vector<Row>& rows)
{
    if (format == "json") {
        json arr = json::array();
        for (const Row& r : rows) {
            json j{{"input", r.input}, {"re", r.value.real()}, {"im", r.value.imag()}, {"err_estimate", r.err}};
            j["expected_re"] = r.expected ? json(r.expected->real()) : json(nullptr);
            j["expected_im"] = r.expected ? json(r.expected->imag()) : json(nullptr);
            j["pass"] = r.pass ? json(*r.pass) : json(nullptr);
            arr.push_back(j);
        }
        os << arr.dump(2) << '\n';
        return;
    }
    os << "input,re,im,err_estimate,expected_re,expected_im,pass\n";
    for (const Row& r : rows) {
        os << fmt17(r.input) << ',' << fmt17(r.value.real()) << ',' << fmt17(r.value.imag()) << ',' << fmt17(r.err)
           << ',' << (r.expected ? fmt17(r.expected->real()) : "") << ','
           << (r.expected ? fmt17(r.expected->imag()) : "") << ',' << (r.pass ? (*r.pass ? "true" : "false") : "")
           << '\n';
    }
}

bool all_pass(const std::vector<Row>& rows)
{
    for (const Row& r : rows)
        if (r.pass && !*r.pass)
            return false;
    return true;
}

int cmd_transform(const Common& c, const std::string& grid)
{
    const Resolved in = resolve(c.input);
    const std::vector<double> ss = parse_grid(grid);
    // Non-decaying tails: transform the residual and fold in the 1/(is)^(k+1) terms.
    const bool decays = in.f.left_tail().decays() && in.f.right_tail().decays();
    std::vector<bvft::DistTerm> powers;
    std::optional<bvft::Transformer> tr;
    if (decays) {
        tr.emplace(in.f);
    } else {
        bvft::AsymptoteSplit split = in.f.subtract_asymptote();
        powers = bvft::asymptote_terms(split.added_back).second;
        tr.emplace(split.residual);
    }
    const double check_tol = in.entry ? in.entry->transform_tol : c.tol;
    std::vector<Row> rows;
    for (double s : ss) {
        if (!decays && s == 0.0)
            throw bvft::ZeroFrequencyError("s = 0 carries the delta terms; see the distrib command");
        Row r{s, {}, 0.0, std::nullopt, std::nullopt};
        const bvft::QuadResult q = (*tr)(s);
        r.value = q.value;
        r.err = q.abs_error;
        for (const bvft::DistTerm& t : powers)
            r.value += t.coeff / std::pow(cplx(0.0, s), t.order + 1);
        if (in.entry && in.entry->has_closed_form() && s != 0.0) {
            r.expected = in.entry->closed_form(s);
            r.pass = std::abs(r.value - *r.expected) <= check_tol;
        }
        rows.push_back(r);
    }
    Sink out(c.out);
    emit_rows(out.stream(), c.format, rows);
    return all_pass(rows) ? exit_pass : exit_check_failure;
}

int cmd_invert(const Common& c, const std::string& xlist, std::optional<double> check_tol)
{
    const Resolved in = resolve(c.input);
    const std::vector<double> xs = parse_grid(xlist);
    bvft::InvertOptions opt;
    opt.tol = c.tol;
    opt.strict = false;
    const auto reps = bvft::invert_many(in.f, xs, opt);
    std::vector<Row> rows;
    for (const bvft::InversionReport& rep : reps) {
        Row r{rep.x, rep.recovered, rep.error_estimate, std::nullopt, std::nullopt};
        double tol = check_tol.value_or(1e-4);
        std::optional<double> want = rep.target;
        if (in.entry)
            for (const bvft::TestPoint& p : in.entry->points)
                if (p.x == rep.x) {
                    want = p.expected;
                    if (!check_tol)
                        tol = p.tol;
                }
        if (want) {
            r.expected = *want;
            r.pass = std::abs(rep.recovered - *want) <= tol;
        }
        rows.push_back(r);
    }
    Sink out(c.out);
    emit_rows(out.stream(), c.format, rows);
    return all_pass(rows) ? exit_pass : exit_check_failure;
}

json report_json(const bvft::PropertyReport& r)
{
    json fails = json::array();
    for (const bvft::PropertyFailure& f : r.failures)
        fails.push_back({{"index", f.index},
                         {"description", f.description},
                         {"error", std::isnan(f.error) ? json(nullptr) : json(f.error)}});
    return {{"suite", r.name}, {"seed", r.seed},           {"cases", r.cases},      {"tolerance", r.tolerance},
            {"worst", r.worst}, {"passed", r.passed()}, {"failures", fails}};
}

int cmd_identity(const Common& c, const std::string& suite, unsigned seed, int cases)
{
    std::vector<bvft::PropertyReport> reps;
    const bool all = suite == "all";
    if (all || suite == "parts")
        reps.push_back(bvft::parts_suite(seed, cases > 0 ? cases : 200));
    if (all || suite == "product")
        reps.push_back(bvft::product_suite(seed, cases > 0 ? cases : 100));
    if (all || suite == "regulated")
        reps.push_back(bvft::regulated_suite(seed, cases > 0 ? cases : 100));
    json j{{"seed", seed}, {"suites", json::array()}};
    bool ok = true;
    for (const auto& r : reps) {
        j["suites"].push_back(report_json(r));
        ok = ok && r.passed();
    }
    j["passed"] = ok;
    Sink out(c.out);
    out.stream() << j.dump(2) << '\n';
    return ok ? exit_pass : exit_check_failure;
}

int cmd_distrib(const Common& c, const std::string& format)
{
    const Resolved in = resolve(c.input);
    const bvft::DistributionalFT ft = bvft::build(in.f);
    Sink out(c.out);
    std::ostream& os = out.stream();
    auto terms_json = [](const std::vector<bvft::DistTerm>& ts) {
        json arr = json::array();
        for (const bvft::DistTerm& t : ts)
            arr.push_back({{"order", t.order}, {"re", t.coeff.real()}, {"im", t.coeff.imag()}});
        return arr;
    };
    if (format == "json") {
        json j{{"input", in.label},
               {"render", ft.render()},
               {"function_part", ft.has_function_part()},
               {"delta_terms", terms_json(ft.delta_terms())},
               {"power_terms", terms_json(ft.power_terms())}};
        os << j.dump(2) << '\n';
    } else if (format == "csv") {
        os << "kind,order,re,im\n";
        for (const bvft::DistTerm& t : ft.delta_terms())
            os << "delta," << t.order << ',' << fmt17(t.coeff.real()) << ',' << fmt17(t.coeff.imag()) << '\n';
        for (const bvft::DistTerm& t : ft.power_terms())
            os << "power," << t.order << ',' << fmt17(t.coeff.real()) << ',' << fmt17(t.coeff.imag()) << '\n';
    } else {
        os << ft.render() << '\n';
    }
    return exit_pass;
}

int cmd_selfcheck(const Common& c, const std::string& format, const std::vector<int>& only, unsigned seed)
{
    std::vector<int> ids = only;
    if (ids.empty())
        for (int k = 1; k <= bvft::criterion_count; ++k)
            ids.push_back(k);
    for (int id : ids)
        if (id < 1 || id > bvft::criterion_count)
            throw UsageError("criterion numbers run from 1 to " + std::to_string(bvft::criterion_count));
    Sink out(c.out);
    std::ostream& os = out.stream();
    json arr = json::array();
    bool ok = true;
    for (int id : ids) {
        const bvft::CriterionResult r = bvft::run_criterion(id, seed);
        ok = ok && r.passed();
        if (format == "json")
            arr.push_back({{"id", r.id},
                           {"name", r.name},
                           {"passed", r.passed()},
                           {"checks_passed", r.checks_passed},
                           {"seconds", r.seconds},
                           {"budget_seconds", r.budget},
                           {"detail", r.detail}});
        else
            os << bvft::format_result(r) << std::endl;
    }
    if (format == "json")
        os << json{{"passed", ok}, {"criteria", arr}}.dump(2) << '\n';
    return ok ? exit_pass : exit_check_failure;
}

int cmd_gauge(const Common& c, unsigned seed)
{
    const bvft::GaugeReport rep = bvft::gauge_demo(seed);
    Sink out(c.out);
    std::ostream& os = out.stream();
    if (c.format == "json") {
        json rows = json::array();
        for (const bvft::GaugeRow& r : rep.rows)
            rows.push_back({{"delta", r.delta},
                            {"hs_min", r.hs_min},
                            {"hs_max", r.hs_max},
                            {"rs_min", r.rs_min},
                            {"rs_max", r.rs_max}});
        os << json{{"hs_value_re", rep.hs_value.real()}, {"hs_value_im", rep.hs_value.imag()}, {"rows", rows}}.dump(2)
           << '\n';
    } else {
        os << rep.to_csv();
    }
    // the demonstration holds when HS sums sit at the integral and RS sums keep a gap
    bool ok = rep.hs_value == cplx(0.5);
    for (const bvft::GaugeRow& r : rep.rows)
        ok = ok && r.hs_min == 0.5 && r.hs_max == 0.5 && r.rs_max - r.rs_min >= 0.4;
    return ok ? exit_pass : exit_check_failure;
}

void report_error(const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier transforms and pointwise inversion for functions of bounded variation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "bvft 1.0.0");

    Common common;
    double env_tol = 1e-6;
    try {
        env_tol = default_tol();
    } catch (const UsageError& e) {
        report_error("usage", e.what());
        return exit_usage;
    }
    common.tol = env_tol;

    auto add_input = [&](CLI::App* sub) {
        auto* grp = sub->add_option_group("input", "function to use");
        grp->add_option("--catalog", common.input.catalog, "catalog entry name");
        grp->add_option("--define", common.input.define_file, "file holding a function definition");
        grp->add_option("--expr", common.input.expr, "function definition text");
        grp->require_option(1);
    };
    auto add_common = [&](CLI::App* sub, bool with_format = true) {
        sub->add_option("--tol", common.tol, "numerical tolerance (default from BVFT_TOL, else 1e-6)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", common.out, "write output to this file");
        if (with_format)
            sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    };

    std::string grid, xlist, suite = "all", distrib_format, selfcheck_format = "text";
    unsigned seed = 20240601;
    int cases = 0;
    std::optional<double> check_tol;
    std::vector<int> only;

    auto* transform = app.add_subcommand("transform", "sample the transform on an s grid");
    add_input(transform);
    add_common(transform);
    transform->add_option("--s", grid, "LIST (a,b,c) or RANGE (lo:hi:n)")->required();

    auto* invert = app.add_subcommand("invert", "recover midpoint values at x");
    add_input(invert);
    add_common(invert);
    invert->add_option("--x", xlist, "LIST (a,b,c) or RANGE (lo:hi:n)")->required();
    invert->add_option("--check-tol", check_tol, "pass threshold (default: catalog point tolerance, else 1e-4)");

    auto* identity = app.add_subcommand("identity", "seeded property suites, JSON report");
    add_common(identity, false);
    identity->add_option("--suite", suite, "parts, product, regulated or all")
        ->check(CLI::IsMember({"parts", "product", "regulated", "all"}));
    identity->add_option("--seed", seed, "random seed");
    identity->add_option("--cases", cases, "cases per suite (default 200/100/100)")->check(CLI::PositiveNumber);

    auto* distrib = app.add_subcommand("distrib", "distributional transform");
    add_input(distrib);
    add_common(distrib, false);
    distrib->add_option("--format", distrib_format, "csv or json (default: rendered text)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* selfcheck = app.add_subcommand("selfcheck", "run the acceptance criteria");
    add_common(selfcheck, false);
    selfcheck->add_option("--format", selfcheck_format, "text or json (default text)")
        ->check(CLI::IsMember({"text", "json"}));
    selfcheck->add_option("--only", only, "criterion numbers to run")->delimiter(',');
    selfcheck->add_option("--seed", seed, "random seed");

    auto* gauge = app.add_subcommand("gauge-demo", "gauge sums against Riemann-Stieltjes sums for the jump step");
    add_common(gauge);
    gauge->add_option("--seed", seed, "random seed for tag sampling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*transform)
            return cmd_transform(common, grid);
        if (*invert)
            return cmd_invert(common, xlist, check_tol);
        if (*identity)
            return cmd_identity(common, suite, seed, cases);
        if (*distrib)
            return cmd_distrib(common, distrib_format);
        if (*selfcheck)
            return cmd_selfcheck(common, selfcheck_format, only, seed);
        if (*gauge)
            return cmd_gauge(common, seed);
    } catch (const UsageError& e) {
        report_error("usage", e.what());
        return exit_usage;
    } catch (const bvft::ParseError& e) {
        report_error("parse", e.what());
        return exit_usage;
    } catch (const bvft::ValidationError& e) {
        report_error("validation", e.what());
        return exit_usage;
    } catch (const bvft::ClassificationError& e) {
        report_error("classification", e.what());
        return exit_usage;
    } catch (const bvft::DomainError& e) {
        report_error("domain", e.what());
        return exit_usage;
    } catch (const bvft::ZeroFrequencyError& e) {
        report_error("domain", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        report_error("failure", e.what());
        return exit_check_failure;
    }
    return exit_usage;
}
