#include "htc/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "htc/cheeger.hpp"
#include "htc/constants.hpp"
#include "htc/errors.hpp"
#include "htc/experiments.hpp"
#include "htc/quantile_lab.hpp"
#include "htc/version.hpp"

namespace htc::cli {
namespace {

using nlohmann::json;

struct Common {
    std::string format = "json";
    std::string output;
    std::uint64_t seed = 1;
    unsigned threads = 0;

    json describe() const { return {{"format", format}, {"seed", seed}}; }
};

struct MeasureOpts {
    std::string name = "pareto";
    double lambda = 5.0;
    double t = 1.0;
    double ext_alpha = 0.8;
    double ext_cheeger = 1.0;
    double lo = 0.0;
    double hi = 1.0;

    MeasurePtr build() const {
        if (name == "pareto") return pareto_measure({lambda});
        if (name == "laplace") return laplace_measure(t);
        if (name == "extremal") return extremal_measure({ext_alpha, ext_cheeger});
        if (name == "uniform") return uniform_measure(lo, hi);
        throw DomainError("unknown measure '" + name + "' (expected pareto, laplace, extremal or uniform)");
    }
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct Document {
    std::string subcommand;
    json config = json::object();
    std::vector<BoundReport> reports;
    json data = json::object();
    std::optional<Table> table;  // CSV body for table-style commands
};

std::string cell(double x) { return format_double(x); }

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) throw DomainError("cannot parse p = '" + s + "'");
    return v;
}

std::vector<double> parse_bounds(const std::vector<std::string>& items) {
    std::vector<double> out;
    for (const auto& s : items) {
        if (s == "inf") {
            out.push_back(kInf);
        } else if (s == "-inf") {
            out.push_back(-kInf);
        } else {
            out.push_back(parse_p(s));
        }
    }
    return out;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "Report file (default: stdout or $" + std::string(kOutputDirEnv) + ")");
}

void add_seeded(CLI::App* sub, Common& c) {
    add_common(sub, c);
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores); results do not depend on it");
}

void add_measure(CLI::App* sub, MeasureOpts& m) {
    sub->add_option("--measure", m.name, "pareto | laplace | extremal | uniform")
        ->check(CLI::IsMember({"pareto", "laplace", "extremal", "uniform"}))
        ->capture_default_str();
    sub->add_option("--lambda", m.lambda, "Pareto shape")->capture_default_str();
    sub->add_option("--t", m.t, "Laplace rate")->capture_default_str();
    sub->add_option("--ext-alpha", m.ext_alpha, "Extremal law alpha")->capture_default_str();
    sub->add_option("--ext-cheeger", m.ext_cheeger, "Extremal law Cheeger value")->capture_default_str();
    sub->add_option("--lo", m.lo, "Uniform lower end")->capture_default_str();
    sub->add_option("--hi", m.hi, "Uniform upper end")->capture_default_str();
}

struct SamplingOpts {
    std::uint64_t samples = 100000;
    std::uint32_t batches = 32;
};

void add_sampling(CLI::App* sub, SamplingOpts& s) {
    sub->add_option("--samples", s.samples, "Monte Carlo sample count")->capture_default_str();
    sub->add_option("--batches", s.batches, "Batches for the batch-means interval")->capture_default_str();
}

SamplingConfig sampling(const SamplingOpts& s, const Common& c) {
    SamplingConfig out;
    out.samples = s.samples;
    out.batches = s.batches;
    out.seed = c.seed;
    out.threads = c.threads;
    return out;
}

struct CertificateOpts {
    std::optional<double> cheeger_alpha;
    std::optional<double> cheeger;
    std::optional<double> value;
    std::optional<double> poincare_alpha;
};

void add_certificate(CLI::App* sub, CertificateOpts& c) {
    sub->add_option("--cheeger-alpha", c.cheeger_alpha, "alpha of the alpha-Cheeger bound (Pareto default (lambda-1)/lambda)");
    sub->add_option("--cheeger", c.cheeger, "alpha-Cheeger value (default: the measure's closed form)");
    sub->add_option("--certificate", c.value, "Poincare constant supplied directly");
    sub->add_option("--poincare-alpha", c.poincare_alpha, "Exponent of the supplied Poincare constant");
}

std::pair<double, double> cheeger_pair(const CertificateOpts& c, const MeasureOpts& m, const Measure& mu) {
    double alpha = 0.0;
    if (c.cheeger_alpha) {
        alpha = *c.cheeger_alpha;
    } else if (m.name == "pareto") {
        alpha = (m.lambda - 1.0) / m.lambda;
    } else if (m.name == "extremal") {
        alpha = m.ext_alpha;
    } else {
        throw DomainError("--cheeger-alpha is required for measure " + m.name);
    }
    const auto I = c.cheeger ? c.cheeger : mu.analytic_cheeger(alpha);
    if (!I) {
        throw DomainError("no closed-form alpha-Cheeger value for " + m.name + " at alpha = " + format_double(alpha) +
                          "; pass --cheeger");
    }
    return {alpha, *I};
}

PoincareCertificate certificate(const CertificateOpts& c, const MeasureOpts& m, const Measure& mu, bool l1) {
    if (c.value) {
        if (!c.poincare_alpha) throw DomainError("--certificate needs --poincare-alpha");
        return {*c.poincare_alpha, *c.value, "supplied"};
    }
    const auto [alpha, I] = cheeger_pair(c, m, mu);
    return l1 ? l1_certificate(alpha, I) : l2_certificate(alpha, I);
}

void fill(Document& doc, ExperimentOutput out) {
    doc.reports = std::move(out.reports);
    doc.data = std::move(out.data);
}

// ---------------------------------------------------------------------------------------------

Verdict overall(const Document& doc) { return combine(doc.reports); }

void write_document(const Document& doc, const Common& common, std::ostream& os) {
    if (common.format == "json") {
        json j{{"tool", "htcheeger"},
               {"version", kVersion},
               {"subcommand", doc.subcommand},
               {"config", doc.config},
               {"verdict", std::string(to_string(overall(doc)))},
               {"reports", to_json(std::span<const BoundReport>(doc.reports))},
               {"data", doc.data}};
        os << j.dump(2) << '\n';
        return;
    }
    if (doc.table) {
        for (std::size_t i = 0; i < doc.table->header.size(); ++i) os << (i ? "," : "") << doc.table->header[i];
        os << '\n';
        for (const auto& row : doc.table->rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << '\n';
        }
        return;
    }
    write_csv(os, doc.reports);
}

int emit(Document doc, const Common& common, std::ostream& out, std::ostream& err) {
    doc.config["common"] = common.describe();
    std::string path = common.output;
    if (path.empty()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
            std::filesystem::create_directories(dir);
            path = (std::filesystem::path(dir) / (doc.subcommand + "." + common.format)).string();
        }
    }
    if (path.empty()) {
        write_document(doc, common, out);
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            err << "error: cannot open " << path << " for writing\n";
            return kUsage;
        }
        write_document(doc, common, f);
        err << "wrote " << path << '\n';
    }
    if (doc.reports.empty()) return kPass;
    const Verdict v = overall(doc);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : doc.reports) ++counts[static_cast<int>(r.verdict)];
    err << doc.subcommand << ": " << to_string(v) << " (" << counts[0] << " pass, " << counts[1] << " fail, "
        << counts[2] << " inconclusive)\n";
    switch (v) {
        case Verdict::pass: return kPass;
        case Verdict::fail: return kFail;
        case Verdict::inconclusive: return kInconclusive;
    }
    return kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks of variance and concentration bounds for heavy-tailed product measures",
                 "htcheeger"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", std::string(kVersion));

    Common common;
    MeasureOpts measure;
    SamplingOpts samp;
    CertificateOpts cert;

    // constants
    auto* constants = app.add_subcommand("constants", "Evaluate the bound constants");
    ConstantRequest creq;
    std::optional<double> c_lambda, c_beta, c_gamma;
    double c_alpha = 0.0;
    constants->add_option("--lambda", c_lambda, "Pareto shape (C(lambda), Cheeger bound)");
    constants->add_option("--alpha", c_alpha, "alpha of the alpha-Cheeger bound");
    constants->add_option("--beta", c_beta, "Moment exponent beta");
    constants->add_option("--gamma", c_gamma, "Lemma exponent gamma");
    constants->add_option("--cheeger", creq.cheeger, "alpha-Cheeger value")->capture_default_str();
    add_common(constants, common);

    // cheeger-estimate
    auto* cheeger = app.add_subcommand("cheeger-estimate", "Estimate the alpha-Cheeger constant of a 1-D measure");
    double ch_alpha = 0.8;
    std::string ch_method = "all";
    int ch_grid = 4096, ch_cells = 16;
    add_measure(cheeger, measure);
    cheeger->add_option("--alpha", ch_alpha, "Isoperimetric exponent")->capture_default_str();
    cheeger->add_option("--method", ch_method, "half-line | grid | analytic | all")
        ->check(CLI::IsMember({"half-line", "grid", "analytic", "all"}))
        ->capture_default_str();
    cheeger->add_option("--grid", ch_grid, "Half-line scan resolution")->capture_default_str();
    cheeger->add_option("--cells", ch_cells, "Brute-force cell count (2..24)")->capture_default_str();
    add_common(cheeger, common);

    // lemmas
    auto* lemmas = app.add_subcommand("lemmas", "Run the quantile lemma battery on the Pareto law");
    LemmaSuiteConfig lcfg;
    lemmas->add_option("--lambda", lcfg.lambda, "Pareto shape")->capture_default_str();
    lemmas->add_option("--alpha", lcfg.alpha, "alpha")->capture_default_str();
    lemmas->add_option("--cheeger", lcfg.cheeger, "alpha-Cheeger value (default: Pareto closed form)");
    lemmas->add_option("--ramps", lcfg.ramp_points, "Ramp locations m")->delimiter(',');
    add_common(lemmas, common);

    // estimate
    auto* estimate = app.add_subcommand("estimate", "Monte Carlo moments of a function under a product measure");
    std::string est_fn = "max";
    std::size_t est_n = 16;
    std::optional<double> est_q;
    std::vector<double> est_tails;
    bool est_center = false;
    add_measure(estimate, measure);
    estimate->add_option("--fn", est_fn, "Function spec, e.g. max, scaled_sum:p=1.5, activation:m=2")
        ->capture_default_str();
    estimate->add_option("--n", est_n, "Dimension")->capture_default_str();
    estimate->add_option("--grad-q", est_q, "Also estimate E|grad f|^q and sum_i E|d_i f|^q");
    estimate->add_option("--tails", est_tails, "Tail thresholds")->delimiter(',');
    estimate->add_flag("--center", est_center, "Centre tails at the empirical median");
    add_sampling(estimate, samp);
    add_seeded(estimate, common);

    // verify-pareto
    auto* vpareto = app.add_subcommand("verify-pareto", "Variance growth under Pareto product measures");
    ParetoTheoremConfig pcfg;
    vpareto->add_option("--lambda", pcfg.lambda, "Pareto shape")->capture_default_str();
    vpareto->add_option("--dims", pcfg.dims, "Dimensions")->delimiter(',');
    vpareto->add_option("--fn", pcfg.function, "Function spec")->capture_default_str();
    vpareto->add_option("--slope-tol", pcfg.slope_tolerance, "Slope tolerance")->capture_default_str();
    add_sampling(vpareto, samp);
    add_seeded(vpareto, common);

    // verify-product
    auto* vproduct = app.add_subcommand("verify-product", "Variance bound from an alpha-Poincare certificate");
    ProductTheoremConfig prcfg;
    add_measure(vproduct, measure);
    add_certificate(vproduct, cert);
    vproduct->add_option("--fn", prcfg.function, "Function spec")->capture_default_str();
    vproduct->add_option("--n", prcfg.n, "Dimension")->capture_default_str();
    add_sampling(vproduct, samp);
    add_seeded(vproduct, common);

    // verify-dp
    auto* vdp = app.add_subcommand("verify-dp", "Variance bound for d_p-Lipschitz functions");
    DpTheoremConfig dcfg;
    std::string dp_kind = "C1", dp_p = "2";
    dcfg.function = "scaled_sum:p=2";
    add_measure(vdp, measure);
    add_certificate(vdp, cert);
    vdp->add_option("--kind", dp_kind, "C1 | C2")->check(CLI::IsMember({"C1", "C2"}))->capture_default_str();
    vdp->add_option("--p", dp_p, "Metric exponent (inf allowed)")->capture_default_str();
    vdp->add_option("--fn", dcfg.function, "Function spec")->capture_default_str();
    vdp->add_option("--n", dcfg.n, "Dimension")->capture_default_str();
    add_sampling(vdp, samp);
    add_seeded(vdp, common);

    // verify-tails
    auto* vtails = app.add_subcommand("verify-tails", "Median-centred tails against the extremal or exponential law");
    TailBoundConfig tcfg;
    bool no_bonferroni = false;
    add_measure(vtails, measure);
    vtails->add_option("--alpha", tcfg.alpha, "alpha (1 = classical Cheeger)")->capture_default_str();
    vtails->add_option("--cheeger", tcfg.cheeger, "alpha-Cheeger value (default: closed form)");
    vtails->add_option("--thresholds", tcfg.thresholds, "Thresholds t")->delimiter(',');
    vtails->add_flag("--no-bonferroni", no_bonferroni, "Use 95% per threshold instead of a joint 95%");
    add_sampling(vtails, samp);
    add_seeded(vtails, common);

    // verify-isoperimetric
    auto* viso = app.add_subcommand("verify-isoperimetric", "Distance between boxes against their product measure");
    std::vector<std::string> a_lo{"1", "1"}, a_hi{"1.2", "1.2"}, b_lo{"3", "3"}, b_hi{"5", "5"};
    add_measure(viso, measure);
    add_certificate(viso, cert);
    viso->add_option("--a-lo", a_lo, "Lower corner of A")->delimiter(',');
    viso->add_option("--a-hi", a_hi, "Upper corner of A (inf allowed)")->delimiter(',');
    viso->add_option("--b-lo", b_lo, "Lower corner of B")->delimiter(',');
    viso->add_option("--b-hi", b_hi, "Upper corner of B (inf allowed)")->delimiter(',');
    add_common(viso, common);

    // verify-poincare-dp
    auto* vsharp = app.add_subcommand("verify-poincare-dp", "Tight d_p variance growth from a Poincare constant");
    SharpPoincareConfig scfg;
    MeasureOpts sharp_measure;
    sharp_measure.name = "laplace";
    add_measure(vsharp, sharp_measure);
    vsharp->add_option("--cp", scfg.poincare_constant, "Classical Poincare constant (default: closed form)");
    vsharp->add_option("--p", scfg.p, "Metric exponent in (1, 2]")->capture_default_str();
    vsharp->add_option("--dims", scfg.dims, "Dimensions")->delimiter(',');
    vsharp->add_option("--slope-tol", scfg.slope_tolerance, "Slope tolerance")->capture_default_str();
    add_sampling(vsharp, samp);
    add_seeded(vsharp, common);

    // verify-matrix
    auto* vmatrix = app.add_subcommand("verify-matrix", "Eigenvalue variance of Pareto symmetric matrices");
    RandomMatrixConfig mcfg;
    vmatrix->add_option("--lambda", mcfg.lambda, "Pareto shape")->capture_default_str();
    vmatrix->add_option("--n", mcfg.n, "Matrix order")->capture_default_str();
    vmatrix->add_option("--trials", mcfg.trials, "Matrices sampled")->capture_default_str();
    vmatrix->add_option("--index", mcfg.eigen_index, "Eigenvalue index (1 = largest)")->capture_default_str();
    vmatrix->add_option("--batches", mcfg.batches, "Batches for the interval")->capture_default_str();
    add_seeded(vmatrix, common);

    // tightness
    auto* tight = app.add_subcommand("tightness", "Closed-form ramp constructions under the Pareto law");
    TightnessConfig tgt;
    tight->add_option("--alpha", tgt.alpha, "alpha in (2/3, 1)")->capture_default_str();
    tight->add_option("--ms", tgt.ms, "Ramp locations m >= 1")->delimiter(',');
    tight->add_option("--alpha1", tgt.alpha1, "Exponent shown to diverge in the L2 ratio")->capture_default_str();
    tight->add_option("--alpha2", tgt.alpha2, "Exponent shown to diverge in the L1 ratio")->capture_default_str();
    add_common(tight, common);

    // suite
    auto* suite = app.add_subcommand("suite", "Run the full acceptance battery");
    add_seeded(suite, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return kUsage;
    }

    try {
        Document doc;
        auto* sub = app.get_subcommands().front();
        doc.subcommand = sub->get_name();

        if (sub == constants) {
            if (c_lambda) creq.lambda = c_lambda;
            creq.alpha = c_alpha;
            creq.beta = c_beta;
            creq.gamma = c_gamma;
            if (!creq.lambda && !(creq.alpha > 0.0)) throw DomainError("constants needs --lambda and/or --alpha");
            std::vector<std::string> skipped;
            const auto table = constants_table(creq, &skipped);
            if (table.empty()) {
                for (const auto& s : skipped) err << "error: " << s << '\n';
                return kUsage;
            }
            doc.config = to_json(creq);
            json rows = json::array();
            Table t{{"name", "value", "domain_note"}, {}};
            for (const auto& c : table) {
                rows.push_back(to_json(c));
                t.rows.push_back({c.name, cell(c.value), c.domain_note});
            }
            doc.data["constants"] = rows;
            doc.data["skipped"] = skipped;
            doc.table = std::move(t);
        } else if (sub == cheeger) {
            const auto mu = measure.build();
            doc.config = {{"measure", mu->describe()}, {"alpha", ch_alpha}, {"method", ch_method},
                          {"grid", ch_grid}, {"cells", ch_cells}};
            std::vector<CheegerEstimate> ests;
            if (ch_method == "half-line" || ch_method == "all") ests.push_back(half_line_scan(*mu, ch_alpha, ch_grid));
            if (ch_method == "grid" || ch_method == "all") ests.push_back(grid_bruteforce(*mu, ch_alpha, ch_cells));
            const auto exact = analytic_cheeger(*mu, ch_alpha);
            if (exact) ests.push_back(*exact);
            if (ch_method == "analytic" && !exact) {
                throw DomainError("no closed-form alpha-Cheeger value for " + mu->name() + " at alpha = " +
                                  format_double(ch_alpha));
            }
            Table t{{"method", "alpha", "value", "lower_bound", "resolution"}, {}};
            json rows = json::array();
            for (const auto& e : ests) {
                rows.push_back(to_json(e));
                t.rows.push_back({std::string(to_string(e.method)), cell(e.alpha), cell(e.value),
                                  e.lower_bound ? "true" : "false", std::to_string(e.grid_resolution)});
                if (exact && e.method != CheegerMethod::analytic) {
                    const double tol = e.method == CheegerMethod::half_line ? 1e-6 : 0.05 * exact->value;
                    doc.reports.push_back(make_exact_report(
                        "cheeger/" + std::string(to_string(e.method)) + "/" + mu->name(), e.value, exact->value,
                        to_json(e), tol, Comparison::equality));
                }
            }
            doc.data["estimates"] = rows;
            doc.table = std::move(t);
        } else if (sub == lemmas) {
            doc.config = {{"lambda", lcfg.lambda}, {"alpha", lcfg.alpha}, {"ramps", lcfg.ramp_points}};
            if (lcfg.cheeger) doc.config["cheeger"] = *lcfg.cheeger;
            doc.reports = run_lemma_suite(lcfg);
        } else if (sub == estimate) {
            const auto mu = measure.build();
            EstimationPlan plan;
            plan.measure = mu;
            plan.dimension = est_n;
            plan.function = make_function(est_fn, est_n);
            plan.samples = samp.samples;
            plan.seed = common.seed;
            plan.batches = samp.batches;
            plan.threads = common.threads;
            doc.config = plan.describe();
            const auto pass = run_pass(plan, est_q, est_q.has_value());
            Table t{{"quantity", "value", "ci_low", "ci_high"}, {}};
            const auto& v = pass.variance;
            t.rows.push_back({"mean", cell(v.mean), "", ""});
            t.rows.push_back({"variance", cell(v.variance), cell(v.ci_low), cell(v.ci_high)});
            t.rows.push_back({"batch_median_variance", cell(v.batch_median_variance), "", ""});
            doc.data["variance"] = to_json(v);
            if (pass.gradient) {
                const auto& g = *pass.gradient;
                const std::string q = format_double(g.q);
                t.rows.push_back({"grad_norm^" + q, cell(g.norm.value), cell(g.norm.ci_low), cell(g.norm.ci_high)});
                t.rows.push_back({"coordinate_sum^" + q, cell(g.coordinate_sum.value), cell(g.coordinate_sum.ci_low),
                                  cell(g.coordinate_sum.ci_high)});
                doc.data["gradient"] = to_json(g);
            }
            if (!est_tails.empty()) {
                const auto tails = estimate_tail(plan, est_tails, est_center);
                for (const auto& p : tails.points) {
                    t.rows.push_back({"tail@" + format_double(p.threshold), cell(p.probability), cell(p.ci_low),
                                      cell(p.ci_high)});
                }
                doc.data["tails"] = to_json(tails);
                doc.config["center"] = est_center;
            }
            doc.table = std::move(t);
        } else if (sub == vpareto) {
            pcfg.sampling = sampling(samp, common);
            doc.config = {{"lambda", pcfg.lambda}, {"dims", pcfg.dims}, {"function", pcfg.function},
                          {"slope_tolerance", pcfg.slope_tolerance}, {"sampling", pcfg.sampling.describe()}};
            fill(doc, verify_pareto_theorem(pcfg));
        } else if (sub == vproduct) {
            prcfg.measure = measure.build();
            prcfg.certificate = certificate(cert, measure, *prcfg.measure, false);
            prcfg.sampling = sampling(samp, common);
            doc.config = {{"measure", prcfg.measure->describe()}, {"certificate", prcfg.certificate->describe()},
                          {"function", prcfg.function}, {"n", prcfg.n}, {"sampling", prcfg.sampling.describe()}};
            fill(doc, verify_product_theorem(prcfg));
        } else if (sub == vdp) {
            dcfg.measure = measure.build();
            dcfg.kind = dp_kind == "C1" ? CertificateKind::c1 : CertificateKind::c2;
            dcfg.p = parse_p(dp_p);
            dcfg.certificate = certificate(cert, measure, *dcfg.measure, dcfg.kind == CertificateKind::c1);
            dcfg.sampling = sampling(samp, common);
            doc.config = {{"measure", dcfg.measure->describe()}, {"kind", dp_kind}, {"p", dp_p},
                          {"certificate", dcfg.certificate->describe()}, {"function", dcfg.function},
                          {"n", dcfg.n}, {"sampling", dcfg.sampling.describe()}};
            fill(doc, verify_dp_theorem(dcfg));
        } else if (sub == vtails) {
            tcfg.measure = measure.build();
            tcfg.bonferroni = !no_bonferroni;
            tcfg.sampling = sampling(samp, common);
            doc.config = {{"measure", tcfg.measure->describe()}, {"alpha", tcfg.alpha},
                          {"thresholds", tcfg.thresholds}, {"bonferroni", tcfg.bonferroni},
                          {"sampling", tcfg.sampling.describe()}};
            if (tcfg.cheeger) doc.config["cheeger"] = *tcfg.cheeger;
            fill(doc, verify_tail_bounds(tcfg));
        } else if (sub == viso) {
            IsoperimetricConfig icfg;
            icfg.measure = measure.build();
            icfg.certificate = certificate(cert, measure, *icfg.measure, false);
            icfg.a = Box{parse_bounds(a_lo), parse_bounds(a_hi)};
            icfg.b = Box{parse_bounds(b_lo), parse_bounds(b_hi)};
            if (icfg.a.lo.size() != icfg.a.hi.size() || icfg.b.lo.size() != icfg.b.hi.size()) {
                throw DomainError("box corners must have the same number of coordinates");
            }
            doc.config = {{"measure", icfg.measure->describe()}, {"certificate", icfg.certificate->describe()},
                          {"a_lo", a_lo}, {"a_hi", a_hi}, {"b_lo", b_lo}, {"b_hi", b_hi}};
            fill(doc, verify_isoperimetric(icfg));
        } else if (sub == vsharp) {
            scfg.measure = sharp_measure.build();
            scfg.sampling = sampling(samp, common);
            doc.config = {{"measure", scfg.measure->describe()}, {"p", scfg.p}, {"dims", scfg.dims},
                          {"slope_tolerance", scfg.slope_tolerance}, {"sampling", scfg.sampling.describe()}};
            if (scfg.poincare_constant) doc.config["poincare_constant"] = *scfg.poincare_constant;
            fill(doc, verify_sharp_poincare_dp(scfg));
        } else if (sub == vmatrix) {
            mcfg.seed = common.seed;
            mcfg.threads = common.threads;
            doc.config = {{"lambda", mcfg.lambda}, {"n", mcfg.n}, {"trials", mcfg.trials},
                          {"eigen_index", mcfg.eigen_index}, {"batches", mcfg.batches}};
            fill(doc, verify_random_matrix(mcfg));
        } else if (sub == tight) {
            doc.config = {{"alpha", tgt.alpha}, {"ms", tgt.ms}, {"alpha1", tgt.alpha1}, {"alpha2", tgt.alpha2}};
            fill(doc, tightness_report(tgt));
        } else if (sub == suite) {
            const auto results = run_suite(acceptance_jobs(), common.seed, common.threads);
            doc.config = {{"master_seed", common.seed}};
            json jobs = json::array();
            for (const auto& r : results) {
                jobs.push_back({{"name", r.name},
                                {"seed", r.seed},
                                {"verdict", std::string(to_string(r.output.verdict()))},
                                {"report_count", r.output.reports.size()},
                                {"data", r.output.data}});
                for (const auto& rep : r.output.reports) doc.reports.push_back(rep);
            }
            doc.data["jobs"] = std::move(jobs);
        }
        return emit(std::move(doc), common, out, err);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace htc::cli
