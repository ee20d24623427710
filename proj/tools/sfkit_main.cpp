// Command-line surface: resolution combinatorics, stability certification,
// representation checks and the ALE metric verification reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfkit/reports.hpp"

namespace {

using sfkit::json;

struct GlobalOpts {
    std::string format = "text";
    double tol = 1e-3;
    unsigned seed = 0;
    std::string out_path;
};

void emit(const json& report, const GlobalOpts& opts) {
    std::string text;
    if (opts.format == "json")
        text = report.dump(2) + "\n";
    else if (opts.format == "csv")
        text = sfkit::reports::to_csv(report);
    else
        text = sfkit::reports::to_text(report);
    if (opts.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(opts.out_path);
        if (!os) throw std::runtime_error("cannot open output file " + opts.out_path);
        os << text;
    }
}

int finish(const json& report, const GlobalOpts& opts) {
    emit(report, opts);
    return report.value("pass", true) ? 0 : 1;
}

json load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config file " + path);
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    try {
        return json::parse(content);
    } catch (const json::parse_error& err) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < err.byte && i < content.size(); ++i) {
            if (content[i] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw std::runtime_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                 ": " + err.what());
    }
}

std::vector<double> parse_moments(const std::string& csv) {
    std::vector<double> out;
    std::string token;
    std::istringstream is(csv);
    while (std::getline(is, token, ',')) out.push_back(std::stod(token));
    return out;
}

sfkit::ALEData make_ale_data(long long p, long long q, const std::string& moments_csv) {
    if (p == 0 && q == 1) {
        if (moments_csv.empty()) return sfkit::ale_data_burns({1.0});
        return sfkit::ale_data_burns(parse_moments(moments_csv));
    }
    sfkit::ReducedFraction f(p, q);
    if (moments_csv.empty()) return sfkit::ale_data(f, sfkit::default_moments(f));
    return sfkit::ale_data(f, parse_moments(moments_csv));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hirzebruch-jung resolution, parabolic stability and ALE metric verification"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    GlobalOpts opts;
    app.add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    app.add_option("--tol", opts.tol, "tolerance override for verification commands");
    app.add_option("--seed", opts.seed, "seed for randomized cross-checks");
    app.add_option("--out", opts.out_path, "write the report to a file instead of stdout");

    long long p = 0, q = 0;
    std::string config_path, moments_csv, a_sweep = "20,40,80";
    double r_min = 10.0, r_max = 100.0;
    std::size_t decay_samples = 12;
    std::size_t trials = 1000;
    bool cross_check = false;

    auto add_pq = [&](CLI::App* cmd) {
        cmd->add_option("p", p, "numerator of the weight")->required();
        cmd->add_option("q", q, "denominator of the weight")->required();
    };

    auto* cmd_resolve = app.add_subcommand("resolve", "full resolution report for a weight p/q");
    add_pq(cmd_resolve);
    auto* cmd_chain = app.add_subcommand("chain", "self-intersection chain of the resolved fiber");
    add_pq(cmd_chain);
    auto* cmd_fan = app.add_subcommand("fan", "rays of the minimal resolution fan");
    add_pq(cmd_fan);
    auto* cmd_blowdown = app.add_subcommand("blowdown", "ray deletion order down to the base fan");
    add_pq(cmd_blowdown);

    auto* cmd_stability = app.add_subcommand("stability", "stability verdict for a parabolic config");
    cmd_stability->add_option("config", config_path, "JSON configuration file");
    cmd_stability->add_flag("--cross-check", cross_check,
                            "run the seeded certifier-vs-oracle experiment instead");
    cmd_stability->add_option("--trials", trials, "number of random configurations");

    int genus = 0;
    std::vector<long long> orders;
    auto* cmd_euler = app.add_subcommand("euler", "orbifold Euler characteristic");
    cmd_euler->add_option("genus", genus, "base genus")->required();
    cmd_euler->add_option("orders", orders, "cone orders q_j >= 2")->expected(-1);

    app.add_subcommand("examples", "blow-up counts of the worked example families");

    auto* cmd_rep = app.add_subcommand("rep-check", "verify a quaternion representation");
    cmd_rep->add_option("config", config_path, "JSON file with presentation + elements")->required();

    auto* cmd_metric = app.add_subcommand("metric", "ALE metric verification");
    cmd_metric->require_subcommand(1);
    auto* metric_eval = cmd_metric->add_subcommand("eval", "sample metric components");
    auto* metric_curv = cmd_metric->add_subcommand("curvature", "finite-difference scalar curvature");
    auto* metric_decay = cmd_metric->add_subcommand("decay", "far-field decay exponents");
    auto* metric_glue = cmd_metric->add_subcommand("glue", "transition-annulus curvature scaling");
    for (auto* sub : {metric_eval, metric_curv, metric_decay, metric_glue}) {
        sub->add_option("p", p, "numerator")->required();
        sub->add_option("q", q, "denominator")->required();
        sub->add_option("--moments", moments_csv, "comma-separated moment ordinates y_0..y_k");
    }
    metric_decay->add_option("--rmin", r_min, "smallest far-field radius");
    metric_decay->add_option("--rmax", r_max, "largest far-field radius");
    metric_decay->add_option("--samples", decay_samples, "number of radii");
    metric_glue->add_option("--a-sweep", a_sweep, "comma-separated list of 1/a values");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_resolve->parsed())
            return finish(sfkit::reports::resolve(sfkit::ReducedFraction(p, q)), opts);
        if (cmd_chain->parsed()) {
            const sfkit::ReducedFraction f(p, q);
            json out = sfkit::reports::base("chain");
            const sfkit::CurveChain chain = sfkit::chain_of(f);
            out["chain"] = sfkit::chain_to_json(chain)["chain"];
            out["chain_text"] = sfkit::render_chain(chain);
            out["pass"] = true;
            return finish(out, opts);
        }
        if (cmd_fan->parsed()) {
            json out = sfkit::reports::base("fan");
            out["fan"] = sfkit::to_json(sfkit::resolution_fan(sfkit::ReducedFraction(p, q)));
            out["pass"] = true;
            return finish(out, opts);
        }
        if (cmd_blowdown->parsed()) {
            json out = sfkit::reports::base("blowdown");
            const auto bd = sfkit::blow_down_all(sfkit::resolution_fan(sfkit::ReducedFraction(p, q)));
            json removals = json::array();
            for (const auto& r : bd.removed)
                removals.push_back(json::array({sfkit::int_to_json(r.x), sfkit::int_to_json(r.y)}));
            out["blow_down"] = removals;
            out["steps"] = bd.removed.size();
            out["terminates_at_base"] = (bd.final_fan == sfkit::base_fan());
            out["pass"] = out["terminates_at_base"].get<bool>();
            return finish(out, opts);
        }
        if (cmd_stability->parsed()) {
            if (cross_check) {
                const std::vector<sfkit::ReducedFraction> weights{
                    {1, 2}, {1, 2}, {1, 2}, {1, 3}};
                return finish(sfkit::reports::stability_cross_check(weights, trials, opts.seed), opts);
            }
            if (config_path.empty())
                throw std::runtime_error("stability: config path required (or --cross-check)");
            const auto ps = sfkit::parabolic_from_json(load_config(config_path));
            return finish(sfkit::reports::stability(ps), opts);
        }
        if (cmd_euler->parsed()) {
            std::vector<sfkit::Int> qs(orders.begin(), orders.end());
            return finish(sfkit::reports::euler(genus, qs), opts);
        }
        if (app.get_subcommand("examples")->parsed())
            return finish(sfkit::reports::examples(), opts);
        if (cmd_rep->parsed()) {
            const json cfg = load_config(config_path);
            const auto pres = sfkit::presentation_from_json(cfg.at("presentation"));
            std::vector<sfkit::Psu2> elements;
            for (const auto& e : cfg.at("elements")) elements.push_back(sfkit::psu2_from_json(e));
            const double tol =
                cfg.contains("tol") ? cfg["tol"].get<double>()
                                    : (app.count("--tol") ? opts.tol : 1e-9);
            return finish(sfkit::reports::rep_check(pres, elements, tol), opts);
        }
        if (metric_eval->parsed())
            return finish(sfkit::reports::metric_eval(make_ale_data(p, q, moments_csv)), opts);
        if (metric_curv->parsed())
            return finish(
                sfkit::reports::metric_curvature(make_ale_data(p, q, moments_csv), 1e-3, opts.tol),
                opts);
        if (metric_decay->parsed())
            return finish(sfkit::reports::metric_decay(make_ale_data(p, q, moments_csv), r_min,
                                                       r_max, decay_samples),
                          opts);
        if (metric_glue->parsed()) {
            std::vector<double> a_list;
            for (double inv : parse_moments(a_sweep)) a_list.push_back(1.0 / inv);
            return finish(sfkit::reports::metric_glue(make_ale_data(p, q, moments_csv), a_list),
                          opts);
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
