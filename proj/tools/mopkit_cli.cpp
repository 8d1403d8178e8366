#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mopkit/errors.hpp"

using namespace mopkit;

namespace {

int emit(const io::Report& r, const std::string& format, const std::string& json_out) {
    const nlohmann::json j = io::to_json(r);
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw ParseError("cannot write " + json_out);
        f << j.dump(2) << "\n";
    }
    if (format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << io::render_text(j);
    return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mopkit: matrix orthogonal polynomials and Pearson-type functionals"};
    app.require_subcommand(1);
    app.fallthrough();

    Tolerance tol;
    std::string format = "text", json_out;
    app.add_option("--rel", tol.rel, "relative tolerance");
    app.add_option("--abs", tol.abs, "absolute tolerance");
    app.add_option("--cond-max", tol.cond_max, "condition number cap");
    app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--json-out", json_out, "also write the JSON report here");

    std::string spec, action, name, report_path;
    std::size_t n = 4, depth = 2, p = 2, q = 1, d_max = 4;
    std::optional<std::size_t> horizon;

    auto* c_mom = app.add_subcommand("moments", "moments mu_0..mu_K");
    c_mom->add_option("spec", spec)->required();
    c_mom->add_option("--n", n, "K")->capture_default_str();

    auto* c_mop = app.add_subcommand("mop", "monic MOP segment, recurrence and residuals");
    c_mop->add_option("spec", spec)->required();
    c_mop->add_option("--n", n)->capture_default_str();

    std::size_t pearson_n = 12;
    auto* c_pear = app.add_subcommand("check-pearson", "residuals of D(u Phi) = u Psi");
    c_pear->add_option("spec", spec)->required();
    c_pear->add_option("--n", pearson_n)->capture_default_str();

    std::size_t chain_n = 5;
    auto* c_der = app.add_subcommand("derivatives", "derivative chain");
    c_der->add_option("spec", spec)->required();
    c_der->add_option("--depth", depth)->capture_default_str();
    c_der->add_option("--n", chain_n, "polynomials checked per level")->capture_default_str();

    auto* c_mod = app.add_subcommand("module-basis", "basis of M_{p,q}(u)");
    c_mod->add_option("spec", spec)->required();
    c_mod->add_option("--p", p)->capture_default_str();
    c_mod->add_option("--q", q)->capture_default_str();
    c_mod->add_option("--horizon", horizon, "number of moment equations");

    auto* c_cls = app.add_subcommand("class", "scalar generator and class s");
    c_cls->add_option("spec", spec)->required();
    c_cls->add_option("--d-max", d_max)->capture_default_str();

    std::size_t zn = 6;
    auto* c_zc = app.add_subcommand("zeroclass", "zero-class analyses");
    c_zc->add_option("action", action)->required()->check(CLI::IsMember({"check", "closed-forms", "ode", "diag", "guard"}));
    c_zc->add_option("spec", spec)->required();
    c_zc->add_option("--n", zn)->capture_default_str();

    auto* c_gal = app.add_subcommand("gallery", "named example functionals");
    c_gal->add_option("action", action)->required()->check(CLI::IsMember({"list", "show"}));
    c_gal->add_option("name", name);

    auto* c_rep = app.add_subcommand("report", "re-render a saved JSON report");
    c_rep->add_option("--json", report_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string echo = "mopkit";
    for (int i = 1; i < argc; ++i) echo += std::string(" ") + argv[i];

    try {
        tol.validate();
        if (c_rep->parsed()) {
            std::ifstream f(report_path);
            if (!f) throw ParseError("cannot read " + report_path);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(e.what());
            }
            return emit(io::from_json(j), format, json_out);
        }

        io::Report r;
        if (c_gal->parsed()) {
            if (action == "list") {
                r = cli::gallery_list();
            } else {
                if (name.empty()) throw ParseError("gallery show needs a name");
                try {
                    r = cli::gallery_show(name);
                } catch (const UnknownExample& e) {
                    throw ParseError(e.what());
                }
            }
        } else {
            const io::LoadedSpec s = io::load_spec(spec);
            if (c_mom->parsed()) r = cli::moments(s, n, tol);
            else if (c_mop->parsed()) r = cli::mop(s, n, tol);
            else if (c_pear->parsed()) r = cli::check_pearson(s, pearson_n, tol);
            else if (c_der->parsed()) r = cli::derivatives(s, depth, chain_n, tol);
            else if (c_mod->parsed()) r = cli::module_basis(s, p, q, horizon, tol);
            else if (c_cls->parsed()) r = cli::class_of(s, d_max, tol);
            else r = cli::zeroclass(action, s, zn, tol);
        }
        r.command = echo;
        return emit(r, format, json_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
