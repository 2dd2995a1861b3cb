// Command line front end: describe | cohomology | weight-ss | verify |
// gallery. Exit codes: 0 all checks pass, 1 a check failed, 2 spec or
// usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "logfrob/error.hpp"
#include "logfrob/gallery.hpp"
#include "logfrob/pipeline.hpp"

using namespace logfrob;

namespace {

Json load_input(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail("SpecParseError", "cannot open input file " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        fail("SpecParseError", std::string("invalid JSON: ") + e.what());
    }
    return j;
}

void write_output(const std::string& out_path, const std::string& text)
{
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out)
        fail("SpecParseError", "cannot open output file " + out_path);
    out << text << "\n";
}

std::string tsv_table(const Json& report)
{
    std::string out;
    auto add_row = [&](const std::string& label, const Json& dims) {
        out += label;
        for (const auto& d : dims)
            out += "\t" + d.dump();
        out += "\n";
    };
    const Json& checks = report.at("checks");
    if (checks.contains("cohomology")) {
        const Json& c = checks.at("cohomology");
        add_row("h", c.at("h_dims"));
        int i = 0;
        for (const auto& col : c.at("hodge_diamond"))
            add_row("omega^" + std::to_string(i++), col);
        int l = 0;
        for (const auto& col : c.at("w_filtered_dims"))
            add_row("W_" + std::to_string(l++), col);
    }
    if (checks.contains("weight-ss") &&
        checks.at("weight-ss").contains("pages")) {
        for (const auto& page : checks.at("weight-ss").at("pages")) {
            for (const auto& s : page.at("spots")) {
                out += "E_" + page.at("r").dump() + "\t" +
                       s.at("i").dump() + "\t" + s.at("j").dump() + "\t" +
                       s.at("dim").dump() + "\t" + s.at("d_rank").dump() +
                       "\n";
            }
        }
    }
    return out;
}

int run_one(const Json& spec_json, const RunOptions& opts,
            const std::string& out_path, const std::string& format)
{
    VarietySpec spec = parse_spec(spec_json);
    RunResult res = run_spec(spec, opts);
    if (format == "tsv")
        write_output(out_path, tsv_table(res.report));
    else
        write_output(out_path, res.report.dump(2));
    return res.pass ? 0 : 1;
}

int thread_count(int flag_value)
{
    if (flag_value > 0)
        return flag_value;
    if (const char* env = std::getenv("LOGFROB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0)
            return v;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"logarithmic de Rham cohomology and Frobenius-splitting "
                 "verifier for toric models"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string input, out_path, format = "json", gallery_id;
    std::vector<std::string> checks;
    int threads = 0;
    int weight_radius = -1;
    bool emit_timing = false;

    app.add_option("--threads", threads,
                   "worker threads (fallback: LOGFROB_THREADS)");
    app.add_flag("--emit-timing", emit_timing,
                 "include wall-clock timing in reports (breaks byte "
                 "determinism)");

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input)
            sub->add_option("--input", input, "spec JSON file")
                ->required();
        sub->add_option("--out", out_path, "write the report here");
        sub->add_option("--format", format, "json or tsv");
        sub->add_option("--weight-radius", weight_radius,
                        "override the character search radius");
    };

    CLI::App* describe = app.add_subcommand(
        "describe", "validate the geometry and echo a summary");
    add_common(describe, true);

    CLI::App* cohomology = app.add_subcommand(
        "cohomology", "hypercohomology dims and the Hodge diamond");
    add_common(cohomology, true);

    CLI::App* weight_ss = app.add_subcommand(
        "weight-ss", "weight spectral sequence pages and structure");
    add_common(weight_ss, true);

    CLI::App* verify =
        app.add_subcommand("verify", "run the requested checks");
    add_common(verify, true);
    verify->add_option("--checks", checks,
                       "comma separated list of checks")
        ->delimiter(',');

    CLI::App* gallery =
        app.add_subcommand("gallery", "run the built-in examples");
    gallery->add_option("--id", gallery_id, "a single gallery entry");
    gallery->add_option("--out", out_path, "write the report here");
    gallery->add_option("--format", format, "json or tsv");
    gallery->add_option("--weight-radius", weight_radius,
                        "override the character search radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunOptions opts;
    opts.threads = thread_count(threads);
    opts.emit_timing = emit_timing;
    opts.weight_radius_override = weight_radius;

    try {
        if (describe->parsed()) {
            VarietySpec spec = parse_spec(load_input(input));
            Fp::set_prime(static_cast<uint32_t>(spec.p));
            ValidityReport rep = validate(spec.fan, spec.p);
            Json j;
            j["tool"] = "logfrob";
            j["input"] = spec_to_json(spec);
            j["smooth"] = rep.smooth;
            j["complete"] = rep.complete;
            j["n"] = rep.n;
            j["dim_less_p"] = rep.dim_less_p;
            if (spec.twist)
                j["ample"] = is_ample(spec.fan, *spec.twist);
            const Twist* tw = spec.twist ? &*spec.twist : nullptr;
            int radius = weight_radius >= 0
                             ? weight_radius
                             : (spec.weight_radius >= 0
                                    ? spec.weight_radius
                                    : default_weight_radius(spec.fan, tw));
            j["weight_radius"] = radius;
            j["weight_support_size"] =
                weight_support(spec.fan, tw, radius).size();
            write_output(out_path, j.dump(2));
            return 0;
        }
        if (cohomology->parsed()) {
            opts.check_override = {"cohomology"};
            return run_one(load_input(input), opts, out_path, format);
        }
        if (weight_ss->parsed()) {
            opts.check_override = {"weight-ss"};
            return run_one(load_input(input), opts, out_path, format);
        }
        if (verify->parsed()) {
            if (!checks.empty())
                opts.check_override = checks;
            return run_one(load_input(input), opts, out_path, format);
        }
        if (gallery->parsed()) {
            if (!gallery_id.empty()) {
                if (!gallery_has(gallery_id))
                    fail("SpecParseError",
                         "unknown gallery id: " + gallery_id);
                return run_one(gallery_spec_json(gallery_id), opts,
                               out_path, format);
            }
            Json combined;
            combined["tool"] = "logfrob";
            combined["version"] = "0.1.0";
            bool all = true;
            Json members;
            for (const auto& id : gallery_ids()) {
                VarietySpec spec = parse_spec(gallery_spec_json(id));
                RunResult res = run_spec(spec, opts);
                members[id] = res.report;
                if (!res.pass)
                    all = false;
            }
            combined["members"] = members;
            combined["pass"] = all;
            write_output(out_path, combined.dump(2));
            return all ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        // spec/usage problems exit 2; failed mathematics inside a check
        // never throws, it reports FAIL
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
