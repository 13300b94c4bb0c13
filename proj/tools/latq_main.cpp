// latq: lattice quantizer toolkit command line.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "latq/acceptance.hpp"
#include "latq/automorphism.hpp"
#include "latq/catalog.hpp"
#include "latq/enumerate.hpp"
#include "latq/equivalence.hpp"
#include "latq/exact_nsm.hpp"
#include "latq/lattice_file.hpp"
#include "latq/moments.hpp"
#include "latq/optimizer.hpp"
#include "latq/relevant.hpp"

using json = nlohmann::json;
using namespace latq;
namespace cat = latq::catalog;

namespace {

uint64_t fnv64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Common per-command options and output/manifest plumbing.
struct Common {
    std::string lattice_arg;
    std::string file_arg;
    std::vector<std::string> params;
    std::string out_format = "json";
    std::string out_file;
    long samples = 1000000;
    uint64_t seed = 1;
    int workers = 0;
    int digits = 60;
    std::string tol = "1/1000000000000";
    std::string cache_file = ".latq-opt-cache.json";

    void add_output(CLI::App* app) {
        app->add_option("--out", out_format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        app->add_option("--out-file", out_file, "also write the output to this path");
    }
    void add_lattice(CLI::App* app) {
        app->add_option("--lattice", lattice_arg,
                        "catalog name with parameters, e.g. B14:a=25/19 or B14:a=opt");
        app->add_option("--file", file_arg, "lattice document to parse");
        app->add_option("--param", params, "extra parameter binding name=value");
        app->add_option("--cache", cache_file, "optimum cache path");
    }
    void add_mc(CLI::App* app) {
        app->add_option("--samples", samples, "Monte Carlo sample count");
        app->add_option("--seed", seed, "Monte Carlo seed");
        app->add_option("--workers", workers, "worker threads (0 = all cores)");
    }
};

// Cached high-precision optimum parameters ("a=opt" tokens).
json load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return json::object();
    try {
        json j;
        in >> j;
        return j;
    } catch (...) {
        return json::object();
    }
}

std::string opt_param(const std::string& key, const std::string& cache_path) {
    json cache = load_cache(cache_path);
    if (cache.contains(key)) return cache[key].get<std::string>();
    Rat tol = ratq(1, Int("1000000000000"));
    if (key == "a14") {
        cache["a14"] = exactnsm::optimize_g14(tol).a_opt.to_fixed(30);
    } else {
        exactnsm::Opt13 o = exactnsm::optimize_g13(tol);
        cache["a13_2"] = o.a2.to_fixed(30);
        cache["a13_3"] = o.a3.to_fixed(30);
    }
    std::ofstream out(cache_path);
    out << cache.dump(2) << "\n";
    return cache[key].get<std::string>();
}

std::map<std::string, std::string> parse_params(const std::string& spec,
                                                const std::vector<std::string>& extra) {
    std::map<std::string, std::string> out;
    auto eat = [&](const std::string& kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("parameter must be name=value: " + kv);
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    };
    if (!spec.empty()) {
        std::stringstream ss(spec);
        std::string kv;
        while (std::getline(ss, kv, ',')) eat(kv);
    }
    for (const auto& kv : extra) eat(kv);
    return out;
}

Lattice resolve_lattice(const Common& c) {
    if (!c.file_arg.empty()) {
        std::ifstream in(c.file_arg);
        if (!in) throw UsageError("cannot open lattice file: " + c.file_arg);
        std::stringstream ss;
        ss << in.rdbuf();
        ParsedLattice parsed = parse_lattice_file(ss.str());
        if (auto* l = std::get_if<Lattice>(&parsed)) return *l;
        return glue(std::get<GlueSpec>(parsed)).lattice;
    }
    if (c.lattice_arg.empty()) throw UsageError("provide --lattice or --file");
    auto colon = c.lattice_arg.find(':');
    std::string name = c.lattice_arg.substr(0, colon == std::string::npos ? c.lattice_arg.size() : colon);
    auto params = parse_params(colon == std::string::npos ? "" : c.lattice_arg.substr(colon + 1),
                               c.params);
    // Resolve "opt" parameter tokens through the exact optimizers.
    for (auto& [k, v] : params) {
        if (v != "opt") continue;
        if (name == "B14")
            v = opt_param("a14", c.cache_file);
        else if (name == "B13")
            v = opt_param(k == "a2" ? "a13_2" : "a13_3", c.cache_file);
        else
            throw UsageError("no optimum token for catalog entry " + name);
    }
    cat::CatalogValue value = cat::get(name, params);
    if (auto* l = std::get_if<Lattice>(&value)) return *l;
    if (auto* g = std::get_if<GlueSpec>(&value)) return glue(*g).lattice;
    throw UsageError("catalog entry " + name + " is a data table, not a lattice");
}

json lattice_info(const Lattice& l) {
    json j;
    j["dim"] = l.dim();
    j["family"] = l.meta().family;
    json p = json::object();
    for (const auto& [k, v] : l.meta().params) p[k] = v.str();
    for (const auto& [k, v] : l.meta().fparams) p[k] = v;
    j["params"] = p;
    j["exact"] = l.is_exact();
    j["volume"] = l.det_abs();
    return j;
}

struct Emitter {
    const Common& c;
    std::string command;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void emit(const json& payload, const std::string& csv = "") {
        std::string body = (c.out_format == "csv" && !csv.empty())
                               ? csv
                               : payload.dump(2) + "\n";
        std::cout << body;
        if (!c.out_file.empty()) {
            std::ofstream out(c.out_file);
            out << body;
            json manifest;
            manifest["command"] = command;
            manifest["catalog_version"] = "1.0";
            manifest["seed"] = c.seed;
            manifest["samples"] = c.samples;
            manifest["digits"] = c.digits;
            manifest["tol"] = c.tol;
            manifest["format"] = c.out_format;
            manifest["wall_time_s"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            manifest["output_fnv64"] = hex64(fnv64(body));
            std::ofstream mout(c.out_file + ".manifest.json");
            mout << manifest.dump(2) << "\n";
        }
    }
};

std::vector<std::vector<double>> parse_points(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::stringstream ss(text);
    std::string pt;
    while (std::getline(ss, pt, ';')) {
        std::vector<double> coords;
        std::stringstream ps(pt);
        std::string v;
        while (std::getline(ps, v, ',')) {
            if (v.find('/') != std::string::npos)
                coords.push_back(parse_rational(v).get_d());
            else
                coords.push_back(std::stod(v));
        }
        if (!coords.empty()) out.push_back(coords);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice quantizer toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string cmdline;
    for (int i = 0; i < argc; i++) cmdline += std::string(i ? " " : "") + argv[i];

    // ---- theta ----
    auto* theta = app.add_subcommand("theta", "cumulative shell counts of lattice point norms");
    double rmax = 4.0;
    bool det1 = false;
    double shell_tol = 1e-9;
    c.add_lattice(theta);
    c.add_output(theta);
    theta->add_option("--rmax", rmax, "largest squared radius");
    theta->add_flag("--det1", det1, "rescale to unit determinant first");
    theta->add_option("--shell-tol", shell_tol, "relative shell merge tolerance");
    theta->add_option("--workers", c.workers, "worker threads");

    // ---- nsm / smm ----
    auto* nsm = app.add_subcommand("nsm", "Monte Carlo normalized second moment");
    c.add_lattice(nsm);
    c.add_mc(nsm);
    c.add_output(nsm);
    auto* smm = app.add_subcommand("smm", "Monte Carlo second-moment matrix + isotropy check");
    c.add_lattice(smm);
    c.add_mc(smm);
    c.add_output(smm);
    std::string pool = "auto";
    smm->add_option("--pool", pool, "entry pooling: auto or none")
        ->check(CLI::IsMember({"auto", "none"}));

    // ---- geometry ----
    auto* geo = app.add_subcommand("geometry", "packing/covering/kissing report");
    c.add_lattice(geo);
    c.add_mc(geo);
    c.add_output(geo);

    // ---- facets / kissing ----
    auto* facets = app.add_subcommand("facets", "Voronoi facet normals via the coset scan");
    c.add_lattice(facets);
    c.add_output(facets);
    facets->add_option("--workers", c.workers, "worker threads");
    bool dump_vectors = false;
    facets->add_flag("--vectors", dump_vectors, "include the facet normal coordinates");

    auto* kissing = app.add_subcommand("kissing", "shortest vectors and kissing number");
    c.add_lattice(kissing);
    c.add_output(kissing);

    // ---- phase-check ----
    auto* phase = app.add_subcommand("phase-check", "parametric-facet stability across points");
    std::string family = "B14";
    std::string points_arg;
    phase->add_option("--family", family, "parametric family (B14 or B13)");
    phase->add_option("--points", points_arg,
                      "semicolon-separated parameter points, e.g. 1.30;25/19;1.36")
        ->required();
    phase->add_option("--workers", c.workers, "worker threads");
    c.add_output(phase);

    // ---- exact-nsm / optimize-exact ----
    auto* exact = app.add_subcommand("exact-nsm", "closed-form NSM of the 13/14-dim families");
    int dim = 14;
    std::string a_arg = "25/19", a2_arg = "1", a3_arg = "1";
    bool do_phase_check = false;
    exact->add_option("--dim", dim, "13 or 14")->check(CLI::IsMember({13, 14}));
    exact->add_option("--a", a_arg, "14-dim scale (exact rational)");
    exact->add_option("--a2", a2_arg, "13-dim second-component scale");
    exact->add_option("--a3", a3_arg, "13-dim third-component scale");
    exact->add_option("--digits", c.digits, "decimal digits of the rendering");
    exact->add_flag("--phase-check", do_phase_check,
                    "13-dim: test facet stability against the reference point");
    c.add_output(exact);

    auto* opt = app.add_subcommand("optimize-exact", "certified optimum of a family");
    opt->add_option("--dim", dim, "13 or 14")->check(CLI::IsMember({13, 14}));
    opt->add_option("--tol", c.tol, "parameter tolerance (rational, e.g. 1/10^12)");
    opt->add_option("--digits", c.digits, "decimal digits of the rendering");
    c.add_output(opt);

    // ---- descend ----
    auto* descend_cmd = app.add_subcommand("descend", "Monte Carlo isotropy descent");
    int max_steps = 8;
    std::string variant = "linear";
    c.add_lattice(descend_cmd);
    c.add_mc(descend_cmd);
    descend_cmd->add_option("--max-steps", max_steps, "step budget");
    descend_cmd->add_option("--variant", variant, "perturbation variant")
        ->check(CLI::IsMember({"linear", "exponential"}));
    c.add_output(descend_cmd);

    // ---- verify / catalog / reproduce-paper ----
    auto* verify = app.add_subcommand("verify", "verify shipped certificates");
    std::string verify_what = "appendix-b";
    verify->add_option("what", verify_what, "certificate suite")->required();

    auto* catalog_cmd = app.add_subcommand("catalog", "catalog access");
    std::string catalog_what = "list";
    catalog_cmd->add_option("what", catalog_what, "list | show");
    c.add_lattice(catalog_cmd);
    c.add_output(catalog_cmd);

    auto* repro = app.add_subcommand("reproduce-paper", "run the acceptance criteria");
    bool quick = false;
    int criterion = 0;
    repro->add_flag("--quick", quick, "skip the long Monte Carlo / facet scans");
    repro->add_option("--criterion", criterion, "run a single criterion");
    repro->add_option("--workers", c.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Emitter emitter{c, cmdline};
        if (theta->parsed()) {
            Lattice l = resolve_lattice(c);
            if (det1) l = l.unit_volume();
            Prepared p(l);
            ThetaImage img = theta_image(p, rmax, shell_tol);
            json j = lattice_info(l);
            j["det1"] = det1;
            json steps = json::array();
            std::string csv = "r2,count\n";
            for (auto& [r2, count] : img.steps) {
                steps.push_back({r2, count});
                char line[64];
                std::snprintf(line, sizeof(line), "%.10g,%ld\n", r2, count);
                csv += line;
            }
            j["steps"] = steps;
            emitter.emit(j, csv);
        } else if (nsm->parsed()) {
            Lattice l = resolve_lattice(c);
            MomentReport r = estimate_nsm(Prepared(l), c.samples, c.seed, c.workers);
            json j = lattice_info(l);
            j["samples"] = r.samples;
            j["seed"] = r.seed;
            j["G_hat"] = r.g_hat;
            j["G_stderr"] = r.g_stderr;
            emitter.emit(j);
        } else if (smm->parsed()) {
            Lattice l = resolve_lattice(c);
            auto groups = pool == "auto" ? pool_groups_for(l) : std::vector<PoolGroup>{};
            MomentReport r = estimate_second_moment_matrix(
                Prepared(l), c.samples, c.seed, c.workers, groups.empty() ? nullptr : &groups);
            ZfDiagnostic d = zamir_feder_diagnostic(r);
            json j = lattice_info(l);
            j["samples"] = r.samples;
            j["seed"] = r.seed;
            j["G_hat"] = r.g_hat;
            j["G_stderr"] = r.g_stderr;
            json u = json::array(), se = json::array();
            for (int i = 0; i < r.dim; i++) {
                json row = json::array(), serow = json::array();
                for (int k = 0; k < r.dim; k++) {
                    row.push_back(r.u_hat(i, k));
                    serow.push_back(r.u_stderr(i, k));
                }
                u.push_back(row);
                se.push_back(serow);
            }
            j["U_hat"] = u;
            j["U_stderr"] = se;
            json pooled = json::array();
            for (const auto& ps : r.pooled)
                pooled.push_back({{"name", ps.name},
                                  {"mean", ps.mean},
                                  {"stderr", ps.stderr_},
                                  {"z", ps.z}});
            j["pooled"] = pooled;
            j["z_max"] = d.max_abs_z;
            j["traceless_norm"] = d.traceless_norm;
            j["verdict"] = d.verdict;
            emitter.emit(j);
        } else if (geo->parsed()) {
            Lattice l = resolve_lattice(c);
            GeometryReport g = geometry_report(Prepared(l), "", c.samples, c.seed, c.workers);
            json j = lattice_info(l);
            j["min_norm2"] = g.min_norm2;
            j["kissing"] = g.kissing;
            j["packing_radius"] = g.packing_radius;
            j["packing_density"] = g.packing_density;
            if (g.has_covering) {
                j["covering_radius"] = g.covering_radius;
                j["covering_radius_sq"] = g.covering_radius_sq;
                j["thickness"] = g.thickness;
            }
            j["covering_lower_mc"] = g.covering_lower;
            emitter.emit(j);
        } else if (facets->parsed()) {
            Lattice l = resolve_lattice(c);
            RelevantVectorSet rv = relevant_vectors(Prepared(l), c.workers);
            json j = lattice_info(l);
            j["facets"] = rv.facet_count();
            j["degenerate_cosets"] = rv.flagged_cosets.size();
            j["uset_hash"] = hex64(rv.uset_hash());
            std::string csv;
            if (dump_vectors) {
                json vecs = json::array();
                for (const auto& v : rv.vectors) vecs.push_back(v);
                j["vectors"] = vecs;
                for (const auto& v : rv.vectors) {
                    for (size_t i = 0; i < v.size(); i++)
                        csv += (i ? "," : "") + std::to_string(v[i]);
                    csv += "\n";
                }
            }
            emitter.emit(j, csv);
        } else if (kissing->parsed()) {
            Lattice l = resolve_lattice(c);
            ShortestInfo s = shortest_vectors(Prepared(l));
            json j = lattice_info(l);
            j["min_norm2"] = s.min_norm2;
            j["kissing"] = s.kissing;
            emitter.emit(j, "min_norm2,kissing\n" + std::to_string(s.min_norm2) + "," +
                                std::to_string(s.kissing) + "\n");
        } else if (phase->parsed()) {
            auto points = parse_points(points_arg);
            PhaseReport rep = phase_condition_i(family, points, c.workers);
            json j;
            j["family"] = family;
            j["stable"] = rep.stable;
            json pts = json::array();
            for (size_t i = 0; i < points.size(); i++)
                pts.push_back({{"params", points[i]},
                               {"facets", rep.facet_counts[i]},
                               {"uset_hash", hex64(rep.uset_hashes[i])},
                               {"degenerate_cosets", rep.degenerate_counts[i]}});
            j["points"] = pts;
            emitter.emit(j);
        } else if (exact->parsed()) {
            json j;
            j["dim"] = dim;
            j["digits"] = c.digits;
            if (dim == 14) {
                Rat a = parse_rational(a_arg);
                bool in_phase = false;
                BigFloat g = exactnsm::g14(a, c.digits, &in_phase);
                j["a"] = to_string(a);
                j["G"] = g.to_fixed(c.digits > 14 ? 14 : c.digits);
                j["in_phase"] = in_phase;
                if (!in_phase) j["note"] = "outside the phase of validity";
            } else {
                Rat a2 = parse_rational(a2_arg), a3 = parse_rational(a3_arg);
                BigFloat ga = exactnsm::gA13(a2, a3, c.digits);
                BigFloat gb = exactnsm::gB13(a2, a3, c.digits);
                j["a2"] = to_string(a2);
                j["a3"] = to_string(a3);
                j["G_A"] = ga.to_fixed(c.digits > 14 ? 14 : c.digits);
                j["G_B"] = gb.to_fixed(c.digits > 14 ? 14 : c.digits);
                int gap_digits = c.digits < 40 ? 40 : c.digits;
                j["gap_A_minus_B"] = exactnsm::gap13_v(BigFloat::of(a2 * a2, gap_digits),
                                                       BigFloat::of(a3 * a3, gap_digits),
                                                       gap_digits)
                                         .to_double();
                if (do_phase_check) {
                    PhaseReport rep = phase_condition_i(
                        "B13", {{a2.get_d(), a3.get_d()}, {1.004, 1.008}}, c.workers);
                    j["phase_stable_vs_reference"] = rep.stable;
                }
            }
            emitter.emit(j);
        } else if (opt->parsed()) {
            Rat tol = parse_rational(c.tol);
            json j;
            j["dim"] = dim;
            int show = c.digits > 14 ? 14 : c.digits;
            if (dim == 14) {
                exactnsm::Opt14 o = exactnsm::optimize_g14(tol);
                j["a_opt"] = o.a_opt.to_fixed(show);
                j["G_opt"] = o.g_opt.to_fixed(show);
                j["positive_root_index"] = o.positive_root_index;
                j["bracket"] = {to_string(o.v0.lo), to_string(o.v0.hi)};
            } else {
                exactnsm::Opt13 o = exactnsm::optimize_g13(tol);
                j["a2_opt"] = o.a2.to_fixed(show);
                j["a3_opt"] = o.a3.to_fixed(show);
                j["G_opt"] = o.g.to_fixed(show);
                j["certified"] = o.certified;
                j["hessian_pd"] = o.hessian_pd;
                j["box_radius"] = o.box_radius;
            }
            emitter.emit(j);
        } else if (descend_cmd->parsed()) {
            Lattice l = resolve_lattice(c);
            optimizer::DescendConfig cfg;
            cfg.samples = c.samples;
            cfg.seed = c.seed;
            cfg.max_steps = max_steps;
            cfg.workers = c.workers;
            cfg.variant = variant == "linear" ? optimizer::PerturbVariant::kLinear
                                              : optimizer::PerturbVariant::kExponential;
            optimizer::DescendState st = optimizer::descend(l, cfg);
            std::string lines;
            for (size_t i = 0; i < st.history.size(); i++) {
                json step = {{"step", i},
                             {"G_hat", st.history[i].g_hat},
                             {"G_stderr", st.history[i].g_stderr},
                             {"max_abs_z", st.history[i].max_abs_z},
                             {"eps", st.history[i].eps},
                             {"rule", st.history[i].eps_rule}};
                lines += step.dump() + "\n";
            }
            lines += json{{"termination", st.termination}}.dump() + "\n";
            std::cout << lines;
            if (!c.out_file.empty()) {
                std::ofstream out(c.out_file);
                out << lines;
            }
        } else if (verify->parsed()) {
            if (verify_what != "appendix-b")
                throw UsageError("unknown verification suite: " + verify_what);
            equivalence::AppendixReport rep = equivalence::appendix_checks();
            for (const auto& item : rep.items)
                std::printf("%s  %s\n", item.pass ? "PASS" : "FAIL", item.name.c_str());
            return rep.all_pass ? 0 : 1;
        } else if (catalog_cmd->parsed()) {
            if (catalog_what == "list") {
                json j = json::array();
                for (const auto& name : cat::list_names()) j.push_back(name);
                emitter.emit(j);
            } else if (catalog_what == "show") {
                Lattice l = resolve_lattice(c);
                std::cout << print_lattice_file(l);
            } else {
                throw UsageError("catalog action must be list or show");
            }
        } else if (repro->parsed()) {
            if (criterion > 0) {
                auto r = acceptance::run_criterion(criterion, c.workers, quick);
                std::printf("%s  C%-2d  %s (%.1fs)\n%s",
                            r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL"), r.id,
                            r.name.c_str(), r.seconds, r.details.c_str());
                return r.pass || r.skipped ? 0 : 1;
            }
            return acceptance::run_all(c.workers, quick) ? 0 : 1;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
