#pragma once

// Command-line front end. run_cli returns 0 on success, 1 when a
// verification or assertion fails and 2 on unusable input.

#include "cuspforge/corpus.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace cuspforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInput = 2;

namespace detail {

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot read '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write '" + path.string() + "'");
    }
    out << text;
}

/// Maps f over items on up to `jobs` threads; results keep the input order.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, unsigned jobs, Fn fn)
{
    using R = decltype(fn(items.front()));
    std::vector<R> out(items.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < items.size(); i += jobs) {
                out[i] = fn(items[i]);
            }
        }));
    }
    for (auto& f : workers) {
        f.get();
    }
    return out;
}

inline std::string cusp_line(const CuspType& c)
{
    return to_string(c.multseq) + "  char " + to_string(c.chars) + "  newton " + to_string(c.newton) + "  delta "
           + c.delta().str();
}

inline nlohmann::json convert_json(const CuspType& c)
{
    nlohmann::json j = to_json(c);
    j["delta"] = json_integer(c.delta());
    j["multseq_short"] = to_short_string(c.multseq);
    return j;
}

/// Homogenizes an affine polynomial in x, y with z.
inline Polynomial homogenize(const Polynomial& f)
{
    if (f.is_homogeneous()) {
        return f;
    }
    int d = f.total_degree();
    Polynomial out;
    for (const auto& [e, c] : f.terms()) {
        if (e[2] != 0) {
            throw InvalidInput("polynomial: not homogeneous and uses z");
        }
        out.add_term({e[0], e[1], d - e[0] - e[1]}, c);
    }
    return out;
}

/// "[x:y:z]" or an affine "(x,y)".
inline ProjectivePoint parse_any_point(const std::string& text)
{
    auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '(') {
        TextCursor cur(text);
        cur.expect('(', "point");
        ProjectivePoint pt;
        for (std::size_t i = 0; i < 2; ++i) {
            if (i) {
                cur.expect(',', "point");
            }
            Integer num = cur.integer("coordinate");
            Integer den = 1;
            if (cur.accept('/')) {
                den = cur.integer("denominator");
                if (den == 0) {
                    throw InvalidInput("point: zero denominator");
                }
            }
            pt[i] = Rational(num, den);
        }
        cur.expect(')', "point");
        if (!cur.at_end()) {
            cur.fail("trailing input", "point");
        }
        pt[2] = 1;
        return pt;
    }
    return parse_projective_point(text);
}

inline Integer parse_bound(const std::string& flag, const std::string& text)
{
    bool digits = !text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!digits) {
        throw InvalidInput(flag + " expects a non-negative integer, got \"" + text + "\"");
    }
    return Integer(text);
}

struct ScriptOutcome {
    std::string name;
    bool ok = false;
    bool best_effort = false;
    std::size_t statements = 0;
    std::size_t failed = 0;
    std::string error;
    std::vector<std::string> finals;
};

inline ScriptOutcome run_named_script(const std::string& name, const std::string& text, bool best_effort)
{
    ScriptOutcome o;
    o.name = name;
    o.best_effort = best_effort;
    try {
        auto rep = execute(parse_script(text));
        o.ok = rep.ok();
        o.statements = rep.steps.size();
        o.failed = rep.failed_assertions();
        for (const auto& s : rep.steps) {
            if (s.status == StepStatus::error) {
                o.error = s.pos.str() + ": " + s.message;
            } else if (s.status == StepStatus::failed && o.error.empty()) {
                o.error = s.pos.str() + ": " + s.text + ": " + s.message;
            }
        }
        for (const auto& issue : rep.initial_issues) {
            o.error = "config: " + issue;
        }
        for (const auto& p : rep.finals) {
            std::string s = "d=" + p.degree.str();
            for (const auto& c : p.cusps) {
                s += " " + to_short_string(c.multseq);
            }
            o.finals.push_back(s);
        }
    } catch (const Error& e) {
        o.error = e.what();
    }
    return o;
}

} // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"cuspforge: rational cuspidal plane curves, exactly", "cuspforge"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    bool json = false;
    int result = kExitOk;

    // catalog
    auto* catalog = app.add_subcommand("catalog", "Families of bicuspidal rational curves");
    catalog->require_subcommand(1);
    auto* cat_list = catalog->add_subcommand("list", "List the families");
    cat_list->add_flag("--json", json, "JSON output");
    auto* cat_verify = catalog->add_subcommand("verify", "Verify every instance of a parameter grid");
    std::string family_id;
    GridBounds bounds;
    std::string umax = "6", lmax = "6", mmax = "6", kmax = "12";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    cat_verify->add_option("--family", family_id, "Family id (a1..a4, b, c, d1, d2, e, f)");
    cat_verify->add_option("--umax", umax, "Upper bound for u");
    cat_verify->add_option("--lmax", lmax, "Upper bound for l");
    cat_verify->add_option("--mmax", mmax, "Upper bound for m");
    cat_verify->add_option("--kmax", kmax, "Upper bound for k");
    cat_verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    cat_verify->add_flag("--json", json, "JSON output");

    // convert
    auto* convert = app.add_subcommand("convert", "Convert between cusp encodings");
    std::string newton, chars, multseq;
    auto* o_newton = convert->add_option("--newton", newton, "Newton pairs, e.g. \"(2,5)(3,1)\"");
    auto* o_char = convert->add_option("--char", chars, "Characteristic exponents, e.g. \"(6;15,16)\"");
    auto* o_multseq = convert->add_option("--multseq", multseq, "Multiplicity sequence, e.g. \"[6_2,3_2]\"");
    o_newton->excludes(o_char)->excludes(o_multseq);
    o_char->excludes(o_multseq);
    convert->add_flag("--json", json, "JSON output");

    // run
    auto* run = app.add_subcommand("run", "Execute a construction script");
    std::string file;
    bool trace = false;
    std::string dot_dir;
    run->add_option("FILE", file, "Script file")->required();
    run->add_flag("--trace", trace, "Print every statement");
    run->add_option("--dot-dir", dot_dir, "Write the configuration after each statement as DOT");
    run->add_flag("--json", json, "JSON output");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Local branches of a curve at a point");
    std::string poly, point, param, at;
    int precision = 0;
    auto* o_poly = analyze->add_option("--poly", poly, "Polynomial in x, y (and z)");
    auto* o_point = analyze->add_option("--point", point, "Point \"[x:y:z]\" or \"(x,y)\"");
    auto* o_param = analyze->add_option("--param", param, "Parametrization \"X, Y, Z\" in t, s");
    auto* o_at = analyze->add_option("--at", at, "Parameter \"[t:s]\"; all singular parameters if omitted");
    analyze->add_option("--precision", precision, "Series precision (default from the degree)")
        ->check(CLI::PositiveNumber);
    analyze->add_flag("--json", json, "JSON output");
    o_poly->excludes(o_param);
    o_point->needs(o_poly);
    o_at->needs(o_param);

    // scripts
    auto* scripts = app.add_subcommand("scripts", "The shipped construction scripts");
    scripts->require_subcommand(1);
    auto* sc_verify = scripts->add_subcommand("verify", "Execute the whole corpus");
    std::string script_dir;
    sc_verify->add_option("--dir", script_dir, "Run the .cfs files of this directory instead of the built-in corpus");
    sc_verify->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sc_verify->add_flag("--json", json, "JSON output");
    auto* sc_emit = scripts->add_subcommand("emit", "Write the corpus files");
    std::string emit_dir;
    sc_emit->add_option("--out", emit_dir, "Output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front()) {
            err << "run '" << sub->get_name() << " --help' for usage\n";
        }
        return kExitInput;
    }

    try {
        if (cat_list->parsed()) {
            if (json) {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& f : family_table()) {
                    j.push_back({{"family", to_string(f.id)},
                                 {"degree", f.degree_formula},
                                 {"ranges", f.ranges},
                                 {"notes", f.notes}});
                }
                out << j.dump(2) << "\n";
            } else {
                for (const auto& f : family_table()) {
                    out << std::left << std::setw(4) << to_string(f.id) << " d = " << std::setw(20) << f.degree_formula
                        << " " << f.ranges << "\n";
                    if (!f.notes.empty()) {
                        out << "     " << f.notes << "\n";
                    }
                }
            }
        } else if (cat_verify->parsed()) {
            bounds.umax = detail::parse_bound("--umax", umax);
            bounds.lmax = detail::parse_bound("--lmax", lmax);
            bounds.mmax = detail::parse_bound("--mmax", mmax);
            bounds.kmax = detail::parse_bound("--kmax", kmax);
            std::vector<FamilyParams> params;
            if (family_id.empty()) {
                params = full_grid(bounds);
            } else {
                params = grid(parse_family(family_id), bounds);
            }
            auto reports =
                detail::parallel_map(params, jobs, [](const FamilyParams& p) { return verify_instance(instantiate(p)); });
            std::size_t failed = 0;
            std::map<std::string, std::pair<std::size_t, std::size_t>> per_family;
            for (const auto& r : reports) {
                auto& slot = per_family[to_string(r.instance.params.family)];
                ++slot.first;
                if (!r.ok) {
                    ++slot.second;
                    ++failed;
                }
            }
            if (json) {
                nlohmann::json j;
                j["instances"] = reports.size();
                j["failed"] = failed;
                j["ok"] = failed == 0;
                j["families"] = nlohmann::json::object();
                for (const auto& [name, counts] : per_family) {
                    j["families"][name] = {{"instances", counts.first}, {"failed", counts.second}};
                }
                j["reports"] = nlohmann::json::array();
                for (const auto& r : reports) {
                    j["reports"].push_back(to_json(r));
                }
                out << j.dump(2) << "\n";
            } else {
                for (const auto& r : reports) {
                    if (!r.ok) {
                        out << "FAIL " << r.instance.params.label() << ": " << to_json(r).dump() << "\n";
                    }
                }
                for (auto f : kAllFamilies) {
                    auto it = per_family.find(to_string(f));
                    if (it != per_family.end()) {
                        out << std::left << std::setw(4) << it->first << " " << it->second.first << " instances, "
                            << it->second.second << " failed\n";
                    }
                }
                out << (failed == 0 ? "ok" : "FAILED") << ": " << reports.size() << " instances, " << failed
                    << " failed\n";
            }
            result = failed == 0 ? kExitOk : kExitFailed;
        } else if (convert->parsed()) {
            CuspType c;
            if (!newton.empty() || o_newton->count()) {
                c = CuspType::from_newton(parse_newton_pairs(newton));
            } else if (!chars.empty() || o_char->count()) {
                c = CuspType::from_char(parse_characteristic_exponents(chars));
            } else if (!multseq.empty() || o_multseq->count()) {
                c = CuspType::from_multseq(parse_multseq(multseq));
            } else {
                err << "error: convert needs one of --newton, --char, --multseq\n";
                return kExitInput;
            }
            if (json) {
                out << detail::convert_json(c).dump(2) << "\n";
            } else {
                out << "newton  " << to_string(c.newton) << "\n";
                out << "char    " << to_string(c.chars) << "\n";
                out << "multseq " << to_string(c.multseq) << "  " << to_short_string(c.multseq) << "\n";
                out << "delta   " << c.delta() << "\n";
            }
        } else if (run->parsed()) {
            Script s = parse_script(detail::read_file(file));
            if (!dot_dir.empty()) {
                std::filesystem::create_directories(dot_dir);
            }
            auto observer = [&](const StepRecord& step, const Configuration&, const Configuration& after) {
                if (!dot_dir.empty()) {
                    std::ostringstream name;
                    name << "step_" << std::setw(3) << std::setfill('0') << step.index << ".dot";
                    detail::write_file(std::filesystem::path(dot_dir) / name.str(), to_dot(after));
                }
            };
            auto rep = execute(s, observer);
            if (json) {
                out << to_json(rep).dump(2) << "\n";
            } else if (trace) {
                out << report_text(rep);
            } else {
                for (const auto& issue : rep.initial_issues) {
                    out << "config: " << issue << "\n";
                }
                for (const auto& st : rep.steps) {
                    if (st.status != StepStatus::ok || st.profile) {
                        out << st.pos.str() << "  " << st.text << "  [" << to_string(st.status) << "]  " << st.message
                            << "\n";
                    }
                }
                out << (rep.ok() ? "ok" : "FAILED") << ": " << rep.steps.size() << " statements, "
                    << rep.failed_assertions() << " failed checks\n";
            }
            result = rep.ok() ? kExitOk : kExitFailed;
        } else if (analyze->parsed()) {
            if (o_poly->count()) {
                if (!o_point->count()) {
                    err << "error: --poly needs --point\n";
                    return kExitInput;
                }
                Polynomial f = detail::homogenize(parse_polynomial(poly));
                ProjectivePoint pt = detail::parse_any_point(point);
                int base = precision > 0 ? precision : default_precision(f.total_degree());
                auto branches = with_precision_retry(base, [&](int n) {
                    std::vector<CuspType> out_types;
                    for (const auto& b : branches_at(f, pt, n)) {
                        out_types.push_back(CuspType::from_multseq(multseq_from_branch(b)));
                        auto ce = char_from_branch(b);
                        if (ce != out_types.back().chars) {
                            throw Error("internal: branch encodings disagree");
                        }
                    }
                    return out_types;
                });
                if (json) {
                    nlohmann::json j{{"point", to_string(pt)}, {"branches", nlohmann::json::array()}};
                    for (const auto& c : branches) {
                        j["branches"].push_back(detail::convert_json(c));
                    }
                    out << j.dump(2) << "\n";
                } else {
                    out << "point " << to_string(pt) << ": " << branches.size() << " branch"
                        << (branches.size() == 1 ? "" : "es") << "\n";
                    for (const auto& c : branches) {
                        out << "  " << detail::cusp_line(c) << "\n";
                    }
                }
            } else if (o_param->count()) {
                auto par = parse_parametrization(param);
                int base = precision > 0 ? precision : default_precision(par.degree());
                std::vector<SingularPointReport> pts;
                std::optional<ParametrizationReport> whole;
                if (o_at->count()) {
                    pts.push_back(analyze_parameter(par, parse_parameter_point(at), base));
                } else {
                    whole = analyze_parametrization(par, base);
                    pts = whole->points;
                }
                if (json) {
                    nlohmann::json j{{"degree", par.degree()}, {"points", nlohmann::json::array()}};
                    for (const auto& r : pts) {
                        j["points"].push_back({{"parameter", to_string(r.parameter)},
                                               {"image", to_string(r.image)},
                                               {"multseq", to_json(r.multseq)},
                                               {"char", to_json(r.chars)},
                                               {"newton", to_json(r.newton)},
                                               {"delta", json_integer(r.delta)}});
                    }
                    if (whole) {
                        j["delta_sum"] = json_integer(whole->delta_sum);
                        j["arithmetic_genus"] = json_integer(whole->arithmetic_genus);
                        j["irrational_degree"] = whole->irrational_degree;
                        j["complete"] = whole->complete;
                    }
                    out << j.dump(2) << "\n";
                } else {
                    out << "degree " << par.degree() << "\n";
                    for (const auto& r : pts) {
                        out << to_string(r.parameter) << " -> " << to_string(r.image) << "  " << to_string(r.multseq)
                            << "  char " << to_string(r.chars) << "  newton " << to_string(r.newton) << "  delta "
                            << r.delta << "\n";
                    }
                    if (whole) {
                        out << "delta sum " << whole->delta_sum << ", (d-1)(d-2)/2 = " << whole->arithmetic_genus;
                        if (whole->irrational_degree > 0) {
                            out << ", " << whole->irrational_degree << " singular parameters not over Q";
                        }
                        out << (whole->complete ? "  (complete)" : "  (incomplete)") << "\n";
                    }
                }
            } else {
                err << "error: analyze needs --poly with --point, or --param\n";
                return kExitInput;
            }
        } else if (sc_verify->parsed()) {
            struct Job {
                std::string name;
                std::string text;
                bool best_effort;
            };
            std::vector<Job> work;
            if (!script_dir.empty()) {
                std::vector<std::filesystem::path> files;
                for (const auto& entry : std::filesystem::directory_iterator(script_dir)) {
                    if (entry.path().extension() == ".cfs") {
                        files.push_back(entry.path());
                    }
                }
                std::sort(files.begin(), files.end());
                for (const auto& p : files) {
                    std::string name = p.filename().string();
                    bool best = name.rfind("d1_", 0) == 0 || name.rfind("d2_", 0) == 0;
                    work.push_back({name, detail::read_file(p), best});
                }
                if (work.empty()) {
                    err << "error: no .cfs files in '" << script_dir << "'\n";
                    return kExitInput;
                }
            } else {
                for (const auto& e : shipped_corpus()) {
                    work.push_back({e.file_name, render(e.script), is_best_effort(e)});
                }
                std::sort(work.begin(), work.end(), [](const Job& a, const Job& b) { return a.name < b.name; });
            }
            auto outcomes = detail::parallel_map(
                work, jobs, [](const Job& j) { return detail::run_named_script(j.name, j.text, j.best_effort); });
            std::size_t failed = 0;
            for (const auto& o : outcomes) {
                failed += !o.ok && !o.best_effort;
            }
            if (json) {
                nlohmann::json j;
                j["scripts"] = nlohmann::json::array();
                for (const auto& o : outcomes) {
                    j["scripts"].push_back({{"name", o.name},
                                            {"ok", o.ok},
                                            {"best_effort", o.best_effort},
                                            {"statements", o.statements},
                                            {"failed_checks", o.failed},
                                            {"error", o.error},
                                            {"finals", o.finals}});
                }
                j["failed"] = failed;
                j["ok"] = failed == 0;
                out << j.dump(2) << "\n";
            } else {
                for (const auto& o : outcomes) {
                    out << (o.ok ? "ok    " : (o.best_effort ? "WARN  " : "FAIL  ")) << std::left << std::setw(20)
                        << o.name << " " << std::right << std::setw(4) << o.statements << " statements";
                    if (!o.finals.empty()) {
                        out << "  -> " << o.finals.back();
                    }
                    if (o.best_effort) {
                        out << "  (best effort)";
                    }
                    out << "\n";
                    if (!o.error.empty()) {
                        out << "      " << o.error << "\n";
                    }
                }
                out << (failed == 0 ? "ok" : "FAILED") << ": " << outcomes.size() << " scripts, " << failed
                    << " failed\n";
            }
            result = failed == 0 ? kExitOk : kExitFailed;
        } else if (sc_emit->parsed()) {
            std::filesystem::create_directories(emit_dir);
            for (const auto& e : shipped_corpus()) {
                detail::write_file(std::filesystem::path(emit_dir) / e.file_name, render(e.script));
                out << e.file_name << "\n";
            }
        }
    } catch (const PrecisionExhausted& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    } catch (const IrrationalCoefficient& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return result;
}

} // namespace cuspforge
