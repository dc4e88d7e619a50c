// Command-line surface: exact cone/chain computations and fiber-model
// pipelines (minimal n.c.d. model, minimal log regular model, reduction-type
// verdicts).  All I/O is integer-only JSON; DOT output for graph rendering.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arithsurf/classify.hpp"
#include "arithsurf/dot.hpp"
#include "arithsurf/json_io.hpp"
#include "arithsurf/moves.hpp"
#include "arithsurf/reduction.hpp"
#include "arithsurf/support_function.hpp"

namespace {

using namespace arithsurf;

// Inputs may be a file path or inline JSON.
ordered_json load_json(const std::string& arg) {
    std::string text = arg;
    if (std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("input is not valid JSON: " + arg);
    return j;
}

std::string format_esets(const ESets& es) {
    ordered_json j;
    auto put = [&](const char* key, const std::set<std::string>& s) {
        j[key] = std::vector<std::string>(s.begin(), s.end());
    };
    put("e_P2", es.p2);
    put("e_P1", es.p1);
    put("e_P1p", es.p1p);
    put("e_01p", es.zo1p);
    put("e_node", es.node);
    put("e_eq_minus1", es.eq_minus1);
    put("e_le_minus2", es.le_minus2);
    return dump_canonical(j);
}

std::string report_summary(const ModelReport& rep) {
    std::ostringstream os;
    os << "p = " << rep.p << ", (g, r) = (" << rep.g << ", " << rep.r << ")\n";
    os << "minimal n.c.d. model: " << rep.ncd.components.size() << " component(s)\n";
    os << "C_lreg: " << rep.lreg.model.components.size() << " component(s), "
       << rep.lreg.singular_points().size() << " singular point(s)"
       << (rep.lreg.absolute_minimal ? ", absolute minimal" : "") << "\n";
    os << "log smooth:  " << (rep.log_smooth ? "yes" : "no") << "\n";
    for (const auto& w : rep.log_smooth_witnesses)
        os << "  witness: " << w.kind << " " << w.id << ": " << w.clause << "\n";
    os << "semistable:  " << (rep.semistable ? "yes" : "no") << "\n";
    os << "stable:      " << (rep.stable ? "yes" : "no") << "\n";
    if (rep.e_min_value)
        os << "e_min:       " << *rep.e_min_value << "\n";
    else
        os << "e_min:       undefined (no log smooth reduction)\n";
    for (const auto& n : rep.notes) os << "note: " << n << "\n";
    return os.str();
}

std::string singular_table(const FiberModel& m) {
    std::ostringstream os;
    for (const auto& s : m.singular_points) {
        os << s.id << ": weights (";
        for (size_t i = 0; i < s.weights.size(); ++i) os << (i ? "," : "") << s.weights[i];
        os << "), " << s.exc_variant << "/" << s.str_variant << ", [k':k] = " << s.residue.degree
           << ", embdim = " << s.embedding_dim << ", incident:";
        for (const auto& inc : s.incident) os << " " << inc.id;
        os << "\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact combinatorics of models of curves over discrete valuation rings"};
    app.require_subcommand(1);
    long long seed = 0;
    app.add_option("--seed", seed,
                   "seed for randomized test drivers (deterministic commands ignore it)");

    std::string input, format = "json", at_component, blowdown_id, new_id, dot_path;
    long long p_override = -1, at_degree = 1;
    bool at_insep = false;
    long long at_edge = -1;
    unsigned jobs = 1;
    std::vector<std::string> inputs;

    auto* cone = app.add_subcommand("cone", "rank-2 cone and chain computations");
    cone->require_subcommand(1);
    auto* cone_resolve = cone->add_subcommand("resolve", "coarsest nonsingular subdivision");
    cone_resolve->add_option("input", input, "cone JSON ({\"u\":[..],\"v\":[..]}) or file")->required();
    auto* cone_chain = cone->add_subcommand("chain", "reconstruct a cone from chain weights");
    cone_chain->add_option("input", input, "chain JSON ({\"weights\":[..]}) or file")->required();
    auto* cone_panels = cone->add_subcommand("panels", "degree-one panels of the dual monoid");
    cone_panels->add_option("input", input, "chain JSON or file")->required();
    auto* cone_star = cone->add_subcommand("star", "log blow-up subdivision at the closed point");
    cone_star->add_option("input", input, "cone JSON or file")->required();

    auto* model = app.add_subcommand("model", "fiber-model pipelines");
    model->require_subcommand(1);
    auto* m_ncd = model->add_subcommand("ncd", "minimal regular n.c.d. model");
    m_ncd->add_option("input", input)->required();
    m_ncd->add_option("--format", format, "json|dot");
    m_ncd->add_option("--dot", dot_path, "also write before/after DOT graphs to this file");
    auto* m_blowup = model->add_subcommand("blowup", "blow up at a closed point");
    m_blowup->add_option("input", input)->required();
    m_blowup->add_option("--at", at_component, "component carrying the point");
    m_blowup->add_option("--deg", at_degree, "point residue degree over k");
    m_blowup->add_flag("--insep", at_insep, "point residue field inseparable");
    m_blowup->add_option("--at-edge", at_edge, "blow up at an existing double point (edge index)");
    m_blowup->add_option("--id", new_id, "id for the exceptional component");
    m_blowup->add_option("--format", format, "json|dot");
    m_blowup->add_option("--dot", dot_path, "also write before/after DOT graphs to this file");
    auto* m_blowdown = model->add_subcommand("blowdown", "contract an exceptional curve");
    m_blowdown->add_option("input", input)->required();
    m_blowdown->add_option("--component", blowdown_id, "component to contract")->required();
    m_blowdown->add_option("--format", format, "json|dot");
    m_blowdown->add_option("--dot", dot_path, "also write before/after DOT graphs to this file");
    auto* m_lreg = model->add_subcommand("lreg", "minimal log regular model");
    m_lreg->add_option("input", input)->required();
    m_lreg->add_option("--format", format, "json|dot");
    m_lreg->add_option("--dot", dot_path, "also write before/after DOT graphs to this file");
    auto* m_esets = model->add_subcommand("esets", "the seven E-sets");
    m_esets->add_option("input", input)->required();
    auto* m_classify = model->add_subcommand("classify", "full reduction-type report");
    m_classify->add_option("input", inputs, "model file(s)")->required();
    m_classify->add_option("--p", p_override, "residue characteristic override (0 or prime)");
    m_classify->add_option("--jobs", jobs, "parallel classification of multiple files");
    m_classify->add_option("--format", format, "json|text");
    auto* m_emin = model->add_subcommand("emin", "e_min of the minimal log regular model");
    m_emin->add_option("input", input)->required();
    m_emin->add_option("--p", p_override, "residue characteristic override");
    auto* m_fmt = model->add_subcommand("fmt", "reserialize a model in canonical form");
    m_fmt->add_option("input", input)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cone_resolve->parsed()) {
            ResolutionChain chain = resolve_cone(parse_cone(load_json(input)));
            std::cout << dump_canonical(chain_to_json(chain));
        } else if (cone_chain->parsed()) {
            auto [c, chain] = chain_to_cone(parse_weights(load_json(input)));
            ordered_json j;
            j["cone"] = cone_to_json(c);
            j["rays"] = rays_to_json(chain.rays);
            j["weights"] = chain.weights;
            std::cout << dump_canonical(j);
        } else if (cone_panels->parsed()) {
            auto [c, chain] = chain_to_cone(parse_weights(load_json(input)));
            auto ps = panels(chain);
            ordered_json j;
            j["panels"] = ordered_json::array();
            for (const auto& panel : ps) {
                ordered_json pj = ordered_json::array();
                for (const auto& f : panel) pj.push_back({f.p, f.q});
                j["panels"].push_back(std::move(pj));
            }
            j["union_size"] = degree_one_slab_count(chain);
            j["embedding_dim"] = embedding_dimension(chain);
            std::cout << dump_canonical(j);
        } else if (cone_star->parsed()) {
            Cone2 c = parse_cone(load_json(input));
            ordered_json j;
            j["rays"] = rays_to_json(star_subdivision_max_ideal(c));
            std::cout << dump_canonical(j);
        } else if (m_ncd->parsed() || m_blowup->parsed() || m_blowdown->parsed()) {
            FiberModel before = parse_model(load_json(input));
            FiberModel after;
            if (m_ncd->parsed()) {
                after = minimal_ncd(before);
            } else if (m_blowup->parsed()) {
                require_valid(before);
                PointSpec spec;
                if (at_edge >= 0)
                    spec = PointSpec::at_edge(static_cast<size_t>(at_edge));
                else if (!at_component.empty())
                    spec = PointSpec::on_component(at_component, {at_degree, !at_insep});
                else
                    throw std::invalid_argument("blowup needs --at or --at-edge");
                after = blow_up(before, spec, new_id);
            } else {
                require_valid(before);
                after = blow_down(before, blowdown_id);
            }
            if (!dot_path.empty()) {
                std::ofstream out(dot_path);
                out << to_dot(before, "before") << to_dot(after, "after");
            }
            if (format == "dot")
                std::cout << to_dot(before, "before") << to_dot(after, "after");
            else
                std::cout << dump_canonical(model_to_json(after));
        } else if (m_lreg->parsed()) {
            FiberModel before = parse_model(load_json(input));
            LregResult lreg = build_lreg(minimal_ncd(before));
            if (!dot_path.empty()) {
                std::ofstream out(dot_path);
                out << to_dot(before, "before") << to_dot(lreg.model, "lreg");
            }
            if (format == "dot") {
                std::cout << to_dot(before, "before") << to_dot(lreg.model, "lreg");
            } else {
                ordered_json j;
                j["model"] = model_to_json(lreg.model);
                j["absolute_minimal"] = lreg.absolute_minimal;
                std::cout << dump_canonical(j);
                std::cerr << singular_table(lreg.model);
            }
        } else if (m_esets->parsed()) {
            FiberModel m = parse_model(load_json(input));
            require_valid(m);
            std::cout << format_esets(e_sets(m));
        } else if (m_classify->parsed()) {
            std::optional<i64> p;
            if (p_override >= 0) p = p_override;
            std::vector<std::future<ModelReport>> futures;
            std::vector<ModelReport> reports(inputs.size());
            if (jobs > 1 && inputs.size() > 1) {
                for (const auto& file : inputs)
                    futures.push_back(std::async(std::launch::async, [file, p] {
                        return classify_model(parse_model(load_json(file)), p);
                    }));
                for (size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
            } else {
                for (size_t i = 0; i < inputs.size(); ++i)
                    reports[i] = classify_model(parse_model(load_json(inputs[i])), p);
            }
            for (size_t i = 0; i < reports.size(); ++i) {
                if (inputs.size() > 1) std::cout << "# " << inputs[i] << "\n";
                if (format == "text") {
                    std::cout << report_summary(reports[i]);
                } else {
                    // JSON report on stdout, human-readable summary on stderr
                    std::cout << dump_canonical(report_to_json(reports[i]));
                    std::cerr << report_summary(reports[i]);
                }
            }
        } else if (m_emin->parsed()) {
            std::optional<i64> p;
            if (p_override >= 0) p = p_override;
            ModelReport rep = classify_model(parse_model(load_json(input)), p);
            if (!rep.e_min_value)
                throw precondition_error("e_min", "model has no log smooth reduction");
            ordered_json j;
            j["e_min"] = *rep.e_min_value;
            std::cout << dump_canonical(j);
        } else if (m_fmt->parsed()) {
            std::cout << dump_canonical(model_to_json(parse_model(load_json(input))));
        }
    } catch (const precondition_error& ex) {
        std::cerr << "precondition violated: " << ex.what() << "\n";
        return 2;
    } catch (const std::overflow_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "malformed input: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "internal error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
