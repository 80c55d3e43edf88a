#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracknet/cli.hpp"
#include "tracknet/cluster.hpp"
#include "tracknet/cooccurrence.hpp"
#include "tracknet/error.hpp"
#include "tracknet/extractor.hpp"
#include "tracknet/hyperlink.hpp"
#include "tracknet/power_law.hpp"
#include "tracknet/rank.hpp"
#include "tracknet/stats.hpp"
#include "tracknet/suffix_rules.hpp"
#include "tracknet/uri.hpp"

namespace py = pybind11;
using namespace tracknet;

namespace {

using NamedEdge = std::tuple<std::string, std::string, std::uint64_t>;

// Vertices in first-appearance order, edges by index.
CooccurrenceGraph graph_from_edges(const std::vector<NamedEdge>& edges) {
    std::vector<std::string> names;
    std::map<std::string, std::uint32_t> index;
    auto id = [&](const std::string& name) {
        auto [it, inserted] = index.emplace(name, static_cast<std::uint32_t>(names.size()));
        if (inserted) names.push_back(name);
        return it->second;
    };
    std::vector<WeightedEdge> out;
    for (const auto& [u, v, w] : edges) out.push_back({id(u), id(v), w});
    std::vector<PayLevelDomain> vertices;
    for (auto& n : names) vertices.emplace_back(n);
    std::vector<std::uint64_t> diagonal(vertices.size(), 0);
    return CooccurrenceGraph(std::move(vertices), std::move(diagonal), std::move(out));
}

std::map<std::string, std::uint32_t> by_name(const CooccurrenceGraph& g, const Partition& p) {
    std::map<std::string, std::uint32_t> out;
    for (std::size_t i = 0; i < g.num_vertices(); ++i) out[g.vertex(i).name()] = p.assignment[i];
    return out;
}

}  // namespace

PYBIND11_MODULE(_tracknet, m) {
    m.doc() = "Third-party tracker network analysis";
    py::register_exception<Error>(m, "Error", PyExc_ValueError);

    py::class_<SuffixRuleSet>(m, "SuffixRules")
        .def_static("load", [](const std::string& path) { return SuffixRuleSet::load(path); }, py::arg("path"))
        .def_static("parse", [](const std::string& text) { return SuffixRuleSet::parse(std::string_view(text)); },
                    py::arg("text"))
        .def("__len__", &SuffixRuleSet::size);

    m.def("canonicalize_uri", [](const std::string& raw) { return canonicalize_uri(raw); }, py::arg("raw"));
    m.def("resolve_pld",
          [](const std::string& host, const SuffixRuleSet& rules) { return resolve_pld(host, rules).name(); },
          py::arg("host"), py::arg("rules"));

    m.def(
        "extract_page",
        [](std::string url, std::string html, const SuffixRuleSet& rules) {
            auto page = make_page_record(std::move(url), std::move(html), rules);
            if (!page) throw Error("extract_page: page URL has no pay-level domain");
            std::vector<std::string> out;
            for (const auto& pld : extract_page(*page, rules)) out.push_back(pld.name());
            return out;
        },
        py::arg("url"), py::arg("html"), py::arg("rules"));

    m.def(
        "pagerank",
        [](const std::vector<std::pair<std::string, std::string>>& links, double damping, double tolerance,
           int max_iterations) {
            std::vector<std::pair<PayLevelDomain, PayLevelDomain>> edges;
            for (const auto& [s, t] : links) edges.emplace_back(PayLevelDomain(s), PayLevelDomain(t));
            auto g = HyperlinkGraph::from_links(edges);
            PageRankOptions options;
            options.damping = damping;
            options.tolerance = tolerance;
            options.max_iterations = max_iterations;
            auto result = pagerank(g, options);
            std::map<std::string, double> out;
            for (std::size_t i = 0; i < result.ranks.size(); ++i) {
                out[result.ranks.vertices()[i].name()] = result.ranks.scores()[i];
            }
            return out;
        },
        py::arg("links"), py::arg("damping") = 0.85, py::arg("tolerance") = 1e-10, py::arg("max_iterations") = 200);

    m.def(
        "g2_test",
        [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
            auto r = g2_test({a, b, c, d});
            return std::make_pair(r.statistic, r.p_value);
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));

    m.def(
        "point_biserial",
        [](const std::vector<int>& groups, const std::vector<double>& values) {
            auto r = point_biserial(groups, values);
            return std::make_pair(r.r, r.p_value);
        },
        py::arg("groups"), py::arg("values"));

    m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("s"), py::arg("a"));
    m.def(
        "fit_power_law",
        [](const std::vector<std::uint64_t>& samples, bool exact_mle, std::size_t min_samples) {
            PowerLawOptions options;
            options.exact_mle = exact_mle;
            options.min_samples = min_samples;
            auto fit = fit_power_law(samples, options);
            py::dict out;
            out["alpha"] = fit.alpha;
            out["x_min"] = fit.x_min;
            out["ks_distance"] = fit.ks_distance;
            out["n_tail"] = fit.n_tail;
            out["sigma"] = fit.sigma;
            return out;
        },
        py::arg("samples"), py::arg("exact_mle") = false, py::arg("min_samples") = 50);

    m.def(
        "modularity",
        [](const std::vector<NamedEdge>& edges, const std::map<std::string, std::uint32_t>& communities,
           double resolution) {
            auto g = graph_from_edges(edges);
            std::vector<std::uint32_t> raw;
            for (auto v : g.vertices()) {
                auto it = communities.find(v.name());
                if (it == communities.end()) throw Error("modularity: no community for " + v.name());
                raw.push_back(it->second);
            }
            return modularity(g, Partition::normalized(raw), resolution);
        },
        py::arg("edges"), py::arg("communities"), py::arg("resolution") = 1.0);

    m.def(
        "louvain",
        [](const std::vector<NamedEdge>& edges, std::uint64_t seed, double resolution) {
            auto g = graph_from_edges(edges);
            LouvainOptions options;
            options.seed = seed;
            options.resolution = resolution;
            auto p = louvain(g, options);
            return std::make_pair(by_name(g, p), modularity(g, p, resolution));
        },
        py::arg("edges"), py::arg("seed") = 1, py::arg("resolution") = 1.0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                std::vector<std::string> full{"tracknet"};
                full.insert(full.end(), args.begin(), args.end());
                code = run_cli(full, out, err);
            }
            return std::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
