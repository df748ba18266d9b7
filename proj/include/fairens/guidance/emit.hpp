#pragma once

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fairens/guidance/diagram.hpp"

namespace fairens {

/// Stable-key-order JSON document for the diagram; emitting twice yields
/// identical bytes.
inline nlohmann::ordered_json diagram_to_json(const GuidanceDiagram& d) {
    nlohmann::ordered_json j;
    j["params"] = {{"rows_threshold", d.params.rows_threshold},
                   {"di_threshold", d.params.di_threshold},
                   {"top_fraction", d.params.top_fraction},
                   {"top_k", d.params.top_k}};
    j["quadrants"] = nlohmann::ordered_json::array();
    for (const auto& qr : d.quadrants) {
        nlohmann::ordered_json q;
        q["size"] = qr.quadrant.size_name();
        q["fairness"] = qr.quadrant.fairness_name();
        q["datasets"] = qr.datasets;
        nlohmann::ordered_json cells;
        for (const auto& metric : diagram_metrics()) {
            const DiagramCell& cell = qr.cells.at(metric);
            nlohmann::ordered_json cj;
            cj["status"] = cell.status;
            cj["top"] = nlohmann::ordered_json::array();
            for (const auto& e : cell.entries)
                cj["top"].push_back({{"pipeline", e.pipeline}, {"value", e.value}});
            cells[metric] = std::move(cj);
        }
        q["cells"] = std::move(cells);
        j["quadrants"].push_back(std::move(q));
    }
    return j;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

/// Decision-tree rendering: branch on size, then fairness, then the target
/// metric; leaves list the top-3 pipelines with their averaged standardized
/// values.
inline std::string diagram_to_dot(const GuidanceDiagram& d) {
    std::ostringstream out;
    out << "digraph guidance {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box, fontname=\"Helvetica\"];\n";
    out << "  root [label=\"dataset\"];\n";
    for (const auto& qr : d.quadrants) {
        const std::string size = qr.quadrant.size_name();
        const std::string fairness = qr.quadrant.fairness_name();
        const std::string size_id = "size_" + size;
        const std::string quad_id = "quad_" + size + "_" + fairness;
        out << "  " << size_id << " [label=\"" << size << "\\n(rows "
            << (qr.quadrant.large ? ">= " : "< ") << format_double(qr.quadrant.rows_threshold)
            << ")\"];\n";
        out << "  root -> " << size_id << ";\n";
        out << "  " << quad_id << " [label=\"" << fairness << "\\n(baseline DI "
            << (qr.quadrant.fair ? ">= " : "< ") << format_double(qr.quadrant.di_threshold) << ")\"];\n";
        out << "  " << size_id << " -> " << quad_id << ";\n";
        for (const auto& metric : diagram_metrics()) {
            const DiagramCell& cell = qr.cells.at(metric);
            const std::string leaf_id = quad_id + "_" + metric;
            std::string label = metric + "\\n";
            if (cell.status != "ok") {
                label += cell.status;
            } else {
                for (std::size_t i = 0; i < cell.entries.size(); ++i) {
                    label += std::to_string(i + 1) + ". " + detail::dot_escape(cell.entries[i].pipeline) +
                             " (" + format_double(cell.entries[i].value) + ")\\n";
                }
            }
            out << "  " << leaf_id << " [shape=note, label=\"" << label << "\"];\n";
            out << "  " << quad_id << " -> " << leaf_id << ";\n";
        }
    }
    out << "}\n";
    return out.str();
}

inline nlohmann::ordered_json loo_to_json(const LooReport& r) {
    nlohmann::ordered_json j;
    j["params"] = {{"rows_threshold", r.params.rows_threshold},
                   {"di_threshold", r.params.di_threshold},
                   {"top_fraction", r.params.top_fraction},
                   {"top_k", r.params.top_k}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json rj;
        rj["dataset"] = row.dataset;
        rj["quadrant"] = row.quadrant;
        rj["status"] = row.status;
        nlohmann::ordered_json cells;
        for (const auto& metric : diagram_metrics()) {
            auto it = row.cells.find(metric);
            if (it == row.cells.end()) continue;
            nlohmann::ordered_json cj;
            cj["num"] = it->second.config_differences;
            if (it->second.metric_difference) cj["metric"] = *it->second.metric_difference;
            else cj["metric"] = nullptr;
            if (!it->second.note.empty()) cj["note"] = it->second.note;
            cells[metric] = std::move(cj);
        }
        rj["cells"] = std::move(cells);
        j["rows"].push_back(std::move(rj));
    }
    return j;
}

/// Plain-text table mirroring the leave-one-out report: per metric a
/// configuration-difference count and a signed metric difference.
inline std::string loo_to_text(const LooReport& r) {
    std::ostringstream out;
    out << "Omitted dataset            | DI Mean        | DI StdDev      | F1 Mean\n";
    out << "                           | Num  Metric    | Num  Metric    | Num  Metric\n";
    out << "---------------------------+----------------+----------------+----------------\n";
    for (const auto& row : r.rows) {
        out << row.dataset;
        for (std::size_t pad = row.dataset.size(); pad < 27; ++pad) out << ' ';
        if (row.status != "ok") {
            out << "| " << row.status << "\n";
            continue;
        }
        for (const auto& metric : diagram_metrics()) {
            const auto& cell = row.cells.at(metric);
            std::string value = cell.metric_difference
                                    ? format_double(std::round(*cell.metric_difference * 100.0) / 100.0)
                                    : std::string("-");
            out << "| " << cell.config_differences << "    " << value;
            for (std::size_t pad = value.size(); pad < 10; ++pad) out << ' ';
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace fairens
