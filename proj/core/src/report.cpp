#include "serpgauge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "serpgauge/errors.hpp"
#include "serpgauge/queryset.hpp"

namespace serpgauge::report {

namespace {

std::map<std::string, int> taxonomy_order() {
    std::map<std::string, int> order;
    int index = 0;
    for (const auto& leaf : queryset::taxonomy_leaves()) order[leaf] = index++;
    for (const auto& component : queryset::component_ids()) order[component] = index++;
    return order;
}

int order_of(const std::string& path) {
    static const std::map<std::string, int> order = taxonomy_order();
    const auto it = order.find(path);
    return it == order.end() ? static_cast<int>(order.size()) : it->second;
}

void canon_optional(std::optional<double>& value) {
    if (value) value = canon9(*value);
}

void append_escaped(std::string& out, std::string_view text) {
    for (const char c : text) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\r':
                out += "\\r";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buffer[8];
                    std::snprintf(buffer, sizeof buffer, "\\u%04x", c);
                    out += buffer;
                } else {
                    out.push_back(c);
                }
        }
    }
}

void append_string(std::string& out, std::string_view text) {
    out.push_back('"');
    append_escaped(out, text);
    out.push_back('"');
}

void append_number(std::string& out, double value) { out += format9(value); }

void append_optional(std::string& out, const std::optional<double>& value) {
    if (value) {
        append_number(out, *value);
    } else {
        out += "null";
    }
}

std::string emit_json(const RunReport& report) {
    std::string out = "{\n";
    out += "  \"run_id\": ";
    append_string(out, report.run_id);
    out += ",\n  \"queryset_hash\": ";
    append_string(out, report.queryset_hash);
    out += ",\n  \"engines\": [";
    for (std::size_t i = 0; i < report.engines.size(); ++i) {
        if (i) out += ", ";
        append_string(out, report.engines[i]);
    }
    out += "],\n  \"domains\": [";
    for (std::size_t i = 0; i < report.domains.size(); ++i) {
        const auto& row = report.domains[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"engine_id\": ";
        append_string(out, row.engine_id);
        out += ", \"domain_path\": ";
        append_string(out, row.domain_path);
        out += ", \"n_queries\": " + std::to_string(row.n_queries);
        out += ", \"accuracy\": ";
        append_number(out, row.accuracy);
        out += ", \"mrr\": ";
        append_optional(out, row.mrr);
        out += ", \"signed_mrr\": ";
        append_optional(out, row.signed_mrr);
        out += ", \"pass_rate\": ";
        append_optional(out, row.pass_rate);
        out += "}";
    }
    out += report.domains.empty() ? "],\n" : "\n  ],\n";
    out += "  \"components\": [";
    for (std::size_t i = 0; i < report.components.size(); ++i) {
        const auto& row = report.components[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"engine_id\": ";
        append_string(out, row.engine_id);
        out += ", \"component\": ";
        append_string(out, row.component);
        out += ", \"n_leaves\": " + std::to_string(row.n_leaves);
        out += ", \"n_queries\": " + std::to_string(row.n_queries);
        out += ", \"accuracy\": ";
        append_number(out, row.accuracy);
        out += ", \"mrr\": ";
        append_optional(out, row.mrr);
        out += ", \"signed_mrr\": ";
        append_optional(out, row.signed_mrr);
        out += ", \"pass_rate\": ";
        append_optional(out, row.pass_rate);
        out += ", \"headline\": ";
        append_number(out, row.headline);
        out += "}";
    }
    out += report.components.empty() ? "],\n" : "\n  ],\n";
    out += "  \"warnings\": [";
    for (std::size_t i = 0; i < report.warnings.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        append_string(out, report.warnings[i]);
    }
    out += report.warnings.empty() ? "],\n" : "\n  ],\n";
    out += "  \"timing\": {\"queries\": " + std::to_string(report.timing.queries) +
           ", \"serps\": " + std::to_string(report.timing.serps) +
           ", \"pages\": " + std::to_string(report.timing.pages) + "}\n";
    out += "}\n";
    return out;
}

std::string csv_cell(const std::optional<double>& value) {
    return value ? format9(*value) : std::string();
}

std::string emit_csv(const RunReport& report) {
    std::string out = "engine_id,domain_path,n_queries,accuracy,mrr,signed_mrr,pass_rate\n";
    for (const auto& row : report.domains) {
        out += row.engine_id + "," + row.domain_path + "," + std::to_string(row.n_queries) +
               "," + format9(row.accuracy) + "," + csv_cell(row.mrr) + "," +
               csv_cell(row.signed_mrr) + "," + csv_cell(row.pass_rate) + "\n";
    }
    return out;
}

std::optional<double> optional_of(const nlohmann::json& value, const char* key) {
    if (!value.contains(key)) throw InputError(std::string("report row lacks '") + key + "'");
    const auto& field = value.at(key);
    if (field.is_null()) return std::nullopt;
    if (!field.is_number()) throw InputError(std::string("report field '") + key + "' is not numeric");
    return field.get<double>();
}

double number_of(const nlohmann::json& value, const char* key) {
    const auto field = optional_of(value, key);
    if (!field) throw InputError(std::string("report field '") + key + "' is null");
    return *field;
}

std::string string_of(const nlohmann::json& value, const char* key) {
    if (!value.contains(key) || !value.at(key).is_string())
        throw InputError(std::string("report field '") + key + "' missing or not a string");
    return value.at(key).get<std::string>();
}

// Chart geometry. Everything is integer pixels so output is reproducible.
constexpr int kBarWidth = 22;
constexpr int kBarGap = 4;
constexpr int kGroupGap = 26;
constexpr int kPlotHeight = 150;
constexpr int kPanelTop = 58;
constexpr int kPanelBottom = 84;
constexpr int kPanelLeft = 34;

const std::vector<std::string>& palette() {
    static const std::vector<std::string> colors = {
        "#4878a8", "#d08945", "#5ba053", "#b24d4d", "#8064a2", "#6b6b6b", "#3d9e9e", "#c7b45a",
    };
    return colors;
}

void append_xml_escaped(std::string& out, std::string_view text) {
    for (const char c : text) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out.push_back(c);
    }
}

std::string short_label(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3g", value);
    return buffer;
}

struct Panel {
    std::string title;
    std::vector<std::string> x_labels;
    // values[x][engine]; absent = no bar.
    std::vector<std::vector<std::optional<double>>> values;
};

int panel_width(const Panel& panel, int n_engines) {
    const int group = n_engines * kBarWidth + (n_engines - 1) * kBarGap;
    return kPanelLeft + static_cast<int>(panel.x_labels.size()) * (group + kGroupGap) + 6;
}

// One figure: a legend row and the given panels side by side.
std::string render_figure(const std::string& title, const std::vector<Panel>& panels,
                          const std::vector<std::string>& engines) {
    const int n_engines = std::max<int>(1, static_cast<int>(engines.size()));
    int width = 16;
    for (const auto& panel : panels) width += panel_width(panel, n_engines) + 10;
    width = std::max(width, 240);
    const int height = kPanelTop + kPlotHeight + kPanelBottom;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "<rect width=\"" + std::to_string(width) + "\" height=\"" + std::to_string(height) +
           "\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"12\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" "
           "font-weight=\"bold\" fill=\"#222222\">";
    append_xml_escaped(svg, title);
    svg += "</text>\n";

    int legend_x = 12;
    for (std::size_t e = 0; e < engines.size(); ++e) {
        const auto& color = palette()[e % palette().size()];
        svg += "<rect x=\"" + std::to_string(legend_x) + "\" y=\"26\" width=\"12\" height=\"12\" fill=\"" +
               color + "\"/>\n";
        svg += "<text x=\"" + std::to_string(legend_x + 16) +
               "\" y=\"36\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\">";
        append_xml_escaped(svg, engines[e]);
        svg += "</text>\n";
        legend_x += 22 + 7 * static_cast<int>(engines[e].size());
    }

    int panel_x = 12;
    const int axis_y = kPanelTop + kPlotHeight;
    for (const auto& panel : panels) {
        const int pw = panel_width(panel, n_engines);
        svg += "<text x=\"" + std::to_string(panel_x + pw / 2) + "\" y=\"" +
               std::to_string(kPanelTop - 6) +
               "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
               "fill=\"#222222\">";
        append_xml_escaped(svg, panel.title);
        svg += "</text>\n";
        svg += "<line x1=\"" + std::to_string(panel_x + kPanelLeft - 6) + "\" y1=\"" +
               std::to_string(axis_y) + "\" x2=\"" + std::to_string(panel_x + pw - 4) +
               "\" y2=\"" + std::to_string(axis_y) + "\" stroke=\"#444444\"/>\n";
        svg += "<line x1=\"" + std::to_string(panel_x + kPanelLeft - 6) + "\" y1=\"" +
               std::to_string(kPanelTop) + "\" x2=\"" + std::to_string(panel_x + kPanelLeft - 6) +
               "\" y2=\"" + std::to_string(axis_y) + "\" stroke=\"#444444\"/>\n";

        const int group = n_engines * kBarWidth + (n_engines - 1) * kBarGap;
        for (std::size_t x = 0; x < panel.x_labels.size(); ++x) {
            const int group_x = panel_x + kPanelLeft + static_cast<int>(x) * (group + kGroupGap);
            for (std::size_t e = 0; e < panel.values[x].size(); ++e) {
                const auto& value = panel.values[x][e];
                if (!value) continue;
                const double clamped = std::clamp(*value, 0.0, 1.0);
                const int bar_h = static_cast<int>(std::lround(clamped * kPlotHeight));
                const int bar_x = group_x + static_cast<int>(e) * (kBarWidth + kBarGap);
                const auto& color = palette()[e % palette().size()];
                svg += "<rect x=\"" + std::to_string(bar_x) + "\" y=\"" +
                       std::to_string(axis_y - bar_h) + "\" width=\"" + std::to_string(kBarWidth) +
                       "\" height=\"" + std::to_string(bar_h) + "\" fill=\"" + color + "\"/>\n";
                svg += "<text x=\"" + std::to_string(bar_x + kBarWidth / 2) + "\" y=\"" +
                       std::to_string(axis_y - bar_h - 4) +
                       "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" "
                       "fill=\"#222222\">" +
                       short_label(*value) + "</text>\n";
            }
            const int label_x = group_x + group / 2;
            svg += "<text x=\"" + std::to_string(label_x) + "\" y=\"" + std::to_string(axis_y + 14) +
                   "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
                   "fill=\"#222222\" transform=\"rotate(-30 " +
                   std::to_string(label_x) + " " + std::to_string(axis_y + 14) + ")\">";
            append_xml_escaped(svg, panel.x_labels[x]);
            svg += "</text>\n";
        }
        panel_x += pw + 10;
    }
    svg += "</svg>\n";
    return svg;
}

std::string leaf_title(const std::string& path) {
    const auto slash = path.rfind('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

// The number a bar shows for a leaf: probe pass rate where probes ran,
// reciprocal rank for rank-quality leaves, hit rate otherwise.
double leaf_value(const metrics::DomainScore& row) {
    if (row.pass_rate) return *row.pass_rate;
    if (row.mrr) return *row.mrr;
    return row.accuracy;
}

void collect_leaf_paths(const queryset::DomainNode& node, std::vector<std::string>& out) {
    if (node.is_leaf()) {
        out.push_back(node.path);
        return;
    }
    for (const auto& child : node.children) collect_leaf_paths(child, out);
}

}  // namespace

double canon9(double value) {
    const std::string text = format9(value);
    return std::strtod(text.c_str(), nullptr);
}

std::string format9(double value) {
    if (!std::isfinite(value)) throw Error("report values must be finite");
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.9g", value);
    return buffer;
}

void canonicalize(RunReport& report) {
    std::sort(report.engines.begin(), report.engines.end());
    report.engines.erase(std::unique(report.engines.begin(), report.engines.end()),
                         report.engines.end());
    std::sort(report.domains.begin(), report.domains.end(),
              [](const metrics::DomainScore& a, const metrics::DomainScore& b) {
                  if (a.engine_id != b.engine_id) return a.engine_id < b.engine_id;
                  return order_of(a.domain_path) < order_of(b.domain_path);
              });
    std::sort(report.components.begin(), report.components.end(),
              [](const metrics::ComponentScore& a, const metrics::ComponentScore& b) {
                  if (a.engine_id != b.engine_id) return a.engine_id < b.engine_id;
                  return order_of(a.component) < order_of(b.component);
              });
    for (auto& row : report.domains) {
        row.accuracy = canon9(row.accuracy);
        canon_optional(row.mrr);
        canon_optional(row.signed_mrr);
        canon_optional(row.pass_rate);
    }
    for (auto& row : report.components) {
        row.accuracy = canon9(row.accuracy);
        canon_optional(row.mrr);
        canon_optional(row.signed_mrr);
        canon_optional(row.pass_rate);
        row.headline = canon9(row.headline);
    }
}

std::string emit_report(const RunReport& report, Format format) {
    return format == Format::json ? emit_json(report) : emit_csv(report);
}

RunReport parse_report(std::string_view json) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw InputError("report root must be an object");
    RunReport report;
    report.run_id = string_of(root, "run_id");
    report.queryset_hash = string_of(root, "queryset_hash");
    if (!root.contains("engines") || !root.at("engines").is_array())
        throw InputError("report field 'engines' missing or not a list");
    for (const auto& engine : root.at("engines")) {
        if (!engine.is_string()) throw InputError("engine list entries must be strings");
        report.engines.push_back(engine.get<std::string>());
    }
    if (!root.contains("domains") || !root.at("domains").is_array())
        throw InputError("report field 'domains' missing or not a list");
    for (const auto& row : root.at("domains")) {
        metrics::DomainScore score;
        score.engine_id = string_of(row, "engine_id");
        score.domain_path = string_of(row, "domain_path");
        score.n_queries = static_cast<int>(number_of(row, "n_queries"));
        score.accuracy = number_of(row, "accuracy");
        score.mrr = optional_of(row, "mrr");
        score.signed_mrr = optional_of(row, "signed_mrr");
        score.pass_rate = optional_of(row, "pass_rate");
        report.domains.push_back(std::move(score));
    }
    if (!root.contains("components") || !root.at("components").is_array())
        throw InputError("report field 'components' missing or not a list");
    for (const auto& row : root.at("components")) {
        metrics::ComponentScore score;
        score.engine_id = string_of(row, "engine_id");
        score.component = string_of(row, "component");
        score.n_leaves = static_cast<int>(number_of(row, "n_leaves"));
        score.n_queries = static_cast<int>(number_of(row, "n_queries"));
        score.accuracy = number_of(row, "accuracy");
        score.mrr = optional_of(row, "mrr");
        score.signed_mrr = optional_of(row, "signed_mrr");
        score.pass_rate = optional_of(row, "pass_rate");
        score.headline = number_of(row, "headline");
        report.components.push_back(std::move(score));
    }
    if (!root.contains("warnings") || !root.at("warnings").is_array())
        throw InputError("report field 'warnings' missing or not a list");
    for (const auto& warning : root.at("warnings")) {
        if (!warning.is_string()) throw InputError("warnings must be strings");
        report.warnings.push_back(warning.get<std::string>());
    }
    if (!root.contains("timing") || !root.at("timing").is_object())
        throw InputError("report field 'timing' missing or not an object");
    const auto& timing = root.at("timing");
    report.timing.queries = static_cast<std::int64_t>(number_of(timing, "queries"));
    report.timing.serps = static_cast<std::int64_t>(number_of(timing, "serps"));
    report.timing.pages = static_cast<std::int64_t>(number_of(timing, "pages"));
    return report;
}

std::map<std::string, std::string> emit_charts(const RunReport& report) {
    std::map<std::string, const metrics::DomainScore*> by_key;
    for (const auto& row : report.domains) by_key[row.engine_id + "\x1f" + row.domain_path] = &row;
    std::map<std::string, const metrics::ComponentScore*> component_rows;
    for (const auto& row : report.components)
        component_rows[row.engine_id + "\x1f" + row.component] = &row;

    std::map<std::string, std::string> files;
    std::vector<std::string> charted_components;
    for (const auto& component : queryset::component_ids()) {
        const auto* node = queryset::find_domain(component);
        if (node == nullptr) continue;
        bool any = false;
        for (const auto& engine : report.engines)
            if (component_rows.count(engine + "\x1f" + component)) any = true;
        if (!any) continue;
        charted_components.push_back(component);

        std::vector<Panel> panels;
        for (const auto& child : node->children) {
            std::vector<std::string> leaf_paths;
            collect_leaf_paths(child, leaf_paths);
            Panel panel;
            panel.title = leaf_title(child.path);
            for (const auto& path : leaf_paths) {
                bool covered = false;
                std::vector<std::optional<double>> column;
                for (const auto& engine : report.engines) {
                    const auto it = by_key.find(engine + "\x1f" + path);
                    if (it != by_key.end()) {
                        covered = true;
                        column.emplace_back(leaf_value(*it->second));
                    } else {
                        column.emplace_back(std::nullopt);
                    }
                }
                if (covered) {
                    panel.x_labels.push_back(leaf_title(path));
                    panel.values.push_back(std::move(column));
                }
            }
            if (!panel.x_labels.empty()) panels.push_back(std::move(panel));
        }
        Panel sum_up;
        sum_up.title = "sum up";
        sum_up.x_labels.push_back(component);
        std::vector<std::optional<double>> column;
        for (const auto& engine : report.engines) {
            const auto it = component_rows.find(engine + "\x1f" + component);
            column.emplace_back(it == component_rows.end() ? std::optional<double>()
                                                           : it->second->headline);
        }
        sum_up.values.push_back(std::move(column));
        panels.push_back(std::move(sum_up));

        files[component + ".svg"] = render_figure(component, panels, report.engines);
    }

    Panel summary;
    summary.title = "components";
    for (const auto& component : charted_components) {
        std::vector<std::optional<double>> column;
        for (const auto& engine : report.engines) {
            const auto it = component_rows.find(engine + "\x1f" + component);
            column.emplace_back(it == component_rows.end() ? std::optional<double>()
                                                           : it->second->headline);
        }
        summary.x_labels.push_back(component);
        summary.values.push_back(std::move(column));
    }
    files["summary.svg"] = render_figure("overall comparison", {summary}, report.engines);
    return files;
}

}  // namespace serpgauge::report
