#include "tgcast/graph.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tgcast {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

// Accepts unsigned integers, optionally written as integer-valued decimals
// ("833529.0"); TGB processed CSVs store integer timestamps in float notation.
bool parse_unsigned(std::string_view field, std::uint64_t& out) {
    field = trim(field);
    if (field.empty()) return false;
    std::string_view integral = field;
    std::size_t dot = field.find('.');
    if (dot != std::string_view::npos) {
        std::string_view frac = field.substr(dot + 1);
        if (frac.empty() || frac.find_first_not_of('0') != std::string_view::npos) {
            return false;
        }
        integral = field.substr(0, dot);
        if (integral.empty()) return false;
    }
    auto [ptr, ec] = std::from_chars(integral.data(), integral.data() + integral.size(), out);
    return ec == std::errc{} && ptr == integral.data() + integral.size();
}

}  // namespace

TemporalGraph::TemporalGraph(std::vector<Interaction> interactions, std::string name,
                             std::span<const NodeId> extra_universe)
    : interactions_(std::move(interactions)), name_(std::move(name)) {
    std::stable_sort(interactions_.begin(), interactions_.end(),
                     [](const Interaction& a, const Interaction& b) {
                         return a.timestamp < b.timestamp;
                     });

    universe_.reserve(interactions_.size() * 2 + extra_universe.size());
    for (const Interaction& link : interactions_) {
        universe_.push_back(link.source);
        universe_.push_back(link.destination);
    }
    universe_.insert(universe_.end(), extra_universe.begin(), extra_universe.end());
    std::sort(universe_.begin(), universe_.end());
    universe_.erase(std::unique(universe_.begin(), universe_.end()), universe_.end());

    for (std::size_t i = 0; i < interactions_.size(); ++i) {
        const Interaction& link = interactions_[i];
        adjacency_[link.source].push_back({link.timestamp, link.destination, i});
        adjacency_[link.destination].push_back({link.timestamp, link.source, i});
    }
}

Timestamp TemporalGraph::min_timestamp() const {
    return interactions_.empty() ? 0 : interactions_.front().timestamp;
}

Timestamp TemporalGraph::max_timestamp() const {
    return interactions_.empty() ? 0 : interactions_.back().timestamp;
}

std::span<const Interaction> TemporalGraph::history_before(Timestamp t) const {
    auto end = std::lower_bound(interactions_.begin(), interactions_.end(), t,
                                [](const Interaction& link, Timestamp value) {
                                    return link.timestamp < value;
                                });
    return {interactions_.data(), static_cast<std::size_t>(end - interactions_.begin())};
}

std::span<const TemporalGraph::Incidence> TemporalGraph::incident_before(NodeId e,
                                                                         Timestamp t) const {
    auto it = adjacency_.find(e);
    if (it == adjacency_.end()) return {};
    const std::vector<Incidence>& entries = it->second;
    auto end = std::lower_bound(entries.begin(), entries.end(), t,
                                [](const Incidence& entry, Timestamp value) {
                                    return entry.time < value;
                                });
    return {entries.data(), static_cast<std::size_t>(end - entries.begin())};
}

std::vector<TemporalNode> TemporalGraph::temporal_neighborhood(NodeId e, Timestamp t) const {
    std::span<const Incidence> prefix = incident_before(e, t);
    std::vector<TemporalNode> neighbors;
    neighbors.reserve(prefix.size());
    for (const Incidence& entry : prefix) {
        neighbors.push_back({entry.other, entry.time});
    }
    std::sort(neighbors.begin(), neighbors.end(),
              [](const TemporalNode& a, const TemporalNode& b) {
                  if (a.time != b.time) return a.time > b.time;
                  return a.node < b.node;
              });
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()), neighbors.end());
    return neighbors;
}

TemporalGraph load_edge_list(std::istream& input, const ColumnMap& columns, std::string name,
                             char delimiter, std::span<const NodeId> extra_universe) {
    std::string header;
    if (!std::getline(input, header)) {
        throw std::runtime_error("edge list: empty input, expected a header row");
    }
    if (delimiter == '\0') {
        delimiter = header.find('\t') != std::string::npos ? '\t' : ',';
    }

    std::vector<std::string_view> names = split(header, delimiter);
    auto column_index = [&](const std::string& wanted) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (trim(names[i]) == wanted) return i;
        }
        throw std::runtime_error("edge list: header is missing column '" + wanted + "'");
    };
    const std::size_t src_col = column_index(columns.source);
    const std::size_t dst_col = column_index(columns.destination);
    const std::size_t ts_col = column_index(columns.timestamp);
    const std::size_t needed = std::max({src_col, dst_col, ts_col}) + 1;

    std::vector<Interaction> interactions;
    std::string line;
    std::size_t line_no = 1;  // header was line 1
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string_view> fields = split(line, delimiter);
        if (fields.size() < needed) {
            throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                     ": expected at least " + std::to_string(needed) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        Interaction link;
        auto parse_field = [&](std::size_t col, const std::string& label, std::uint64_t& out) {
            if (!parse_unsigned(fields[col], out)) {
                throw std::runtime_error("edge list line " + std::to_string(line_no) +
                                         ": field '" + label + "' is not a non-negative integer: '" +
                                         std::string(trim(fields[col])) + "'");
            }
        };
        parse_field(src_col, columns.source, link.source);
        parse_field(dst_col, columns.destination, link.destination);
        parse_field(ts_col, columns.timestamp, link.timestamp);
        interactions.push_back(link);
    }

    return TemporalGraph(std::move(interactions), std::move(name), extra_universe);
}

std::vector<NodeId> load_node_universe(std::istream& input) {
    std::vector<NodeId> nodes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (text.empty()) continue;
        NodeId id = 0;
        if (!parse_unsigned(text, id)) {
            throw std::runtime_error("node universe line " + std::to_string(line_no) +
                                     ": not a non-negative integer: '" + std::string(text) + "'");
        }
        nodes.push_back(id);
    }
    return nodes;
}

void write_edge_list(std::ostream& out, const TemporalGraph& graph, const ColumnMap& columns,
                     char delimiter) {
    out << columns.source << delimiter << columns.destination << delimiter << columns.timestamp
        << '\n';
    for (const Interaction& link : graph.interactions()) {
        out << link.source << delimiter << link.destination << delimiter << link.timestamp
            << '\n';
    }
}

}  // namespace tgcast
