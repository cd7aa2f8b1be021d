#include "biblio/flow.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "biblio/csv.hpp"
#include "biblio/error.hpp"

namespace biblio {

std::string_view to_string(FlowField field) {
  switch (field) {
    case FlowField::Group: return "group";
    case FlowField::AuthorKeywords: return "author_keywords";
    case FlowField::Supervisors: return "supervisors";
    case FlowField::Student: return "student";
    case FlowField::Year: return "year";
  }
  return "group";
}

FlowField parse_flow_field(std::string_view name) {
  if (name == "group") return FlowField::Group;
  if (name == "author_keywords" || name == "keywords") return FlowField::AuthorKeywords;
  if (name == "supervisors" || name == "supervisor") return FlowField::Supervisors;
  if (name == "student") return FlowField::Student;
  if (name == "year") return FlowField::Year;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown flow field '{}'", name));
}

std::vector<std::string> flow_values(const BibRecord& record, FlowField field, const NormalizationConfig& text) {
  std::vector<std::string> values;
  switch (field) {
    case FlowField::Group:
      if (!record.group.empty()) values.push_back(record.group);
      break;
    case FlowField::AuthorKeywords:
      values = document_terms(record, TextField::AuthorKeywords, text);
      break;
    case FlowField::Supervisors:
      for (const auto& s : record.supervisors)
        if (std::find(values.begin(), values.end(), s) == values.end()) values.push_back(s);
      break;
    case FlowField::Student:
      if (!record.student.empty()) values.push_back(record.student);
      break;
    case FlowField::Year:
      values.push_back(std::to_string(record.year));
      break;
  }
  return values;
}

FlowDiagram flow(const Corpus& corpus, const std::vector<FlowField>& stages, std::size_t top_n,
                 const NormalizationConfig& text) {
  if (stages.size() < 2 || stages.size() > 3)
    throw Error(ErrorCode::InvalidArgument, fmt::format("a flow needs 2 or 3 stages, got {}", stages.size()));

  // values[doc][stage]
  std::vector<std::vector<std::vector<std::string>>> values(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d)
    for (auto field : stages) values[d].push_back(flow_values(corpus.records()[d], field, text));

  FlowDiagram diagram;
  diagram.stages = stages;
  std::vector<std::unordered_map<std::string, std::size_t>> index(stages.size());
  for (std::size_t s = 0; s < stages.size(); ++s) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& doc : values)
      for (const auto& v : doc[s]) ++counts[v];
    if (counts.empty())
      throw Error(ErrorCode::EmptyStage, fmt::format("flow stage '{}' has no values", to_string(stages[s])));
    std::vector<FlowNode> nodes;
    for (const auto& [label, n] : counts) nodes.push_back({label, n});
    std::stable_sort(nodes.begin(), nodes.end(), [](const FlowNode& a, const FlowNode& b) {
      return a.total_weight != b.total_weight ? a.total_weight > b.total_weight : a.label < b.label;
    });
    if (top_n != 0 && nodes.size() > top_n) nodes.resize(top_n);
    for (std::size_t i = 0; i < nodes.size(); ++i) index[s].emplace(nodes[i].label, i);
    diagram.nodes.push_back(std::move(nodes));
  }

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::int64_t> tally;
  for (const auto& doc : values)
    for (std::size_t s = 0; s + 1 < stages.size(); ++s)
      for (const auto& from : doc[s]) {
        auto f = index[s].find(from);
        if (f == index[s].end()) continue;
        for (const auto& to : doc[s + 1]) {
          auto t = index[s + 1].find(to);
          if (t != index[s + 1].end()) ++tally[{s, f->second, t->second}];
        }
      }
  for (const auto& [key, w] : tally) diagram.links.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
  return diagram;
}

void write_flow_links_csv(std::ostream& out, const FlowDiagram& diagram) {
  csv::write_row(out, {"stage", "from_field", "from", "to_field", "to", "weight"});
  for (const auto& link : diagram.links)
    csv::write_row(out, {std::to_string(link.stage), std::string(to_string(diagram.stages[link.stage])),
                         diagram.nodes[link.stage][link.from].label,
                         std::string(to_string(diagram.stages[link.stage + 1])),
                         diagram.nodes[link.stage + 1][link.to].label, std::to_string(link.weight)});
}

void to_json(nlohmann::json& j, const FlowDiagram& d) {
  j = nlohmann::json::object();
  auto& stages = j["stages"] = nlohmann::json::array();
  for (std::size_t s = 0; s < d.stages.size(); ++s) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : d.nodes[s]) nodes.push_back({{"label", n.label}, {"total_weight", n.total_weight}});
    stages.push_back({{"field", to_string(d.stages[s])}, {"nodes", nodes}});
  }
  auto& links = j["links"] = nlohmann::json::array();
  for (const auto& l : d.links)
    links.push_back({{"stage", l.stage}, {"from", l.from}, {"to", l.to}, {"weight", l.weight}});
}

void from_json(const nlohmann::json& j, FlowDiagram& d) {
  d = {};
  for (const auto& stage : j.at("stages")) {
    d.stages.push_back(parse_flow_field(stage.at("field").get<std::string>()));
    std::vector<FlowNode> nodes;
    for (const auto& n : stage.at("nodes"))
      nodes.push_back({n.at("label").get<std::string>(), n.at("total_weight").get<std::int64_t>()});
    d.nodes.push_back(std::move(nodes));
  }
  for (const auto& l : j.at("links"))
    d.links.push_back({l.at("stage").get<std::size_t>(), l.at("from").get<std::size_t>(), l.at("to").get<std::size_t>(),
                       l.at("weight").get<std::int64_t>()});
}

}  // namespace biblio
