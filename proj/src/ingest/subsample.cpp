#include "common.hpp"
#include "lakebench/error.hpp"

namespace lakebench {

IngestReport subsample(const std::filesystem::path& nodes_file,
                       const std::filesystem::path& edges_file, ScaleSpec scale,
                       const std::filesystem::path& out_dir) {
  if (scale.record_count == 0) throw InvalidInput("scale must be at least 1");
  const DataGraph full = load_graph(nodes_file, edges_file);

  IngestReport report;
  std::size_t keep = full.node_count();
  if (scale.record_count < keep) {
    keep = static_cast<std::size_t>(scale.record_count);
  } else if (scale.record_count > keep) {
    report.notes.push_back("requested " + std::to_string(scale.record_count) +
                           " nodes, input has " + std::to_string(keep) + "; keeping all");
  }

  GraphBuilder builder;
  std::vector<std::string> words;
  for (std::size_t i = 0; i < keep; ++i) {
    const NodeId v = node_id(i);
    words.clear();
    for (auto kw : full.keyword_ids(v)) words.emplace_back(full.keyword_text(kw));
    builder.add_node(full.external_id(v), words);
  }
  for (std::size_t i = 0; i < keep; ++i) {
    for (NodeId u : full.neighbors(node_id(i))) {
      if (index_of(u) < i) builder.add_edge(node_id(i), u);
    }
  }
  report.records_read = keep;
  report.records_accepted = keep;
  detail::write_outputs(std::move(builder), out_dir, report);
  return report;
}

}  // namespace lakebench
