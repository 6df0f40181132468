#include "common.hpp"
#include "json.hpp"
#include "lakebench/error.hpp"
#include "lakebench/io.hpp"

namespace lakebench {

std::string ingest_report_json(const IngestReport& report) {
  nlohmann::ordered_json j;
  j["nodes_written"] = report.nodes_written;
  j["edges_written"] = report.edges_written;
  j["records_read"] = report.records_read;
  j["records_accepted"] = report.records_accepted;
  j["records_skipped"] = report.records_skipped;
  auto reasons = nlohmann::ordered_json::array();
  for (const auto& s : report.skip_reasons) {
    reasons.push_back({{"locator", s.locator}, {"reason", s.reason}});
  }
  j["skip_reasons"] = std::move(reasons);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

namespace detail {

void write_outputs(GraphBuilder&& builder, const std::filesystem::path& out_dir,
                   IngestReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create directory: " + ec.message());
  const DataGraph g = std::move(builder).build();
  save_graph(g, out_dir / kNodesFile, out_dir / kEdgesFile);
  report.nodes_written = g.node_count();
  report.edges_written = g.edge_count();
  write_file_atomic(out_dir / kIngestReportFile, ingest_report_json(report));
}

void skip(IngestReport& report, std::string locator, std::string reason) {
  ++report.records_skipped;
  report.skip_reasons.push_back({std::move(locator), std::move(reason)});
}

}  // namespace detail
}  // namespace lakebench
