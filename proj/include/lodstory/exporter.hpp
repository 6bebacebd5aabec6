#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lodstory/evaluators.hpp"
#include "lodstory/story.hpp"

namespace lodstory {

enum class ExportFormat { Html, Pdf, Json };

std::string_view to_string(ExportFormat format);
// Throws UnsupportedFormat.
ExportFormat parse_export_format(std::string_view text);
std::string_view media_type(ExportFormat format);

enum class SnapshotMode {
  Snapshot,  // results embedded at export time
  Live,      // the exported page queries the endpoint when viewed
};

struct SnapshotPolicy {
  SnapshotMode mode = SnapshotMode::Snapshot;
};

struct ExportBundle {
  ExportFormat format = ExportFormat::Html;
  std::string bytes;
  std::string media_type;
  std::string suggested_filename;
};

// HTML: self-contained document, components in story order.
// PDF: 1.4, text flow plus vector charts.
// JSON: exactly serialize_story(story).
// Errors: MissingPayload in snapshot mode when a data component has no
// payload.
ExportBundle export_story(const Story& story, const PayloadMap& payloads,
                          ExportFormat format, SnapshotPolicy policy = {});

// RFC 4180, CRLF line ends. Header is the table vars, "label,value" for a
// series, "lat,long,<metadata vars>" for a geo set. Throws NotTabular for
// cards.
std::string export_component_csv(const RenderPayload& payload);

// SVG 1.1. bar: one <rect> per datum; line: one <polyline> plus one
// <circle> per datum; scatter: one <circle> per datum; doughnut: one arc
// <path> per datum with sweep 360 * v / sum(v). Throws EmptySeries.
std::string export_component_svg(const Series& series, ChartKind kind,
                                  const std::vector<std::string>& palette,
                                  std::string_view title = {});

// <iframe> pointing at {base}/embed/{story}/{component}. Throws
// UnknownComponent.
std::string export_component_embed(const Story& story, std::string_view component_id,
                                   std::string_view base_url);

// Stand-alone page for one component, served by the embed route.
std::string export_component_page(const Story& story, std::string_view component_id,
                                  const PayloadMap& payloads, SnapshotPolicy policy = {});

std::string story_filename(const Story& story, std::string_view ext);
std::string component_filename(const Story& story, std::string_view component_id,
                               std::string_view ext);

}  // namespace lodstory
