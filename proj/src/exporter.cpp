#include "lodstory/exporter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "html_render.hpp"
#include "lodstory/detail/text.hpp"
#include "lodstory/cell_typing.hpp"
#include "lodstory/error.hpp"
#include "lodstory/html_sanitizer.hpp"
#include "lodstory/pdf_writer.hpp"
#include "lodstory/story_json.hpp"

namespace lodstory {

namespace {

using detail::format_number;

constexpr std::size_t kPdfTableRowCap = 50;

// Plain-text blocks of sanitized HTML for the PDF.
struct TextBlock {
  enum class Style { Body, Heading, Bullet, Quote } style = Style::Body;
  std::string text;
};

std::string decode_entities(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos) {
      out.push_back('&');
      continue;
    }
    auto ent = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (ent == "amp") cp = '&';
    else if (ent == "lt") cp = '<';
    else if (ent == "gt") cp = '>';
    else if (ent == "quot") cp = '"';
    else if (ent == "apos") cp = '\'';
    else if (ent == "nbsp") cp = 0xA0;
    else if (!ent.empty() && ent[0] == '#') {
      try {
        cp = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                 ? static_cast<char32_t>(std::stoul(std::string(ent.substr(2)), nullptr, 16))
                 : static_cast<char32_t>(std::stoul(std::string(ent.substr(1))));
      } catch (...) {
      }
    }
    if (!cp || *cp > 0x10FFFF) {
      out.push_back('&');
      continue;
    }
    char32_t c = *cp;
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    i = semi;
  }
  return out;
}

std::vector<TextBlock> html_to_blocks(std::string_view html) {
  std::vector<TextBlock> blocks;
  TextBlock current;
  auto flush = [&] {
    auto text = decode_entities(current.text);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos) {
      current.text = text;
      blocks.push_back(current);
    }
    current = {};
  };
  for (std::size_t i = 0; i < html.size();) {
    if (html[i] != '<') {
      char c = html[i++];
      current.text.push_back(c == '\n' || c == '\r' || c == '\t' ? ' ' : c);
      continue;
    }
    auto gt = html.find('>', i);
    if (gt == std::string_view::npos) break;
    std::string tag(html.substr(i + 1, gt - i - 1));
    i = gt + 1;
    bool closing = !tag.empty() && tag[0] == '/';
    std::string name = tag.substr(closing ? 1 : 0, tag.find_first_of(" />", closing ? 1 : 0) -
                                                       (closing ? 1 : 0));
    if (name == "p" || name == "li" || name == "blockquote" || name == "br" ||
        name == "ul" || name == "ol" || (name.size() == 2 && name[0] == 'h')) {
      flush();
      if (!closing) {
        if (name == "li") current.style = TextBlock::Style::Bullet;
        else if (name == "blockquote") current.style = TextBlock::Style::Quote;
        else if (name[0] == 'h' && name.size() == 2) current.style = TextBlock::Style::Heading;
      }
    }
  }
  flush();
  return blocks;
}

class PdfLayout {
 public:
  static constexpr double kMargin = 50;
  static constexpr double kWidth = PdfWriter::kPageWidth - 2 * kMargin;

  PdfLayout() { pdf_.begin_page(); }

  void ensure(double height) {
    if (y_ - height < kMargin) {
      pdf_.begin_page();
      y_ = PdfWriter::kPageHeight - kMargin;
    }
  }

  void gap(double h) { y_ -= h; }

  void paragraph(std::string_view text, PdfFont font, double size, double indent = 0,
                 PdfColor color = {}) {
    double leading = size * 1.35;
    double avail = kWidth - indent;
    std::string line;
    auto emit = [&] {
      ensure(leading);
      y_ -= leading;
      pdf_.text(kMargin + indent, y_, font, size, line, color);
      line.clear();
    };
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && text[i] == ' ') ++i;
      auto end = text.find(' ', i);
      if (end == std::string_view::npos) end = text.size();
      std::string word(text.substr(i, end - i));
      i = end;
      if (word.empty()) continue;
      std::string candidate = line.empty() ? word : line + " " + word;
      if (!line.empty() && pdf_text_width(candidate, font, size) > avail) {
        emit();
        candidate = word;
      }
      // hard-break words wider than the column
      while (pdf_text_width(candidate, font, size) > avail && candidate.size() > 1) {
        std::size_t cut = candidate.size();
        while (cut > 1 && pdf_text_width(candidate.substr(0, cut), font, size) > avail) --cut;
        while (cut > 1 && (static_cast<unsigned char>(candidate[cut]) & 0xC0) == 0x80) --cut;
        line = candidate.substr(0, cut);
        emit();
        candidate = candidate.substr(cut);
      }
      line = candidate;
    }
    if (!line.empty()) emit();
  }

  void preformatted(std::string_view text, double size) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto nl = text.find('\n', start);
      auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos
                                                                  : nl - start);
      std::string clean(line);
      std::replace(clean.begin(), clean.end(), '\t', ' ');
      if (clean.find_first_not_of(" \r") != std::string::npos)
        paragraph(clean, PdfFont::Mono, size, 10, {0.35, 0.35, 0.35});
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }

  PdfWriter& pdf() { return pdf_; }
  double y() const { return y_; }
  void set_y(double y) { y_ = y; }

 private:
  PdfWriter pdf_;
  double y_ = PdfWriter::kPageHeight - kMargin;
};

std::string fit(std::string_view text, PdfFont font, double size, double width) {
  std::string s(text);
  if (pdf_text_width(s, font, size) <= width) return s;
  while (!s.empty() && pdf_text_width(s + "...", font, size) > width) {
    s.pop_back();
    while (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0x80) s.pop_back();
    if (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0xC0) s.pop_back();
  }
  return s + "...";
}

PdfColor palette_color(const std::vector<std::string>& palette, std::size_t i) {
  if (palette.empty()) return {0.5, 0.5, 0.5};
  return parse_hex_color(palette[i % palette.size()]);
}

void draw_chart(PdfLayout& layout, const Series& s, ChartKind kind,
                const std::vector<std::string>& palette) {
  constexpr double kHeight = 180;
  layout.ensure(kHeight + 30);
  PdfWriter& pdf = layout.pdf();
  double top = layout.y() - 6;
  double bottom = top - kHeight;
  double left = PdfLayout::kMargin + 30;
  double right = PdfLayout::kMargin + PdfLayout::kWidth;
  const PdfColor axis{0.3, 0.3, 0.3};

  if (kind == ChartKind::Doughnut) {
    double total = 0;
    for (double v : s.values) total += std::max(v, 0.0);
    double cx = left + kHeight / 2, cy = bottom + kHeight / 2;
    double r_out = kHeight / 2, r_in = kHeight / 4;
    double angle = 90;  // 12 o'clock, clockwise
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      double sweep = total > 0 ? 360 * std::max(s.values[i], 0.0) / total : 0;
      std::vector<std::pair<double, double>> poly;
      int steps = std::max(2, static_cast<int>(sweep / 3));
      for (int k = 0; k <= steps; ++k) {
        double a = (angle - sweep * k / steps) * std::numbers::pi / 180;
        poly.emplace_back(cx + r_out * std::cos(a), cy + r_out * std::sin(a));
      }
      for (int k = steps; k >= 0; --k) {
        double a = (angle - sweep * k / steps) * std::numbers::pi / 180;
        poly.emplace_back(cx + r_in * std::cos(a), cy + r_in * std::sin(a));
      }
      if (sweep > 0) pdf.fill_polygon(poly, palette_color(palette, i));
      angle -= sweep;
      double ly = top - 12 * static_cast<double>(i + 1);
      if (ly > bottom) {
        pdf.fill_rect(cx + r_out + 20, ly, 8, 8, palette_color(palette, i));
        pdf.text(cx + r_out + 32, ly, PdfFont::Regular, 8,
                 fit(s.labels[i] + " (" + format_number(s.values[i]) + ")", PdfFont::Regular,
                     8, right - cx - r_out - 32));
      }
    }
    layout.set_y(bottom - 10);
    return;
  }

  double lo = std::min(0.0, *std::min_element(s.values.begin(), s.values.end()));
  double hi = std::max(0.0, *std::max_element(s.values.begin(), s.values.end()));
  if (kind != ChartKind::Bar) {
    lo = *std::min_element(s.values.begin(), s.values.end());
    hi = *std::max_element(s.values.begin(), s.values.end());
  }
  if (hi - lo <= 0) hi = lo + 1;
  auto to_y = [&](double v) { return bottom + (v - lo) / (hi - lo) * kHeight; };
  pdf.line(left, bottom, right, bottom, axis);
  pdf.line(left, bottom, left, top, axis);
  pdf.text(PdfLayout::kMargin, to_y(hi) - 3, PdfFont::Regular, 7,
           fit(format_number(hi), PdfFont::Regular, 7, 28));
  pdf.text(PdfLayout::kMargin, to_y(lo) - 3, PdfFont::Regular, 7,
           fit(format_number(lo), PdfFont::Regular, 7, 28));

  const std::size_t n = s.values.size();
  double slot = (right - left) / static_cast<double>(n);
  std::vector<double> xs(n);
  if (kind == ChartKind::Scatter) {
    std::vector<double> raw;
    for (const auto& l : s.labels) raw.push_back(parse_numeral(l).value_or(0));
    double xlo = *std::min_element(raw.begin(), raw.end());
    double xhi = *std::max_element(raw.begin(), raw.end());
    if (xhi - xlo <= 0) xhi = xlo + 1;
    for (std::size_t i = 0; i < n; ++i)
      xs[i] = left + 5 + (raw[i] - xlo) / (xhi - xlo) * (right - left - 10);
  } else {
    for (std::size_t i = 0; i < n; ++i) xs[i] = left + slot * (static_cast<double>(i) + 0.5);
  }

  if (kind == ChartKind::Bar) {
    for (std::size_t i = 0; i < n; ++i) {
      double y0 = to_y(0), y1 = to_y(s.values[i]);
      pdf.fill_rect(xs[i] - slot * 0.4, std::min(y0, y1), slot * 0.8, std::abs(y1 - y0),
                    palette_color(palette, i));
    }
  } else if (kind == ChartKind::Line) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < n; ++i) pts.emplace_back(xs[i], to_y(s.values[i]));
    pdf.polyline(pts, palette_color(palette, 0), 1.5);
  }
  if (kind != ChartKind::Bar) {
    for (std::size_t i = 0; i < n; ++i)
      pdf.fill_circle(xs[i], to_y(s.values[i]), 2.5,
                      palette_color(palette, kind == ChartKind::Line ? 0 : i));
  }
  if (kind != ChartKind::Scatter && n <= 40) {
    for (std::size_t i = 0; i < n; ++i) {
      auto label = fit(s.labels[i], PdfFont::Regular, 6, slot - 2);
      pdf.text(xs[i] - pdf_text_width(label, PdfFont::Regular, 6) / 2, bottom - 9,
               PdfFont::Regular, 6, label);
    }
  }
  layout.set_y(bottom - 14);
}

void draw_table(PdfLayout& layout, const TypedTable& t) {
  if (t.vars.empty()) {
    layout.paragraph("(no columns)", PdfFont::Regular, 9);
    return;
  }
  double col = PdfLayout::kWidth / static_cast<double>(t.vars.size());
  constexpr double kRow = 12;
  auto row_line = [&](const std::vector<std::string>& cells, PdfFont font) {
    layout.ensure(kRow);
    layout.gap(kRow);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      layout.pdf().text(PdfLayout::kMargin + col * static_cast<double>(i), layout.y(), font, 8,
                        fit(cells[i], font, 8, col - 4));
    }
  };
  row_line(t.vars, PdfFont::Bold);
  std::size_t shown = std::min(t.rows.size(), kPdfTableRowCap);
  for (std::size_t r = 0; r < shown; ++r) {
    std::vector<std::string> cells;
    for (const auto& cell : t.rows[r]) cells.push_back(cell ? cell->raw.value : "");
    row_line(cells, PdfFont::Regular);
  }
  if (t.rows.size() > shown) {
    layout.paragraph("Showing " + std::to_string(shown) + " of " +
                         std::to_string(t.rows.size()) + " rows.",
                     PdfFont::Regular, 8, 0, {0.4, 0.4, 0.4});
  }
  if (t.rows.empty()) layout.paragraph("No results.", PdfFont::Regular, 9);
}

std::string render_pdf(const Story& story, const PayloadMap& payloads, SnapshotPolicy policy) {
  PdfLayout layout;
  layout.paragraph(story.title, PdfFont::Bold, 20);
  if (story.subtitle) layout.paragraph(*story.subtitle, PdfFont::Regular, 13, 0, {0.3, 0.3, 0.3});
  if (story.description) {
    layout.gap(4);
    layout.paragraph(*story.description, PdfFont::Regular, 10);
  }
  layout.paragraph("Data source: " + story.endpoint, PdfFont::Mono, 7, 0, {0.4, 0.4, 0.4});

  for (const auto& c : story.components) {
    layout.gap(14);
    const RenderPayload* payload = nullptr;
    if (c.is_data()) {
      auto it = payloads.find(c.id);
      if (it != payloads.end()) {
        payload = &it->second;
      } else if (policy.mode == SnapshotMode::Snapshot) {
        throw Error(ErrorCode::MissingPayload,
                    "component '" + c.id + "' has not been evaluated");
      }
    }
    auto live_note = [&] {
      layout.paragraph("Live data: open the HTML version to see current results.",
                       PdfFont::Regular, 9, 0, {0.4, 0.4, 0.4});
    };
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, block::Text>) {
            for (const auto& block : html_to_blocks(sanitize_html(b.html))) {
              switch (block.style) {
                case TextBlock::Style::Heading:
                  layout.gap(4);
                  layout.paragraph(block.text, PdfFont::Bold, 13);
                  break;
                case TextBlock::Style::Bullet:
                  layout.paragraph("\xE2\x80\xA2 " + block.text, PdfFont::Regular, 10, 10);
                  break;
                case TextBlock::Style::Quote:
                  layout.paragraph(block.text, PdfFont::Regular, 10, 20, {0.3, 0.3, 0.3});
                  break;
                case TextBlock::Style::Body:
                  layout.paragraph(block.text, PdfFont::Regular, 10);
                  break;
              }
              layout.gap(3);
            }
          } else if constexpr (std::is_same_v<T, block::Counter>) {
            if (const auto* card = payload ? std::get_if<Card>(payload) : nullptr) {
              layout.paragraph(card->label + ": " + format_number(card->value), PdfFont::Bold, 14);
            } else {
              layout.paragraph(b.label + ":", PdfFont::Bold, 14);
              live_note();
            }
          } else if constexpr (std::is_same_v<T, block::Chart>) {
            layout.paragraph(b.title, PdfFont::Bold, 12);
            if (const auto* s = payload ? std::get_if<Series>(payload) : nullptr) {
              if (s->values.empty()) {
                layout.paragraph("No data.", PdfFont::Regular, 9);
              } else {
                draw_chart(layout, *s, b.kind, story.palette);
              }
            } else {
              live_note();
            }
          } else if constexpr (std::is_same_v<T, block::Table>) {
            layout.paragraph(b.title, PdfFont::Bold, 12);
            if (const auto* t = payload ? std::get_if<TypedTable>(payload) : nullptr) {
              draw_table(layout, *t);
            } else {
              live_note();
            }
          } else if constexpr (std::is_same_v<T, block::Map>) {
            if (const auto* g = payload ? std::get_if<GeoSet>(payload) : nullptr) {
              layout.paragraph("Map: " + std::to_string(g->points.size()) + " points",
                               PdfFont::Bold, 12);
              for (const auto& [var, values] : g->facets) {
                std::string list;
                for (const auto& v : values) list += (list.empty() ? "" : ", ") + v;
                layout.paragraph("Filter " + var + ": " + list, PdfFont::Regular, 9, 10);
              }
            } else {
              layout.paragraph("Map", PdfFont::Bold, 12);
              live_note();
            }
          } else if constexpr (std::is_same_v<T, block::TextSearch>) {
            layout.paragraph("Text search", PdfFont::Bold, 12);
            layout.paragraph("Interactive search, available in the HTML version.",
                             PdfFont::Regular, 9, 0, {0.4, 0.4, 0.4});
          } else {
            layout.paragraph("Action: " + b.label, PdfFont::Bold, 12);
            layout.paragraph("Runs on ?" + b.column + " values of " + b.source +
                                 " in the HTML version.",
                             PdfFont::Regular, 9, 0, {0.4, 0.4, 0.4});
          }
        },
        c.body);
    if (c.type() != ComponentType::Text) {
      layout.gap(2);
      layout.preformatted(c.query_text(), 6.5);
    }
  }
  return layout.pdf().finish(story.title);
}

}  // namespace

std::string_view to_string(ExportFormat format) {
  switch (format) {
    case ExportFormat::Html: return "html";
    case ExportFormat::Pdf: return "pdf";
    case ExportFormat::Json: return "json";
  }
  return "html";
}

ExportFormat parse_export_format(std::string_view text) {
  if (text == "html") return ExportFormat::Html;
  if (text == "pdf") return ExportFormat::Pdf;
  if (text == "json") return ExportFormat::Json;
  throw Error(ErrorCode::UnsupportedFormat,
              "unsupported export format '" + std::string(text) + "' (html, pdf or json)");
}

std::string_view media_type(ExportFormat format) {
  switch (format) {
    case ExportFormat::Html: return "text/html; charset=utf-8";
    case ExportFormat::Pdf: return "application/pdf";
    case ExportFormat::Json: return "application/json";
  }
  return "application/octet-stream";
}

std::string story_filename(const Story& story, std::string_view ext) {
  return story.id + "." + std::string(ext);
}

std::string component_filename(const Story& story, std::string_view component_id,
                               std::string_view ext) {
  return story.id + "-" + std::string(component_id) + "." + std::string(ext);
}

ExportBundle export_story(const Story& story, const PayloadMap& payloads, ExportFormat format,
                          SnapshotPolicy policy) {
  ExportBundle bundle;
  bundle.format = format;
  bundle.media_type = std::string(media_type(format));
  bundle.suggested_filename = story_filename(story, to_string(format));
  switch (format) {
    case ExportFormat::Html:
      bundle.bytes = html::render_story(story, payloads, policy);
      break;
    case ExportFormat::Pdf:
      bundle.bytes = render_pdf(story, payloads, policy);
      break;
    case ExportFormat::Json:
      bundle.bytes = serialize_story(story);
      break;
  }
  return bundle;
}

std::string export_component_embed(const Story& story, std::string_view component_id,
                                   std::string_view base_url) {
  const Component* c = story.find(component_id);
  if (!c) {
    throw Error(ErrorCode::UnknownComponent,
                "story '" + story.id + "' has no component '" + std::string(component_id) + "'");
  }
  std::string base(base_url);
  while (!base.empty() && base.back() == '/') base.pop_back();
  std::string src = base + "/embed/" + story.id + "/" + c->id;
  std::string title = story.title + " - " + c->id;
  return "<iframe src=\"" + detail::html_escape(src) + "\" title=\"" +
         detail::html_escape(title) +
         "\" width=\"100%\" height=\"480\" loading=\"lazy\" "
         "sandbox=\"allow-scripts allow-popups\" referrerpolicy=\"no-referrer\" "
         "style=\"border:0\"></iframe>";
}

std::string export_component_page(const Story& story, std::string_view component_id,
                                  const PayloadMap& payloads, SnapshotPolicy policy) {
  const Component* c = story.find(component_id);
  if (!c) {
    throw Error(ErrorCode::UnknownComponent,
                "story '" + story.id + "' has no component '" + std::string(component_id) + "'");
  }
  return html::render_component_page(story, *c, payloads, policy);
}

}  // namespace lodstory
