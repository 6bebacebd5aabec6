#include "lodstory/pdf_writer.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "lodstory/detail/text.hpp"

namespace lodstory {

namespace {

using detail::format_number;

// Helvetica advance widths for 0x20..0x7E, per 1000 em.
constexpr std::array<int, 95> kHelvetica = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278,
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556,
    1015, 667, 667, 722, 722, 667, 611, 778, 722, 278, 500, 667, 556, 833, 722, 778,
    667, 778, 722, 667, 611, 722, 667, 944, 667, 667, 611, 278, 278, 278, 469, 556,
    333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500, 222, 833, 556, 556,
    556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

// Decodes UTF-8 into single WinAnsi bytes, '?' for anything unmappable.
std::string to_win_ansi(std::string_view utf8) {
  std::string out;
  for (std::size_t i = 0; i < utf8.size();) {
    auto c = static_cast<unsigned char>(utf8[i]);
    char32_t cp;
    int len;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0 && i + 1 < utf8.size()) {
      cp = ((c & 0x1F) << 6) | (utf8[i + 1] & 0x3F);
      len = 2;
    } else if ((c & 0xF0) == 0xE0 && i + 2 < utf8.size()) {
      cp = ((c & 0x0F) << 12) | ((utf8[i + 1] & 0x3F) << 6) | (utf8[i + 2] & 0x3F);
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && i + 3 < utf8.size()) {
      cp = 0xFFFD;
      len = 4;
    } else {
      cp = 0xFFFD;
      len = 1;
    }
    i += len;
    if (cp < 0x20) {
      out.push_back(' ');
    } else if (cp < 0x80 || (cp >= 0xA0 && cp <= 0xFF)) {
      out.push_back(static_cast<char>(cp));
    } else {
      switch (cp) {
        case 0x20AC: out.push_back('\x80'); break;
        case 0x2018: out.push_back('\x91'); break;
        case 0x2019: out.push_back('\x92'); break;
        case 0x201C: out.push_back('\x93'); break;
        case 0x201D: out.push_back('\x94'); break;
        case 0x2022: out.push_back('\x95'); break;
        case 0x2013: out.push_back('\x96'); break;
        case 0x2014: out.push_back('\x97'); break;
        case 0x2026: out.push_back('\x85'); break;
        default: out.push_back('?');
      }
    }
  }
  return out;
}

std::string pdf_string(std::string_view bytes) {
  std::string out = "(";
  for (unsigned char c : bytes) {
    if (c == '(' || c == ')' || c == '\\') {
      out.push_back('\\');
      out.push_back(static_cast<char>(c));
    } else if (c < 0x20 || c >= 0x7F) {
      char buf[5];
      std::snprintf(buf, sizeof buf, "\\%03o", c);
      out += buf;
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  out.push_back(')');
  return out;
}

// UTF-16BE hex string with BOM, for the document information dictionary.
std::string pdf_text_string(std::string_view utf8) {
  std::string out = "<FEFF";
  char buf[8];
  for (std::size_t i = 0; i < utf8.size();) {
    auto c = static_cast<unsigned char>(utf8[i]);
    char32_t cp = c;
    int len = 1;
    if ((c & 0xE0) == 0xC0 && i + 1 < utf8.size()) {
      cp = ((c & 0x1F) << 6) | (utf8[i + 1] & 0x3F);
      len = 2;
    } else if ((c & 0xF0) == 0xE0 && i + 2 < utf8.size()) {
      cp = ((c & 0x0F) << 12) | ((utf8[i + 1] & 0x3F) << 6) | (utf8[i + 2] & 0x3F);
      len = 3;
    } else if ((c & 0xF8) == 0xF0 && i + 3 < utf8.size()) {
      cp = ((c & 0x07) << 18) | ((utf8[i + 1] & 0x3F) << 12) |
           ((utf8[i + 2] & 0x3F) << 6) | (utf8[i + 3] & 0x3F);
      len = 4;
    }
    i += len;
    if (cp >= 0x10000) {
      cp -= 0x10000;
      std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(0xD800 + (cp >> 10)));
      out += buf;
      std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(0xDC00 + (cp & 0x3FF)));
      out += buf;
    } else {
      std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(cp));
      out += buf;
    }
  }
  out += ">";
  return out;
}

std::string color_op(PdfColor c, bool stroke) {
  return format_number(c.r) + " " + format_number(c.g) + " " + format_number(c.b) +
         (stroke ? " RG\n" : " rg\n");
}

std::string font_name(PdfFont font) {
  switch (font) {
    case PdfFont::Regular: return "/F1";
    case PdfFont::Bold: return "/F2";
    case PdfFont::Mono: return "/F3";
  }
  return "/F1";
}

}  // namespace

PdfColor parse_hex_color(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  if (hex.size() != 7 || hex[0] != '#') return {};
  double channel[3];
  for (int k = 0; k < 3; ++k) {
    int hi = nibble(hex[1 + 2 * k]);
    int lo = nibble(hex[2 + 2 * k]);
    if (hi < 0 || lo < 0) return {};
    channel[k] = (hi * 16 + lo) / 255.0;
  }
  return {channel[0], channel[1], channel[2]};
}

double pdf_text_width(std::string_view utf8, PdfFont font, double size) {
  double units = 0;
  for (unsigned char c : to_win_ansi(utf8)) {
    if (font == PdfFont::Mono) {
      units += 600;
    } else if (c >= 0x20 && c <= 0x7E) {
      units += kHelvetica[c - 0x20] * (font == PdfFont::Bold ? 1.06 : 1.0);
    } else {
      units += 556;
    }
  }
  return units * size / 1000.0;
}

std::string& PdfWriter::current() {
  if (pages_.empty()) begin_page();
  return pages_.back();
}

void PdfWriter::begin_page() { pages_.emplace_back(); }

void PdfWriter::text(double x, double y, PdfFont font, double size, std::string_view utf8,
                     PdfColor color) {
  auto& s = current();
  s += color_op(color, false);
  s += "BT\n" + font_name(font) + " " + format_number(size) + " Tf\n" +
       format_number(x) + " " + format_number(y) + " Td\n" +
       pdf_string(to_win_ansi(utf8)) + " Tj\nET\n";
}

void PdfWriter::fill_rect(double x, double y, double w, double h, PdfColor color) {
  auto& s = current();
  s += color_op(color, false);
  s += format_number(x) + " " + format_number(y) + " " + format_number(w) + " " +
       format_number(h) + " re f\n";
}

void PdfWriter::line(double x1, double y1, double x2, double y2, PdfColor color,
                     double width) {
  polyline({{x1, y1}, {x2, y2}}, color, width);
}

void PdfWriter::polyline(const std::vector<std::pair<double, double>>& points,
                         PdfColor color, double width) {
  if (points.size() < 2) return;
  auto& s = current();
  s += color_op(color, true);
  s += format_number(width) + " w\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    s += format_number(points[i].first) + " " + format_number(points[i].second) +
         (i == 0 ? " m\n" : " l\n");
  }
  s += "S\n";
}

void PdfWriter::fill_polygon(const std::vector<std::pair<double, double>>& points,
                             PdfColor color) {
  if (points.size() < 3) return;
  auto& s = current();
  s += color_op(color, false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    s += format_number(points[i].first) + " " + format_number(points[i].second) +
         (i == 0 ? " m\n" : " l\n");
  }
  s += "h f\n";
}

void PdfWriter::fill_circle(double cx, double cy, double r, PdfColor color) {
  // four Bezier quadrants
  constexpr double k = 0.5522847498;
  auto& s = current();
  s += color_op(color, false);
  auto p = [](double x, double y) { return format_number(x) + " " + format_number(y); };
  s += p(cx + r, cy) + " m\n";
  s += p(cx + r, cy + k * r) + " " + p(cx + k * r, cy + r) + " " + p(cx, cy + r) + " c\n";
  s += p(cx - k * r, cy + r) + " " + p(cx - r, cy + k * r) + " " + p(cx - r, cy) + " c\n";
  s += p(cx - r, cy - k * r) + " " + p(cx - k * r, cy - r) + " " + p(cx, cy - r) + " c\n";
  s += p(cx + k * r, cy - r) + " " + p(cx + r, cy - k * r) + " " + p(cx + r, cy) + " c\n";
  s += "f\n";
}

std::string PdfWriter::finish(std::string_view title) const {
  std::vector<std::string> pages = pages_;
  if (pages.empty()) pages.emplace_back();

  // 1 catalog, 2 pages, 3-5 fonts, 6 info, then (page, content) pairs
  std::vector<std::string> objects;
  objects.push_back("<< /Type /Catalog /Pages 2 0 R >>");
  std::string kids;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (i) kids += " ";
    kids += std::to_string(7 + 2 * i) + " 0 R";
  }
  objects.push_back("<< /Type /Pages /Kids [" + kids + "] /Count " +
                    std::to_string(pages.size()) + " >>");
  for (const char* base : {"Helvetica", "Helvetica-Bold", "Courier"}) {
    objects.push_back(std::string("<< /Type /Font /Subtype /Type1 /BaseFont /") + base +
                      " /Encoding /WinAnsiEncoding >>");
  }
  objects.push_back("<< /Title " + pdf_text_string(title) + " /Producer (lodstory) >>");
  for (std::size_t i = 0; i < pages.size(); ++i) {
    objects.push_back("<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " +
                      format_number(kPageWidth) + " " + format_number(kPageHeight) +
                      "] /Resources << /Font << /F1 3 0 R /F2 4 0 R /F3 5 0 R >> >> "
                      "/Contents " +
                      std::to_string(8 + 2 * i) + " 0 R >>");
    objects.push_back("<< /Length " + std::to_string(pages[i].size()) + " >>\nstream\n" +
                      pages[i] + "endstream");
  }

  std::string out = "%PDF-1.4\n%\xE2\xE3\xCF\xD3\n";
  std::vector<std::size_t> offsets;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    offsets.push_back(out.size());
    out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
  }
  std::size_t xref = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n0000000000 65535 f \n";
  char buf[32];
  for (auto off : offsets) {
    std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", off);
    out += buf;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) +
         " /Root 1 0 R /Info 6 0 R >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
  return out;
}

}  // namespace lodstory
