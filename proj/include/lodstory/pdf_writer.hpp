#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lodstory {

enum class PdfFont { Regular, Bold, Mono };

struct PdfColor {
  double r = 0;
  double g = 0;
  double b = 0;
};

// "#RRGGBB" to a PDF colour, black when malformed.
PdfColor parse_hex_color(std::string_view hex);

// Width of `text` in points using the standard Helvetica/Courier metrics.
double pdf_text_width(std::string_view utf8, PdfFont font, double size);

// Minimal PDF 1.4 producer: A4 pages, the three standard fonts in
// WinAnsiEncoding, uncompressed content streams and a classic xref table.
// Coordinates are PDF points with the origin at the bottom-left corner.
class PdfWriter {
 public:
  static constexpr double kPageWidth = 595;
  static constexpr double kPageHeight = 842;

  void begin_page();
  std::size_t page_count() const { return pages_.size(); }

  void text(double x, double y, PdfFont font, double size, std::string_view utf8,
            PdfColor color = {});
  void fill_rect(double x, double y, double w, double h, PdfColor color);
  void line(double x1, double y1, double x2, double y2, PdfColor color, double width = 1);
  void polyline(const std::vector<std::pair<double, double>>& points, PdfColor color,
                double width = 1);
  void fill_polygon(const std::vector<std::pair<double, double>>& points, PdfColor color);
  void fill_circle(double cx, double cy, double r, PdfColor color);

  std::string finish(std::string_view title) const;

 private:
  std::string& current();
  std::vector<std::string> pages_;
};

}  // namespace lodstory
