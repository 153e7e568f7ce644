#pragma once

#include <string>

#include "assure/table.hpp"

namespace assure {

enum class PlotKind { line, overlay, contour };

/// Standalone SVG document for a table. `line` plots column 1 against column
/// 0; `overlay` adds one polyline per further column; `contour` expects a
/// complete (n1, n2, value) grid and renders colored cells, lighter shades
/// marking higher values. Output bytes are deterministic for a fixed input.
/// Line and overlay plots need at least two rows; contour needs a full grid.
std::string emit_plot(const ColumnTable& table, PlotKind kind);

}  // namespace assure
