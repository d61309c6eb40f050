#pragma once

// Matrix export. JSON documents follow
//   {"basis": [labels], "re": [[...]], "im": [[...]], "g": ..., "t": ..., "meta": {...}}
// with imaginary parts always present. CSV output uses 17 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qiopa/fock.hpp"

namespace qiopa::io {

struct MatrixRecord {
  std::vector<std::string> basis;
  Matrix entries;
  double g = 0.0;
  double t = 0.0;
  nlohmann::json meta = nlohmann::json::object();
};

MatrixRecord record(const DensityMatrix& rho, double g, double t,
                    nlohmann::json meta = nlohmann::json::object());

nlohmann::json to_json(const MatrixRecord& rec);
/// Throws std::invalid_argument on a malformed document.
MatrixRecord from_json(const nlohmann::json& doc);

std::string dump_json(const nlohmann::json& doc);
MatrixRecord parse_record(const std::string& text);

/// Full-precision decimal rendering of a double (17 significant digits).
std::string format_double(double x);

/// One line per element: row,col,re,im with basis labels.
void write_matrix_csv(std::ostream& os, const MatrixRecord& rec);
MatrixRecord read_matrix_csv(std::istream& is);

struct SweepRow {
  double g;
  double t;
  double value;
};
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace qiopa::io
