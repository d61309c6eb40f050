#include "qiopa/matrix_io.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qiopa::io {

using nlohmann::json;

MatrixRecord record(const DensityMatrix& rho, double g, double t, json meta) {
  return {rho.labels(), rho.matrix(), g, t, std::move(meta)};
}

json to_json(const MatrixRecord& rec) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < rec.entries.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < rec.entries.cols(); ++c) {
      rr.push_back(rec.entries(r, c).real());
      ii.push_back(rec.entries(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  json doc;
  doc["basis"] = rec.basis;
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  doc["g"] = rec.g;
  doc["t"] = rec.t;
  doc["meta"] = rec.meta;
  return doc;
}

MatrixRecord from_json(const json& doc) {
  try {
    MatrixRecord rec;
    rec.basis = doc.at("basis").get<std::vector<std::string>>();
    const auto& re = doc.at("re");
    const auto& im = doc.at("im");
    const auto n = static_cast<Eigen::Index>(rec.basis.size());
    if (static_cast<Eigen::Index>(re.size()) != n || static_cast<Eigen::Index>(im.size()) != n)
      throw std::invalid_argument("matrix rows do not match the basis");
    rec.entries.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (static_cast<Eigen::Index>(re[r].size()) != n ||
          static_cast<Eigen::Index>(im[r].size()) != n)
        throw std::invalid_argument("matrix row has the wrong length");
      for (Eigen::Index c = 0; c < n; ++c)
        rec.entries(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
    }
    rec.g = doc.at("g").get<double>();
    rec.t = doc.at("t").get<double>();
    rec.meta = doc.value("meta", json::object());
    return rec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed matrix document: ") + e.what());
  }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

MatrixRecord parse_record(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  return from_json(doc);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix_csv(std::ostream& os, const MatrixRecord& rec) {
  os << "# g," << format_double(rec.g) << "\n";
  os << "# t," << format_double(rec.t) << "\n";
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < rec.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < rec.entries.cols(); ++c)
      os << rec.basis[r] << ',' << rec.basis[c] << ',' << format_double(rec.entries(r, c).real())
         << ',' << format_double(rec.entries(r, c).imag()) << "\n";
}

MatrixRecord read_matrix_csv(std::istream& is) {
  MatrixRecord rec;
  std::string line;
  std::vector<std::array<std::string, 4>> cells;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (line.rfind("# ", 0) == 0) {
      if (parts.size() != 2) throw std::invalid_argument("malformed CSV header line: " + line);
      if (parts[0] == "# g") rec.g = std::stod(parts[1]);
      if (parts[0] == "# t") rec.t = std::stod(parts[1]);
      continue;
    }
    if (parts.size() != 4) throw std::invalid_argument("malformed CSV line: " + line);
    if (parts[0] == "row") continue;
    cells.push_back({parts[0], parts[1], parts[2], parts[3]});
  }
  std::map<std::string, Eigen::Index> index;
  for (const auto& c : cells)
    if (!index.count(c[0])) {
      index[c[0]] = static_cast<Eigen::Index>(rec.basis.size());
      rec.basis.push_back(c[0]);
    }
  const auto n = static_cast<Eigen::Index>(rec.basis.size());
  if (static_cast<Eigen::Index>(cells.size()) != n * n)
    throw std::invalid_argument("CSV does not hold a full square matrix");
  rec.entries = Matrix::Zero(n, n);
  for (const auto& c : cells) {
    const auto col = index.find(c[1]);
    if (col == index.end()) throw std::invalid_argument("unknown column label " + c[1]);
    rec.entries(index[c[0]], col->second) = Complex(std::stod(c[2]), std::stod(c[3]));
  }
  return rec;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "g,t,value\n";
  for (const auto& r : rows)
    os << format_double(r.g) << ',' << format_double(r.t) << ',' << format_double(r.value) << "\n";
}

}  // namespace qiopa::io
