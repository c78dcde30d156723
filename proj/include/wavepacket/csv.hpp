#pragma once

// CSV emission and ingestion for run artifacts, plus the content digests the
// manifest uses. All numeric output goes through one fixed format so a rerun
// of the same configuration is byte-identical.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavepacket/analysis.hpp"
#include "wavepacket/cayley.hpp"
#include "wavepacket/errors.hpp"
#include "wavepacket/grid.hpp"
#include "wavepacket/partial_waves.hpp"

namespace wavepacket {

// ---------------------------------------------------------------------------
// Formatting and digests

inline std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", x);
  return std::string(buf);
}

// FNV-1a, 64-bit: tiny, dependency-free, and plenty for change detection.
inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_string(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Writers. Each builds the full file in memory so the digest and the bytes on
// disk come from the same buffer.

inline std::string snapshot_csv(const ComplexField1D& f) {
  std::string out = "x,re,im,abs\n";
  for (std::size_t j = 0; j < f.grid.n; ++j) {
    out += csv_number(f.grid.x(j));
    out += ',';
    out += csv_number(f.psi[j].real());
    out += ',';
    out += csv_number(f.psi[j].imag());
    out += ',';
    out += csv_number(std::abs(f.psi[j]));
    out += '\n';
  }
  return out;
}

struct ObservableColumns {
  bool norm = true;
  bool energy = true;
  bool center_amplitude = false;
};

// One row per sampled step; the center series holds |psi(probe)|^2 internally
// and is emitted as an amplitude.
inline std::string observables_csv(const EvolutionRecord& rec,
                                   const ObservableColumns& cols) {
  std::string out = "t";
  if (cols.norm) out += ",norm";
  if (cols.energy) out += ",energy";
  if (cols.center_amplitude) out += ",center_amplitude";
  out += '\n';
  for (std::size_t i = 0; i < rec.norm.t.size(); ++i) {
    out += csv_number(rec.norm.t[i]);
    if (cols.norm) {
      out += ',';
      out += csv_number(rec.norm.value[i]);
    }
    if (cols.energy) {
      out += ',';
      out += csv_number(rec.energy.value[i]);
    }
    if (cols.center_amplitude) {
      out += ',';
      out += csv_number(std::sqrt(rec.center.value[i]));
    }
    out += '\n';
  }
  return out;
}

inline std::string norm_series_csv(const ObservableSeries& s) {
  std::string out = "t,norm\n";
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    out += csv_number(s.t[i]);
    out += ',';
    out += csv_number(s.value[i]);
    out += '\n';
  }
  return out;
}

inline std::string profile_csv(const AngularProfile& p, ProfileField field) {
  std::string out;
  if (field == ProfileField::bare) {
    out = "r,re,im,abs\n";
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      out += csv_number(p.r[i]);
      out += ',';
      out += csv_number(p.value[i].real());
      out += ',';
      out += csv_number(p.value[i].imag());
      out += ',';
      out += csv_number(std::abs(p.value[i]));
      out += '\n';
    }
  } else {
    out = "r,abs_psi\n";
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      out += csv_number(p.r[i]);
      out += ',';
      out += csv_number(std::abs(p.value[i]));
      out += '\n';
    }
  }
  return out;
}

inline std::string per_l_norm_csv(const PartialWaveSet& set) {
  std::vector<double> norms = set.per_l_norms();
  std::string out = "l,norm\n";
  for (int l = -set.l_max; l <= set.l_max; ++l) {
    out += std::to_string(l);
    out += ',';
    out += csv_number(norms[static_cast<std::size_t>(l + set.l_max)]);
    out += '\n';
  }
  return out;
}

inline std::string peaks_csv(const PeakTrain& train) {
  std::string out = "index,position,height\n";
  for (std::size_t i = 0; i < train.positions.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += csv_number(train.positions[i]);
    out += ',';
    out += csv_number(train.heights[i]);
    out += '\n';
  }
  return out;
}

struct FitRow {
  std::string quantity;
  double value = 0.0;
  double residual = 0.0;
};

inline std::string fits_csv(const std::vector<FitRow>& rows) {
  std::string out = "quantity,value,residual\n";
  for (const FitRow& row : rows) {
    out += row.quantity;
    out += ',';
    out += csv_number(row.value);
    out += ',';
    out += csv_number(row.residual);
    out += '\n';
  }
  return out;
}

inline std::string metrics_csv(
    const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "metric,value\n";
  for (const auto& [name, value] : rows) {
    out += name;
    out += ',';
    out += csv_number(value);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reader (for analyze mode, the comparison tooling, and tests)

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // column-major

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return columns[i];
    throw ConfigError("csv: no column named '" + name + "'");
  }

  bool has_column(const std::string& name) const {
    for (const std::string& h : header)
      if (h == name) return true;
    return false;
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable tab;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty document");
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) tab.header.push_back(cell);
  if (tab.header.empty()) throw ConfigError("csv: empty header");
  tab.columns.assign(tab.header.size(), {});
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t col = 0;
    while (std::getline(ls, cell, ',')) {
      if (col >= tab.header.size())
        throw ConfigError("csv: too many cells on line " +
                          std::to_string(lineno));
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw ConfigError("csv: bad number on line " + std::to_string(lineno));
      tab.columns[col].push_back(x);
      ++col;
    }
    if (col != tab.header.size())
      throw ConfigError("csv: short row on line " + std::to_string(lineno));
  }
  return tab;
}

inline CsvTable load_csv(const std::string& path) {
  return parse_csv(read_file(path));
}

// ---------------------------------------------------------------------------
// Run directory plumbing: write files, remember digests, emit the manifest
// last so its presence marks a completed run.

class RunWriter {
 public:
  explicit RunWriter(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir_);
  }

  const std::string& dir() const { return dir_; }

  void write(const std::string& name, const std::string& content) {
    const std::string path = dir_ + "/" + name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    out.close();
    if (!out) throw ConfigError("write failed: " + path);
    files_.emplace_back(name, digest_string(content));
  }

  // Key/value lines, then one digest line per emitted file.
  void finish(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out;
    for (const auto& [k, v] : fields) out += k + "=" + v + "\n";
    for (const auto& [name, digest] : files_) out += "digest." + name + "=" + digest + "\n";
    const std::string path = dir_ + "/manifest.txt";
    std::ofstream m(path, std::ios::binary);
    if (!m) throw ConfigError("cannot write manifest: " + path);
    m << out;
  }

  const std::vector<std::pair<std::string, std::string>>& files() const {
    return files_;
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace wavepacket
