// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the infowave authors

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "infowave/common.hpp"
#include "infowave/evaluation.hpp"
#include "infowave/objective.hpp"
#include "infowave/optimizer.hpp"
#include "infowave/version.hpp"
#include "infowave/waveform.hpp"

namespace infowave {

// Reproducibility header carried by every text artifact.
struct FileHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
};

inline std::string header_lines(const FileHeader& h) {
  std::ostringstream os;
  os << "# infowave " << kVersion << "\n";
  os << "# config_hash: " << h.config_hash << "\n";
  os << "# seed: " << h.seed << "\n";
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io: cannot open '" + path + "' for writing");
  out << body;
  if (!out) throw Error("io: write failed on '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string trace_text(const RunTrace& trace, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# columns: iteration, best_fitness, mean_fitness, phase\n";
  for (const TraceRow& r : trace.rows)
    os << r.iteration << ", " << format_full(r.best_fitness) << ", "
       << format_full(r.mean_fitness) << ", " << r.phase << "\n";
  return os.str();
}

inline std::string waveform_text(const Waveform& w, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# columns: index, phase_rad, re, im\n";
  for (Eigen::Index i = 0; i < w.samples.size(); ++i)
    os << i << ", " << format_full(w.phases[static_cast<std::size_t>(i)]) << ", "
       << format_full(w.samples(i).real()) << ", " << format_full(w.samples(i).imag())
       << "\n";
  return os.str();
}

// Reads the text waveform format back; magnitude is recovered from the
// first sample.
inline Waveform parse_waveform_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  PhaseVector phases;
  double magnitude = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(row, tok, ',')) cols.push_back(tok);
    if (cols.size() != 4) throw ValidationError("waveform import: expected 4 columns");
    phases.push_back(std::stod(cols[1]));
    if (first) {
      double re = std::stod(cols[2]);
      double im = std::stod(cols[3]);
      magnitude = std::hypot(re, im);
      first = false;
    }
  }
  if (phases.empty()) throw ValidationError("waveform import: no samples");
  return phases_to_waveform(phases, magnitude);
}

inline std::string roc_text(const RocCurve& curve, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# trials_per_hypothesis: " << curve.trials << "\n";
  os << "# columns: pfa, pd, se_pfa, se_pd\n";
  for (const RocPoint& p : curve.points)
    os << format_full(p.pfa) << ", " << format_full(p.pd) << ", " << format_full(p.se_pfa)
       << ", " << format_full(p.se_pd) << "\n";
  return os.str();
}

inline std::string mse_text(const std::vector<MseRow>& rows, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# columns: scr_db, waveform_label, mse, se\n";
  for (const MseRow& r : rows)
    os << format_full(r.scr_db) << ", " << r.label << ", " << format_full(r.mse) << ", "
       << format_full(r.se) << "\n";
  return os.str();
}

inline std::string autocorrelation_text(const Autocorrelation& ac, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# psl_db: " << format_full(ac.psl_db) << "\n";
  os << "# columns: lag, re, im, magnitude\n";
  for (std::size_t i = 0; i < ac.lags.size(); ++i)
    os << ac.lags[i] << ", " << format_full(ac.values[i].real()) << ", "
       << format_full(ac.values[i].imag()) << ", " << format_full(std::abs(ac.values[i]))
       << "\n";
  return os.str();
}

inline std::string ambiguity_text(const AmbiguitySurface& surface, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "# rows: delay, columns: doppler\n";
  os << "# doppler:";
  for (double v : surface.doppler) os << " " << format_full(v);
  os << "\n";
  for (std::size_t d = 0; d < surface.delays.size(); ++d) {
    os << surface.delays[d];
    for (std::size_t v = 0; v < surface.doppler.size(); ++v)
      os << ", "
         << format_full(surface.magnitude(static_cast<Eigen::Index>(d),
                                          static_cast<Eigen::Index>(v)));
    os << "\n";
  }
  return os.str();
}

inline std::string breakdown_text(const ObjectiveBreakdown& b, const FileHeader& h) {
  std::ostringstream os;
  os << header_lines(h);
  os << "f_total: " << format_full(b.f_total) << "\n";
  os << "d_bar: " << format_full(b.d_bar) << "\n";
  os << "e_bar: " << format_full(b.e_bar) << "\n";
  os << "matches:";
  for (int k : b.matches) os << " " << k;
  os << "\n";
  return os.str();
}

// Little-endian row-major complex-double dump with a 16-byte header:
// 8-byte magic, two uint32 dimensions.
inline void write_covariance_binary(const std::string& path, const CMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io: cannot open '" + path + "' for writing");
  const char magic[8] = {'I', 'W', 'C', 'O', 'V', 'M', 'A', 'T'};
  out.write(magic, 8);
  std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double re = m(i, j).real(), im = m(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), 8);
      out.write(reinterpret_cast<const char*>(&im), 8);
    }
  if (!out) throw Error("io: write failed on '" + path + "'");
}

inline CMatrix read_covariance_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != "IWCOVMAT")
    throw ValidationError("covariance import: bad magic");
  std::uint32_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  CMatrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), 8);
      in.read(reinterpret_cast<char*>(&im), 8);
      m(i, j) = cdouble(re, im);
    }
  if (!in) throw ValidationError("covariance import: truncated file");
  return m;
}

}  // namespace infowave
