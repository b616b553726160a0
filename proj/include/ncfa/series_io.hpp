#pragma once

// Line-oriented text format for free series:
//   #ncseries d=<d> cutoff=<N>
//   <word>,<re>,<im>          one stored coefficient per line
//   #tail <l>,<bound>         optional tail-bound entries, l > cutoff
//   #tailratio <r>            optional geometric continuation ratio
// Floats are printed with 17 significant digits so that save/load round-trips
// bit-exactly. Words use the canonical encoding from word.hpp ("e" = empty).

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ncfa/series.hpp"

namespace ncfa {

namespace detail {
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}
}  // namespace detail

inline void save_series(const FreeSeries& f, std::ostream& os) {
  os << "#ncseries d=" << f.d() << " cutoff=" << f.cutoff() << "\n";
  for (int l = 0; l <= f.cutoff(); ++l)
    for (const auto& [k, v] : f.level(l)) {
      Word w = Word::from_lex_index(f.d(), l, k);
      os << w.encode() << "," << detail::fmt17(v.real()) << "," << detail::fmt17(v.imag()) << "\n";
    }
  if (f.tail()) {
    const auto& t = *f.tail();
    for (std::size_t i = 0; i < t.bounds.size(); ++i)
      os << "#tail " << (f.cutoff() + 1 + static_cast<int>(i)) << "," << detail::fmt17(t.bounds[i]) << "\n";
    if (t.geo_ratio != 0.0) os << "#tailratio " << detail::fmt17(t.geo_ratio) << "\n";
  }
}

inline void save_series(const FreeSeries& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_series: cannot open " + path);
  save_series(f, os);
}

inline FreeSeries load_series(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("load_series: empty input");
  int d = 0, cutoff = -1;
  if (std::sscanf(line.c_str(), "#ncseries d=%d cutoff=%d", &d, &cutoff) != 2)
    throw std::runtime_error("load_series: bad header: " + line);
  FreeSeries f(d, cutoff);
  TailProfile tail;
  bool have_tail = false;
  int expected_tail_degree = cutoff + 1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("#tailratio ", 0) == 0) {
      tail.geo_ratio = std::stod(line.substr(11));
      have_tail = true;
      continue;
    }
    if (line.rfind("#tail ", 0) == 0) {
      std::size_t comma = line.find(',');
      if (comma == std::string::npos) throw std::runtime_error("load_series: bad tail line: " + line);
      int l = std::stoi(line.substr(6, comma - 6));
      if (l != expected_tail_degree)
        throw std::runtime_error("load_series: tail degrees must be contiguous from cutoff+1");
      ++expected_tail_degree;
      tail.bounds.push_back(std::stod(line.substr(comma + 1)));
      have_tail = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::size_t c1 = line.find(',');
    std::size_t c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("load_series: bad coefficient line: " + line);
    Word w = Word::decode(d, line.substr(0, c1));
    double re = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    double im = std::stod(line.substr(c2 + 1));
    f.set_coeff(w, cplx(re, im));
  }
  if (have_tail) f.set_tail(std::move(tail));
  return f;
}

inline FreeSeries load_series_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_series: cannot open " + path);
  return load_series(is);
}

}  // namespace ncfa
