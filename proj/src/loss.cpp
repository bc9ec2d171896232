#include "seqlogit/loss.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace seqlogit {

std::vector<TangentPoint> default_tangent_points() {
  const double positive[] = {0.44, 0.89, 1.37, 1.90, 2.63, 3.55, 5.16};
  std::vector<TangentPoint> pts;
  pts.push_back(TangentPoint::minus_inf());
  for (int i = 6; i >= 0; --i) pts.push_back(TangentPoint::finite(-positive[i]));
  pts.push_back(TangentPoint::finite(0.0));
  for (double v : positive) pts.push_back(TangentPoint::finite(v));
  pts.push_back(TangentPoint::plus_inf());
  return pts;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<TangentPoint> read_tangent_points(std::istream& in) {
  std::vector<TangentPoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string tok = trim(line);
    if (tok.empty() || tok.front() == '#') continue;
    if (tok == "inf" || tok == "+inf") {
      pts.push_back(TangentPoint::plus_inf());
    } else if (tok == "-inf") {
      pts.push_back(TangentPoint::minus_inf());
    } else {
      double v = 0.0;
      const char* end = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(tok.data(), end, v);
      if (ec != std::errc() || ptr != end)
        throw std::invalid_argument("tangent file line " + std::to_string(lineno) +
                                    ": cannot parse '" + tok + "'");
      pts.push_back(TangentPoint::finite(v));
    }
  }
  return pts;
}

std::vector<TangentPoint> read_tangent_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tangent file '" + path + "'");
  return read_tangent_points(in);
}

std::string to_string(const TangentPoint& p) {
  switch (p.kind) {
    case TangentPoint::Kind::minus_infinity: return "-inf";
    case TangentPoint::Kind::plus_infinity: return "inf";
    case TangentPoint::Kind::finite: break;
  }
  std::ostringstream os;
  os.precision(17);
  os << p.value;
  return os.str();
}

}  // namespace seqlogit
