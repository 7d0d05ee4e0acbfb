#include "vlp/field_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "vlp/error.hpp"

namespace vlp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Header {
  std::string tag;
  std::map<std::string, std::string, std::less<>> keys;
};

Header parse_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::Parse, "missing header line");
  Header h;
  std::string_view rest = line;
  bool first = true;
  while (!rest.empty()) {
    const auto semi = rest.find(';');
    std::string_view token = trim(rest.substr(0, semi));
    rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    if (first) {
      h.tag = std::string(token);
      first = false;
      continue;
    }
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::Parse, "malformed header token '" + std::string(token) + "'");
    h.keys.emplace(std::string(trim(token.substr(0, eq))), std::string(trim(token.substr(eq + 1))));
  }
  return h;
}

const std::string& require_key(const Header& h, std::string_view key) {
  const auto it = h.keys.find(key);
  if (it == h.keys.end()) throw Error(Errc::Parse, "header lacks '" + std::string(key) + "'");
  return it->second;
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::Parse, "expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> read_values(std::istream& in, std::size_t count) {
  std::vector<double> values;
  values.reserve(count);
  std::string line;
  while (values.size() < count && std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty()) continue;
    values.push_back(parse_number(t));
  }
  if (values.size() != count) {
    throw Error(Errc::Parse, "expected " + std::to_string(count) + " values, found " + std::to_string(values.size()));
  }
  while (std::getline(in, line)) {
    if (!trim(line).empty()) throw Error(Errc::Parse, "trailing data after the last value");
  }
  return values;
}

Grid grid_from_header(const Header& h) {
  return Grid(static_cast<int>(parse_count(require_key(h, "n"))), parse_number(require_key(h, "L")),
              parse_count(require_key(h, "N")));
}

void write_grid_header(std::ostream& out, std::string_view tag, const Grid& g) {
  out << tag << "; n=" << g.dim() << "; L=" << format_number(g.half_length()) << "; N=" << g.points_per_axis();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IO, "cannot open '" + path + "'");
  return in;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(Errc::IO, "number formatting failed");
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::Parse, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_field(std::ostream& out, const Field& f) {
  write_grid_header(out, "vlp-field v1", f.grid());
  out << '\n';
  for (double v : f.values()) out << format_number(v) << '\n';
}

Field read_field(std::istream& in) {
  const Header h = parse_header(in);
  if (h.tag != "vlp-field v1") throw Error(Errc::Parse, "expected 'vlp-field v1', got '" + h.tag + "'");
  const Grid g = grid_from_header(h);
  return Field(g, read_values(in, g.size()));
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IO, "cannot write '" + path + "'");
  write_field(out, f);
  if (!out) throw Error(Errc::IO, "write to '" + path + "' failed");
}

Field load_field(const std::string& path) {
  auto in = open_input(path);
  return read_field(in);
}

void write_exponent(std::ostream& out, const Field& samples, std::optional<double> p_inf) {
  write_grid_header(out, "vlp-exponent v1", samples.grid());
  if (p_inf) out << "; p_inf=" << format_number(*p_inf);
  out << '\n';
  for (double v : samples.values()) out << format_number(v) << '\n';
}

ExponentSamples read_exponent(std::istream& in) {
  const Header h = parse_header(in);
  if (h.tag != "vlp-exponent v1") throw Error(Errc::Parse, "expected 'vlp-exponent v1', got '" + h.tag + "'");
  const Grid g = grid_from_header(h);
  std::optional<double> p_inf;
  if (const auto it = h.keys.find("p_inf"); it != h.keys.end()) p_inf = parse_number(it->second);
  return {Field(g, read_values(in, g.size())), p_inf};
}

ExponentSamples load_exponent(const std::string& path) {
  auto in = open_input(path);
  return read_exponent(in);
}

void write_time_exponent(std::ostream& out, const std::vector<double>& samples) {
  if (samples.size() < 2) throw Error(Errc::IO, "temporal exponent needs at least two samples");
  out << "vlp-time-exponent v1; M=" << samples.size() - 1 << '\n';
  for (double v : samples) out << format_number(v) << '\n';
}

std::vector<double> read_time_exponent(std::istream& in) {
  const Header h = parse_header(in);
  if (h.tag != "vlp-time-exponent v1") {
    throw Error(Errc::Parse, "expected 'vlp-time-exponent v1', got '" + h.tag + "'");
  }
  return read_values(in, parse_count(require_key(h, "M")) + 1);
}

std::vector<double> load_time_exponent(const std::string& path) {
  auto in = open_input(path);
  return read_time_exponent(in);
}

}  // namespace vlp
