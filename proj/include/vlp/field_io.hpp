#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlp/grid.hpp"

namespace vlp {

/// Shortest round-trip decimal for v; independent of the global locale.
std::string format_number(double v);
double parse_number(std::string_view text);

/// Field files: a header `vlp-field v1; n=<n>; L=<L>; N=<N>` followed by N^n
/// values, one per line, row-major.
void write_field(std::ostream& out, const Field& f);
Field read_field(std::istream& in);
void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);

/// Exponent files reuse the field layout under the `vlp-exponent v1` tag and
/// may carry an optional `p_inf=<value>` header token.
struct ExponentSamples {
  Field samples;
  std::optional<double> p_inf;
};
void write_exponent(std::ostream& out, const Field& samples, std::optional<double> p_inf);
ExponentSamples read_exponent(std::istream& in);
ExponentSamples load_exponent(const std::string& path);

/// Temporal exponents: header `vlp-time-exponent v1; M=<M>` followed by M+1
/// values sampled on the uniform time lattice.
void write_time_exponent(std::ostream& out, const std::vector<double>& samples);
std::vector<double> read_time_exponent(std::istream& in);
std::vector<double> load_time_exponent(const std::string& path);

}  // namespace vlp
