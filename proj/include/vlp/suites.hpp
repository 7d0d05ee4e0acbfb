#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlp/grid.hpp"
#include "vlp/solver.hpp"

namespace vlp {

/// One line of a verification report: `check,name,value,bound,pass`.
struct ReportRow {
  std::string check;
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
/// `k,norm,increment,ratio`; the ratio column is empty for k = 1.
void write_trace(std::ostream& out, const PicardTrace& trace);
bool all_pass(const std::vector<ReportRow>& rows);

/// Closed forms (alpha = 1 Gaussian, alpha = 1/2 Poisson in 1-D), mass,
/// semigroup law, decay constants, smoothing slopes and time-integral
/// scaling for one alpha on `grid`; `t` is the closed-form / mass time.
std::vector<ReportRow> kernel_rows(double alpha, const Grid& grid, double t);

/// Norm, maximal-function and Riesz checks on random smooth data.
std::vector<ReportRow> operator_rows(const Grid& grid, std::uint64_t seed);

std::vector<ReportRow> smallness_rows(const SmallnessReport& r);
std::vector<ReportRow> local_existence_rows(const LocalExistenceReport& r);

/// u*(t, x) = a e^{-t} sin(pi x / L) on [-2, 2) with alpha = 1, b = 1,
/// gamma = 0, T = 1, and the force that makes it an exact solution. The
/// solution space is L^3([0, T], L^2) with qbar = 2.
ProblemSpec manufactured_problem(std::size_t N, std::size_t M, double amplitude);
SpaceTimeField manufactured_solution(std::size_t N, std::size_t M, double amplitude);

/// Manufactured-solution errors over a (N, M) refinement ladder.
std::vector<ReportRow> solver_rows();

}  // namespace vlp
