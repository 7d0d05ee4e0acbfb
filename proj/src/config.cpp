#include "vlp/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "vlp/error.hpp"
#include "vlp/field_io.hpp"

namespace vlp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::set<std::string> kKeys = {"alpha", "b",     "gamma",      "n",   "L",     "N",    "T",
                                     "M",     "mode",  "p",          "q",   "p_time", "qbar", "u0",
                                     "force", "force_form", "tol",   "K_max", "seed", "trials"};

class Entries {
 public:
  Entries(std::map<std::string, std::string> kv, std::filesystem::path base)
      : kv_(std::move(kv)), base_(std::move(base)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  const std::string& text(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw Error(Errc::Parse, "config lacks key '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const {
    try {
      return parse_number(text(key));
    } catch (const Error&) {
      throw Error(Errc::Parse, "config key '" + key + "' is not a number: '" + text(key) + "'");
    }
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) const {
    const std::string& t = text(key);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
      throw Error(Errc::Parse, "config key '" + key + "' is not an integer: '" + t + "'");
    }
    return v;
  }

  long integer_or(const std::string& key, long fallback) const { return has(key) ? integer(key) : fallback; }

  /// Value parsed as a number, or nullopt when it names a file.
  std::optional<double> literal(const std::string& key) const {
    try {
      return parse_number(text(key));
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  std::string path(const std::string& key) const {
    const std::filesystem::path p(text(key));
    return (p.is_absolute() ? p : base_ / p).string();
  }

 private:
  std::map<std::string, std::string> kv_;
  std::filesystem::path base_;
};

Field field_value(const Entries& e, const std::string& key, const Grid& grid) {
  if (const auto v = e.literal(key)) return Field::constant(grid, *v);
  Field f = load_field(e.path(key));
  if (!(f.grid() == grid)) throw Error(Errc::GridMismatch, "field '" + key + "' does not match the config grid");
  return f;
}

VariableExponent space_exponent(const Entries& e, const std::string& key, const Grid& grid) {
  if (const auto v = e.literal(key)) return VariableExponent::constant(grid, *v);
  ExponentSamples s = load_exponent(e.path(key));
  if (!(s.samples.grid() == grid)) {
    throw Error(Errc::GridMismatch, "exponent '" + key + "' does not match the config grid");
  }
  return VariableExponent(s.samples, s.p_inf);
}

VariableExponent time_exponent(const Entries& e, const std::string& key, std::size_t M) {
  if (const auto v = e.literal(key)) return VariableExponent::constant_in_time(M + 1, *v);
  std::vector<double> samples = load_time_exponent(e.path(key));
  if (samples.size() != M + 1) throw Error(Errc::LatticeMismatch, "time exponent does not have M + 1 samples");
  return VariableExponent(std::move(samples));
}

}  // namespace

RunSettings parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "vlp-config v1") {
    throw Error(Errc::Parse, "config must start with 'vlp-config v1'");
  }
  std::map<std::string, std::string> kv;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::Parse, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKeys.count(key)) throw Error(Errc::Parse, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!kv.emplace(key, value).second) {
      throw Error(Errc::Parse, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  const Entries e(std::move(kv), base_dir);

  const long n = e.integer("n");
  const long N = e.integer("N");
  const long M = e.integer("M");
  if (n < 1 || N < 2 || M < 1) throw Error(Errc::Parse, "n, N and M must be positive");
  const Grid grid(static_cast<int>(n), e.number("L"), static_cast<std::size_t>(N));
  const auto steps = static_cast<std::size_t>(M);
  const double T = e.number("T");
  if (!(T > 0.0)) throw Error(Errc::InvalidSpec, "T must be positive");
  const double alpha = e.number("alpha");
  const int b = static_cast<int>(e.integer("b"));
  const int gamma = static_cast<int>(e.integer("gamma"));

  const std::string form = e.has("force_form") ? e.text("force_form") : "direct";
  ForceForm force_form;
  if (form == "direct") {
    force_form = ForceForm::Direct;
  } else if (form == "potential") {
    force_form = ForceForm::Potential;
  } else {
    throw Error(Errc::Parse, "force_form must be 'direct' or 'potential'");
  }
  const auto times = uniform_times(T, steps);
  const Field force_frame = e.has("force") ? field_value(e, "force", grid) : Field::zeros(grid);

  const std::string mode = e.text("mode");
  auto make_space = [&]() -> std::variant<GlobalSpace, LocalSpace> {
    if (mode == "global") {
      const double q = e.number_or("q", critical_exponent(grid.dim(), b, alpha, gamma));
      return GlobalSpace{MixedSpaceParams{space_exponent(e, "p", grid), q}};
    }
    if (mode == "local") {
      return LocalSpace{time_exponent(e, "p_time", steps), e.number("q"), space_exponent(e, "qbar", grid)};
    }
    throw Error(Errc::Parse, "mode must be 'global' or 'local'");
  };

  RunSettings s{
      .spec = ProblemSpec{.alpha = alpha,
                          .b = b,
                          .gamma = gamma,
                          .grid = grid,
                          .u0 = e.has("u0") ? field_value(e, "u0", grid) : Field::zeros(grid),
                          .force = Force{force_form, constant_in_time(force_frame, times)},
                          .T = T,
                          .M = steps,
                          .space = make_space()},
  };
  s.tol = e.number_or("tol", s.tol);
  s.K_max = static_cast<int>(e.integer_or("K_max", s.K_max));
  s.seed = static_cast<std::uint64_t>(e.integer_or("seed", static_cast<long>(s.seed)));
  s.trials = static_cast<int>(e.integer_or("trials", s.trials));
  validate(s.spec);
  return s;
}

RunSettings load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IO, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

}  // namespace vlp
