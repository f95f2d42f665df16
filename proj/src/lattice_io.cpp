#include "lacelab/lattice_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace lacelab {
namespace {

struct Header {
  int dim = 0;
  int radius = 0;
  std::string mode;
  std::string kind;
  int n_max = -1;
  double truncation_bound = 0.0;
};

template <typename Scalar>
const char* mode_name() {
  return is_exact_v<Scalar> ? "exact" : "float";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

int parse_int(const std::string& s, const char* what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::kIo, std::string("bad integer for ") + what + ": '" + s + "'");
  return static_cast<int>(v);
}

void write_header(std::ostream& os, int dim, int radius, const char* mode, const char* kind) {
  os << kCacheMagic << "\n"
     << "dim=" << dim << "\n"
     << "radius=" << radius << "\n"
     << "mode=" << mode << "\n"
     << "kind=" << kind << "\n";
}

Header read_header(std::istream& is, const char* expected_mode, const char* expected_kind) {
  std::string line;
  if (!std::getline(is, line) || line != kCacheMagic) throw Error(ErrorCode::kIo, "missing cache header");
  Header h;
  while (std::getline(is, line)) {
    if (line.rfind("x1", 0) == 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kIo, "malformed header line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "dim") h.dim = parse_int(value, "dim");
    else if (key == "radius") h.radius = parse_int(value, "radius");
    else if (key == "mode") h.mode = value;
    else if (key == "kind") h.kind = value;
    else if (key == "n_max") h.n_max = parse_int(value, "n_max");
    else if (key == "truncation_bound") h.truncation_bound = std::strtod(value.c_str(), nullptr);
    else throw Error(ErrorCode::kIo, "unknown header key '" + key + "'");
  }
  if (h.mode != expected_mode) throw Error(ErrorCode::kParameterMismatch, "cache mode is '" + h.mode + "'");
  if (h.kind != expected_kind) throw Error(ErrorCode::kParameterMismatch, "cache kind is '" + h.kind + "'");
  if (h.dim < 1 || h.dim > kMaxDim) throw Error(ErrorCode::kIo, "cache dimension out of range");
  return h;
}

LatticePoint parse_point(const std::vector<std::string>& cells, int dim) {
  LatticePoint p(dim);
  for (int i = 0; i < dim; ++i) p[i] = parse_int(cells[static_cast<std::size_t>(i)], "coordinate");
  return p;
}

void write_point(std::ostream& os, const LatticePoint& p) {
  for (int i = 0; i < p.dim(); ++i) os << p[i] << ',';
}

void write_column_names(std::ostream& os, int dim) {
  for (int i = 1; i <= dim; ++i) os << 'x' << i << ',';
}

}  // namespace

std::string format_scalar(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scalar(const Rational& v) { return v.str(); }

template <>
double parse_scalar<double>(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw Error(ErrorCode::kIo, "bad float '" + text + "'");
  return v;
}

template <>
Rational parse_scalar<Rational>(const std::string& text) {
  return Rational::parse(text);
}

template <typename Scalar>
void write_function(std::ostream& os, const LatticeFunction<Scalar>& f) {
  write_header(os, f.dim(), f.radius_cap(), mode_name<Scalar>(), "function");
  os << "truncation_bound=" << format_scalar(f.truncation_bound()) << "\n";
  write_column_names(os, f.dim());
  os << "value\n";
  f.for_each_nonzero([&](const LatticePoint& p, const Scalar& v) {
    write_point(os, p);
    os << format_scalar(v) << "\n";
  });
}

template <typename Scalar>
LatticeFunction<Scalar> read_function(std::istream& is) {
  const Header h = read_header(is, mode_name<Scalar>(), "function");
  LatticeFunction<Scalar> f(h.dim, h.radius);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != h.dim + 1) throw Error(ErrorCode::kIo, "bad row '" + line + "'");
    f.set(parse_point(cells, h.dim), parse_scalar<Scalar>(cells.back()));
  }
  if (h.truncation_bound > 0.0) f.record_truncation(h.truncation_bound);
  return f;
}

template <typename Scalar>
void write_series(std::ostream& os, const SeriesFunction<Scalar>& s) {
  write_header(os, s.dim(), s.radius(), mode_name<Scalar>(), "series");
  os << "n_max=" << s.n_max() << "\n";
  write_column_names(os, s.dim());
  for (int n = 0; n <= s.n_max(); ++n) os << 'c' << n << (n == s.n_max() ? "\n" : ",");
  for (std::int64_t i = 0; i < s.box().size(); ++i) {
    bool any = false;
    for (int n = 0; n <= s.n_max(); ++n) any = any || !is_zero(s.coeffs()(i, n));
    if (!any) continue;
    write_point(os, s.box().point(i));
    for (int n = 0; n <= s.n_max(); ++n) os << format_scalar(s.coeffs()(i, n)) << (n == s.n_max() ? "\n" : ",");
  }
}

template <typename Scalar>
SeriesFunction<Scalar> read_series(std::istream& is) {
  const Header h = read_header(is, mode_name<Scalar>(), "series");
  if (h.n_max < 0) throw Error(ErrorCode::kIo, "series cache without n_max");
  SeriesFunction<Scalar> s(h.dim, h.radius, h.n_max);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != h.dim + h.n_max + 1) throw Error(ErrorCode::kIo, "bad row '" + line + "'");
    const LatticePoint p = parse_point(cells, h.dim);
    for (int n = 0; n <= h.n_max; ++n) {
      s.set_coeff(p, n, parse_scalar<Scalar>(cells[static_cast<std::size_t>(h.dim + n)]));
    }
  }
  return s;
}

template <typename Scalar>
void save_function(const std::filesystem::path& path, const LatticeFunction<Scalar>& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_function(os, f);
}

template <typename Scalar>
LatticeFunction<Scalar> load_function(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return read_function<Scalar>(is);
}

template <typename Scalar>
void save_series(const std::filesystem::path& path, const SeriesFunction<Scalar>& s) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_series(os, s);
}

template <typename Scalar>
SeriesFunction<Scalar> load_series(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return read_series<Scalar>(is);
}

std::optional<std::filesystem::path> cache_directory() {
  const char* env = std::getenv("LACELAB_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::filesystem::path dir(env);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) return std::nullopt;
  return dir;
}

#define LACELAB_IO_INSTANTIATE(S)                                                      \
  template void write_function<S>(std::ostream&, const LatticeFunction<S>&);          \
  template LatticeFunction<S> read_function<S>(std::istream&);                         \
  template void write_series<S>(std::ostream&, const SeriesFunction<S>&);             \
  template SeriesFunction<S> read_series<S>(std::istream&);                            \
  template void save_function<S>(const std::filesystem::path&, const LatticeFunction<S>&); \
  template LatticeFunction<S> load_function<S>(const std::filesystem::path&);          \
  template void save_series<S>(const std::filesystem::path&, const SeriesFunction<S>&); \
  template SeriesFunction<S> load_series<S>(const std::filesystem::path&);

LACELAB_IO_INSTANTIATE(double)
LACELAB_IO_INSTANTIATE(Rational)

}  // namespace lacelab
