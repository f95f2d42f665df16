#ifndef LACELAB_LATTICE_IO_HPP
#define LACELAB_LATTICE_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "lacelab/lattice.hpp"
#include "lacelab/series.hpp"

namespace lacelab {

// Text cache format:
//
//   lacelab-lattice v1
//   dim=<d>
//   radius=<R_max>
//   mode=exact|float
//   kind=function|series
//   n_max=<n>                 (series only)
//   truncation_bound=<t>      (function only)
//   x1,...,xd,value           (or x1,...,xd,c0,...,c<n> for series)
//   <rows>
//
// Exact values are written as p/q, floats with 17 significant digits, so both
// modes round-trip bit for bit. Only nonzero rows are written.
inline constexpr const char* kCacheMagic = "lacelab-lattice v1";

std::string format_scalar(double v);
std::string format_scalar(const Rational& v);
template <typename Scalar>
Scalar parse_scalar(const std::string& text);

template <typename Scalar>
void write_function(std::ostream& os, const LatticeFunction<Scalar>& f);
template <typename Scalar>
LatticeFunction<Scalar> read_function(std::istream& is);
template <typename Scalar>
void write_series(std::ostream& os, const SeriesFunction<Scalar>& s);
template <typename Scalar>
SeriesFunction<Scalar> read_series(std::istream& is);

template <typename Scalar>
void save_function(const std::filesystem::path& path, const LatticeFunction<Scalar>& f);
template <typename Scalar>
LatticeFunction<Scalar> load_function(const std::filesystem::path& path);
template <typename Scalar>
void save_series(const std::filesystem::path& path, const SeriesFunction<Scalar>& s);
template <typename Scalar>
SeriesFunction<Scalar> load_series(const std::filesystem::path& path);

// Directory from LACELAB_CACHE_DIR, or nullopt when caching is disabled (unset or empty).
std::optional<std::filesystem::path> cache_directory();

}  // namespace lacelab

#endif  // LACELAB_LATTICE_IO_HPP
