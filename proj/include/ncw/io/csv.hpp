#pragma once

// Locale-independent number formatting and CSV writers for trajectories and
// strategy comparisons.

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "ncw/battle.hpp"

namespace ncw::io {

inline constexpr const char* timeseries_header = "t,b,r,n,a,x,stage_index,pi1,pi2,pi3";

/// Shortest representation that round-trips.
inline std::string format_exact(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

/// Six significant digits, %g style.
inline std::string format_short(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

inline std::string format_allocation(const Allocation& a) {
  return "(" + format_short(a.pi1()) + "," + format_short(a.pi2()) + "," + format_short(a.pi3()) + ")";
}

/// One row per sample, event states included.
inline void write_timeseries(std::ostream& out, const Trajectory& traj) {
  out << timeseries_header << '\n';
  for (const auto& s : traj.samples) {
    const auto& st = s.state;
    // A battle decided before any stage has no allocation to report.
    const Allocation alloc = s.stage < traj.stage_allocations.size() ? traj.stage_allocations[s.stage] : Allocation{};
    out << format_exact(st.t) << ',' << format_exact(st.b) << ',' << format_exact(st.r) << ','
        << format_exact(st.n) << ',' << format_exact(st.a) << ',' << format_exact(st.x) << ',' << s.stage << ','
        << format_exact(alloc.pi1()) << ',' << format_exact(alloc.pi2()) << ',' << format_exact(alloc.pi3())
        << '\n';
  }
}

/// `t` followed by one B column per strategy.
inline void write_comparison(std::ostream& out, const ComparisonReport& rep, const std::vector<std::string>& names) {
  out << 't';
  for (const auto& n : names) out << ",b_" << n;
  out << '\n';
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    out << format_exact(rep.times[k]);
    for (const auto& col : rep.b_values) out << ',' << format_exact(col[k]);
    out << '\n';
  }
}

}  // namespace ncw::io
