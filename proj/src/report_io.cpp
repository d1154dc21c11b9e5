#include "spatial/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace spatial {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string channel_profile_hash(const ChannelProfile& a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto m : a) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (static_cast<std::uint64_t>(m) >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string join_indices(const std::vector<std::size_t>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

void write_learning_csv(std::ostream& out, const LearningResult& r) {
  if (r.trace.empty()) {
    out << "period,phi\n";
    return;
  }
  const std::size_t N = r.trace.front().a.size();
  const bool sigma = !r.trace.front().sigma.empty();
  out << "period";
  for (std::size_t n = 0; n < N; ++n) out << ",a_" << n;
  for (std::size_t n = 0; n < N; ++n) out << ",u_hat_" << n;
  out << ",phi";
  if (sigma) {
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t m = 0; m < r.trace.front().sigma[n].size(); ++m) {
        out << ",sigma_" << n << '_' << m;
      }
    }
  }
  out << '\n';
  for (const auto& row : r.trace) {
    out << row.period;
    for (auto m : row.a) out << ',' << m;
    for (double u : row.u_hat) out << ',' << format_number(u);
    out << ',' << format_number(row.phi);
    for (const auto& s : row.sigma) {
      for (double v : s) out << ',' << format_number(v);
    }
    out << '\n';
  }
}

void write_mobility_csv(std::ostream& out, const MobilityResult& r) {
  out << "event_time,user,from_location,to_location,accepted,phi,total_utility,"
         "channel_profile_hash\n";
  for (const auto& e : r.events) {
    out << format_number(e.time) << ',' << e.user << ',' << e.from << ',' << e.to << ','
        << (e.accepted ? 1 : 0) << ',' << format_number(e.phi) << ','
        << format_number(e.total_utility) << ',' << channel_profile_hash(e.channels)
        << '\n';
  }
}

json profile_json(const Profile& p) {
  return json{{"locations", p.d}, {"channels", p.a}};
}

namespace {

// Infinite or NaN values become null rather than invalid JSON.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json report_json(const EquilibriumReport& r) {
  json nash = json::array();
  for (const auto& p : r.nash_set) nash.push_back(profile_json(p));
  return json{
      {"nash_set", nash},
      {"nash_count", r.nash_set.size()},
      {"optimum", {{"profile", profile_json(r.optimum.profile)},
                   {"value", number(r.optimum.value)}}},
      {"worst_ne_value", number(r.worst_ne_value)},
      {"poa", number(r.poa)},
      {"bound_inputs", {{"varpi", number(r.inputs.varpi)},
                        {"E", number(r.inputs.e_min)},
                        {"K", r.inputs.max_degree},
                        {"E_user", r.inputs.e_user}}},
      {"bound_value", number(r.bound_value)},
      {"applicable", r.applicable},
      {"normalized", r.normalized},
      {"normalization", {{"lo", r.norm.lo}, {"hi", r.norm.hi}, {"floor", r.norm.floor}}},
  };
}

json report_json(const JointReport& r) {
  json nash = json::array();
  for (const auto& p : r.nash_set) nash.push_back(profile_json(p));
  return json{
      {"nash_set", nash},
      {"nash_count", r.nash_set.size()},
      {"optimum", {{"profile", profile_json(r.optimum.profile)},
                   {"value", number(r.optimum.value)}}},
      {"worst_ne_value", number(r.worst_ne_value)},
      {"poa", number(r.poa)},
      {"eta", number(r.bound.eta)},
      {"eta_argmax", r.bound.argmax},
      {"varpi", number(r.bound.varpi)},
      {"bound_value", number(r.bound.bound)},
      {"bound_applicable", r.bound.applicable},
      {"applicable", r.applicable},
  };
}

}  // namespace spatial
