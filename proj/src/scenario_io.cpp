#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wsnagg/error.hpp"
#include "wsnagg/random.hpp"
#include "wsnagg/scenario_io.hpp"

namespace wsnagg {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size() && !s.empty();
}

template <typename T>
T number_or_throw(std::string_view key, std::string_view value) {
  T out{};
  if (!parse_number(value, out)) {
    throw Error(ErrorCode::InvalidScenario,
                "value '" + std::string(value) + "' for " + std::string(key) + " is not a number");
  }
  return out;
}

}  // namespace

void apply_override(Scenario& s, std::string_view key, std::string_view value) {
  value = trim(value);
  auto d = [&] { return number_or_throw<double>(key, value); };
  auto i = [&] { return number_or_throw<int>(key, value); };
  if (key == "width") s.width = d();
  else if (key == "height") s.height = d();
  else if (key == "sink_id") s.sink_id = i();
  else if (key == "k") s.k = i();
  else if (key == "band_low") s.band.low = d();
  else if (key == "band_high") s.band.high = d();
  else if (key == "channels_per_range") s.channels_per_range = i();
  else if (key == "theta_em") s.theta_em = d();
  else if (key == "max_em_iters") s.max_em_iters = i();
  else if (key == "e_elec") s.e_elec = d();
  else if (key == "e_amp") s.e_amp = d();
  else if (key == "e_lpl") s.e_lpl = d();
  else if (key == "packet_bits") s.packet_bits = d();
  else if (key == "comm_range") s.comm_range = d();
  else if (key == "interference_range") s.interference_range = d();
  else if (key == "refresh_fraction") s.refresh_fraction = d();
  else if (key == "max_rounds") s.max_rounds = i();
  else if (key == "seed") s.seed = number_or_throw<std::uint64_t>(key, value);
  else if (key == "aggregation") {
    if (value == "true") s.aggregation = true;
    else if (value == "false") s.aggregation = false;
    else throw Error(ErrorCode::InvalidScenario, "aggregation must be true or false");
  } else {
    throw Error(ErrorCode::InvalidScenario, "unknown scenario key '" + std::string(key) + "'");
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  bool in_nodes = false;
  int line_no = 0;
  auto syntax = [&](const std::string& what) {
    return Error(ErrorCode::Syntax, "line " + std::to_string(line_no) + ": " + what);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line == "[nodes]") {
      if (in_nodes) throw syntax("duplicate [nodes] section");
      in_nodes = true;
      continue;
    }
    if (!in_nodes) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw syntax("expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      try {
        apply_override(s, key, line.substr(eq + 1));
      } catch (const Error& e) {
        throw syntax(e.what());
      }
      continue;
    }

    std::istringstream row{std::string(line)};
    std::string fields[5];
    int count = 0;
    while (count < 5 && row >> fields[count]) ++count;
    if (count != 4) throw syntax("node rows have exactly 4 columns: id x y energy");
    NodeState n;
    if (!parse_number(fields[0], n.id) || !parse_number(fields[1], n.position.x) ||
        !parse_number(fields[2], n.position.y) || !parse_number(fields[3], n.residual_energy)) {
      throw syntax("malformed number in node row");
    }
    s.nodes.push_back(n);
  }
  if (!in_nodes) throw Error(ErrorCode::Syntax, "missing [nodes] section");
  for (auto& n : s.nodes) n.role = n.id == s.sink_id ? NodeRole::Sink : NodeRole::Source;
  validate_scenario(s);
  return s;
}

std::string format_scenario(const Scenario& s) {
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) {
    out.append(k).append(" = ").append(v).append("\n");
  };
  kv("width", format_double(s.width));
  kv("height", format_double(s.height));
  kv("sink_id", std::to_string(s.sink_id));
  kv("k", std::to_string(s.k));
  kv("band_low", format_double(s.band.low));
  kv("band_high", format_double(s.band.high));
  kv("channels_per_range", std::to_string(s.channels_per_range));
  kv("theta_em", format_double(s.theta_em));
  kv("max_em_iters", std::to_string(s.max_em_iters));
  kv("e_elec", format_double(s.e_elec));
  kv("e_amp", format_double(s.e_amp));
  kv("e_lpl", format_double(s.e_lpl));
  kv("packet_bits", format_double(s.packet_bits));
  kv("comm_range", format_double(s.comm_range));
  kv("interference_range", format_double(s.interference_range));
  kv("refresh_fraction", format_double(s.refresh_fraction));
  kv("max_rounds", std::to_string(s.max_rounds));
  kv("seed", std::to_string(s.seed));
  kv("aggregation", s.aggregation ? "true" : "false");
  out += "\n[nodes]\n# id x y energy\n";
  for (const auto& n : s.nodes) {
    out += std::to_string(n.id) + " " + format_double(n.position.x) + " " +
           format_double(n.position.y) + " " + format_double(n.residual_energy) + "\n";
  }
  return out;
}

Scenario generate_random_scenario(int n_nodes, double width, double height, int k,
                                  std::uint64_t seed, const GeneratorDefaults& defaults) {
  if (n_nodes < k + 1 || k < 1) {
    throw Error(ErrorCode::TooFewNodes, "need at least K + 1 nodes (sources plus sink)");
  }
  Scenario s = defaults.base;
  s.nodes.clear();
  s.width = width;
  s.height = height;
  s.k = k;
  s.seed = seed;
  s.sink_id = 0;

  Rng rng(seed);
  std::vector<Vec2> taken{{width / 2.0, height / 2.0}};
  s.nodes.push_back({0, taken[0], defaults.initial_energy, NodeRole::Sink, RadioState::Lpl, {}});
  for (int id = 1; id < n_nodes; ++id) {
    Vec2 p;
    do {
      p.x = rng.uniform(0.0, width);
      p.y = rng.uniform(0.0, height);
    } while (std::find(taken.begin(), taken.end(), p) != taken.end());
    taken.push_back(p);
    s.nodes.push_back({id, p, defaults.initial_energy, NodeRole::Source, RadioState::Lpl, {}});
  }
  validate_scenario(s);
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::Io, "cannot move output into '" + path + "'");
  }
}

}  // namespace wsnagg
