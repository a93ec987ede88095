#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "medianwalk/harness.hpp"

namespace mw::harness {

using nlohmann::json;

namespace {

json rounded(const json& j) {
  if (j.is_number_float()) return round12(j.get<double>());
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return j;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string emit_json(const json& j) { return rounded(j).dump(2) + "\n"; }

std::string emit_csv(const walk::WalkRun& run, const std::vector<double>& clt) {
  std::ostringstream os;
  os << "trial,n,d,s_lower,clt_stat\n";
  for (std::size_t t = 0; t < run.trials; ++t) {
    os << t << ',' << run.n << ',' << run.final_distance(t) << ',';
    if (t < run.s_lower.size()) os << run.s_lower[t];
    os << ',';
    if (t < clt.size()) os << format_real(clt[t]);
    os << '\n';
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::error_code ec;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory '" + parent.string() + "'", parent.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'", path);
  out << bytes;
  if (!out.flush()) throw Error(ErrorCode::IoError, "write failed for '" + path + "'", path);
}

std::string build_id() {
#ifdef __VERSION__
  return std::string("medianwalk 1.0.0 / ") + __VERSION__;
#else
  return "medianwalk 1.0.0";
#endif
}

void append_manifest(const std::string& out_dir, const Manifest& m) {
  json j = {{"command", m.command},     {"config_hash", m.config_hash}, {"seed", m.seed},
            {"build", m.build},         {"started", m.started},         {"finished", m.finished},
            {"exit_code", m.exit_code}, {"artifacts", m.artifacts},     {"rng", kRngName}};
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = (std::filesystem::path(out_dir) / "registry.jsonl").string();
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot append to '" + path + "'", path);
  out << j.dump() << '\n';
}

std::string timestamp() { return utc_now(); }

namespace {

void flatten(const json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    return;
  }
  if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << prefix << " = " << j.dump() << '\n';
}

}  // namespace

std::string report_show(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileMissing, "cannot open '" + path + "'", path);
  std::ostringstream os;
  const bool jsonl = path.size() > 6 && path.compare(path.size() - 6, 6, ".jsonl") == 0;
  if (jsonl) {
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "registry line " + std::to_string(i + 1) + " is not JSON", path);
      }
      os << '#' << i++ << ' ' << j.value("command", "?") << " exit=" << j.value("exit_code", -1)
         << " seed=" << j.value("seed", 0) << " config=" << j.value("config_hash", "").substr(0, 12)
         << " " << j.value("started", "") << " -> " << j.value("finished", "") << '\n';
    }
    return os.str();
  }
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "' is not valid JSON", path);
  }
  flatten(j, "", os);
  return os.str();
}

}  // namespace mw::harness
