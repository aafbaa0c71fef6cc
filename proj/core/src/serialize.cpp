#include "sqkd/serialize.hpp"

#include <fstream>
#include <sstream>

namespace sqkd {

namespace {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Complex& v : m.data)
    entries.push_back(nlohmann::json::array({v.real(), v.imag()}));
  return {{"rows", m.rows}, {"cols", m.cols}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  ComplexMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& entries = j.at("entries");
  if (entries.size() != m.data.size())
    throw ConfigError("attack matrix: entry count does not match rows*cols");
  for (std::size_t i = 0; i < m.data.size(); ++i)
    m.data[i] = Complex(entries[i].at(0).get<double>(), entries[i].at(1).get<double>());
  return m;
}

}  // namespace

nlohmann::json attack_to_json(const AttackPair& attack) {
  return {{"format_version", kAttackFormatVersion},
          {"d1", attack.d1},
          {"d2", attack.d2},
          {"u_e", matrix_to_json(attack.u_e)},
          {"u_f", matrix_to_json(attack.u_f)}};
}

AttackPair attack_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kAttackFormatVersion)
    throw ConfigError("attack fixture: unsupported format_version");
  AttackPair a;
  a.d1 = j.at("d1").get<std::size_t>();
  a.d2 = j.at("d2").get<std::size_t>();
  a.u_e = matrix_from_json(j.at("u_e"));
  a.u_f = matrix_from_json(j.at("u_f"));
  a.validate();
  return a;
}

AttackPair load_attack(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open attack file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    return attack_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_attack(const AttackPair& attack, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write attack file: " + path.string());
  out << attack_to_json(attack).dump(2) << '\n';
}

namespace {

const char* basis_symbol(Basis b) { return b == Basis::z ? "Z" : "X"; }

std::string outcome_symbol(Basis b, std::uint8_t bit) {
  if (b == Basis::z) return bit ? "1" : "0";
  return bit ? "-" : "+";
}

}  // namespace

nlohmann::json transcript_to_json(const ProtocolTranscript& t) {
  nlohmann::json j;
  j["format_version"] = kTranscriptFormatVersion;

  nlohmann::json bob_prep = nlohmann::json::array();
  for (std::uint8_t b : t.bob_prepared) bob_prep.push_back(b ? "-" : "+");
  j["bob_prepared"] = std::move(bob_prep);
  j["alice_prepared"] = t.alice_prepared;
  j["permutation"] = t.permutation;
  j["sent_positions"] = t.sent_positions;

  nlohmann::json bases = nlohmann::json::array();
  nlohmann::json outcomes = nlohmann::json::array();
  for (std::size_t s = 0; s < t.bob_bases.size(); ++s) {
    bases.push_back(basis_symbol(t.bob_bases[s]));
    outcomes.push_back(outcome_symbol(t.bob_bases[s], t.bob_outcomes[s]));
  }
  j["bob_bases"] = std::move(bases);
  j["bob_outcomes"] = std::move(outcomes);

  j["sift_z_indices"] = t.sift_z_indices;
  j["ctrl_x_indices"] = t.ctrl_x_indices;
  j["test_indices"] = t.test_indices;
  j["q_x_est"] = t.q_x_est;
  j["q_z_est"] = t.q_z_est;
  j["attempts"] = t.attempts;
  if (t.abort == AbortReason::none) {
    j["abort"] = nullptr;
    j["raw_key_a"] = t.raw_key_a;
    j["raw_key_b"] = t.raw_key_b;
  } else {
    j["abort"] = to_string(t.abort);
  }
  return j;
}

ProtocolTranscript transcript_from_json(const nlohmann::json& j) {
  ProtocolTranscript t;
  for (const auto& s : j.at("bob_prepared"))
    t.bob_prepared.push_back(s.get<std::string>() == "-" ? 1 : 0);
  t.alice_prepared = j.at("alice_prepared").get<std::vector<std::uint8_t>>();
  t.permutation = j.at("permutation").get<std::vector<std::size_t>>();
  t.sent_positions = j.at("sent_positions").get<std::vector<std::size_t>>();
  for (const auto& s : j.at("bob_bases"))
    t.bob_bases.push_back(s.get<std::string>() == "X" ? Basis::x : Basis::z);
  for (const auto& s : j.at("bob_outcomes")) {
    const std::string sym = s.get<std::string>();
    t.bob_outcomes.push_back(sym == "1" || sym == "-" ? 1 : 0);
  }
  t.sift_z_indices = j.at("sift_z_indices").get<std::vector<std::size_t>>();
  t.ctrl_x_indices = j.at("ctrl_x_indices").get<std::vector<std::size_t>>();
  t.test_indices = j.at("test_indices").get<std::vector<std::size_t>>();
  t.q_x_est = j.at("q_x_est").get<double>();
  t.q_z_est = j.at("q_z_est").get<double>();
  t.attempts = j.at("attempts").get<int>();
  const auto& abort = j.at("abort");
  if (abort.is_null()) {
    t.abort = AbortReason::none;
    t.raw_key_a = j.at("raw_key_a").get<std::vector<std::uint8_t>>();
    t.raw_key_b = j.at("raw_key_b").get<std::vector<std::uint8_t>>();
  } else {
    const std::string reason = abort.get<std::string>();
    if (reason == "insufficient-sift")
      t.abort = AbortReason::insufficient_sift;
    else if (reason == "ctrl-threshold")
      t.abort = AbortReason::ctrl_threshold;
    else if (reason == "test-threshold")
      t.abort = AbortReason::test_threshold;
    else
      throw ConfigError("transcript: unknown abort reason " + reason);
  }
  return t;
}

namespace {

[[noreturn]] void config_fail(const std::filesystem::path& path, int line,
                              const std::string& msg) {
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

SimulationSetup load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());

  SimulationSetup setup;
  std::string channel_kind;
  double q_z = 0.0, q_x = 0.0;
  std::filesystem::path attack_file;
  bool have_n = false, have_kind = false;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string text = raw;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    text = trim(text);
    if (text.empty()) continue;

    const auto eq = text.find('=');
    if (eq == std::string::npos) config_fail(path, line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) config_fail(path, line, "empty key or value");

    auto as_double = [&](const std::string& v) {
      try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
      } catch (const std::exception&) {
        config_fail(path, line, "not a number: " + v);
      }
    };
    auto as_u64 = [&](const std::string& v) {
      try {
        std::size_t used = 0;
        const unsigned long long u = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<std::uint64_t>(u);
      } catch (const std::exception&) {
        config_fail(path, line, "not a non-negative integer: " + v);
      }
    };

    if (key == "n") {
      setup.config.n = static_cast<std::size_t>(as_u64(value));
      have_n = true;
    } else if (key == "delta") {
      setup.config.delta = as_double(value);
    } else if (key == "m") {
      setup.config.m = static_cast<std::size_t>(as_u64(value));
    } else if (key == "t_x") {
      setup.config.t_x = as_double(value);
    } else if (key == "t_z") {
      setup.config.t_z = as_double(value);
    } else if (key == "seed") {
      setup.config.seed = as_u64(value);
    } else if (key == "retry_cap") {
      setup.config.retry_cap = static_cast<int>(as_u64(value));
    } else if (key == "channel.kind") {
      channel_kind = value;
      have_kind = true;
    } else if (key == "channel.q_z") {
      q_z = as_double(value);
    } else if (key == "channel.q_x") {
      q_x = as_double(value);
    } else if (key == "channel.attack_file") {
      attack_file = value;
    } else {
      config_fail(path, line, "unknown key: " + key);
    }
  }

  if (!have_n) throw ConfigError(path.string() + ": missing required key: n");
  if (!have_kind)
    throw ConfigError(path.string() + ": missing required key: channel.kind");

  if (channel_kind == "ideal") {
    setup.channel = ChannelModel::make_ideal();
  } else if (channel_kind == "symmetric-noise") {
    setup.channel = ChannelModel::make_noise(q_z, q_x);
  } else if (channel_kind == "attack") {
    if (attack_file.empty())
      throw ConfigError(path.string() + ": channel.kind = attack requires channel.attack_file");
    if (attack_file.is_relative()) attack_file = path.parent_path() / attack_file;
    setup.channel = ChannelModel::make_attack(load_attack(attack_file));
  } else {
    throw ConfigError(path.string() + ": unknown channel.kind: " + channel_kind);
  }

  setup.config.validate();
  return setup;
}

}  // namespace sqkd
