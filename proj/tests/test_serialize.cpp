#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sqkd/serialize.hpp"

using namespace sqkd;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sqkd_test_" + name);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("attack fixtures round-trip bit exactly") {
  const AttackPair original = sample_random_attack(314, 2, 4);
  const AttackPair reparsed = attack_from_json(attack_to_json(original));
  CHECK(reparsed.d1 == original.d1);
  CHECK(reparsed.d2 == original.d2);
  CHECK(reparsed.u_e.data == original.u_e.data);  // exact doubles, not approx
  CHECK(reparsed.u_f.data == original.u_f.data);

  // Through a file as well: nlohmann prints shortest-round-trip doubles.
  const auto path = temp_file("attack.json");
  save_attack(original, path);
  const AttackPair from_file = load_attack(path);
  CHECK(from_file.u_e.data == original.u_e.data);
  CHECK(from_file.u_f.data == original.u_f.data);
  std::filesystem::remove(path);

  nlohmann::json bad = attack_to_json(original);
  bad["format_version"] = 99;
  CHECK_THROWS_AS((void)attack_from_json(bad), ConfigError);

  nlohmann::json corrupt = attack_to_json(original);
  corrupt["u_e"]["entries"][0][0] = 5.0;  // no longer unitary
  CHECK_THROWS_AS((void)attack_from_json(corrupt), std::domain_error);
}

TEST_CASE("transcripts round-trip through JSON") {
  ProtocolConfig c;
  c.n = 8;
  c.delta = 0.5;
  c.seed = 42;
  const ProtocolTranscript t = run_protocol(c, ChannelModel::make_noise(0.05, 0.05));
  const nlohmann::json j = transcript_to_json(t);
  const ProtocolTranscript back = transcript_from_json(j);

  CHECK(back.bob_prepared == t.bob_prepared);
  CHECK(back.alice_prepared == t.alice_prepared);
  CHECK(back.permutation == t.permutation);
  CHECK(back.sent_positions == t.sent_positions);
  CHECK(back.bob_outcomes == t.bob_outcomes);
  CHECK(back.sift_z_indices == t.sift_z_indices);
  CHECK(back.ctrl_x_indices == t.ctrl_x_indices);
  CHECK(back.test_indices == t.test_indices);
  CHECK(back.q_x_est == t.q_x_est);
  CHECK(back.q_z_est == t.q_z_est);
  CHECK(back.abort == t.abort);
  CHECK(back.raw_key_a == t.raw_key_a);
  CHECK(back.raw_key_b == t.raw_key_b);

  // Outcome symbols follow the measurement basis.
  for (std::size_t s = 0; s < t.bob_bases.size(); ++s) {
    const std::string sym = j.at("bob_outcomes")[s].get<std::string>();
    if (t.bob_bases[s] == Basis::z)
      CHECK((sym == "0" || sym == "1"));
    else
      CHECK((sym == "+" || sym == "-"));
  }
  // Index arrays are sorted, as documented.
  CHECK(std::is_sorted(t.sift_z_indices.begin(), t.sift_z_indices.end()));
  CHECK(std::is_sorted(t.test_indices.begin(), t.test_indices.end()));
}

TEST_CASE("config files: happy path with defaults") {
  const auto path = temp_file("config_good.cfg");
  write_text(path,
             "# protocol block\n"
             "n = 16\n"
             "delta = 0.5\n"
             "t_x = 0.12\n"
             "t_z = 0.08\n"
             "seed = 99\n"
             "channel.kind = symmetric-noise\n"
             "channel.q_z = 0.02   # inline comment\n"
             "channel.q_x = 0.03\n");
  const SimulationSetup setup = load_sim_config(path);
  CHECK(setup.config.n == 16);
  CHECK(setup.config.delta == 0.5);
  CHECK(setup.config.resolved_m() == setup.config.block_size());  // m defaulted
  CHECK(setup.config.t_x == 0.12);
  CHECK(setup.config.seed == 99);
  CHECK(setup.channel.kind == ChannelKind::symmetric_noise);
  CHECK(setup.channel.q_z == 0.02);
  std::filesystem::remove(path);
}

TEST_CASE("config files: attack channel resolves the fixture path") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto attack_path = dir / "sqkd_test_fixture_attack.json";
  save_attack(sample_random_attack(7, 2, 2), attack_path);

  const auto cfg_path = temp_file("config_attack.cfg");
  write_text(cfg_path,
             "n = 8\n"
             "channel.kind = attack\n"
             "channel.attack_file = sqkd_test_fixture_attack.json\n");
  const SimulationSetup setup = load_sim_config(cfg_path);
  CHECK(setup.channel.kind == ChannelKind::attack);
  CHECK(setup.channel.attack.d1 == 2);
  std::filesystem::remove(cfg_path);
  std::filesystem::remove(attack_path);
}

TEST_CASE("config files: diagnostics carry the line number") {
  const auto path = temp_file("config_bad.cfg");

  write_text(path, "n = 16\nbogus_key = 3\n");
  CHECK_THROWS_WITH_AS((void)load_sim_config(path),
                       doctest::Contains(":2: unknown key"), ConfigError);

  write_text(path, "n = 16\nchannel.kind = symmetric-noise\nchannel.q_z = abc\n");
  CHECK_THROWS_WITH_AS((void)load_sim_config(path), doctest::Contains(":3:"), ConfigError);

  write_text(path, "n = 16\nno equals sign here\n");
  CHECK_THROWS_WITH_AS((void)load_sim_config(path),
                       doctest::Contains(":2: expected key = value"), ConfigError);

  write_text(path, "delta = 0.5\nchannel.kind = ideal\n");
  CHECK_THROWS_WITH_AS((void)load_sim_config(path),
                       doctest::Contains("missing required key: n"), ConfigError);

  write_text(path, "n = 16\nchannel.kind = warp\n");
  CHECK_THROWS_AS((void)load_sim_config(path), ConfigError);

  CHECK_THROWS_AS((void)load_sim_config(temp_file("does_not_exist.cfg")), ConfigError);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
