// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <fstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "seaug/manifest.hpp"
#include "support/fixtures.hpp"

using seaug::Group;
using seaug::Manifest;
using seaug::ManifestEntry;
using seaug::MixRecord;
using seaug::Strategy;

namespace {

ManifestEntry make_original(const std::string& utt, const std::string& spk,
                            Group g) {
  ManifestEntry e;
  e.utt_id = utt;
  e.speaker_id = spk;
  e.group = g;
  e.clean_path = "clean/" + spk + "/" + utt + ".wav";
  e.duration = 1.25;
  return e;
}

Manifest sample_manifest() {
  Manifest m;
  // Deliberately unsorted: save must order by utt_id.
  m.entries.push_back(make_original("NT01_u02", "NT01", Group::kNeurotypical));
  m.entries.push_back(make_original("NT01_u01", "NT01", Group::kNeurotypical));
  m.entries.push_back(make_original("PT01_u01", "PT01", Group::kPathological));

  ManifestEntry child = make_original("NT01_u01_pitch_shift_v2", "NT01",
                                      Group::kNeurotypical);
  child.clean_path = "aug/NT01/NT01_u01_pitch_shift_v2.wav";
  child.augmentation.strategy = Strategy::kPitchShift;
  child.augmentation.params = {{"semitones", "1.500000"}};
  child.augmentation.parent_utt_ids = {"NT01_u01"};
  m.entries.push_back(child);

  ManifestEntry mixed = child;
  mixed.utt_id = "NT01_u01_pitch_shift_v3";
  mixed.clean_path = "aug/NT01/NT01_u01_pitch_shift_v3.wav";
  mixed.noisy_path = "noisy/NT01/NT01_u01_pitch_shift_v3.wav";
  MixRecord mix;
  mix.noise_type = "CAF";
  mix.snr_db = -3.25;
  mix.noise_offset = 98765;
  mix.seed = 0xfeedfacedeadbeefull;
  mix.gain = 0.08125;
  mix.noise_file = "take2.wav";
  mix.peak_scale = 0.9734;
  mixed.mix = mix;
  m.entries.push_back(mixed);
  return m;
}

}  // namespace

TEST_CASE("manifests round trip byte-identically", "[manifest]") {
  testsup::TempDir tmp("manifest");
  const Manifest m = sample_manifest();
  const auto p1 = tmp.path() / "a.jsonl";
  const auto p2 = tmp.path() / "b.jsonl";
  seaug::save_manifest(m, p1);
  const Manifest back = seaug::load_manifest(p1);
  seaug::save_manifest(back, p2);
  REQUIRE(testsup::read_file_bytes(p1) == testsup::read_file_bytes(p2));

  REQUIRE(back.entries.size() == 5);
  // Entries come back sorted by id.
  for (std::size_t i = 1; i < back.entries.size(); ++i)
    REQUIRE(back.entries[i - 1].utt_id < back.entries[i].utt_id);

  const ManifestEntry* mixed = back.find("NT01_u01_pitch_shift_v3");
  REQUIRE(mixed != nullptr);
  REQUIRE(mixed->noisy_path.has_value());
  REQUIRE(mixed->mix.has_value());
  REQUIRE(mixed->mix->noise_type == "CAF");
  REQUIRE(mixed->mix->snr_db == -3.25);
  REQUIRE(mixed->mix->noise_offset == 98765);
  REQUIRE(mixed->mix->seed == 0xfeedfacedeadbeefull);
  REQUIRE(mixed->mix->gain == 0.08125);
  REQUIRE(mixed->mix->noise_file == "take2.wav");
  REQUIRE(mixed->mix->peak_scale == 0.9734);

  const ManifestEntry* plain = back.find("NT01_u01");
  REQUIRE(plain != nullptr);
  REQUIRE_FALSE(plain->noisy_path.has_value());
  REQUIRE_FALSE(plain->mix.has_value());
}

TEST_CASE("serialized lines omit absent fields and keep keys sorted",
          "[manifest]") {
  testsup::TempDir tmp("manifestfmt");
  const auto path = tmp.path() / "m.jsonl";
  seaug::save_manifest(sample_manifest(), path);

  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  for (const auto& l : lines) {
    REQUIRE(l.rfind("{\"augmentation\":", 0) == 0);  // alphabetically first key
    REQUIRE(l.find("\"schema_version\":1") != std::string::npos);
  }
  // Only the mixed entry mentions the mixture fields.
  int with_noisy = 0;
  for (const auto& l : lines)
    if (l.find("\"noisy_path\"") != std::string::npos) ++with_noisy;
  REQUIRE(with_noisy == 1);
}

TEST_CASE("structural validation catches broken provenance", "[manifest]") {
  Manifest dup = sample_manifest();
  dup.entries.push_back(dup.entries[0]);
  REQUIRE_THROWS_WITH(seaug::validate_manifest(dup),
                      Catch::Matchers::ContainsSubstring("duplicate"));

  Manifest ghost = sample_manifest();
  ghost.entries[3].augmentation.parent_utt_ids = {"nobody"};
  REQUIRE_THROWS_WITH(seaug::validate_manifest(ghost),
                      Catch::Matchers::ContainsSubstring("missing parent"));

  Manifest rooted = sample_manifest();
  rooted.entries[0].augmentation.parent_utt_ids = {"NT01_u01"};
  REQUIRE_THROWS_WITH(seaug::validate_manifest(rooted),
                      Catch::Matchers::ContainsSubstring("has parents"));

  Manifest cyclic;
  ManifestEntry a = make_original("A", "NT01", Group::kNeurotypical);
  a.augmentation.strategy = Strategy::kPitchShift;
  a.augmentation.parent_utt_ids = {"B"};
  ManifestEntry b = make_original("B", "NT01", Group::kNeurotypical);
  b.augmentation.strategy = Strategy::kPitchShift;
  b.augmentation.parent_utt_ids = {"A"};
  cyclic.entries = {a, b};
  REQUIRE_THROWS_WITH(seaug::validate_manifest(cyclic),
                      Catch::Matchers::ContainsSubstring("cycle"));

  // Multi-hop chains that end at an original are fine.
  Manifest chain = sample_manifest();
  ManifestEntry grand = chain.entries[3];
  grand.utt_id = "NT01_u01_pitch_shift_v2_noise_v0";
  grand.augmentation.strategy = Strategy::kNoiseAdd;
  grand.augmentation.parent_utt_ids = {"NT01_u01_pitch_shift_v2"};
  chain.entries.push_back(grand);
  REQUIRE_NOTHROW(seaug::validate_manifest(chain));
}

TEST_CASE("unreadable or mistyped files fail with located errors",
          "[manifest]") {
  testsup::TempDir tmp("manifestbad");
  REQUIRE_THROWS_AS(seaug::load_manifest(tmp.path() / "none.jsonl"),
                    seaug::Error);

  const auto good = tmp.path() / "good.jsonl";
  seaug::save_manifest(sample_manifest(), good);

  // Bump the schema version on every line.
  std::string bumped = testsup::read_file_bytes(good);
  std::size_t pos = 0;
  while ((pos = bumped.find("\"schema_version\":1", pos)) != std::string::npos)
    bumped.replace(pos, 18, "\"schema_version\":9");
  const auto vpath = tmp.path() / "version.jsonl";
  std::ofstream(vpath, std::ios::binary) << bumped;
  REQUIRE_THROWS_WITH(seaug::load_manifest(vpath),
                      Catch::Matchers::ContainsSubstring("schema_version"));

  // A syntax error reports its line number.
  const auto bad = tmp.path() / "bad.jsonl";
  {
    std::ofstream out(bad, std::ios::binary);
    std::ifstream in(good, std::ios::binary);
    std::string first;
    std::getline(in, first);
    out << first << "\n" << "this is not json\n";
  }
  REQUIRE_THROWS_WITH(seaug::load_manifest(bad),
                      Catch::Matchers::ContainsSubstring("line 2"));

  // Blank lines are tolerated.
  const auto gappy = tmp.path() / "gappy.jsonl";
  {
    std::ofstream out(gappy, std::ios::binary);
    std::ifstream in(good, std::ios::binary);
    std::string l;
    while (std::getline(in, l)) out << l << "\n\n";
  }
  REQUIRE(seaug::load_manifest(gappy).entries.size() == 5);
}
