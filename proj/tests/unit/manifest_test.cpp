// Copyright 2026-present the wackymeter project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wackymeter/errors.hpp"
#include "wackymeter/manifest.hpp"

namespace wackymeter {
namespace {

TEST(Sha256Test, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(RunManifestTest, RoundTripsAndHashesInputs) {
  testing::TempDir dir;
  testing::spit(dir / "in.txt", "abc");
  RunManifest m;
  m.command = "eval";
  m.config = {{"k", "10"}, {"measures", "MRR@10"}};
  m.seed = 7;
  m.add_input((dir / "in.txt").string());
  EXPECT_EQ(m.input_digests.at((dir / "in.txt").string()),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto text = m.to_json();
  const auto back = RunManifest::from_json(text);
  EXPECT_EQ(back.command, "eval");
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.input_digests, m.input_digests);
  EXPECT_EQ(back.seed, 7u);
  EXPECT_EQ(back.to_json(), text);
}

TEST(RunManifestTest, MissingInputIsIoError) {
  RunManifest m;
  EXPECT_THROW(m.add_input("/nonexistent/wackymeter/file"), IoError);
}

TEST(RunManifestTest, MalformedJsonIsParseError) {
  EXPECT_THROW(RunManifest::from_json("{not json"), ParseError);
}

}  // namespace
}  // namespace wackymeter
