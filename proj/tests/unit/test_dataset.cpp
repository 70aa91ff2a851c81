// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "lncl/dataset.hpp"

using namespace lncl;

namespace {

const TaskSpec kSentimentSpec{TaskKind::classification, {"negative", "positive"}, 3};
const TaskSpec kNerSpec{TaskKind::sequence, {"O", "B-PER", "I-PER"}, 2};

}  // namespace

TEST_CASE("task kind round trips through strings") {
  CHECK(to_string(TaskKind::classification) == "classification");
  CHECK(to_string(TaskKind::sequence) == "sequence");
  CHECK(task_kind_from_string("classification") == TaskKind::classification);
  CHECK(task_kind_from_string("sequence") == TaskKind::sequence);
  CHECK_THROWS_AS(task_kind_from_string("regression"), std::invalid_argument);
}

TEST_CASE("classification JSONL parses 1-based ids into 0-based internals") {
  const std::string text =
      R"({"id":"r1","text":"good movie","gold":2,"annotations":{"1":2,"3":1}})"
      "\n"
      R"({"id":"r2","text":"bad movie","gold":null,"annotations":{"2":1}})"
      "\n";
  CrowdDataset data = parse_jsonl(text, kSentimentSpec);
  CHECK(validate(data).empty());
  REQUIRE(data.instances.size() == 2);
  CHECK(data.num_classes == 2);
  CHECK(data.num_annotators == 3);

  const Instance& r1 = data.instances[0];
  CHECK(r1.tokens == std::vector<std::string>{"good", "movie"});
  REQUIRE(r1.gold.has_value());
  CHECK(*r1.gold == std::vector<int>{1});
  REQUIRE(r1.annotations.size() == 2);
  CHECK(r1.annotations.at(0) == std::vector<int>{1});  // annotator "1" said label 2
  CHECK(r1.annotations.at(2) == std::vector<int>{0});

  CHECK_FALSE(data.instances[1].gold.has_value());
  CHECK(data.label_index("positive") == 1);
  CHECK(data.label_index("nope") == -1);
}

TEST_CASE("sequence JSONL carries tag names") {
  const std::string text =
      R"({"id":"s1","tokens":["Ann","ran"],"gold":["B-PER","O"],"annotations":{"1":["B-PER","O"],"2":["O","O"]}})"
      "\n";
  CrowdDataset data = parse_jsonl(text, kNerSpec);
  CHECK(validate(data).empty());
  const Instance& s1 = data.instances[0];
  CHECK(s1.tokens == std::vector<std::string>{"Ann", "ran"});
  CHECK(*s1.gold == std::vector<int>{1, 0});
  CHECK(s1.annotations.at(1) == std::vector<int>{0, 0});
}

TEST_CASE("malformed lines are hard errors") {
  CHECK_THROWS(parse_jsonl("{not json}\n", kSentimentSpec));
  // unknown tag name
  CHECK_THROWS(parse_jsonl(
      R"({"id":"s","tokens":["x"],"gold":["B-LOC"],"annotations":{}})" "\n", kNerSpec));
  // non-integer classification label
  CHECK_THROWS(parse_jsonl(
      R"({"id":"r","text":"x","gold":"positive","annotations":{}})" "\n", kSentimentSpec));
  // non-integer annotator key
  CHECK_THROWS(parse_jsonl(
      R"({"id":"r","text":"x","gold":1,"annotations":{"ann":1}})" "\n", kSentimentSpec));
}

TEST_CASE("round trip preserves every instance") {
  const std::string text =
      R"({"id":"r1","text":"good movie","gold":2,"annotations":{"1":2,"3":1}})"
      "\n"
      R"({"id":"r2","text":"so bad","gold":null,"annotations":{}})"
      "\n";
  CrowdDataset data = parse_jsonl(text, kSentimentSpec);
  CrowdDataset again = parse_jsonl(to_jsonl(data), kSentimentSpec);
  CHECK(again == data);

  const std::string seq =
      R"({"id":"s1","tokens":["Ann","ran"],"gold":["B-PER","O"],"annotations":{"2":["I-PER","O"]}})"
      "\n";
  CrowdDataset sdata = parse_jsonl(seq, kNerSpec);
  CHECK(parse_jsonl(to_jsonl(sdata), kNerSpec) == sdata);
}

TEST_CASE("validate reports structural violations") {
  CrowdDataset data = parse_jsonl(
      R"({"id":"dup","text":"a","gold":1,"annotations":{"1":1}})" "\n"
      R"({"id":"dup","text":"b","gold":null,"annotations":{"1":2}})" "\n",
      kSentimentSpec);
  auto violations = validate(data);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].find("dup") != std::string::npos);

  // annotator id out of range (spec says 3 annotators; "7" is too big)
  CrowdDataset range = parse_jsonl(
      R"({"id":"r","text":"a","gold":1,"annotations":{"7":1}})" "\n", kSentimentSpec);
  CHECK_FALSE(validate(range).empty());

  // label out of range survives parsing but fails validation
  CrowdDataset label = parse_jsonl(
      R"({"id":"r","text":"a","gold":5,"annotations":{"1":1}})" "\n", kSentimentSpec);
  CHECK_FALSE(validate(label).empty());

  // sequence annotation with the wrong token count
  CrowdDataset seq = parse_jsonl(
      R"({"id":"s","tokens":["a","b"],"gold":["O","O"],"annotations":{"1":["O"]}})" "\n",
      kNerSpec);
  CHECK_FALSE(validate(seq).empty());

  // unannotated instances are fine (sparse omission)
  CrowdDataset sparse = parse_jsonl(
      R"({"id":"r","text":"a","gold":1,"annotations":{}})" "\n", kSentimentSpec);
  CHECK(validate(sparse).empty());
}

TEST_CASE("annotator counts ignore duplicates within an instance") {
  CrowdDataset data = parse_jsonl(
      R"({"id":"r1","text":"a","gold":1,"annotations":{"1":1,"2":2,"3":1}})" "\n"
      R"({"id":"r2","text":"b","gold":null,"annotations":{"2":1}})" "\n"
      R"({"id":"r3","text":"c","gold":null,"annotations":{}})" "\n",
      kSentimentSpec);
  CHECK(annotator_counts(data) == std::vector<int>{3, 1, 0});
}
