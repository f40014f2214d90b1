// tests/test_decoder.cc

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "alta/decoder.h"
#include "alta/errors.h"
#include "alta/lexicon.h"
#include "alta/lyrics_lm.h"
#include "alta/rng.h"
#include "decode_instances.h"
#include "decode_oracle.h"

using namespace alta;

namespace {

// Posteriorgram with near-one-hot rows over the given symbol table.
decode::Posteriorgram one_hot(const std::vector<std::string>& symbols, const std::vector<std::string>& frames,
                              double peak = 0.9999) {
  decode::Posteriorgram post;
  post.symbols = symbols;
  post.frame_rate_hz = 100;
  for (const auto& target : frames) {
    double rest = (1.0 - peak) / static_cast<double>(symbols.size() - 1);
    std::vector<double> row;
    for (const auto& s : symbols) row.push_back(std::log(s == target ? peak : rest));
    post.log_probs.push_back(std::move(row));
  }
  return post;
}

lm::LyricsDocument raw_doc(std::vector<std::string> words) {
  lm::LyricsDocument doc;
  for (size_t i = 0; i < words.size(); ++i) doc.flat_words.push_back({words[i], 0, static_cast<int>(i)});
  doc.lines.push_back(std::move(words));
  return doc;
}

}  // namespace

TEST_SUITE_BEGIN("decoder");

TEST_CASE("posteriorgram validation") {
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "AA"}, {"AA"});
  CHECK_NOTHROW(post.validate());

  SUBCASE("unnormalized row") {
    post.log_probs[0][0] = 0.0;
    CHECK_THROWS_AS(post.validate(), InputError);
  }
  SUBCASE("missing reserved symbols") {
    post.symbols = {"X", "Y", "AA"};
    CHECK_THROWS_AS(post.validate(), InputError);
  }
  SUBCASE("no frames") {
    post.log_probs.clear();
    CHECK_THROWS_AS(post.validate(), InputError);
  }
}

TEST_CASE("posteriorgram JSON round trip") {
  std::string path = (std::filesystem::temp_directory_path() / "alta_post.json").string();
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "AA", "IY"}, {"AA", "IY", "AA"});
  decode::save_posteriorgram_json(path, post);
  decode::Posteriorgram loaded = decode::load_posteriorgram_json(path);
  CHECK(loaded.symbols == post.symbols);
  CHECK(loaded.frame_rate_hz == post.frame_rate_hz);
  REQUIRE(loaded.log_probs.size() == post.log_probs.size());
  for (size_t f = 0; f < post.log_probs.size(); ++f)
    for (size_t s = 0; s < post.symbols.size(); ++s)
      CHECK(loaded.log_probs[f][s] == post.log_probs[f][s]);  // exact round trip
  std::remove(path.c_str());
}

TEST_CASE("alignment graph for LA: word spans all three frames") {
  lex::Lexicon lexicon;
  lexicon.add("LA", {"L", "AA"}, lex::EntrySource::kDictionary);
  lexicon.add(lex::kNoiseWord, {lex::kNseSymbol}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"LA"});

  decode::Posteriorgram post = one_hot({"SIL", "NSE", "L", "AA"}, {"L", "L", "AA"});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  REQUIRE(hyp.words.size() == 1);
  CHECK(hyp.words[0].token == "LA");
  CHECK(hyp.words[0].start_s == doctest::Approx(0.00));
  CHECK(hyp.words[0].end_s == doctest::Approx(0.03));
  CHECK(hyp.words[0].label_position == 0);
  CHECK(hyp.stats.peak_active_tokens >= 1);
  CHECK(hyp.stats.peak_active_tokens <= hyp.stats.total_token_expansions);
}

TEST_CASE("leading silence moves the word start") {
  lex::Lexicon lexicon;
  lexicon.add("LA", {"L", "AA"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"LA"});
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "L", "AA"}, {"SIL", "L", "AA"});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  REQUIRE(hyp.words.size() == 1);
  CHECK(hyp.words[0].start_s == doctest::Approx(0.01));
  CHECK(hyp.words[0].end_s == doctest::Approx(0.03));
}

TEST_CASE("empty forced sequence accepts only filler frames") {
  lex::Lexicon lexicon;
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {});
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "AA"}, {"SIL", "NSE", "SIL"});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  CHECK(hyp.words.empty());
  CHECK(hyp.total_logscore == doctest::Approx(3 * std::log(0.9999)).epsilon(1e-6));
}

TEST_CASE("repeated words get distinct label positions") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"A", "A"});
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "AA"}, {"AA", "AA"});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  REQUIRE(hyp.words.size() == 2);
  CHECK(hyp.words[0].label_position == 0);
  CHECK(hyp.words[1].label_position == 1);
  CHECK(hyp.words[0].end_s == doctest::Approx(hyp.words[1].start_s));
}

TEST_CASE("alternative pronunciations are parallel paths with one label") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  lexicon.add("A", {"IY"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"A"});
  decode::Posteriorgram post_aa = one_hot({"SIL", "NSE", "AA", "IY"}, {"AA", "AA"});
  decode::Posteriorgram post_iy = one_hot({"SIL", "NSE", "AA", "IY"}, {"IY", "IY"});
  CHECK(decode::beam_viterbi(graph, post_aa, {}).words[0].token == "A");
  CHECK(decode::beam_viterbi(graph, post_iy, {}).words[0].token == "A");
  // Scores agree: both routes see the same acoustic mass.
  CHECK(decode::beam_viterbi(graph, post_aa, {}).total_logscore ==
        doctest::Approx(decode::beam_viterbi(graph, post_iy, {}).total_logscore));
}

TEST_CASE("leading context absorbs a previous word's tail") {
  lex::Lexicon lexicon;
  lexicon.add("BRIGHT", {"B", "R", "AY", "T"}, lex::EntrySource::kDictionary);
  lexicon.add("SING", {"S", "IH", "NG"}, lex::EntrySource::kDictionary);
  std::vector<std::string> symbols = {"SIL", "NSE", "B", "R", "AY", "T", "S", "IH", "NG"};

  // Slice starts inside BRIGHT: two tail phonemes leak in before SING.
  decode::Posteriorgram post = one_hot(symbols, {"AY", "T", "NSE", "S", "IH", "NG"});

  SUBCASE("without context the tail pollutes the forced word") {
    decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"SING"});
    decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
    // Fillers must absorb the AY/T stretch at pure mismatch cost.
    CHECK(hyp.words.size() == 1);
  }
  SUBCASE("with context the tail is modeled and SING lands exactly") {
    decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"SING"}, "BRIGHT");
    decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
    REQUIRE(hyp.words.size() == 1);
    CHECK(hyp.words[0].token == "SING");
    CHECK(hyp.words[0].start_s == doctest::Approx(0.03));
    CHECK(hyp.words[0].end_s == doctest::Approx(0.06));
    // The context route scores far better than filler mismatch.
    decode::DecodeGraph bare = decode::build_alignment_graph(lexicon, {"SING"});
    CHECK(hyp.total_logscore > decode::beam_viterbi(bare, post, {}).total_logscore + 5.0);
  }
  SUBCASE("context stays optional when the slice starts clean") {
    decode::Posteriorgram clean = one_hot(symbols, {"NSE", "S", "IH", "NG"});
    decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"SING"}, "BRIGHT");
    decode::Hypothesis hyp = decode::beam_viterbi(graph, clean, {});
    REQUIRE(hyp.words.size() == 1);
    CHECK(hyp.words[0].start_s == doctest::Approx(0.01));
  }
}

TEST_CASE("missing pronunciations are rejected at build time") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  CHECK_THROWS_AS(decode::build_alignment_graph(lexicon, {"A", "B"}), MissingPronunciation);
}

TEST_CASE("transcription over a uniform posteriorgram scores frames times ln(1/2)") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  lm::NGramModel model = lm::build_ngram(raw_doc({"A"}), 1);
  decode::DecodeGraph graph = decode::build_transcription_graph(lexicon, model);

  decode::Posteriorgram post;
  post.symbols = {"SIL", "AA"};
  post.frame_rate_hz = 100;
  for (int f = 0; f < 4; ++f) post.log_probs.push_back({std::log(0.5), std::log(0.5)});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  CHECK(hyp.total_logscore == doctest::Approx(4 * std::log(0.5)));
}

TEST_CASE("smallest transcription graph accepts optional silence around the word") {
  lex::Lexicon lexicon;
  lexicon.add("LA", {"L", "AA"}, lex::EntrySource::kDictionary);
  lm::NGramModel model = lm::build_ngram(raw_doc({"LA"}), 20);
  decode::DecodeGraph graph = decode::build_transcription_graph(lexicon, model);

  int la_labels = 0;
  for (const auto& l : graph.labels())
    if (l.token == "LA" && !l.filler) ++la_labels;
  CHECK(la_labels == 1);

  decode::Posteriorgram post = one_hot({"SIL", "NSE", "L", "AA"}, {"SIL", "L", "L", "AA", "SIL"});
  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {});
  REQUIRE(hyp.words.size() == 1);
  CHECK(hyp.words[0].token == "LA");
  CHECK(hyp.words[0].start_s == doctest::Approx(0.01));
  CHECK(hyp.words[0].end_s == doctest::Approx(0.04));
}

TEST_CASE("transcription graph: alternative pronunciations share one boundary label") {
  lex::Lexicon lexicon;
  lexicon.add("THE", {"DH", "AH"}, lex::EntrySource::kDictionary);
  lexicon.add("THE", {"DH", "IY"}, lex::EntrySource::kDictionary);
  lm::NGramModel model = lm::build_ngram(raw_doc({"THE"}), 2);
  decode::DecodeGraph graph = decode::build_transcription_graph(lexicon, model);

  int the_labels = 0;
  for (const auto& l : graph.labels())
    if (l.token == "THE" && !l.filler) ++the_labels;
  CHECK(the_labels == 1);

  // Either route decodes to the same word.
  decode::Posteriorgram post_ah = one_hot({"SIL", "NSE", "DH", "AH", "IY"}, {"DH", "AH"});
  decode::Posteriorgram post_iy = one_hot({"SIL", "NSE", "DH", "AH", "IY"}, {"DH", "IY"});
  CHECK(decode::beam_viterbi(graph, post_ah, {}).words[0].token == "THE");
  CHECK(decode::beam_viterbi(graph, post_iy, {}).words[0].token == "THE");
}

TEST_CASE("biased composition: the seen word order pays no penalty, the reverse does") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  lexicon.add("B", {"IY"}, lex::EntrySource::kDictionary);
  lm::NGramModel model = lm::build_ngram(raw_doc({"A", "B"}), 2);
  decode::DecodeGraph graph = decode::build_transcription_graph(lexicon, model);

  decode::Posteriorgram post;
  post.symbols = {"SIL", "NSE", "AA", "IY"};
  post.frame_rate_hz = 100;
  for (int f = 0; f < 2; ++f)
    post.log_probs.push_back(std::vector<double>(4, std::log(0.25)));  // uniform: acoustics cancel

  oracle::Enumerator enumerator(graph, post);
  std::vector<std::string> ab = {"A", "B"}, ba = {"B", "A"};
  auto best_ab = enumerator.best(&ab);
  auto best_ba = enumerator.best(&ba);
  REQUIRE(best_ab.has_value());
  REQUIRE(best_ba.has_value());
  // Seen order: P(A|<s>) = 1, P(B|A) = 1 -> zero language-model cost.
  // Reverse: one drop to the unigram for B, then the A unigram.
  CHECK(best_ab->score - best_ba->score ==
        doctest::Approx(-(model.backoff_penalty() + std::log(0.5) + std::log(0.5))));
}

TEST_CASE("narrow beam dead-ends, retry beam recovers and sets the flag") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  lexicon.add("B", {"IY"}, lex::EntrySource::kDictionary);
  lexicon.add("C", {"UW"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"A", "B", "C"});

  decode::Posteriorgram post;
  post.symbols = {"SIL", "NSE", "AA", "IY", "UW"};
  post.frame_rate_hz = 100;
  auto row = [&](double sil, double nse, double aa, double iy, double uw) {
    post.log_probs.push_back({std::log(sil), std::log(nse), std::log(aa), std::log(iy), std::log(uw)});
  };
  row(1e-8, 1e-8, 1.0 - 3e-8 - 1e-6, 1e-6, 1e-8);   // AA dominates
  row(1e-8, 1e-8, 1.0 - 3e-8 - 1e-6, 1e-6, 1e-8);   // advancing to IY looks terrible here
  row(1e-8, 1e-8, 1e-8, 1e-8, 1.0 - 4e-8);          // UW

  decode::Hypothesis hyp = decode::beam_viterbi(graph, post, {10.0, 300.0});
  CHECK(hyp.stats.used_retry_beam);
  REQUIRE(hyp.words.size() == 3);
  CHECK(hyp.words[0].token == "A");
  CHECK(hyp.words[2].token == "C");

  // A generous first beam never needs the retry.
  decode::Hypothesis wide = decode::beam_viterbi(graph, post, {100.0, 300.0});
  CHECK(!wide.stats.used_retry_beam);
}

TEST_CASE("no path at all raises NoPath") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  lexicon.add("B", {"IY"}, lex::EntrySource::kDictionary);
  lexicon.add("C", {"UW"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"A", "B", "C"});
  decode::Posteriorgram post = one_hot({"SIL", "NSE", "AA", "IY", "UW"}, {"AA", "IY"});  // one frame short
  CHECK_THROWS_AS(decode::beam_viterbi(graph, post, {}), NoPath);
}

TEST_CASE("posteriorgram must cover the graph's phonemes") {
  lex::Lexicon lexicon;
  lexicon.add("A", {"AA"}, lex::EntrySource::kDictionary);
  decode::DecodeGraph graph = decode::build_alignment_graph(lexicon, {"A"});
  decode::Posteriorgram post = one_hot({"SIL", "IY"}, {"IY"});  // lacks AA and NSE
  CHECK_THROWS_AS(decode::beam_viterbi(graph, post, {}), InputError);
}

TEST_CASE("oracle equivalence on random tiny instances at infinite beam") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    instances::Instance inst = instances::random_instance(rng);
    decode::DecodeGraph graph = instances::build_graph(inst);

    oracle::Enumerator enumerator(graph, inst.post);
    auto best = enumerator.best();

    decode::BeamConfig beams{decode::kBeamInfinity / 2, decode::kBeamInfinity};
    if (!best.has_value()) {
      CHECK_THROWS_AS(decode::beam_viterbi(graph, inst.post, beams), NoPath);
      continue;
    }
    decode::Hypothesis hyp = decode::beam_viterbi(graph, inst.post, beams);
    CHECK(hyp.total_logscore == best->score);
    CHECK(oracle::matches_some_best(graph, enumerator, hyp.words, inst.post.frame_rate_hz));
    ++checked;
  }
  CHECK(checked == 40);  // the generator only builds feasible instances
}

TEST_CASE("beam monotonicity: wider beams never lower the score") {
  Rng rng(555);
  for (int trial = 0; trial < 25; ++trial) {
    instances::Instance inst = instances::random_instance(rng);
    decode::DecodeGraph graph = instances::build_graph(inst);

    double prev_score = -1e300;
    size_t prev_peak = 0;
    bool prev_valid = false;
    for (double beam : {0.5, 2.0, 8.0, 32.0, decode::kBeamInfinity / 2}) {
      decode::Hypothesis hyp;
      try {
        hyp = decode::beam_viterbi(graph, inst.post, {beam, beam * (1.0 + 1e-12)});
      } catch (const NoPath&) {
        continue;
      }
      if (hyp.stats.used_retry_beam) continue;
      if (prev_valid) {
        CHECK(hyp.total_logscore >= prev_score - 1e-9);
        CHECK(hyp.stats.peak_active_tokens >= prev_peak);
      }
      prev_score = hyp.total_logscore;
      prev_peak = hyp.stats.peak_active_tokens;
      prev_valid = true;
    }
  }
}

TEST_CASE("decoding is deterministic") {
  Rng rng(77);
  instances::Instance inst = instances::random_instance(rng);
  decode::DecodeGraph graph = instances::build_graph(inst);
  decode::Hypothesis a = decode::beam_viterbi(graph, inst.post, {});
  decode::Hypothesis b = decode::beam_viterbi(graph, inst.post, {});
  CHECK(a.total_logscore == b.total_logscore);
  REQUIRE(a.words.size() == b.words.size());
  for (size_t i = 0; i < a.words.size(); ++i) {
    CHECK(a.words[i].token == b.words[i].token);
    CHECK(a.words[i].start_s == b.words[i].start_s);
    CHECK(a.words[i].end_s == b.words[i].end_s);
  }
  CHECK(a.stats.peak_active_tokens == b.stats.peak_active_tokens);
  CHECK(a.stats.total_token_expansions == b.stats.total_token_expansions);
}

TEST_CASE("word intervals stay ordered and inside the recording") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    instances::Instance inst = instances::random_instance(rng);
    decode::DecodeGraph graph = instances::build_graph(inst);
    decode::Hypothesis hyp;
    try {
      hyp = decode::beam_viterbi(graph, inst.post, {});
    } catch (const NoPath&) {
      continue;
    }
    double cursor = 0.0;
    for (const auto& w : hyp.words) {
      CHECK(w.start_s >= cursor - 1e-12);
      CHECK(w.start_s < w.end_s);
      cursor = w.end_s;
    }
    if (!hyp.words.empty()) CHECK(hyp.words.back().end_s <= inst.post.duration_s() + 1e-12);
  }
}

TEST_SUITE_END();
