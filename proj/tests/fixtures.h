// tests/fixtures.h
//
// Shared synthetic-song material for tests: a small pronunciation dictionary
// and lyric sets of different sizes.

#ifndef ALTA_TESTS_FIXTURES_H_
#define ALTA_TESTS_FIXTURES_H_

#include <sstream>
#include <string>
#include <vector>

#include "alta/lexicon.h"

namespace fixtures {

// Covers the words used by the fixture lyrics; everything else exercises g2p.
inline const char* kLexiconText = R"(# test dictionary
HELLO HH AH L OW
SHINE SH AY N
RIVER R IH V ER
MOON M UW N
GOLD G OW L D
SILVER S IH L V ER
ECHO EH K OW
CALLING K AO L IH NG
HOME HH OW M
NIGHT N AY T
FIRE F AY ER
COLD K OW L D
WE W IY
RUN R AH N
THROUGH TH R UW
THE DH AH
THE DH IY
DARK D AA R K
LIGHT L AY T
STARS S T AA R Z
FALL F AO L
DOWN D AW N
OVER OW V ER
WATER W AO T ER
SING S IH NG
LOUD L AW D
EVERY EH V R IY
WORD W ER D
YOU Y UW
KNOW N OW
TAKE T EY K
ME M IY
WHERE W EH R
WIND W IH N D
BLOWS B L OW Z
OH OW
LA L AA
HOLD HH OW L D
ON AA N
TILL T IH L
MORNING M AO R N IH NG
COMES K AH M Z
AGAIN AH G EH N
HEART HH AA R T
BEATS B IY T S
LIKE L AY K
A AH
DRUM D R AH M
UNDER AH N D ER
SKY S K AY
SO S OW
FAR F AA R
AWAY AH W EY
NEVER N EH V ER
LET L EH T
GO G OW
OF AH V
YOUR Y AO R
HAND HH AE N D
SILENT S AY L AH N T
VOICES V OY S IH Z
RISE R AY Z
AND AE N D
BURN B ER N
BRIGHT B R AY T
INTO IH N T UW
SUN S AH N
)";

inline alta::lex::Lexicon lexicon() {
  std::istringstream in(kLexiconText);
  return alta::lex::load_lexicon(in);
}

// Verse/chorus structure with plenty of repetition, the shape the biased LM
// is built for. Roughly three minutes at the default synthesis pacing.
inline std::vector<std::string> song_lines() {
  std::vector<std::string> verse1 = {
      "we run through the dark night",
      "stars fall down over the water",
      "silver river under the moon",
      "every word you know comes again",
  };
  std::vector<std::string> verse2 = {
      "silent voices rise and burn bright",
      "take me where the wind blows",
      "your heart beats like a drum",
      "so far away we never let go",
  };
  std::vector<std::string> verse3 = {
      "cold fire over the morning sky",
      "hold on till the morning comes",
      "gold light into the sun",
      "echo calling me home again",
  };
  std::vector<std::string> chorus = {
      "oh la la shine so bright",
      "sing loud into the night",
      "hold my hand and never let go",
      "we run home through the light",
  };
  std::vector<std::string> lines;
  auto append = [&lines](const std::vector<std::string>& block) {
    for (const auto& l : block) lines.push_back(l);
  };
  append(verse1);
  append(chorus);
  append(verse2);
  append(chorus);
  append(verse3);
  append(chorus);
  append(verse1);
  append(chorus);
  append(verse2);
  append(chorus);
  return lines;
}

// A short song for fast in-test pipeline runs.
inline std::vector<std::string> short_song_lines() {
  return {
      "we run through the dark night",
      "oh la la shine so bright",
      "stars fall down over the water",
      "hold on till the morning comes",
      "we run through the dark night",
      "oh la la shine so bright",
  };
}

inline std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace fixtures

#endif  // ALTA_TESTS_FIXTURES_H_
