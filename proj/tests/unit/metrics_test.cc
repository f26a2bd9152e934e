#include "doctest.h"
#include "json.hpp"
#include "stylemine/error.hpp"
#include "stylemine/metrics.hpp"
#include "stylemine/tokenize.hpp"

#include <cmath>

using namespace stylemine;

namespace {

Tokens t(const char* s) { return tokenize(s); }

}  // namespace

TEST_CASE("identical candidate and reference score 1 at every order") {
  const auto s = bleu_avg(t("the soup was hot and fresh"), {t("the soup was hot and fresh")});
  for (double b : s.bleu_n) CHECK(b == doctest::Approx(1.0));
  CHECK(s.bleu_avg == doctest::Approx(1.0));
  CHECK(s.bleu_composite == doctest::Approx(1.0));
}

TEST_CASE("orders longer than both sides are left out of the average") {
  const auto s = bleu_avg(t("great"), {t("great")});
  CHECK(s.bleu_n[0] == doctest::Approx(1.0));
  CHECK(s.bleu_avg == doctest::Approx(1.0));
  CHECK(s.bleu_composite == doctest::Approx(1.0));
}

TEST_CASE("an extra reference never lowers clipped matches") {
  BleuStats one, two;
  one.add(t("a b c d"), {t("a b")});
  two.add(t("a b c d"), {t("a b"), t("c d x y z")});
  for (std::size_t n = 0; n < kMaxOrder; ++n) CHECK(two.matches[n] >= one.matches[n]);
  // The closest reference length can move though, so the brevity penalty
  // may grow: here r goes from 2 to 5 against c = 4.
  CHECK(one.reference_len == 2);
  CHECK(two.reference_len == 5);
}

TEST_CASE("clipped counts and brevity penalty") {
  const auto s = bleu_avg(t("the the the the"), {t("the cat")});
  CHECK(s.bleu_n[0] == doctest::Approx(0.25));
  CHECK(s.bleu_n[1] == 0.0);
  CHECK(s.bleu_n[2] == 0.0);
  CHECK(s.bleu_n[3] == 0.0);
  CHECK(s.bleu_avg == doctest::Approx(0.0625));
  CHECK(s.bleu_composite == 0.0);

  // Short candidate: BP = exp(1 - 4/2).
  const auto short_c = bleu_avg(t("the cat"), {t("the cat sat down")});
  CHECK(short_c.bleu_n[0] == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("no shared token gives zero") {
  const auto s = bleu_avg(t("alpha beta gamma"), {t("delta epsilon zeta")});
  CHECK(s.bleu_avg == 0.0);
}

TEST_CASE("closest reference length prefers the shorter on ties") {
  BleuStats st;
  st.add(t("a b c"), {t("a b c d"), t("a b")});
  CHECK(st.reference_len == 2);
}

TEST_CASE("bleu rejects empty input") {
  CHECK_THROWS_AS(bleu_avg({}, {t("a")}), InputError);
  CHECK_THROWS_AS(bleu_avg(t("a"), {}), InputError);
}

TEST_CASE("i-PINC") {
  const Tokens src = t("the food was good");
  CHECK(i_pinc(src, src, {t("the food was bad")}) == 0.0);
  CHECK(i_pinc(src, t("the food was bad"), {t("the food was bad")}) == doctest::Approx(1.0));
  // Stripped candidate [bad, meal] against stripped reference [bad]; no
  // reference n-gram survives for n >= 2.
  CHECK(i_pinc(t("good food"), t("bad meal"), {t("bad food")}) == doctest::Approx(1.0));
  // Stripped candidate [bad] against stripped reference [bad, meal].
  CHECK(i_pinc(t("good food"), t("bad food"), {t("bad meal")}) == doctest::Approx(0.25));
  // Disjoint source leaves candidate and reference untouched.
  CHECK(i_pinc(t("xyz"), t("a b c d"), {t("a b c d")}) == doctest::Approx(1.0));
  // Case is ignored when stripping.
  CHECK(i_pinc(t("Food"), t("food"), {t("food")}) == 0.0);
}

TEST_CASE("geometric mean") {
  CHECK(gm(0.575, 0.575) == doctest::Approx(0.575));
  CHECK(gm(0.856, 0.212) == doctest::Approx(std::sqrt(0.856 * 0.212)));
  CHECK(gm(0.0, 0.9) == 0.0);
  CHECK_THROWS_AS(gm(1.1, 0.5), InputError);
  CHECK_THROWS_AS(gm(0.5, -0.1), InputError);
}

TEST_CASE("evaluate aggregates records") {
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 10; ++i) {
    recs.push_back({t("the food was good"), t("the food was bad"), {t("the food was bad")},
                    i < 7});
  }
  const auto r = evaluate(recs, BleuMode::kAverage, 4);
  REQUIRE(r.acc.has_value());
  CHECK(*r.acc == doctest::Approx(0.7));
  CHECK(r.bleu_avg == doctest::Approx(1.0));
  CHECK(*r.gm == doctest::Approx(std::sqrt(0.7)));
  CHECK(r.i_pinc == doctest::Approx(1.0));
  CHECK(r.count == 10);

  const auto unlabeled = evaluate({{t("a"), t("b"), {t("b")}, std::nullopt}});
  CHECK_FALSE(unlabeled.acc.has_value());
  CHECK_FALSE(unlabeled.gm.has_value());

  recs.push_back({t("a"), t("b"), {t("b")}, std::nullopt});
  CHECK_THROWS_AS(evaluate(recs), InputError);
  CHECK_THROWS_AS(evaluate({}), InputError);
}

TEST_CASE("parse_eval_records") {
  const auto recs = parse_eval_records(
      "{\"source\":\"a b\",\"candidate\":\"a c\",\"references\":[\"a c\"],\"style_correct\":1}\n"
      "\n"
      "{\"source\":\"a b\",\"candidate\":\"a c\",\"references\":[\"a c\",\"c\"],\"style_correct\":false}\n");
  REQUIRE(recs.size() == 2);
  CHECK(*recs[0].predicted_style_correct);
  CHECK_FALSE(*recs[1].predicted_style_correct);
  CHECK(recs[1].reference_token_lists.size() == 2);

  auto message = [](const char* content) {
    try {
      parse_eval_records(content, "e.jsonl");
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{\"source\":\"a\",\"candidate\":\"b\"}").find("e.jsonl:1") == 0);
  CHECK(message("{\"source\":\"a\",\"candidate\":\"b\",\"references\":[]}").find("references") !=
        std::string::npos);
  CHECK(message("oops").find("malformed") != std::string::npos);
  CHECK(message("{\"source\":\"a\",\"candidate\":\"b\",\"references\":[\"b\"],\"style_correct\":2}")
            .find("style_correct") != std::string::npos);
}

TEST_CASE("report rendering") {
  const auto r = evaluate({{t("x"), t("a b"), {t("a b")}, true}});
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j["bleu_mode"] == "average");
  CHECK(j["gm"].get<double>() == doctest::Approx(1.0));
  const std::string table = report_to_table(r);
  CHECK(table.find("100.0") != std::string::npos);
  CHECK(table.find("i-PINC") != std::string::npos);
}
