#include "doctest.h"
#include "support.hpp"

#include "mixlab/report.hpp"

using namespace mixlab;
using namespace testsupport;

namespace {

Json reparse(const std::string& body) { return Json::parse(body); }

std::string tamper(const std::string& body, const char* pointer, Json value) {
  Json j = Json::parse(body);
  j[Json::json_pointer(pointer)] = std::move(value);
  return j.dump(2) + "\n";
}

}  // namespace

TEST_CASE("rendering is canonical: sorted keys, two-space indent, one trailing newline") {
  Json j{{"zeta", 1}, {"alpha", Json{{"b", 2}, {"a", 1}}}};
  std::string r = render(j);
  CHECK(r.back() == '\n');
  CHECK(r.find("\"alpha\"") < r.find("\"zeta\""));
  CHECK(r.find("  \"alpha\"") != std::string::npos);
  CHECK(render(j) == r);
}

TEST_CASE("budgets and algebra elements round-trip through JSON") {
  Budget b{9, 1234};
  Budget back = budget_from_json(budget_json(b));
  CHECK(back.radius == 9);
  CHECK(back.element_cap == 1234);
  CHECK_THROWS_AS(budget_from_json(Json{{"radius", -1}, {"element_cap", 10}}), InputError);

  InstancePtr f = find_instance("free-zz");
  GroupPtr g = f->triple.G;
  AlgebraElement x = AlgebraElement::zero(g);
  x.add_term(g->parse("b"), Coeff(mpq_class(1, 2), mpq_class(-3, 7)));
  x.add_term(g->parse("a b^-1"), Coeff::i());
  AlgebraElement back_x = algebra_from_json(g, algebra_json(*g, x));
  CHECK(back_x == x);
  std::string body = render(algebra_json(*g, x));
  CHECK(body.find("1/2") != std::string::npos);
  CHECK(body.find("-3/7") != std::string::npos);
}

TEST_CASE("envelopes carry the fixed schema fields") {
  Json e = envelope("free-zz", "qn", Json{{"g", "b"}}, Budget{}, Json{{"kind", "qn"}});
  CHECK(e.at("schema_version") == kSchemaVersion);
  CHECK(e.at("command") == "qn");
  CHECK(e.at("instance") == "free-zz");
  CHECK(e.at("budget").at("radius") == 6);
  CHECK(e.at("outcome").at("kind") == "qn");
}

TEST_CASE("the reproduction suite is deterministic and self-verifying") {
  auto first = repro_suite();
  auto second = repro_suite();
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].first == second[i].first);
    CHECK(first[i].second == second[i].second);
  }
  // filenames are unique and ordered
  for (std::size_t i = 1; i < first.size(); ++i) CHECK(first[i - 1].first < first[i].first);
  // every body replays
  for (const auto& [name, body] : first) {
    CAPTURE(name);
    std::string why;
    bool ok = verify_report(body, &why);
    CAPTURE(why);
    CHECK(ok);
  }
}

TEST_CASE("verification rejects a mutated separation witness") {
  std::string body;
  for (const auto& [name, b] : repro_suite())
    if (name.find("ss-wreath-set") != std::string::npos) body = b;
  REQUIRE(!body.empty());
  REQUIRE(reparse(body).at("outcome").at("kind") == "certified");

  std::string why;
  // identity no longer separates: delta_0 e delta_0 = e lands in H
  std::string bad = tamper(body, "/outcome/witness/h", "{}:0");
  CHECK_FALSE(verify_report(bad, &why));
  CHECK(!why.empty());

  // h outside H is caught before multiplication
  bad = tamper(body, "/outcome/witness/h", "{0}:0");
  CHECK_FALSE(verify_report(bad, &why));

  // unparsable literal counts as tampering, not a crash
  bad = tamper(body, "/outcome/witness/h", "!!");
  CHECK_FALSE(verify_report(bad, &why));
}

TEST_CASE("verification rejects mutated refutations and patterns") {
  std::string refuted, pattern;
  for (const auto& [name, b] : repro_suite()) {
    if (name.find("ss-rotation4-set") != std::string::npos) refuted = b;
    if (name.find("st-rotation4-set") != std::string::npos) pattern = b;
  }
  REQUIRE(!refuted.empty());
  REQUIRE(!pattern.empty());

  std::string why;
  // dropping an element from the recorded invariant set breaks the re-derivation
  Json j = reparse(refuted);
  Json elems = j.at("outcome").at("elements");
  elems.erase(0);
  CHECK_FALSE(verify_report(tamper(refuted, "/outcome/elements", elems), &why));

  // shifting the residue pattern breaks the collision replay
  CHECK_FALSE(verify_report(
      tamper(pattern, "/outcome/pattern", Json{{"period", 4},
                                               {"residues", Json::array({1})},
                                               {"text", "{n : n mod 4 in {1}}"}}),
      &why));
  CHECK(!why.empty());
}

TEST_CASE("verification rejects broken qn, orbit, and decay payloads") {
  std::string qn, orbit, decay;
  for (const auto& [name, b] : repro_suite()) {
    if (name.find("qn-rotation4") != std::string::npos) qn = b;
    if (name.find("orbit-rotation4") != std::string::npos) orbit = b;
    if (name.find("decay-rotation4") != std::string::npos) decay = b;
  }
  std::string why;

  // duplicate coset representative
  Json j = reparse(qn);
  Json reps = j.at("outcome").at("reps");
  reps[1] = reps[0];
  CHECK_FALSE(verify_report(tamper(qn, "/outcome/reps", reps), &why));
  CHECK(why.find("coset") != std::string::npos);

  // dropping an orbit representative breaks generator closure
  j = reparse(orbit);
  Json oreps = j.at("outcome").at("reps");
  oreps.erase(oreps.size() - 1);
  CHECK_FALSE(verify_report(tamper(orbit, "/outcome/reps", oreps), &why));

  // a decay sample value is recomputed exactly
  CHECK_FALSE(
      verify_report(tamper(decay, "/outcome/samples/0/value", "2/3"), &why));
  CHECK(why.find("sample") != std::string::npos);
}

TEST_CASE("verification rejects corrupted counterexamples and verdicts") {
  std::string cex, verdict;
  for (const auto& [name, b] : repro_suite()) {
    if (name.find("counterexample") != std::string::npos) cex = b;
    if (name.find("05-check-st-rotation4") != std::string::npos) verdict = b;
  }
  std::string why;
  CHECK_FALSE(verify_report(tamper(cex, "/outcome/norm2", "5"), &why));
  CHECK_FALSE(verify_report(tamper(cex, "/outcome/selfadjoint", false), &why));
  CHECK_FALSE(verify_report(tamper(verdict, "/outcome/rule", "no-such-rule"), &why));
  // flipping a failure to a hold needs premises the instance lacks
  CHECK_FALSE(verify_report(tamper(verdict, "/outcome/status", "holds"), &why));
}

TEST_CASE("structural problems are input errors, not verification failures") {
  std::string body = repro_suite().front().second;
  CHECK_THROWS_AS(verify_report("not json at all"), InputError);
  CHECK_THROWS_AS(verify_report("{}"), InputError);
  CHECK_THROWS_AS(verify_report(tamper(body, "/schema_version", kSchemaVersion + 1)),
                  InputError);
  CHECK_THROWS_AS(verify_report(tamper(body, "/instance", "no-such-instance")),
                  InputError);
  CHECK_THROWS_AS(verify_report(tamper(body, "/command", "no-such-command")), InputError);
}

TEST_CASE("decay profiles export exact TSV") {
  InstancePtr f = find_instance("free-zz");
  GroupPtr g = f->triple.G;
  DecayProfile p = decay_profile(f->triple, AlgebraElement::lambda(g, g->parse("b^-1")),
                                 AlgebraElement::lambda(g, g->parse("b")), Budget{2, 1000});
  std::string tsv = decay_tsv(*g, p);
  CHECK(tsv.rfind("index\th\tnumerator\tdenominator\n", 0) == 0);
  CHECK(tsv.find("\te\t1\t1\n") != std::string::npos);
  std::size_t lines = static_cast<std::size_t>(std::count(tsv.begin(), tsv.end(), '\n'));
  CHECK(lines == p.samples.size() + 1);
}

TEST_CASE("verdict serialization keeps evidence sets and patterns") {
  InstancePtr inst = find_instance("rotation4");
  Verdict v = decide(*inst, Condition::ST, Budget{});
  Json j = verdict_json(inst->g(), v);
  CHECK(j.at("kind") == "verdict");
  CHECK(j.at("condition") == "st");
  CHECK(j.at("status") == "fails");
  CHECK(j.at("pattern").at("period") == 4);
  CHECK(j.at("elems").contains("a"));
}
